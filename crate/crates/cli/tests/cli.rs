use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn polemono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polemono"))
        .args(args)
        .output()
        .expect("spawn polemono")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    let cases = [
        ("x^3+y^3", 5),
        ("x^2*y+y^2*z", 0),
        ("x^2*y", 4),
        ("x^2+y^3", 3),
        ("x^3+*y", 7),
        ("x+y+z", 7),
    ];
    for (f, want) in cases {
        let out = polemono(&["-i", f]);
        assert_eq!(out.status.code(), Some(want), "{f}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn usage_errors_are_distinct() {
    assert_eq!(polemono(&["-i", "x^3+y^3+z^3", "--mode", "bogus"]).status.code(), Some(2));
}

#[test]
fn summary_on_stdout() {
    let out = polemono(&["-i", "x^5+y^4*z+x^4*y"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mu = "), "{text}");
    assert!(text.contains("q0 = 9"), "{text}");
}

#[test]
fn json_file_and_determinism() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    let f = "(x^2+y^2)^4+(y^4+z^4)^2";
    assert!(polemono(&["-i", f, "--json", a.to_str().unwrap(), "--threads", "1"]).status.success());
    assert!(polemono(&["-i", f, "--json", b.to_str().unwrap(), "--threads", "3"]).status.success());
    let ja = fs::read_to_string(&a).unwrap();
    assert_eq!(ja, fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["schema"], "polemono/1");
    assert_eq!(v["degree"], 8);
    assert_eq!(v["spectral"]["q0_observed"], 11);
}

#[test]
fn input_from_file_with_comments() {
    let p = scratch("quartic.txt");
    fs::write(&p, "# Fermat quartic\nx^4+y^4\n+z^4\n").unwrap();
    let out = polemono(&["-i", p.to_str().unwrap(), "--json", "-", "--show", "summary"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let json = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["hilbert"]["tau"], 0);
}

#[test]
fn strict_accepts_certified_curves() {
    let out = polemono(&["-i", "x^5+y^4*z+x^4*y", "--strict", "--mode", "full"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn batch_jsonl() {
    let input = scratch("batch.txt");
    let output = scratch("batch.jsonl");
    fs::write(&input, "# curves\nx^4+y^4+z^4\n\nx^2+y\nx^3+y^3\nx^5+y^4*z+x^4*y\n").unwrap();
    let out = polemono(&["--batch", input.to_str().unwrap(), "--json", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = fs::read_to_string(&output)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|v| v["schema"] == "polemono/1"));
    assert_eq!(lines[0]["degree"], 4);
    assert_eq!(lines[1]["line"], 4);
    assert!(lines[1].get("error").is_some());
    assert!(lines[2].get("error").is_some());
    assert_eq!(lines[3]["spectral"]["q0_observed"], 9);
}

#[test]
fn empty_batch() {
    let input = scratch("empty.txt");
    fs::write(&input, "").unwrap();
    let out = polemono(&["--batch", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}
