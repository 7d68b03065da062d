use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use polemono_core::pipeline::{error_json, error_kind};
use polemono_core::{run, run_batch, CurveReport, Error, Mode, RunConfig, Status};

/// Exit codes.
const EXIT_OTHER: u8 = 1;
const EXIT_NOT_HOMOGENEOUS: u8 = 3;
const EXIT_NON_REDUCED: u8 = 4;
const EXIT_CENTRAL_PENCIL: u8 = 5;
const EXIT_CERTIFICATE_FAILED: u8 = 6;
const EXIT_BAD_INPUT: u8 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    FirstCycleOnly,
    Full,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::FirstCycleOnly => Mode::FirstCycleOnly,
            ModeArg::Full => Mode::Full,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Section {
    Summary,
    Spectra,
    Alexander,
    BsRoots,
    Tables,
    Json,
}

/// Monodromy eigenspaces and pole order filtration on the Milnor fiber
/// cohomology of a reduced plane curve f(x,y,z) = 0.
///
/// Exit codes: 0 success, 1 other failure, 2 usage, 3 not homogeneous,
/// 4 not reduced, 5 lines through one point, 6 certificate failed (--strict),
/// 7 malformed input.
#[derive(Parser, Debug)]
#[command(name = "polemono", version)]
struct Cli {
    /// Polynomial text, or a path to a file containing it. Read from stdin if absent.
    #[arg(short, long)]
    input: Option<String>,

    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,

    /// Number of primes for modular ranks.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    primes: u32,

    /// Exact rational ranks instead of modular ones.
    #[arg(long)]
    exact: bool,

    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,

    /// Write the JSON report here ("-" for stdout). In batch mode, the JSONL output.
    #[arg(long)]
    json: Option<PathBuf>,

    /// File with one polynomial per line; emits one JSON object per line.
    #[arg(long)]
    batch: Option<PathBuf>,

    /// Exit nonzero when the results are not certified.
    #[arg(long)]
    strict: bool,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Sections of the human-readable report.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Section::Summary, Section::Spectra, Section::Alexander, Section::BsRoots])]
    show: Vec<Section>,
}

fn exit_code(e: &Error) -> u8 {
    match error_kind(e) {
        "NotHomogeneous" => EXIT_NOT_HOMOGENEOUS,
        "NonReduced" => EXIT_NON_REDUCED,
        "CentralPencil" => EXIT_CENTRAL_PENCIL,
        "Syntax" | "ZeroPolynomial" | "DegreeTooSmall" => EXIT_BAD_INPUT,
        _ => EXIT_OTHER,
    }
}

fn read_input(arg: Option<&str>) -> io::Result<String> {
    let text = match arg {
        Some(s) if Path::new(s).is_file() => fs::read_to_string(s)?,
        Some(s) => s.to_string(),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let body: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    Ok(body.join(" "))
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdout().lock())),
        Some(p) => Ok(Box::new(io::BufWriter::new(fs::File::create(p)?))),
    }
}

fn table(out: &mut String, title: &str, rows: &[Vec<usize>], label: &str) {
    out.push_str(&format!("{title}\n"));
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
        out.push_str(&format!("  {label}={i}:{}\n", cells.join("")));
    }
}

fn render(r: &CurveReport, show: &[Section]) -> String {
    let mut out = String::new();
    let inv = &r.invariants;
    let h = &r.hilbert;
    let s = &r.spectral;
    if show.contains(&Section::Summary) {
        out.push_str(&format!("f = {}\n", r.f));
        out.push_str(&format!(
            "d = {}  mu = {}  tau = {}  chi(U) = {}  mdr = {}  st = {}  ct = {}\n",
            h.d,
            inv.mu,
            inv.tau,
            inv.chi_u,
            h.mdr,
            h.st,
            h.ct.map_or("-".to_string(), |c| c.to_string())
        ));
        out.push_str(&format!(
            "b1 = {}  b2 = {}  q0 = {}  status = {}\n",
            inv.b1,
            inv.b2,
            s.q0_observed.map_or("-".to_string(), |q| q.to_string()),
            inv.status.as_str()
        ));
        if !s.killed_by_p_bounds.is_empty() {
            out.push_str(&format!("nonzero eps beyond 2d at q = {:?}\n", s.killed_by_p_bounds));
        }
    }
    if show.contains(&Section::Spectra) {
        out.push_str(&format!("Sp_P^1 = {}\n", inv.sp_p1));
        out.push_str(&format!("Sp_P^0 = {}\n", inv.sp_p0));
    }
    if show.contains(&Section::Alexander) {
        out.push_str(&format!("Delta^1(t) = {}\n", inv.delta1));
        match &inv.delta2 {
            Some(d2) => out.push_str(&format!("Delta^2(t) = {d2}\n")),
            None => out.push_str("Delta^2(t) = undefined (negative multiplicity)\n"),
        }
    }
    if show.contains(&Section::BsRoots) {
        out.push_str(&format!("certified BS roots = {}\n", inv.bs_roots_certified));
    }
    if show.contains(&Section::Tables) {
        out.push_str(&format!("eps'  = {:?}\n", r.first.epsprime));
        out.push_str(&format!("theta = {:?}\n", r.first.theta));
        out.push_str(&format!("eps   = {:?}\n", r.second.eps));
        table(&mut out, "Gr_P H^1 (rows p, columns k = 1..d)", &s.grp_h1, "p");
        table(&mut out, "Gr_P H^2 (rows p, columns k = 1..d)", &s.grp_h2, "p");
        let cert: Vec<&str> = s.certificate.iter().map(|&c| if c { "ok" } else { "FAIL" }).collect();
        out.push_str(&format!("certificate = [{}]\n", cert.join(", ")));
    }
    if show.contains(&Section::Json) {
        out.push_str(&r.to_json_string());
        out.push('\n');
    }
    out
}

fn run_single(cli: &Cli, config: &RunConfig) -> u8 {
    let text = match read_input(cli.input.as_deref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return EXIT_OTHER;
        }
    };
    match run(&text, config) {
        Ok(r) => {
            print!("{}", render(&r, &cli.show));
            if let Some(p) = &cli.json {
                let written = open_output(Some(p)).and_then(|mut w| {
                    w.write_all(r.to_json_string().as_bytes())?;
                    w.write_all(b"\n")?;
                    w.flush()
                });
                if let Err(e) = written {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    return EXIT_OTHER;
                }
            }
            if cli.strict && (r.status() == Status::Conjectural || !r.spectral.all_certified) {
                eprintln!("error: results are not certified");
                return EXIT_CERTIFICATE_FAILED;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(p) = &cli.json {
                if let Ok(mut w) = open_output(Some(p)) {
                    let _ = writeln!(w, "{}", error_json(None, &text, &e));
                }
            }
            exit_code(&e)
        }
    }
}

fn run_batch_file(cli: &Cli, path: &Path, config: &RunConfig) -> u8 {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot open {}: {e}", path.display());
            return EXIT_OTHER;
        }
    };
    let out = match open_output(cli.json.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return EXIT_OTHER;
        }
    };
    match run_batch(BufReader::new(file), out, config) {
        Ok(s) => {
            eprintln!("{} ok, {} failed, {} uncertified", s.ok, s.failed, s.uncertified);
            if cli.strict && s.uncertified > 0 {
                EXIT_CERTIFICATE_FAILED
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_OTHER
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        mode: cli.mode.into(),
        primes: cli.primes as usize,
        exact: cli.exact,
        seed: cli.seed,
        threads: cli.threads,
    };
    let code = match &cli.batch {
        Some(path) => run_batch_file(&cli, path, &config),
        None => run_single(&cli, &config),
    };
    ExitCode::from(code)
}
