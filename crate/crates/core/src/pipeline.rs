//! End-to-end runs: parse, Hilbert data, `μ`, both cycles, assembly and
//! invariants, collected into one serializable [`CurveReport`].

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, PolyError, Result};
use crate::hilbert::HilbertData;
use crate::invariants::{InvariantReport, Status};
use crate::linalg::RankPolicy;
use crate::milnor::{total_milnor_number, MilnorResult};
use crate::parse::parse;
use crate::poly::HomogPoly;
use crate::spectral::{assemble, first_cycle, second_cycle, FirstCycle, SecondCycle, SpectralReport};

pub const SCHEMA: &str = "polemono/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// First cycle only when `μ = τ`, both cycles otherwise.
    #[default]
    Auto,
    FirstCycleOnly,
    Full,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "first-cycle-only" => Ok(Mode::FirstCycleOnly),
            "full" => Ok(Mode::Full),
            other => Err(format!("unknown mode '{other}' (expected auto, first-cycle-only or full)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub primes: usize,
    pub exact: bool,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Auto,
            primes: 2,
            exact: false,
            seed: 0x5eed,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn policy(&self) -> RankPolicy {
        RankPolicy::new(self.primes, self.exact, self.seed)
    }
}

/// Everything computed for one curve.
#[derive(Clone, Debug)]
pub struct CurveReport {
    pub input: String,
    pub f: HomogPoly,
    pub config: RunConfig,
    pub mode_used: Mode,
    pub hilbert: HilbertData,
    pub milnor: MilnorResult,
    pub first: FirstCycle,
    pub second: SecondCycle,
    pub spectral: SpectralReport,
    pub invariants: InvariantReport,
}

impl CurveReport {
    pub fn mu(&self) -> usize {
        self.milnor.mu
    }

    pub fn tau(&self) -> usize {
        self.hilbert.tau
    }

    pub fn status(&self) -> Status {
        self.invariants.status
    }

    pub fn to_json(&self) -> Value {
        let s = &self.spectral;
        json!({
            "schema": SCHEMA,
            "input": self.input,
            "polynomial": self.f.to_string(),
            "degree": self.hilbert.d,
            "config": self.config,
            "mode_used": self.mode_used,
            "hilbert": self.hilbert,
            "milnor": self.milnor,
            "spectral": {
                "kprime": self.first.kprime,
                "eps_prime": self.first.epsprime,
                "theta": self.first.theta,
                "k": self.second.k,
                "eps": self.second.eps,
                "second_cycle_computed": self.second.computed,
                "E2": {
                    "row1": keyed_table(&s.e2_row1),
                    "row2": keyed_table(&s.e2_row2),
                },
                "E3": {
                    "row1": keyed_table(&s.e3_row1),
                    "row2": keyed_table(&s.e3_row2),
                },
                "grP_H1": s.grp_h1,
                "grP_H2": s.grp_h2,
                "certificate_per_k": s.certificate,
                "q0_observed": s.q0_observed,
                "all_certified": s.all_certified,
                "wh_shortcut_used": s.wh_shortcut_used,
                "killed_by_p_bounds": s.killed_by_p_bounds,
            },
            "invariants": self.invariants,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("report serializes")
    }
}

/// `table[t][k-1]` as `{"t,k": value}`.
fn keyed_table(table: &[Vec<usize>]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (t, row) in table.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            out.insert(format!("{t},{}", i + 1), v);
        }
    }
    out
}

fn run_inner(input: &str, f: HomogPoly, config: &RunConfig) -> Result<CurveReport> {
    let policy = config.policy();
    let hilbert = HilbertData::compute(&f, &policy)?;
    let milnor = total_milnor_number(&f, &policy, config.seed)?;
    let mu = milnor.mu;
    let degenerate = mu == hilbert.tau;
    let mode_used = match config.mode {
        Mode::Auto if degenerate => Mode::FirstCycleOnly,
        Mode::Auto => Mode::Full,
        m => m,
    };
    let first = first_cycle(&f, &hilbert, &policy)?;
    let second = match mode_used {
        Mode::Full => second_cycle(&f, &hilbert, &first, &policy)?,
        _ => SecondCycle::from_first_cycle(hilbert.d, &first, degenerate),
    };
    let spectral = assemble(&hilbert, &first, &second, mu)?;
    let invariants = InvariantReport::from_report(&spectral, mu, hilbert.tau);
    Ok(CurveReport {
        input: input.to_string(),
        f,
        config: config.clone(),
        mode_used,
        hilbert,
        milnor,
        first,
        second,
        spectral,
        invariants,
    })
}

/// Runs the full pipeline on an already parsed curve.
pub fn run_poly(input: &str, f: HomogPoly, config: &RunConfig) -> Result<CurveReport> {
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool");
            pool.install(|| run_inner(input, f, config))
        }
        None => run_inner(input, f, config),
    }
}

/// Parses `input` and runs the pipeline.
pub fn run(input: &str, config: &RunConfig) -> Result<CurveReport> {
    let f = parse(input)?;
    run_poly(input, f, config)
}

/// Stable identifier of an error variant, used in JSON and for exit codes.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Poly(PolyError::NotHomogeneous { .. }) => "NotHomogeneous",
        Error::Poly(PolyError::Syntax { .. }) => "Syntax",
        Error::Poly(PolyError::ZeroPolynomial) => "ZeroPolynomial",
        Error::Poly(PolyError::DegreeMismatch { .. }) => "DegreeMismatch",
        Error::Linalg(_) => "Linalg",
        Error::DegreeTooSmall { .. } => "DegreeTooSmall",
        Error::NonReduced { .. } => "NonReduced",
        Error::CentralPencil => "CentralPencil",
        Error::NotStabilized { .. } => "NotStabilized",
        Error::RetryExhausted { .. } => "RetryExhausted",
        Error::InconsistentSyzygies { .. } => "InconsistentSyzygies",
        Error::NegativeDimension { .. } => "NegativeDimension",
    }
}

pub fn error_json(line: Option<usize>, input: &str, e: &Error) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "input": input,
        "error": { "kind": error_kind(e), "message": e.to_string() },
    });
    if let Some(n) = line {
        v["line"] = json!(n);
    }
    v
}

/// Counts from a batch run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub ok: usize,
    pub failed: usize,
    pub uncertified: usize,
}

/// Reads one polynomial per line (blank lines and `#` comments skipped) and
/// writes one JSON object per processed line.
pub fn run_batch<R: BufRead, W: Write>(input: R, mut out: W, config: &RunConfig) -> std::io::Result<BatchSummary> {
    let mut summary = BatchSummary::default();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value = match run(text, config) {
            Ok(r) => {
                summary.ok += 1;
                if r.status() == Status::Conjectural {
                    summary.uncertified += 1;
                }
                let mut v = r.to_json();
                v["line"] = json!(i + 1);
                v
            }
            Err(e) => {
                summary.failed += 1;
                error_json(Some(i + 1), text, &e)
            }
        };
        serde_json::to_writer(&mut out, &value)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_parse() {
        assert_eq!("first-cycle-only".parse::<Mode>(), Ok(Mode::FirstCycleOnly));
        assert!("fast".parse::<Mode>().is_err());
        assert_eq!(serde_json::to_string(&Mode::FirstCycleOnly).unwrap(), "\"first-cycle-only\"");
    }

    #[test]
    fn batch_skips_comments_and_reports_errors() {
        let text = "# header\n\nx^3+y^3+z^3\nx^2*y+\n";
        let mut out = Vec::new();
        let s = run_batch(text.as_bytes(), &mut out, &RunConfig::default()).unwrap();
        assert_eq!((s.ok, s.failed), (1, 1));
        let lines: Vec<Value> = String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0]["line"], 3);
        assert_eq!(lines[1]["error"]["kind"], "Syntax");
    }

    #[test]
    fn keyed_tables() {
        let t = keyed_table(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(t["1,2"], 4);
        assert_eq!(t.len(), 4);
    }
}
