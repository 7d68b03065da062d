//! Eigenspace dimensions, characteristic polynomials, pole order spectra and
//! certified Bernstein–Sato roots read off a [`SpectralReport`].
//!
//! Eigenvalues are `λ_k = exp(-2πik/d)`, `k ∈ [1, d]`.

use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::spectral::SpectralReport;

pub use crate::spectral::euler_complement;

/// Characteristic polynomial of a monodromy operator, kept as the
/// multiplicity `e[k-1]` of each eigenvalue `λ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct CharPoly {
    pub d: usize,
    pub e: Vec<usize>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.e.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    /// `(k, mult)` with positive multiplicity.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.e
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
            .collect()
    }

    /// Product of cyclotomic polynomials: the eigenvalue `λ_k` has order
    /// `d / gcd(k, d)`, and `Φ_n` collects all primitive `n`-th roots. Returns
    /// `None` when the multiplicities are not constant on each Galois orbit.
    pub fn cyclotomic_factors(&self) -> Option<Vec<(usize, usize)>> {
        let d = self.d;
        let mut out = Vec::new();
        for n in (1..=d).filter(|n| d % n == 0) {
            let ks: Vec<usize> = (1..=d).filter(|&k| d / k.gcd(&d) == n).collect();
            let m = self.e[ks[0] - 1];
            if ks.iter().any(|&k| self.e[k - 1] != m) {
                return None;
            }
            if m > 0 {
                out.push((n, m));
            }
        }
        Some(out)
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let support = self.support();
        let mut seq = s.serialize_seq(Some(support.len()))?;
        for pair in support {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cyclotomic_factors() {
            Some(v) if v.is_empty() => write!(f, "1"),
            Some(v) => {
                let parts: Vec<String> = v
                    .iter()
                    .map(|&(n, m)| if m == 1 { format!("Φ_{n}(t)") } else { format!("Φ_{n}(t)^{m}") })
                    .collect();
                write!(f, "{}", parts.join("·"))
            }
            None => {
                let parts: Vec<String> = self
                    .support()
                    .iter()
                    .map(|&(k, m)| format!("(t - λ_{k})^{m}"))
                    .collect();
                write!(f, "{}", parts.join("·"))
            }
        }
    }
}

/// `Σ mult · t^{num/den}`, with `num/den` kept unreduced (`den = d`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
pub struct PoleSpectrum {
    pub entries: Vec<(usize, usize, usize)>,
}

impl PoleSpectrum {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn coefficient(&self, num: usize, den: usize) -> usize {
        self.entries
            .iter()
            .filter(|e| e.0 * den == num * e.1)
            .map(|e| e.2)
            .sum()
    }
}

impl Serialize for PoleSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for &(n, d, m) in &self.entries {
            seq.serialize_element(&[n, d, m])?;
        }
        seq.end()
    }
}

impl fmt::Display for PoleSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&(n, d, m)| {
                if m == 1 {
                    format!("t^{{{n}/{d}}}")
                } else {
                    format!("{m}t^{{{n}/{d}}}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsRoot {
    pub num: usize,
    pub den: usize,
    pub t: usize,
    pub k: usize,
}

/// Certified members of the root set of `b_f(-s)`; never claimed complete.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
pub struct BSRootSet {
    pub roots: Vec<BsRoot>,
}

impl BSRootSet {
    pub fn contains(&self, num: usize, den: usize) -> bool {
        self.roots.iter().any(|r| r.num * den == num * r.den)
    }
}

impl Serialize for BSRootSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.roots.len()))?;
        for r in &self.roots {
            seq.serialize_element(&[r.num, r.den])?;
        }
        seq.end()
    }
}

impl fmt::Display for BSRootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .roots
            .iter()
            .map(|r| if r.den == 1 { r.num.to_string() } else { format!("{}/{}", r.num, r.den) })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// All singularities weighted homogeneous: `E_2 = E_∞`.
    CertifiedWh,
    /// The per-eigenvalue Euler identity holds for every `k`.
    CertifiedEuler,
    Conjectural,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::CertifiedWh => "certified-wh",
            Status::CertifiedEuler => "certified-euler",
            Status::Conjectural => "conjectural",
        }
    }
}

/// `dim H^1(F)_{λ_k} = ε_k + ε_{d+k}`.
pub fn h1_eigenspaces(report: &SpectralReport) -> Vec<usize> {
    (0..report.d)
        .map(|i| report.grp_h1[0][i] + report.grp_h1[1][i])
        .collect()
}

/// `(Δ^0, Δ^1, Δ^2)`; `Δ^2` comes from `e2[k] = χ(U) + e1[k] - δ_{k,d}`.
/// `None` for `Δ^2` if some multiplicity would be negative.
pub fn characteristic_polys(report: &SpectralReport) -> (CharPoly, CharPoly, Option<CharPoly>) {
    let d = report.d;
    let mut e0 = vec![0; d];
    e0[d - 1] = 1;
    let e1 = h1_eigenspaces(report);
    let e2: Option<Vec<usize>> = (1..=d)
        .map(|k| {
            let v = report.chi_u + e1[k - 1] as i64 - i64::from(k == d);
            usize::try_from(v).ok()
        })
        .collect();
    (
        CharPoly { d, e: e0 },
        CharPoly { d, e: e1 },
        e2.map(|e| CharPoly { d, e }),
    )
}

/// `Sp^0_P` (`j = 0`, from `Gr_P H^2`) or `Sp^1_P` (`j = 1`, from `Gr_P H^1`).
pub fn pole_spectrum(report: &SpectralReport, j: u8) -> PoleSpectrum {
    let d = report.d;
    let mut entries = Vec::new();
    match j {
        0 => {
            for t in 0..3 {
                for k in 1..=d {
                    let m = report.grp_h2[2 - t][k - 1];
                    if m > 0 {
                        entries.push((t * d + k, d, m));
                    }
                }
            }
        }
        1 => {
            // Gr_P^1 H^1 at q = k, then Gr_P^0 H^1 at q = d + k; exponent (q + d)/d.
            for (p, shift) in [(1usize, 0usize), (0, d)] {
                for k in 1..=d {
                    let m = report.grp_h1[p][k - 1];
                    if m > 0 {
                        entries.push((shift + k + d, d, m));
                    }
                }
            }
        }
        _ => panic!("pole spectrum index must be 0 or 1"),
    }
    PoleSpectrum { entries }
}

/// Exponents `α = (td+k)/d` with `Gr_P^{2-t} H^2(F)_{λ_k} ≠ 0`.
pub fn bs_roots(report: &SpectralReport) -> BSRootSet {
    let d = report.d;
    let mut roots = Vec::new();
    for t in 0..3 {
        for k in 1..=d {
            if report.grp_h2[2 - t][k - 1] > 0 {
                let q = t * d + k;
                let g = q.gcd(&d);
                roots.push(BsRoot {
                    num: q / g,
                    den: d / g,
                    t,
                    k,
                });
            }
        }
    }
    BSRootSet { roots }
}

pub fn status(report: &SpectralReport, mu: usize, tau: usize) -> Status {
    if mu == tau {
        Status::CertifiedWh
    } else if report.all_certified && !report.wh_shortcut_used {
        Status::CertifiedEuler
    } else {
        Status::Conjectural
    }
}

/// Everything derived from the spectral data, in the shape written to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub mu: usize,
    pub tau: usize,
    pub chi_u: i64,
    pub h1_eigenspaces: Vec<usize>,
    pub h2_eigenspaces: Vec<usize>,
    pub b1: usize,
    pub b2: usize,
    pub delta0: CharPoly,
    pub delta1: CharPoly,
    pub delta2: Option<CharPoly>,
    #[serde(rename = "sp_P0")]
    pub sp_p0: PoleSpectrum,
    #[serde(rename = "sp_P1")]
    pub sp_p1: PoleSpectrum,
    pub bs_roots_certified: BSRootSet,
    pub status: Status,
    /// `Δ^2` from the Euler identity disagrees with `Σ_p Gr_P H^2`.
    pub delta2_mismatch: Vec<usize>,
}

impl InvariantReport {
    pub fn from_report(report: &SpectralReport, mu: usize, tau: usize) -> InvariantReport {
        let (delta0, delta1, delta2) = characteristic_polys(report);
        let h1 = h1_eigenspaces(report);
        let h2: Vec<usize> = (0..report.d)
            .map(|i| (0..3).map(|p| report.grp_h2[p][i]).sum())
            .collect();
        let delta2_mismatch = match &delta2 {
            Some(c) => (1..=report.d).filter(|&k| c.e[k - 1] != h2[k - 1]).collect(),
            None => (1..=report.d).collect(),
        };
        InvariantReport {
            mu,
            tau,
            chi_u: report.chi_u,
            b1: h1.iter().sum(),
            b2: h2.iter().sum(),
            h1_eigenspaces: h1,
            h2_eigenspaces: h2,
            delta0,
            delta1,
            delta2,
            sp_p0: pole_spectrum(report, 0),
            sp_p1: pole_spectrum(report, 1),
            bs_roots_certified: bs_roots(report),
            status: status(report, mu, tau),
            delta2_mismatch,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_complement_values() {
        assert_eq!(euler_complement(8, 24), 19);
        assert_eq!(euler_complement(12, 73), 38);
        assert_eq!(euler_complement(4, 0), 7);
    }

    #[test]
    fn cyclotomic_grouping() {
        // d = 4: λ_2 = -1 alone, λ_1 and λ_3 conjugate, λ_4 = 1.
        let c = CharPoly { d: 4, e: vec![2, 1, 2, 0] };
        assert_eq!(c.cyclotomic_factors(), Some(vec![(2, 1), (4, 2)]));
        assert_eq!(c.to_string(), "Φ_2(t)·Φ_4(t)^2");
        assert_eq!(CharPoly { d: 4, e: vec![1, 0, 0, 0] }.cyclotomic_factors(), None);
        assert_eq!(CharPoly { d: 3, e: vec![0; 3] }.to_string(), "1");
    }

    #[test]
    fn spectrum_format() {
        let s = PoleSpectrum { entries: vec![(14, 8, 1), (10, 8, 20)] };
        assert_eq!(s.to_string(), "t^{14/8} + 20t^{10/8}");
        assert_eq!(s.coefficient(5, 4), 20);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[14,8,1],[10,8,20]]");
    }
}
