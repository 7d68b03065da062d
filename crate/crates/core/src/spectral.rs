//! The two cycles of the algorithm and the assembly of the `E_2`/`E_3` pages.
//!
//! Indexing convention: `q = t·d + k` with `k ∈ [1, d]`, `q ∈ [0, 4d]`.
//! Row 1 holds the terms `E^{1-t,t}` (from `H^2` of the Koszul complex), row 2
//! the terms `E^{2-t,t}` (from `H^3`, i.e. the Milnor algebra).
//!
//! First cycle, for each `q ∈ [3, 4d]`, the map
//! `φ'_q : S^3_{q-2} × S^3_{q-d-2} → S_{q+d-3} × S_{q-3}`,
//! `((a,b,c),(u,v,w)) ↦ (a f_x + b f_y + c f_z, a_x + b_y + c_z - u f_x - v f_y - w f_z)`,
//! gives `ε'_q = dim ker φ'_q - syz(f)_{q-d} - dim(df∧Ω^1)_q = dim E_2` in row 1.
//!
//! Second cycle, the maps `φ_q` of [`PhiCase`] give `ε_q = dim E_3` in row 1.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockMatrixBuilder;
use crate::error::{Error, Result};
use crate::hilbert::HilbertData;
use crate::linalg::{kernel_dim, RankPolicy, SparseMatrix};
use crate::poly::HomogPoly;

/// Degree range deciding the shape of `φ_q` in the second cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiCase {
    /// `3 ≤ q ≤ d+1`: `(a,b,c) ↦ (Φ_1, div)`, identical to `φ'_q`.
    A,
    /// `d+2 ≤ q ≤ d+mdr+1`: adds `(u,v,w)` and the row `div(u,v,w)`.
    B,
    /// `d+mdr+2 ≤ q ≤ 2d`: adds `(u',v',w')` with `Φ_3`, `Φ_4`.
    C,
    /// `2d+1 ≤ q ≤ 4d`: adds `(u'',v'',w'')` entering `Φ_4`.
    D,
}

impl PhiCase {
    pub fn of(d: usize, q: usize, mdr: usize) -> PhiCase {
        if q <= d + 1 {
            PhiCase::A
        } else if q <= (d + mdr + 1).min(2 * d) {
            PhiCase::B
        } else if q <= 2 * d {
            PhiCase::C
        } else {
            PhiCase::D
        }
    }
}

/// Matrix of `φ'_q`.
pub fn build_phi_prime(grad: &[HomogPoly; 3], q: usize) -> SparseMatrix {
    let d = grad[0].degree() as i64 + 1;
    let q = q as i64;
    let q1 = q - d;
    let mut b = BlockMatrixBuilder::new();
    let a = b.triple_cols(q - 2);
    let u = b.triple_cols(q1 - 2);
    let r1 = b.rows(q + d - 3);
    let r2 = b.rows(q - 3);
    b.multiply(a, r1, grad, false);
    b.divergence(a, r2, false);
    b.multiply(u, r2, grad, true);
    b.build()
}

/// Matrix of `φ_q` for the degree range containing `q`.
pub fn build_phi(grad: &[HomogPoly; 3], q: usize, mdr: usize) -> SparseMatrix {
    let d = grad[0].degree() as usize + 1;
    let case = PhiCase::of(d, q, mdr);
    let (d, q) = (d as i64, q as i64);
    let (q1, q2) = (q - d, q - 2 * d);
    let mut b = BlockMatrixBuilder::new();
    let a = b.triple_cols(q - 2);
    match case {
        PhiCase::A => {
            let r1 = b.rows(q + d - 3);
            let r2 = b.rows(q - 3);
            b.multiply(a, r1, grad, false);
            b.divergence(a, r2, false);
        }
        PhiCase::B => {
            let u = b.triple_cols(q1 - 2);
            let r1 = b.rows(q + d - 3);
            let r2 = b.rows(q - 3);
            let r3 = b.rows(q1 - 3);
            b.multiply(a, r1, grad, false);
            b.divergence(a, r2, false);
            b.multiply(u, r2, grad, true);
            b.divergence(u, r3, false);
        }
        PhiCase::C | PhiCase::D => {
            let u = b.triple_cols(q1 - 2);
            let u1 = b.triple_cols(q1 - 2);
            let r1 = b.rows(q + d - 3);
            let r2 = b.rows(q - 3);
            let r3 = b.rows(q - 3);
            let r4 = b.rows(q1 - 3);
            b.multiply(a, r1, grad, false);
            b.divergence(a, r2, false);
            b.multiply(u, r2, grad, true);
            b.multiply(u1, r3, grad, false);
            b.divergence(u, r4, false);
            b.divergence(u1, r4, true);
            if case == PhiCase::D {
                let u2 = b.triple_cols(q2 - 2);
                b.multiply(u2, r4, grad, true);
            }
        }
    }
    b.build()
}

fn non_negative(what: &'static str, q: usize, v: i64) -> Result<usize> {
    if v < 0 {
        Err(Error::NegativeDimension { what, q, value: v })
    } else {
        Ok(v as usize)
    }
}

/// Output of the first cycle; all vectors are indexed by `q ∈ [0, 4d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstCycle {
    pub kprime: Vec<usize>,
    pub epsprime: Vec<usize>,
    pub theta: Vec<usize>,
}

pub fn first_cycle(f: &HomogPoly, data: &HilbertData, policy: &RankPolicy) -> Result<FirstCycle> {
    let d = data.d;
    let grad = f.gradient();
    let top = 4 * d;
    let mut kprime = vec![0usize; top + 1];
    let dims: Vec<(usize, usize)> = (3..=top)
        .into_par_iter()
        .map(|q| (q, kernel_dim(&build_phi_prime(&grad, q), policy)))
        .collect();
    for (q, k) in dims {
        kprime[q] = k;
    }
    let mut epsprime = vec![0usize; top + 1];
    for q in 3..=top {
        let qi = q as i64;
        let v = kprime[q] as i64 - data.syz_at(qi - d as i64) as i64 - data.kw_at(qi) as i64;
        epsprime[q] = non_negative("epsilon'", q, v)?;
    }
    let mut theta = vec![0usize; top + 1];
    for q in 1..=top {
        let qi = q as i64;
        let v = data.m_at(qi - 3) as i64 - data.syz_at(qi) as i64
            + data.kw_at(qi) as i64
            + epsprime[q] as i64;
        theta[q] = non_negative("theta", q, v)?;
    }
    Ok(FirstCycle {
        kprime,
        epsprime,
        theta,
    })
}

/// `θ_q` by the piecewise formula in terms of `m(f)`, `m(f_s)` and `τ`.
/// Agrees with [`FirstCycle::theta`] whenever `st(f) ≤ 3d - 6`.
pub fn theta_piecewise(data: &HilbertData, epsprime: &[usize], q: usize) -> i64 {
    let d = data.d as i64;
    let qi = q as i64;
    let e = epsprime[q] as i64;
    if qi < 2 {
        0
    } else if qi <= 2 * d - 3 {
        data.m_at(qi - 3) as i64 - data.m_at(qi + d - 3) as i64
            + data.m_smooth_at(qi + d - 3) as i64
            + e
    } else if qi <= 3 * d - 4 {
        data.m_at(qi - 3) as i64 - data.tau as i64 + e
    } else {
        e
    }
}

/// Output of the second cycle, indexed by `q ∈ [0, 4d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondCycle {
    pub k: Vec<usize>,
    pub eps: Vec<usize>,
    /// `false` when `eps` was reconstructed from the first cycle only.
    pub computed: bool,
}

pub fn second_cycle(
    f: &HomogPoly,
    data: &HilbertData,
    first: &FirstCycle,
    policy: &RankPolicy,
) -> Result<SecondCycle> {
    let d = data.d;
    let grad = f.gradient();
    let top = 4 * d;
    let mut k = vec![0usize; top + 1];
    let dims: Vec<(usize, usize)> = (3..=top)
        .into_par_iter()
        .map(|q| (q, kernel_dim(&build_phi(&grad, q, data.mdr), policy)))
        .collect();
    for (q, kq) in dims {
        k[q] = kq;
    }
    let mut eps = vec![0usize; top + 1];
    for q in 3..=top {
        let qi = q as i64;
        let mut v = k[q] as i64 - data.kw_at(qi) as i64;
        if matches!(PhiCase::of(d, q, data.mdr), PhiCase::C | PhiCase::D) {
            let q1 = q - d;
            v -= data.syz_at(q1 as i64) as i64 + first.kprime[q1] as i64;
        }
        eps[q] = non_negative("epsilon", q, v)?;
    }
    Ok(SecondCycle {
        k,
        eps,
        computed: true,
    })
}

impl SecondCycle {
    /// Row-1 `E_3` terms without running the second cycle.
    ///
    /// With `μ = τ` the sequence degenerates at `E_2`, so `ε = ε'`. Otherwise
    /// only the `H^1` part is reconstructed exactly: `E^{1,0}_k` is already
    /// `E_∞`, `E^{0,1}_k` is conjugate to `E^{1,0}_{d-k}`, and the terms with
    /// `q > 2d` are set to zero.
    pub fn from_first_cycle(d: usize, first: &FirstCycle, degenerate: bool) -> SecondCycle {
        let top = 4 * d;
        let eps = if degenerate {
            first.epsprime.clone()
        } else {
            let mut eps = vec![0usize; top + 1];
            eps[..=d].copy_from_slice(&first.epsprime[..=d]);
            for k in 1..=d {
                eps[d + k] = first.epsprime[d - k];
            }
            eps
        };
        SecondCycle {
            k: vec![0; top + 1],
            eps,
            computed: false,
        }
    }
}

/// The `E_2`/`E_3` tables, `Gr_P` dimensions and the Euler certificate.
///
/// Tables are indexed `[t][k-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralReport {
    pub d: usize,
    pub e2_row1: Vec<Vec<usize>>,
    pub e3_row1: Vec<Vec<usize>>,
    pub e2_row2: Vec<Vec<usize>>,
    /// Only `t ∈ {0, 1, 2}`; the incoming `d_2` for `t = 3` lies beyond `q = 4d`.
    pub e3_row2: Vec<Vec<usize>>,
    /// `grp_h1[p][k-1] = dim Gr_P^p H^1(F)_λ`, `p ∈ {0, 1}`.
    pub grp_h1: Vec<Vec<usize>>,
    /// `grp_h2[p][k-1] = dim Gr_P^p H^2(F)_λ`, `p ∈ {0, 1, 2}`.
    pub grp_h2: Vec<Vec<usize>>,
    pub q0_observed: Option<usize>,
    pub certificate: Vec<bool>,
    pub all_certified: bool,
    pub wh_shortcut_used: bool,
    /// `q > 2d` with `ε_q ≠ 0`; these must vanish in the limit.
    pub killed_by_p_bounds: Vec<usize>,
    pub chi_u: i64,
}

/// Euler characteristic of `P^2 \ C`.
pub fn euler_complement(d: usize, mu: usize) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) + 1 - mu as i64
}

pub fn assemble(
    data: &HilbertData,
    first: &FirstCycle,
    second: &SecondCycle,
    mu: usize,
) -> Result<SpectralReport> {
    let d = data.d;
    let top = 4 * d;
    let at = |t: usize, k: usize| t * d + k;
    let table = |v: &[usize], ts: std::ops::Range<usize>| -> Vec<Vec<usize>> {
        ts.map(|t| (1..=d).map(|k| v[at(t, k)]).collect()).collect()
    };
    let e2_row1 = table(&first.epsprime, 0..4);
    let e3_row1 = table(&second.eps, 0..4);
    let e2_row2 = table(&first.theta, 0..4);
    let mut e3_row2 = vec![vec![0usize; d]; 3];
    for t in 0..3 {
        for k in 1..=d {
            let q = at(t, k);
            let qn = at(t + 1, k);
            let v = first.theta[q] as i64 - first.epsprime[qn] as i64 + second.eps[qn] as i64;
            e3_row2[t][k - 1] = non_negative("E3 row 2", q, v)?;
        }
    }
    let grp_h1 = vec![
        (1..=d).map(|k| second.eps[d + k]).collect::<Vec<_>>(),
        (1..=d).map(|k| second.eps[k]).collect::<Vec<_>>(),
    ];
    let grp_h2: Vec<Vec<usize>> = (0..3).map(|p| e3_row2[2 - p].clone()).collect();

    let chi_u = euler_complement(d, mu);
    let certificate: Vec<bool> = (1..=d)
        .map(|k| {
            let h2: i64 = (0..3).map(|t| e3_row2[t][k - 1] as i64).sum();
            let h1 = second.eps[k] as i64 + second.eps[d + k] as i64;
            let delta = i64::from(k == d);
            h2 - h1 + delta == chi_u
        })
        .collect();
    let all_certified = certificate.iter().all(|&c| c);

    let excess = mu.saturating_sub(data.tau);
    let stable = |q: usize| first.epsprime[q] == excess && second.eps[q] == 0;
    let q0_observed = if stable(top) {
        let mut q = top;
        while q > 1 && stable(q - 1) {
            q -= 1;
        }
        Some(q)
    } else {
        None
    };
    let killed_by_p_bounds = (2 * d + 1..=top).filter(|&q| second.eps[q] != 0).collect();

    Ok(SpectralReport {
        d,
        e2_row1,
        e3_row1,
        e2_row2,
        e3_row2,
        grp_h1,
        grp_h2,
        q0_observed,
        certificate,
        all_certified,
        wh_shortcut_used: !second.computed,
        killed_by_p_bounds,
        chi_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_exact;
    use crate::parse::parse;

    #[test]
    fn case_boundaries_free_curve_shape() {
        // d = 10, mdr = 4.
        let b: Vec<usize> = (3..=40).filter(|&q| PhiCase::of(10, q, 4) == PhiCase::B).collect();
        let c: Vec<usize> = (3..=40).filter(|&q| PhiCase::of(10, q, 4) == PhiCase::C).collect();
        assert_eq!(b, (12..=15).collect::<Vec<_>>());
        assert_eq!(c, (16..=20).collect::<Vec<_>>());
        assert_eq!(PhiCase::of(10, 11, 4), PhiCase::A);
        assert_eq!(PhiCase::of(10, 21, 4), PhiCase::D);
    }

    #[test]
    fn phi_equals_phi_prime_in_low_range() {
        let f = parse("x^5+y^4*z+x^4*y").unwrap();
        let g = f.gradient();
        for q in 3..=6 {
            assert_eq!(build_phi(&g, q, 2), build_phi_prime(&g, q));
        }
    }

    #[test]
    fn smooth_quartic_phi_prime_q5() {
        let f = parse("x^4+y^4+z^4").unwrap();
        let m = build_phi_prime(&f.gradient(), 5);
        assert_eq!(m.n_cols() - rank_exact(&m), 3);
    }

    #[test]
    fn phi_shapes() {
        let f = parse("x^5+y^5+z^5").unwrap();
        let g = f.gradient();
        // case D at q = 11: S^3_9 × 2 S^3_4 × S^3_(-1) → S_13 × 2 S_8 × S_3
        let m = build_phi(&g, 11, 4);
        assert_eq!(m.n_cols(), 3 * 55 + 2 * 3 * 15);
        assert_eq!(m.n_rows(), 105 + 2 * 45 + 10);
    }
}
