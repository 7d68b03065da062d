//! Hilbert functions of the Milnor algebra `M(f) = S/J_f`, of a smooth
//! reference curve of the same degree, and the Koszul/syzygy dimensions
//! derived from them.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::jacobian_matrix;
use crate::error::{Error, Result};
use crate::linalg::{rank_certified, RankPolicy};
use crate::poly::{dim_s, HomogPoly, Monomial};
use crate::univariate::UniPoly;

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `m(f)_j = dim S_j - rank(S^3_{j-d+1} → S_j)`.
pub fn milnor_dim(grad: &[HomogPoly; 3], j: i64, policy: &RankPolicy) -> usize {
    if j < 0 {
        return 0;
    }
    let d1 = grad[0].degree() as i64;
    if j < d1 {
        return dim_s(j);
    }
    let m = jacobian_matrix(grad, j - d1);
    dim_s(j) - rank_certified(&m, policy).rank
}

/// Coefficient of `t^j` in `((1 - t^{d-1}) / (1 - t))^3`.
pub fn smooth_milnor_dim(d: usize, j: i64) -> usize {
    let top = 3 * (d as i64 - 2);
    if j < 0 || j > top {
        return 0;
    }
    // Number of (i1, i2, i3) in [0, d-2]^3 summing to j.
    let k = d as i64 - 2;
    let mut count = 0i64;
    for i1 in 0..=k.min(j) {
        let rest = j - i1;
        let lo = (rest - k).max(0);
        let hi = rest.min(k);
        if hi >= lo {
            count += hi - lo + 1;
        }
    }
    count as usize
}

/// `dim (df ∧ Ω^1)_j`.
pub fn koszul_wedge_dim(d: usize, j: i64) -> usize {
    let d = d as i64;
    let v = if j <= d {
        0
    } else if j < 2 * d {
        3 * binom2(j - d + 1)
    } else {
        3 * binom2(j - d + 1) - binom2(j - 2 * d + 2)
    };
    v as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub d: usize,
    /// `m(f)_j`, `j ∈ [0, 5d]`.
    pub m: Vec<usize>,
    /// `m(f_s)_j`, `j ∈ [0, 3(d-2)]`.
    pub m_smooth: Vec<usize>,
    /// `dim (df ∧ Ω^1)_j`, `j ∈ [0, 4d]`.
    pub kw: Vec<usize>,
    /// `dim H^2(K_f)_j`, `j ∈ [0, 4d]`.
    pub h2: Vec<usize>,
    /// `syz(f)_j`, `j ∈ [0, 4d]`, from the rank of the Jacobian map.
    pub syz: Vec<usize>,
    pub tau: usize,
    /// `None` when `m(f)` agrees with `m(f_s)` on the whole computed range.
    pub ct: Option<usize>,
    pub st: usize,
    pub mdr: usize,
}

impl HilbertData {
    pub fn compute(f: &HomogPoly, policy: &RankPolicy) -> Result<HilbertData> {
        let d = f.degree() as usize;
        if d < 3 {
            return Err(Error::DegreeTooSmall { degree: d as u32 });
        }
        let grad = f.gradient();
        // Constant syzygies first: union of concurrent lines or a cone over a
        // non-reduced binary form.
        if let Some(v) = constant_syzygy(&grad) {
            return Err(classify_binary_cone(f, &v));
        }

        let m: Vec<usize> = (0..=5 * d as i64)
            .into_par_iter()
            .map(|j| milnor_dim(&grad, j, policy))
            .collect();

        let (lo, hi) = (3 * d - 5, 3 * d + 1);
        if let Some(at) = (lo..=hi).find(|&j| m[j] != m[lo]) {
            return Err(Error::NonReduced {
                detail: format!(
                    "m(f)_j is not constant on [{lo}, {hi}]: m(f)_{lo} = {}, m(f)_{at} = {}",
                    m[lo], m[at]
                ),
            });
        }
        let tau = m[lo];
        if let Some(at) = (hi..=5 * d).find(|&j| m[j] != tau) {
            return Err(Error::NonReduced {
                detail: format!("m(f)_{at} = {} differs from the stable value {tau}", m[at]),
            });
        }

        let m_smooth: Vec<usize> = (0..=3 * (d as i64 - 2))
            .map(|j| smooth_milnor_dim(d, j))
            .collect();
        let m_at = |j: i64| if j < 0 { 0 } else { m[j as usize] };
        let ms_at = |j: i64| smooth_milnor_dim(d, j);

        let range = 0..=4 * d as i64;
        let kw: Vec<usize> = range.clone().map(|j| koszul_wedge_dim(d, j)).collect();
        let h2: Vec<usize> = range
            .clone()
            .map(|j| {
                if j < 2 {
                    0
                } else if j <= 2 * d as i64 - 3 {
                    m_at(j + d as i64 - 3) - ms_at(j + d as i64 - 3)
                } else {
                    tau
                }
            })
            .collect();
        // syz(f)_j = dim ker(S^3_{j-2} → S_{j+d-3}).
        let syz: Vec<usize> = range
            .map(|j| {
                if j < 2 {
                    return 0;
                }
                let target = j + d as i64 - 3;
                let rank = dim_s(target) - m_at(target);
                3 * dim_s(j - 2) - rank
            })
            .collect();

        let ct = (0..m.len())
            .find(|&j| m[j] != ms_at(j as i64))
            .map(|j| j - 1);
        let st = (0..m.len())
            .rev()
            .take_while(|&j| m[j] == tau)
            .last()
            .unwrap_or(m.len());
        let mdr = (0..syz.len())
            .find(|&j| syz[j] > 0)
            .map(|j| j - 2)
            .expect("Koszul syzygies exist in degree d+1");

        Ok(HilbertData {
            d,
            m,
            m_smooth,
            kw,
            h2,
            syz,
            tau,
            ct,
            st,
            mdr,
        })
    }

    fn get(v: &[usize], j: i64) -> usize {
        if j < 0 {
            0
        } else {
            v.get(j as usize).copied().unwrap_or(0)
        }
    }

    /// `m(f)_j`, extended by `τ` beyond the stored range.
    pub fn m_at(&self, j: i64) -> usize {
        if j >= self.m.len() as i64 {
            self.tau
        } else {
            Self::get(&self.m, j)
        }
    }

    pub fn m_smooth_at(&self, j: i64) -> usize {
        Self::get(&self.m_smooth, j)
    }

    pub fn syz_at(&self, j: i64) -> usize {
        Self::get(&self.syz, j)
    }

    pub fn kw_at(&self, j: i64) -> usize {
        Self::get(&self.kw, j)
    }

    /// `dim H^2(K_f)_j` by the Milnor-algebra formula.
    pub fn koszul_h2_dim(&self, j: i64) -> usize {
        Self::get(&self.h2, j)
    }

    /// First `j` where `syz_j ≠ h2_j + kw_j`, if any.
    pub fn syzygy_decomposition_failure(&self) -> Option<usize> {
        (0..self.syz.len()).find(|&j| self.syz[j] != self.h2[j] + self.kw[j])
    }

    pub fn thresholds(&self) -> (usize, Option<usize>, usize, usize) {
        (self.tau, self.ct, self.st, self.mdr)
    }
}

/// A nonzero constant `(a, b, c)` with `a f_x + b f_y + c f_z = 0`.
fn constant_syzygy(grad: &[HomogPoly; 3]) -> Option<[BigRational; 3]> {
    // Rows: monomials; columns: the three partials. Small exact elimination.
    let mut monos: Vec<Monomial> = grad.iter().flat_map(|g| g.terms().map(|(m, _)| *m)).collect();
    monos.sort();
    monos.dedup();
    let mut rows: Vec<[BigRational; 3]> = monos
        .iter()
        .map(|m| [grad[0].coeff(m), grad[1].coeff(m), grad[2].coeff(m)])
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..3 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone().recip();
        for k in 0..3 {
            rows[r][k] *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in 0..3 {
                    let delta = &factor * &rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..3).find(|c| !pivots.contains(c))?;
    let mut v = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[i][free].clone();
    }
    Some(v)
}

/// `f` is invariant along `v`, so it is a binary form after a coordinate
/// change; it is reduced exactly when that binary form is squarefree.
fn classify_binary_cone(f: &HomogPoly, v: &[BigRational; 3]) -> Error {
    let d = f.degree() as usize;
    let unit = |i: usize| {
        let mut e = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        e[i] = BigRational::one();
        e
    };
    // Columns e_i, e_j, v with det ≠ 0: v_k ≠ 0 for the omitted index k.
    let k = (0..3).find(|&k| !v[k].is_zero()).expect("nonzero syzygy");
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let cols = [unit(others[0]), unit(others[1]), v.clone()];
    let t: [[BigRational; 3]; 3] = std::array::from_fn(|row| {
        std::array::from_fn(|col| cols[col][row].clone())
    });
    let g = f.substitute_linear(&t);
    // g depends on x, y only; dehomogenise at y = 1.
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (m, c) in g.terms() {
        debug_assert_eq!(m.ez, 0);
        coeffs[m.ex as usize] += c;
    }
    let h = UniPoly::new(coeffs);
    let deg_h = h.degree().unwrap_or(0);
    let squarefree = !h.is_zero()
        && d - deg_h < 2
        && h.gcd(&h.derivative()).degree() == Some(0);
    if squarefree {
        Error::CentralPencil
    } else {
        Error::NonReduced {
            detail: "f is a cone over a binary form with a repeated factor".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn smooth_sequence_quintic() {
        let s: Vec<usize> = (0..=9).map(|j| smooth_milnor_dim(5, j)).collect();
        assert_eq!(s, vec![1, 3, 6, 10, 12, 12, 10, 6, 3, 1]);
        assert_eq!(smooth_milnor_dim(5, 10), 0);
        assert_eq!(smooth_milnor_dim(5, -1), 0);
        for d in 3..12 {
            assert_eq!(smooth_milnor_dim(d, 3 * (d as i64 - 2)), 1);
        }
    }

    #[test]
    fn smooth_sequence_matches_generating_function() {
        // Multiply out (1 + t + ... + t^{d-2})^3 directly.
        for d in 3..10usize {
            let base = vec![1usize; d - 1];
            let mut acc = vec![1usize];
            for _ in 0..3 {
                let mut next = vec![0usize; acc.len() + base.len() - 1];
                for (i, a) in acc.iter().enumerate() {
                    for (j, b) in base.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                acc = next;
            }
            for (j, c) in acc.iter().enumerate() {
                assert_eq!(smooth_milnor_dim(d, j as i64), *c);
            }
        }
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(koszul_wedge_dim(5, 5), 0);
        assert_eq!(koszul_wedge_dim(5, 6), 3);
        assert_eq!(koszul_wedge_dim(5, 10), 44);
    }

    #[test]
    fn fermat_cubic_milnor_algebra() {
        let f = parse("x^3+y^3+z^3").unwrap();
        let g = f.gradient();
        let p = RankPolicy::default();
        assert_eq!(milnor_dim(&g, 3, &p), 1);
        assert_eq!(milnor_dim(&g, -1, &p), 0);
        assert_eq!(milnor_dim(&g, 4, &p), 0);
    }

    #[test]
    fn smooth_quartic_data() {
        let f = parse("x^4+y^4+z^4").unwrap();
        let h = HilbertData::compute(&f, &RankPolicy::default()).unwrap();
        assert_eq!(h.tau, 0);
        assert_eq!(h.ct, None);
        assert_eq!(h.st, 7);
        assert_eq!(h.mdr, 3);
        assert_eq!(h.syzygy_decomposition_failure(), None);
        assert!((0..=20).all(|j| h.koszul_h2_dim(j) == 0));
    }

    #[test]
    fn central_pencil_and_non_reduced() {
        let p = RankPolicy::default();
        assert_eq!(
            HilbertData::compute(&parse("x^3+y^3").unwrap(), &p),
            Err(Error::CentralPencil)
        );
        assert!(matches!(
            HilbertData::compute(&parse("x^2*y").unwrap(), &p),
            Err(Error::NonReduced { .. })
        ));
        assert!(matches!(
            HilbertData::compute(&parse("(x^2+y*z)^2*x").unwrap(), &p),
            Err(Error::NonReduced { .. })
        ));
        assert!(matches!(
            HilbertData::compute(&parse("x^2+y^2").unwrap(), &p),
            Err(Error::DegreeTooSmall { .. })
        ));
    }
}
