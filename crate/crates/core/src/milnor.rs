//! Total Milnor number `μ(C)` of a reduced plane curve.
//!
//! After a linear change of coordinates making `z = 0` avoid the singular
//! locus, `μ(C) = dim Q[x,y] / (g_x, g_y, g^2)` with `g = f(x, y, 1)`: at a
//! singular point `g^2` lies in the local Jacobian ideal (Briançon–Skoda),
//! while at a critical point off the curve `g^2` is a unit. The dimension is
//! read off a Macaulay matrix once it stabilises in the degree bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_certified, RankPolicy, SparseMatrix};
use crate::poly::{HomogPoly, Var};
use crate::univariate::UniPoly;

/// A polynomial in `x, y`, keyed by exponent pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCurve {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl AffineCurve {
    /// `p(x, y, 1)`.
    pub fn dehomogenize(p: &HomogPoly) -> AffineCurve {
        let mut terms = BTreeMap::new();
        for (m, c) in p.terms() {
            *terms.entry((m.ex, m.ey)).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        AffineCurve { terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }
}

fn affine_index(a: u32, b: u32) -> usize {
    let n = (a + b) as usize;
    n * (n + 1) / 2 + b as usize
}

/// `dim R_{≤D} - rank` of the span of `m·h` over the generators `h` and the
/// monomials `m` with `deg(m·h) ≤ D`.
fn truncated_colength(gens: &[AffineCurve], bound: u32, policy: &RankPolicy) -> usize {
    let n_cols = affine_index(0, bound) + 1;
    let mut triplets = Vec::new();
    let mut row = 0usize;
    for h in gens {
        let e = h.degree();
        if e > bound {
            continue;
        }
        for n in 0..=bound - e {
            for b in 0..=n {
                let a = n - b;
                for ((ha, hb), c) in h.terms() {
                    triplets.push((row, affine_index(a + ha, b + hb), c.clone()));
                }
                row += 1;
            }
        }
    }
    let m = SparseMatrix::from_triplets(row, n_cols, triplets).expect("indices in range");
    n_cols - rank_certified(&m, policy).rank
}

/// Binary form `p(x, y, 0)` as a univariate polynomial in `x` (with `y = 1`),
/// together with its formal degree.
fn restrict_to_line(p: &HomogPoly) -> (UniPoly, usize) {
    let e = p.degree() as usize;
    let mut c = vec![BigRational::zero(); e + 1];
    for (m, v) in p.terms() {
        if m.ez == 0 {
            c[m.ex as usize] = v.clone();
        }
    }
    (UniPoly::new(c), e)
}

/// `true` when `f_x` and `f_y` have no common zero on `z = 0`. By the Euler
/// relation this keeps every singular point of `C` off the line, and it also
/// keeps the affine critical scheme free of points at infinity.
pub fn line_is_admissible(f: &HomogPoly) -> bool {
    let (a, e) = restrict_to_line(&f.partial(Var::X));
    let (b, _) = restrict_to_line(&f.partial(Var::Y));
    // Common root at (1 : 0 : 0): both lose their top coefficient.
    let top_a = a.degree().map_or(true, |k| k < e);
    let top_b = b.degree().map_or(true, |k| k < e);
    if top_a && top_b {
        return false;
    }
    matches!(a.gcd(&b).degree(), Some(0))
}

/// Row `i` is the image of the `i`-th variable.
pub type Transform = [[i64; 3]; 3];

pub const IDENTITY: Transform = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn det3(t: &Transform) -> i64 {
    t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
        + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])
}

pub fn apply_transform(f: &HomogPoly, t: &Transform) -> HomogPoly {
    let r: [[BigRational; 3]; 3] = t.map(|row| row.map(|v| BigRational::from_integer(BigInt::from(v))));
    f.substitute_linear(&r)
}

fn random_transform(rng: &mut ChaCha8Rng) -> Transform {
    loop {
        let t: Transform = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3i64..=3)));
        if det3(&t) != 0 {
            return t;
        }
    }
}

/// Finds an invertible `T` (identity first) such that `f ∘ T` passes
/// [`line_is_admissible`].
pub fn generic_line_change(f: &HomogPoly, seed: u64, attempts: usize) -> Result<(HomogPoly, Transform)> {
    if line_is_admissible(f) {
        return Ok((f.clone(), IDENTITY));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let t = random_transform(&mut rng);
        let g = apply_transform(f, &t);
        if line_is_admissible(&g) {
            return Ok((g, t));
        }
    }
    Err(Error::RetryExhausted { attempts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorResult {
    pub mu: usize,
    /// Degree bound at which the truncated colength became stable.
    pub stable_from: usize,
    pub transform: Transform,
}

/// Number of consecutive equal colengths required.
const WINDOW: usize = 3;

pub fn total_milnor_number(f: &HomogPoly, policy: &RankPolicy, seed: u64) -> Result<MilnorResult> {
    let d = f.degree() as usize;
    let (g, t) = generic_line_change(f, seed, 64)?;
    let gens = [
        AffineCurve::dehomogenize(&g.partial(Var::X)),
        AffineCurve::dehomogenize(&g.partial(Var::Y)),
        AffineCurve::dehomogenize(&g.mul(&g)),
    ];
    let cap = 4 * d + 2;
    let start = (2 * d).saturating_sub(2);
    let mut last: Vec<usize> = Vec::new();
    for bound in start..=cap {
        let v = truncated_colength(&gens, bound as u32, policy);
        last.push(v);
        let n = last.len();
        if n >= WINDOW && last[n - WINDOW..].iter().all(|&x| x == v) {
            return Ok(MilnorResult {
                mu: v,
                stable_from: bound + 1 - WINDOW,
                transform: t,
            });
        }
    }
    let tail = last.len().saturating_sub(WINDOW);
    Err(Error::NotStabilized {
        max_degree: cap,
        last: last[tail..].to_vec(),
    })
}

/// Convenience wrapper returning only `μ`.
pub fn milnor_number(f: &HomogPoly, policy: &RankPolicy, seed: u64) -> Result<usize> {
    total_milnor_number(f, policy, seed).map(|r| r.mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn mu(s: &str) -> usize {
        milnor_number(&parse(s).unwrap(), &RankPolicy::default(), 7).unwrap()
    }

    #[test]
    fn smooth_and_nodal() {
        assert_eq!(mu("x^4+y^4+z^4"), 0);
        // Nodal cubic has one A1.
        assert_eq!(mu("y^2*z-x^3-x^2*z"), 1);
        // Cuspidal cubic has one A2.
        assert_eq!(mu("y^2*z-x^3"), 2);
        // Three general lines: three nodes.
        assert_eq!(mu("x*y*z"), 3);
    }

    #[test]
    fn line_check() {
        // z = 0 passes through the cusp (0:1:0).
        let f = parse("x^3-z^2*y").unwrap();
        assert!(!line_is_admissible(&f));
        assert!(line_is_admissible(&parse("x^3+y^3+z^3").unwrap()));
    }

    #[test]
    fn invariant_under_coordinate_change() {
        let f = parse("x^4+y^4-z^2*x*y").unwrap();
        let g = apply_transform(&f, &[[1, 1, 0], [0, 1, 2], [1, 0, 1]]);
        let p = RankPolicy::default();
        assert_eq!(milnor_number(&f, &p, 1).unwrap(), milnor_number(&g, &p, 2).unwrap());
    }
}
