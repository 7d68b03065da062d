//! Homogeneous polynomials in `x, y, z` with exact rational coefficients.
//!
//! Monomials are ordered graded-lexicographically with `x > y > z`. Inside a
//! fixed degree the position of `x^a y^b z^c` in descending order is
//! `(b+c)(b+c+1)/2 + c`, which is what [`GradedBasis::index_of`] returns; the
//! matrix builders rely on that closed form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { ex: 0, ey: 0, ez: 0 };

    pub fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Monomial { ex, ey, ez }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Monomial::new(1, 0, 0),
            Var::Y => Monomial::new(0, 1, 0),
            Var::Z => Monomial::new(0, 0, 1),
        }
    }

    pub fn degree(&self) -> u32 {
        self.ex + self.ey + self.ez
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match v {
            Var::X => self.ex,
            Var::Y => self.ey,
            Var::Z => self.ez,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.ex + other.ex, self.ey + other.ey, self.ez + other.ez)
    }

    /// `∂/∂v` of the monomial as `(exponent, monomial)`; `None` when it vanishes.
    pub fn derive(&self, v: Var) -> Option<(u32, Monomial)> {
        let e = self.exponent(v);
        if e == 0 {
            return None;
        }
        let mut m = *self;
        match v {
            Var::X => m.ex -= 1,
            Var::Y => m.ey -= 1,
            Var::Z => m.ez -= 1,
        }
        Some((e, m))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.ex.cmp(&other.ex))
            .then(self.ey.cmp(&other.ey))
            .then(self.ez.cmp(&other.ez))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.ex), ("y", self.ey), ("z", self.ez)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn name(&self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// All monomials of one degree, in descending graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    degree: i64,
    monomials: Vec<Monomial>,
}

/// `dim S_j`; zero for negative `j`.
pub fn dim_s(j: i64) -> usize {
    if j < 0 {
        0
    } else {
        let j = j as usize;
        (j + 1) * (j + 2) / 2
    }
}

impl GradedBasis {
    pub fn new(degree: i64) -> Self {
        let mut monomials = Vec::with_capacity(dim_s(degree));
        if degree >= 0 {
            let j = degree as u32;
            for ex in (0..=j).rev() {
                for ey in (0..=j - ex).rev() {
                    monomials.push(Monomial::new(ex, ey, j - ex - ey));
                }
            }
        }
        GradedBasis { degree, monomials }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Position of `m` in any graded basis of degree `m.degree()`.
    #[inline]
    pub fn index_of(m: &Monomial) -> usize {
        let n = (m.ey + m.ez) as usize;
        n * (n + 1) / 2 + m.ez as usize
    }
}

/// A homogeneous polynomial; the zero polynomial keeps whatever degree it was
/// built with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    degree: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

impl HomogPoly {
    pub fn zero(degree: u32) -> Self {
        HomogPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(coeff: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        HomogPoly {
            degree: m.degree(),
            terms,
        }
    }

    /// Builds a polynomial from terms of a common degree; zero coefficients
    /// are dropped and repeated monomials summed.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(PolyError::NotHomogeneous {
                    expected: degree,
                    found: m.degree(),
                });
            }
            *map.entry(m).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HomogPoly { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn partial(&self, v: Var) -> HomogPoly {
        let degree = self.degree.saturating_sub(1);
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derive(v) {
                out.insert(dm, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        HomogPoly { degree, terms: out }
    }

    pub fn gradient(&self) -> [HomogPoly; 3] {
        [self.partial(Var::X), self.partial(Var::Y), self.partial(Var::Z)]
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(PolyError::NotHomogeneous {
                expected: self.degree,
                found: other.degree,
            });
        }
        HomogPoly::from_terms(
            self.degree,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let degree = self.degree + other.degree;
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *map.entry(m1.mul(m2)).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        map.retain(|_, c| !c.is_zero());
        HomogPoly { degree, terms: map }
    }

    pub fn scale(&self, c: &BigRational) -> HomogPoly {
        if c.is_zero() {
            return HomogPoly::zero(self.degree);
        }
        HomogPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Coefficients in the order of `basis`.
    pub fn coeff_vector(&self, basis: &GradedBasis) -> Result<Vec<BigRational>, PolyError> {
        if !self.is_zero() && i64::from(self.degree) != basis.degree() {
            return Err(PolyError::DegreeMismatch {
                poly: self.degree,
                basis: basis.degree(),
            });
        }
        let mut v = vec![BigRational::zero(); basis.len()];
        for (m, c) in &self.terms {
            v[GradedBasis::index_of(m)] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coeff_vector(basis: &GradedBasis, v: &[BigRational]) -> Result<Self, PolyError> {
        if basis.degree() < 0 || v.len() != basis.len() {
            return Err(PolyError::DegreeMismatch {
                poly: v.len() as u32,
                basis: basis.degree(),
            });
        }
        HomogPoly::from_terms(
            basis.degree() as u32,
            basis.monomials().iter().copied().zip(v.iter().cloned()),
        )
    }

    /// Applies the linear substitution `(x, y, z) ↦ T·(x, y, z)` where row `i`
    /// of `t` gives the image of the `i`-th variable.
    pub fn substitute_linear(&self, t: &[[BigRational; 3]; 3]) -> HomogPoly {
        let images: Vec<HomogPoly> = t
            .iter()
            .map(|row| {
                HomogPoly::from_terms(
                    1,
                    Var::ALL
                        .iter()
                        .zip(row.iter())
                        .map(|(v, c)| (Monomial::var(*v), c.clone())),
                )
                .expect("linear forms are homogeneous")
            })
            .collect();
        let mut acc = HomogPoly::zero(self.degree);
        for (m, c) in &self.terms {
            let mut term = HomogPoly::monomial(c.clone(), Monomial::ONE);
            for (img, e) in images.iter().zip([m.ex, m.ey, m.ez]) {
                for _ in 0..e {
                    term = term.mul(img);
                }
            }
            term.degree = self.degree;
            acc = acc.add(&term).expect("same degree");
        }
        acc.degree = self.degree;
        acc
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, p: [&BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in p.iter().zip([m.ex, m.ey, m.ez]) {
                for _ in 0..e {
                    t *= *x;
                }
            }
            acc += t;
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let is_one = a.is_one();
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            if *m == Monomial::ONE {
                write!(f, "{coeff}")?;
            } else if is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn basis_sizes_match_enumeration() {
        for j in 0..=20i64 {
            let b = GradedBasis::new(j);
            let mut count = 0;
            for a in 0..=j {
                for c in 0..=j - a {
                    let _ = c;
                    count += 1;
                }
            }
            assert_eq!(b.len(), count);
            assert_eq!(b.len(), dim_s(j));
        }
        assert_eq!(GradedBasis::new(-1).len(), 0);
        assert_eq!(dim_s(-3), 0);
    }

    #[test]
    fn index_formula_matches_basis_order() {
        for j in 0..=12 {
            let b = GradedBasis::new(j);
            for (i, m) in b.monomials().iter().enumerate() {
                assert_eq!(GradedBasis::index_of(m), i);
            }
            let mut sorted = b.monomials().to_vec();
            sorted.sort_by(|a, b| b.cmp(a));
            assert_eq!(sorted, b.monomials());
        }
    }

    #[test]
    fn partial_examples() {
        let x3 = HomogPoly::monomial(q(1), Monomial::new(3, 0, 0));
        let d = x3.partial(Var::X);
        assert_eq!(d.degree(), 2);
        assert_eq!(d.coeff(&Monomial::new(2, 0, 0)), q(3));
        assert_eq!(d.num_terms(), 1);

        let y12 = HomogPoly::monomial(q(1), Monomial::new(0, 12, 0));
        assert!(y12.partial(Var::X).is_zero());
    }

    #[test]
    fn coeff_vector_examples() {
        let b2 = GradedBasis::new(2);
        let zero = HomogPoly::zero(2);
        assert_eq!(zero.coeff_vector(&b2).unwrap(), vec![q(0); 6]);

        let p = HomogPoly::from_terms(
            2,
            [(Monomial::new(2, 0, 0), q(1)), (Monomial::new(0, 1, 1), q(2))],
        )
        .unwrap();
        let v = p.coeff_vector(&b2).unwrap();
        let ix2 = GradedBasis::index_of(&Monomial::new(2, 0, 0));
        let iyz = GradedBasis::index_of(&Monomial::new(0, 1, 1));
        for (i, c) in v.iter().enumerate() {
            if i == ix2 {
                assert_eq!(*c, q(1));
            } else if i == iyz {
                assert_eq!(*c, q(2));
            } else {
                assert!(c.is_zero());
            }
        }
        assert_eq!(HomogPoly::from_coeff_vector(&b2, &v).unwrap(), p);

        let x = HomogPoly::monomial(q(1), Monomial::new(1, 0, 0));
        assert!(matches!(
            x.coeff_vector(&b2),
            Err(PolyError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn display_is_canonical() {
        let p = HomogPoly::from_terms(
            3,
            [
                (Monomial::new(0, 0, 3), BigRational::new(BigInt::from(-1), BigInt::from(2))),
                (Monomial::new(2, 1, 0), q(3)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3*x^2*y - 1/2*z^3");
        let m = HomogPoly::monomial(q(-1), Monomial::new(1, 0, 0));
        assert_eq!(m.to_string(), "-x");
    }

    #[test]
    fn linear_substitution_identity() {
        let f = HomogPoly::from_terms(
            3,
            [(Monomial::new(3, 0, 0), q(1)), (Monomial::new(0, 1, 2), q(-4))],
        )
        .unwrap();
        let id = [
            [q(1), q(0), q(0)],
            [q(0), q(1), q(0)],
            [q(0), q(0), q(1)],
        ];
        assert_eq!(f.substitute_linear(&id), f);
        let swap = [
            [q(0), q(1), q(0)],
            [q(1), q(0), q(0)],
            [q(0), q(0), q(1)],
        ];
        let g = f.substitute_linear(&swap);
        assert_eq!(g.coeff(&Monomial::new(0, 3, 0)), q(1));
        assert_eq!(g.coeff(&Monomial::new(1, 0, 2)), q(-4));
    }
}
