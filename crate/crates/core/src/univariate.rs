//! Dense univariate polynomials over `Q`, just enough for Euclidean GCDs.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn monic(mut self) -> UniPoly {
        if let Some(lc) = self.0.last().cloned() {
            if !lc.is_one() {
                for c in self.0.iter_mut() {
                    *c /= &lc;
                }
            }
        }
        self
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let factor = &r[top] / &lc;
            if !factor.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    r[top - dd + i] -= &factor * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[0, 1])), p(&[1]));
        assert_eq!(p(&[0, 0, 3]).derivative(), p(&[0, 6]));
        assert_eq!(p(&[0, 0, 0]).degree(), None);
    }
}
