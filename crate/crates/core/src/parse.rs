//! Recursive-descent parser for polynomial expressions in `x, y, z`.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom (('^' | '**') uint)?
//! atom   := number | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//! Division is only allowed by a nonzero constant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::PolyError;
use crate::poly::{HomogPoly, Monomial};

/// A not necessarily homogeneous polynomial, used while parsing.
#[derive(Clone, Debug, Default)]
struct Expr(BTreeMap<Monomial, BigRational>);

impl Expr {
    fn constant(c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::ONE, c);
        }
        Expr(m)
    }

    fn monomial(m: Monomial) -> Self {
        let mut map = BTreeMap::new();
        map.insert(m, BigRational::one());
        Expr(map)
    }

    fn add(mut self, other: Expr, sign: bool) -> Self {
        for (m, c) in other.0 {
            let e = self.0.entry(m).or_insert_with(BigRational::zero);
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
        }
        self.0.retain(|_, c| !c.is_zero());
        self
    }

    fn mul(&self, other: &Expr) -> Self {
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                *out.entry(m1.mul(m2)).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Expr(out)
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Expr::constant(BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(t, true);
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.add(t, false);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') if self.src.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !c.is_zero() => {
                            acc = acc.mul(&Expr::constant(c.recip()));
                        }
                        Some(_) => {
                            self.pos = at;
                            return self.err("division by zero");
                        }
                        None => {
                            self.pos = at;
                            return self.err("division by a non-constant");
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, PolyError> {
        if self.eat(b'-') {
            let e = self.unary()?;
            return Ok(Expr::default().add(e, false));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, PolyError> {
        let base = self.atom()?;
        let is_pow = if self.eat(b'^') {
            true
        } else if self.peek() == Some(b'*') && self.src.get(self.pos + 1) == Some(&b'*') {
            self.pos += 2;
            true
        } else {
            false
        };
        if !is_pow {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a non-negative integer exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<u32>() {
            Ok(e) if e <= 1000 => Ok(base.pow(e)),
            _ => {
                self.pos = start;
                self.err("exponent too large")
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::monomial(Monomial::new(1, 0, 0)))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Expr::monomial(Monomial::new(0, 1, 0)))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Expr::monomial(Monomial::new(0, 0, 1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let n: BigInt = text.parse().expect("digits parse as an integer");
                Ok(Expr::constant(BigRational::from_integer(n)))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses and expands `text` into a homogeneous polynomial.
pub fn parse(text: &str) -> Result<HomogPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let mut degrees = e.0.keys().map(|m| m.degree());
    let degree = match degrees.next() {
        None => return Err(PolyError::ZeroPolynomial),
        Some(d) => d,
    };
    if let Some(found) = degrees.find(|&k| k != degree) {
        return Err(PolyError::NotHomogeneous {
            expected: degree.min(found),
            found: degree.max(found),
        });
    }
    HomogPoly::from_terms(degree, e.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn fermat_cubic() {
        let f = parse("x^3+y^3+z^3").unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.num_terms(), 3);
        assert!(f.terms().all(|(_, c)| *c == q(1)));
    }

    #[test]
    fn torus_curve_expands() {
        let f = parse("(x^2+y^2)^4+(y^4+z^4)^2").unwrap();
        assert_eq!(f.degree(), 8);
        assert_eq!(f.coeff(&Monomial::new(4, 4, 0)), q(6));
        assert_eq!(f.coeff(&Monomial::new(0, 8, 0)), q(2));
        assert_eq!(f.coeff(&Monomial::new(0, 4, 4)), q(2));
        assert_eq!(f.coeff(&Monomial::new(0, 0, 8)), q(1));
    }

    #[test]
    fn rejects_mixed_degrees() {
        assert!(matches!(
            parse("x^2+y^3"),
            Err(PolyError::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn rejects_zero_and_garbage() {
        assert_eq!(parse("x-x"), Err(PolyError::ZeroPolynomial));
        assert!(matches!(parse("x+*y"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("(x+y"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("x/y"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("x/0"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("x y"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("w^2"), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn rationals_and_powers() {
        let f = parse("x**2/2 - 3/4*y*z").unwrap();
        assert_eq!(f.to_string(), "1/2*x^2 - 3/4*y*z");
        let g = parse("-(x - y)^2").unwrap();
        assert_eq!(g.to_string(), "-x^2 + 2*x*y - y^2");
    }

    #[test]
    fn reserialization_is_idempotent() {
        for s in [
            "(x^2+y^2)^4+(y^4+z^4)^2",
            "x^4*y^4*z^4+x^12+y^12",
            "x^4*y^2+y^6-3*x*y^4*z+3*x^2*y^2*z^2-x^3*z^3",
            "x^3/7 - 2/3*y^2*z",
        ] {
            let f = parse(s).unwrap();
            let g = parse(&f.to_string()).unwrap();
            assert_eq!(f, g);
            assert_eq!(f.to_string(), g.to_string());
        }
    }
}
