//! Block matrices assembled from multiplication-by-gradient and divergence
//! operators between graded pieces of `S = Q[x,y,z]`.
//!
//! A column block is a triple space `S^3_j` laid out as three consecutive
//! copies of the degree-`j` basis (slots for the `x`, `y`, `z` components); a
//! row block is a single `S_j`. Negative degrees give empty blocks.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::linalg::SparseMatrix;
use crate::poly::{dim_s, GradedBasis, HomogPoly, Monomial, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColBlock(usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowBlock(usize);

pub struct BlockMatrixBuilder {
    cols: Vec<(i64, usize)>,
    rows: Vec<(i64, usize)>,
    n_cols: usize,
    n_rows: usize,
    triplets: Vec<(usize, usize, BigRational)>,
}

impl Default for BlockMatrixBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl BlockMatrixBuilder {
    pub fn new() -> Self {
        BlockMatrixBuilder {
            cols: Vec::new(),
            rows: Vec::new(),
            n_cols: 0,
            n_rows: 0,
            triplets: Vec::new(),
        }
    }

    /// Appends a column block `S^3_degree`.
    pub fn triple_cols(&mut self, degree: i64) -> ColBlock {
        self.cols.push((degree, self.n_cols));
        self.n_cols += 3 * dim_s(degree);
        ColBlock(self.cols.len() - 1)
    }

    /// Appends a row block `S_degree`.
    pub fn rows(&mut self, degree: i64) -> RowBlock {
        self.rows.push((degree, self.n_rows));
        self.n_rows += dim_s(degree);
        RowBlock(self.rows.len() - 1)
    }

    /// `(a, b, c) ↦ ±(a g_0 + b g_1 + c g_2)`.
    pub fn multiply(&mut self, col: ColBlock, row: RowBlock, g: &[HomogPoly; 3], negate: bool) {
        let (cdeg, coff) = self.cols[col.0];
        let (rdeg, roff) = self.rows[row.0];
        if cdeg < 0 || rdeg < 0 {
            return;
        }
        let gdeg = g.iter().map(|p| p.degree()).max().unwrap_or(0) as i64;
        assert_eq!(cdeg + gdeg, rdeg, "multiplication block degree mismatch");
        let basis = GradedBasis::new(cdeg);
        let width = basis.len();
        for (slot, gp) in g.iter().enumerate() {
            let terms: Vec<(Monomial, BigRational)> = gp
                .terms()
                .map(|(m, c)| (*m, if negate { -c.clone() } else { c.clone() }))
                .collect();
            for (i, m) in basis.monomials().iter().enumerate() {
                let col_ix = coff + slot * width + i;
                for (t, c) in &terms {
                    let r = roff + GradedBasis::index_of(&m.mul(t));
                    self.triplets.push((r, col_ix, c.clone()));
                }
            }
        }
    }

    /// `(a, b, c) ↦ ±(a_x + b_y + c_z)`.
    pub fn divergence(&mut self, col: ColBlock, row: RowBlock, negate: bool) {
        let (cdeg, coff) = self.cols[col.0];
        let (rdeg, roff) = self.rows[row.0];
        if cdeg < 0 || rdeg < 0 {
            return;
        }
        assert_eq!(cdeg - 1, rdeg, "divergence block degree mismatch");
        let basis = GradedBasis::new(cdeg);
        let width = basis.len();
        for (slot, v) in Var::ALL.iter().enumerate() {
            for (i, m) in basis.monomials().iter().enumerate() {
                if let Some((e, dm)) = m.derive(*v) {
                    let e = i64::from(e);
                    let val = BigRational::from_integer(BigInt::from(if negate { -e } else { e }));
                    self.triplets
                        .push((roff + GradedBasis::index_of(&dm), coff + slot * width + i, val));
                }
            }
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn build(self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.n_rows, self.n_cols, self.triplets)
            .expect("block offsets stay in range")
    }
}

/// Matrix of `S^3_j → S_{j+d-1}`, `(a, b, c) ↦ a f_x + b f_y + c f_z`.
pub fn jacobian_matrix(grad: &[HomogPoly; 3], j: i64) -> SparseMatrix {
    let d1 = grad[0].degree() as i64;
    let mut b = BlockMatrixBuilder::new();
    let c = b.triple_cols(j);
    let r = b.rows(j + d1);
    b.multiply(c, r, grad, false);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_exact;
    use crate::parse::parse;

    #[test]
    fn jacobian_shapes() {
        let f = parse("x^3+y^3+z^3").unwrap();
        let g = f.gradient();
        let m = jacobian_matrix(&g, 1);
        assert_eq!((m.n_rows(), m.n_cols()), (10, 9));
        // 3x^2, 3y^2, 3z^2 times linear forms are 9 distinct monomials.
        assert_eq!(rank_exact(&m), 9);
        let empty = jacobian_matrix(&g, -1);
        assert_eq!((empty.n_rows(), empty.n_cols()), (dim_s(1), 0));
    }

    #[test]
    fn divergence_entries() {
        let mut b = BlockMatrixBuilder::new();
        let c = b.triple_cols(2);
        let r = b.rows(1);
        b.divergence(c, r, false);
        let m = b.build();
        assert_eq!((m.n_rows(), m.n_cols()), (3, 18));
        // x^2 in the x slot differentiates to 2x.
        let col = GradedBasis::index_of(&Monomial::new(2, 0, 0));
        let row = GradedBasis::index_of(&Monomial::new(1, 0, 0));
        assert!(m
            .entries()
            .iter()
            .any(|(r0, c0, v)| *r0 == row && *c0 == col && *v == BigRational::from_integer(2.into())));
    }
}
