use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous: expected degree {expected}, found a term of degree {found}")]
    NotHomogeneous { expected: u32, found: u32 },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("degree mismatch: polynomial of degree {poly} against basis of degree {basis}")]
    DegreeMismatch { poly: u32, basis: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("prime {prime} divides a denominator")]
    BadPrime { prime: u64 },
    #[error("entry ({row}, {col}) outside a {n_rows}x{n_cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
}

/// Everything that can stop the pipeline for one curve.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("curve degree {degree} is below 3")]
    DegreeTooSmall { degree: u32 },
    #[error("curve is not reduced: {detail}")]
    NonReduced { detail: String },
    #[error("curve is a union of lines through one point (a degree-0 Jacobian syzygy exists)")]
    CentralPencil,
    #[error("Milnor number computation did not stabilise up to degree {max_degree} (last values {last:?})")]
    NotStabilized { max_degree: usize, last: Vec<usize> },
    #[error("no admissible coordinate change found after {attempts} attempts")]
    RetryExhausted { attempts: usize },
    #[error("syzygy bookkeeping failed at degree {j}: syz = {syz}, h2 + wedge = {expected}")]
    InconsistentSyzygies { j: usize, syz: usize, expected: usize },
    #[error("negative dimension {value} for {what} at q = {q}; rank computation failed, retry with more primes or exact mode")]
    NegativeDimension { what: &'static str, q: usize, value: i64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
