//! Monodromy eigenspaces, pole order filtration and certified Bernstein–Sato
//! roots for reduced projective plane curves, by exact linear algebra on the
//! Koszul complex of the Jacobian ideal.

pub mod blocks;
pub mod error;
pub mod hilbert;
pub mod invariants;
pub mod linalg;
pub mod milnor;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod spectral;
pub mod univariate;

pub use error::{Error, LinalgError, PolyError, Result};
pub use hilbert::HilbertData;
pub use invariants::{BSRootSet, CharPoly, InvariantReport, PoleSpectrum, Status};
pub use linalg::{kernel_dim, rank_certified, rank_exact, rank_mod_p, RankCertificate, RankPolicy, SparseMatrix};
pub use milnor::{milnor_number, total_milnor_number, MilnorResult};
pub use parse::parse;
pub use pipeline::{run, run_batch, run_poly, CurveReport, Mode, RunConfig, SCHEMA};
pub use poly::{GradedBasis, HomogPoly, Monomial, Var};
pub use spectral::{FirstCycle, SecondCycle, SpectralReport};
