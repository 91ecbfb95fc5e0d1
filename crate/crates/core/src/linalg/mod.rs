//! Matrices over `O_K`, `K` and `F_q`; lattices; invariant bilinear forms;
//! symplectic normal forms; polynomial factorization for module splitting.

pub mod fqmatrix;
pub mod forms;
pub mod okmatrix;
pub mod poly;
pub mod solve;

use thiserror::Error;

pub use fqmatrix::FqMatrix;
pub use forms::{
    form_normalize, has_parity, invariant_forms, j_std, random_unimodular_combination, symplectic_basis, BilinearForm,
    NormalizedForm, Parity,
};
pub use okmatrix::{KMatrix, OKMatrix};
pub use poly::{poly_factor_squarefree_local, FqPoly, OKPoly};
pub use solve::{kernel, lattice_sum, Lattice, Smith, Subspace};

use crate::padic::PadicError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not invertible at the working precision")]
    NotInvertible,
    #[error("precision exhausted: pivot valuation {valuation} reaches certified precision {precision}")]
    PrecisionExhausted { valuation: u32, precision: u32 },
    #[error("form is degenerate after scaling (determinant valuation {0})")]
    DegenerateAfterScaling(u32),
    #[error("form is not perfect")]
    NotPerfect,
    #[error("alternating form on an odd-dimensional space")]
    OddDimension,
    #[error("polynomial is not squarefree modulo ell")]
    NotSquarefreeModEll,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("no unimodular element found in the solution space")]
    NoUnimodularSolution,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

pub type Result<T> = std::result::Result<T, LinalgError>;
