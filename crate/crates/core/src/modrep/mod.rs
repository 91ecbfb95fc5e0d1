//! Representations over `K` and `O_K`: lattices, reduction mod ℓ, the
//! MeatAxe, isotypic projectors, splitting into simples, centralizers and
//! intertwiners.

mod centralizer;
mod isotypic;
mod meataxe;
mod rep;
mod split;

use thiserror::Error;

pub use centralizer::{centralizer_field, commutant_dim_mod_ell, intertwiner, CentralizerData};
pub use isotypic::{galois_orbits, isotypic_projectors, IsotypicProjector};
pub use meataxe::{meataxe_is_simple, MeatAxeResult};
pub use rep::{class_sums, lattice_rep, reduce_mod_ell, rep_from_input, reynolds, stabilize_lattice, LatticeRep, Representation};
pub use split::simple_split;

use crate::groups::GroupError;
use crate::linalg::LinalgError;
use crate::padic::PadicError;

/// Default retry budget for randomized searches.
pub const DEFAULT_BUDGET: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModrepError {
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("generator image is not invertible")]
    NotInvertible,
    #[error("lattice is not stable under the group")]
    NotStable,
    #[error("MeatAxe inconclusive after {0} attempts")]
    InconclusiveAfterRetries(usize),
    #[error("no splitting found for a non-simple isotypic piece after {0} attempts")]
    SplitInconclusive(usize),
    #[error("centralizer is not commutative")]
    NotCommutative,
    #[error("form adjoint does not preserve the centralizer")]
    InvolutionEscapesE,
    #[error("centralizer is not an unramified field: {0}")]
    NotUnramified(String),
    #[error("representations are not isomorphic (mod-ell Hom space has dimension {hom_dim})")]
    NotIsomorphic { hom_dim: usize },
    #[error("projector check failed: {0}")]
    ProjectorCheck(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<PadicError> for ModrepError {
    fn from(e: PadicError) -> Self {
        ModrepError::Linalg(LinalgError::Padic(e))
    }
}

pub type Result<T> = std::result::Result<T, ModrepError>;
