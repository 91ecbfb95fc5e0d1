//! Constructions of integral symplectic representations: hyperbolic
//! doubling, induction, cyclic embeddings, extension from `H` to `G`,
//! decomposition into simple pieces, the embedding orchestrator, and the
//! certificate checker.

mod certificate;
mod cyclic;
mod decompose;
mod embed;
mod extension;
mod hyperbolic;
mod induce;

use thiserror::Error;

pub use certificate::{
    pad_embedding, verify_certificate, CheckResult, SymplecticCertificate, SymplecticPiece, VerificationReport,
};
pub use cyclic::{companion, cyclic_base_embedding, cyclic_embedding, cyclic_group, CyclicBase};
pub use decompose::{decompose_symplectic_g, DecomposedPiece, PieceKind};
pub use embed::{embed_inertia_group, AssertionLedger, EmbedOptions, LedgerRecord};
pub use extension::{extend_to_g, ExtensionTrace};
pub use hyperbolic::{hyperbolic_double, hyperbolic_gram};
pub use induce::{default_section, induce_symplectic, section_independence, InducedPiece};

use crate::groups::GroupError;
use crate::linalg::LinalgError;
use crate::modrep::ModrepError;
use crate::padic::PadicError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("conjugate representation τ_c is not isomorphic to τ (mod-ell Hom space has dimension {hom_dim})")]
    NotIsomorphicTwist { hom_dim: usize },
    #[error("multiplier a = F⁻¹AᵀFA is not a unit of E0")]
    MultiplierEscapesE0,
    #[error("A₁^#L does not lie in E0")]
    NonScalarPower,
    #[error("matrix is not integral on the lattice")]
    NotIntegral,
    #[error("kernel condition fails: element {0} and all its conjugates act trivially")]
    KernelConditionFails(u32),
    #[error("form is not perfect and alternating")]
    FormNotPerfect,
    #[error("no unimodular invariant form found")]
    NoUnimodularSolution,
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("ell = 3 requires --force")]
    ForceRequired,
    #[error("representation is not faithful: element {0} acts trivially")]
    NotFaithful(u32),
    #[error("ledger inequality violated: {0}")]
    BudgetViolation(String),
    #[error("cannot pad dimension {current} to {target}")]
    BadTarget { current: usize, target: usize },
    #[error("input form is not an invariant nondegenerate alternating form: {0}")]
    BadForm(String),
    #[error("postcondition failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Modrep(#[from] ModrepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<PadicError> for SymplecticError {
    fn from(e: PadicError) -> Self {
        SymplecticError::Linalg(LinalgError::Padic(e))
    }
}

pub type Result<T> = std::result::Result<T, SymplecticError>;
