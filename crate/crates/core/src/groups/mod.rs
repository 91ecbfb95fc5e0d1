//! Finite groups: multiplication tables, the inertia decomposition
//! `G = H ⋊ ⟨c⟩`, conjugacy classes, character tables and demo families.

mod chartable;
mod families;
mod group;
mod inertia;

use thiserror::Error;

pub use chartable::{character_table_dixon, conjugacy_classes, Character, CharacterTable, ConjugacyClasses, RootSum};
pub use families::{build_family, FamilySpec};
pub use group::{gcd, lcm, FiniteGroup};
pub use inertia::{inertia_split, InertiaStructure};

/// Default soft cap on the group order for character-table computations.
pub const MAX_TABLE_ORDER: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not associative: ({0}·{1})·{2} differs from {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error("group is not of the form H ⋊ L: {0}")]
    NotInertiaForm(String),
    #[error("{s} does not have order dividing {k} modulo {n}")]
    BadAction { n: u64, k: u64, s: u64 },
    #[error("no auxiliary prime found for exponent {0}")]
    AuxPrimeSearchFailed(u64),
    #[error("group order {order} exceeds the bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("character table verification failed: {0}")]
    TableCheckFailed(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;
