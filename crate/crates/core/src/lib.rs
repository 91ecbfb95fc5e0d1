//! Integral symplectic embeddings of finite inertia groups over unramified
//! ℓ-adic rings.

pub mod groups;
pub mod io;
pub mod linalg;
pub mod modrep;
pub mod padic;
pub mod scenarios;
pub mod selftest;
pub mod symplectic;
