use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::embed::AssertionLedger;
use super::{Result, SymplecticError};
use crate::groups::{FiniteGroup, InertiaStructure};
use crate::linalg::{j_std, FqMatrix, OKMatrix};
use crate::padic::RingSpec;

/// Integral matrices for every element of a group together with a Gram
/// matrix they preserve.
#[derive(Clone, Debug)]
pub struct SymplecticPiece {
    pub images: Vec<OKMatrix>,
    pub gram: OKMatrix,
}

impl SymplecticPiece {
    /// The zero-dimensional representation.
    pub fn empty(ring: &RingSpec, order: usize) -> Self {
        SymplecticPiece { images: vec![OKMatrix::zeros(ring, 0, 0); order], gram: OKMatrix::zeros(ring, 0, 0) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn direct_sum(&self, ring: &RingSpec, other: &Self) -> Self {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| OKMatrix::block_diag(ring, &[a, b]))
            .collect();
        SymplecticPiece { images, gram: OKMatrix::block_diag(ring, &[&self.gram, &other.gram]) }
    }

    /// Compose with a group homomorphism given by its values.
    pub fn pull_back(&self, map: &[u32]) -> Self {
        SymplecticPiece { images: map.iter().map(|&q| self.images[q as usize].clone()).collect(), gram: self.gram.clone() }
    }

    /// Block sum with identity action on standard hyperbolic planes.
    pub fn pad(&self, ring: &RingSpec, target: usize) -> Result<Self> {
        let current = self.dim();
        if target < current || (target - current) % 2 == 1 {
            return Err(SymplecticError::BadTarget { current, target });
        }
        if target == current {
            return Ok(self.clone());
        }
        let extra = target - current;
        let pad = SymplecticPiece {
            images: vec![OKMatrix::identity(ring, extra); self.images.len()],
            gram: j_std(ring, extra),
        };
        Ok(self.direct_sum(ring, &pad))
    }

    /// `g ↦ S⁻¹ M_g S`, Gram `Sᵀ J S`.
    pub fn change_basis(&self, ring: &RingSpec, s: &OKMatrix) -> Result<Self> {
        let sinv = s.inv(ring)?;
        Ok(SymplecticPiece {
            images: self.images.iter().map(|m| sinv.mul(ring, m).mul(ring, s)).collect(),
            gram: s.transpose().mul(ring, &self.gram).mul(ring, s),
        })
    }

    pub fn is_invariant(&self, ring: &RingSpec) -> bool {
        self.images.iter().all(|m| m.transpose().mul(ring, &self.gram).mul(ring, m).approx_eq(ring, &self.gram))
    }

    /// Elements acting trivially mod ℓ. For ℓ odd a finite-order matrix
    /// congruent to `I` mod ℓ is `I`.
    pub fn kernel(&self, ring: &RingSpec) -> Vec<u32> {
        let fq = ring.residue_field();
        let id = FqMatrix::identity(fq, self.dim());
        (0..self.images.len() as u32).filter(|&g| self.images[g as usize].reduce(ring) == id).collect()
    }

    pub fn is_injective(&self, ring: &RingSpec) -> bool {
        self.kernel(ring).len() == 1
    }
}

/// A self-contained realization of `G` inside `Sp_2d(O_K)` at the declared
/// precision.
#[derive(Clone, Debug)]
pub struct SymplecticCertificate {
    /// Ring whose precision is the certified precision.
    pub ring: RingSpec,
    pub structure: InertiaStructure,
    pub dim: usize,
    pub images: Vec<OKMatrix>,
    pub gram: OKMatrix,
    pub ledger: AssertionLedger,
}

fn rebase(from: &RingSpec, to: &RingSpec, m: &OKMatrix) -> OKMatrix {
    let p = to.precision();
    OKMatrix::from_fn(to, m.rows(), m.cols(), |i, j| from.truncate(m.get(i, j), p))
}

impl SymplecticCertificate {
    /// Package a piece, re-declaring the ring at the precision to which all
    /// matrices are certified.
    pub fn new(
        ring: &RingSpec,
        structure: InertiaStructure,
        piece: &SymplecticPiece,
        ledger: AssertionLedger,
    ) -> Result<Self> {
        let prec = piece.images.iter().map(|m| m.prec).chain([piece.gram.prec]).min().unwrap_or(ring.precision());
        let target = ring.with_precision(prec.min(ring.precision()))?;
        Ok(SymplecticCertificate {
            images: piece.images.iter().map(|m| rebase(ring, &target, m)).collect(),
            gram: rebase(ring, &target, &piece.gram),
            dim: piece.dim(),
            ring: target,
            structure,
            ledger,
        })
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.structure.group
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub precision: u32,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "certified precision: {}", self.precision)?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &str, failure: Option<String>, ok: &str) -> CheckResult {
    CheckResult { name: name.into(), passed: failure.is_none(), detail: failure.unwrap_or_else(|| ok.into()) }
}

/// Recheck every defining property of the certificate with fresh arithmetic
/// at the certificate's ring precision.
pub fn verify_certificate(cert: &SymplecticCertificate) -> VerificationReport {
    let ring = &cert.ring;
    let n = ring.precision();
    let g = cert.group();
    let d = cert.dim;
    let mut checks = Vec::new();

    let shapes_ok = cert.images.len() == g.order()
        && cert.images.iter().all(|m| m.rows() == d && m.cols() == d)
        && cert.gram.rows() == d
        && cert.gram.cols() == d;
    let dim_fail = if !shapes_ok {
        Some("matrix sizes disagree with the declared dimension or group order".to_string())
    } else if d % 2 == 1 {
        Some(format!("declared dimension {d} is odd"))
    } else {
        None
    };
    checks.push(check("dimension", dim_fail, &format!("2d = {d}, {} elements", g.order())));
    if !shapes_ok {
        return VerificationReport { precision: n, checks };
    }

    let j = &cert.gram;
    let form_fail = if !j.transpose().eq_mod(ring, &j.neg(ring), n) {
        Some("J is not antisymmetric".to_string())
    } else if (0..d).any(|i| !ring.eq_mod(j.get(i, i), &ring.zero(), n)) {
        Some("J has a nonzero diagonal entry".to_string())
    } else if !ring.is_unit(&j.det(ring)) {
        Some("det J is not a unit".to_string())
    } else {
        None
    };
    checks.push(check("alternating perfect form", form_fail, "Jᵀ = −J, zero diagonal, det J a unit"));

    let id = OKMatrix::identity(ring, d);
    let elements: Vec<u32> = g.elements().collect();
    let hom_fail = if !cert.images[g.identity() as usize].eq_mod(ring, &id, n) {
        Some("identity element does not map to I".to_string())
    } else {
        elements.par_iter().find_map_first(|&a| {
            elements
                .iter()
                .find(|&&b| {
                    let prod = cert.images[a as usize].mul(ring, &cert.images[b as usize]);
                    !prod.eq_mod(ring, &cert.images[g.mul(a, b) as usize], n)
                })
                .map(|b| format!("M({a}·{b}) ≠ M({a})·M({b})"))
        })
    };
    checks.push(check("homomorphism", hom_fail, &format!("all {} pairs", g.order() * g.order())));

    let inv_fail = g
        .elements()
        .find(|&a| {
            let m = &cert.images[a as usize];
            !m.transpose().mul(ring, j).mul(ring, m).eq_mod(ring, j, n)
        })
        .map(|a| format!("M({a}) does not preserve J"));
    checks.push(check("form invariance", inv_fail, "M_gᵀ J M_g = J for all g"));

    let fq = ring.residue_field();
    let id_bar = FqMatrix::identity(fq, d);
    let faith_fail = g
        .elements()
        .filter(|&a| a != g.identity())
        .find(|&a| cert.images[a as usize].reduce(ring) == id_bar)
        .map(|a| format!("element {a} maps to I mod ell"));
    checks.push(check("faithfulness mod ell", faith_fail, "M_g ≢ I mod ell for g ≠ 1"));

    VerificationReport { precision: n, checks }
}

/// Pad a certificate with identity-acting hyperbolic planes.
pub fn pad_embedding(cert: &SymplecticCertificate, target: usize) -> Result<SymplecticCertificate> {
    let piece = SymplecticPiece { images: cert.images.clone(), gram: cert.gram.clone() }.pad(&cert.ring, target)?;
    SymplecticCertificate::new(&cert.ring, cert.structure.clone(), &piece, cert.ledger.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, inertia_split, FamilySpec};

    fn c3_plane(ring: &RingSpec) -> SymplecticCertificate {
        // C₃ acting on Z₅² by the companion of x² + x + 1, which has det 1.
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        let c = OKMatrix::from_ints(ring, 2, 2, &[0, -1, 1, -1]);
        let piece = SymplecticPiece {
            images: (0..3).map(|k| c.pow(ring, k)).collect(),
            gram: j_std(ring, 2),
        };
        let s = inertia_split(&g, 5).unwrap();
        SymplecticCertificate::new(ring, s, &piece, AssertionLedger::default()).unwrap()
    }

    #[test]
    fn valid_certificate_passes() {
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let cert = c3_plane(&ring);
        let report = verify_certificate(&cert);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.precision, 12);
    }

    #[test]
    fn tampering_is_detected() {
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let mut cert = c3_plane(&ring);
        let x = cert.ring.add(cert.images[1].get(0, 0), &cert.ring.from_u64(5u64.pow(11)));
        cert.images[1].set(0, 0, x);
        let report = verify_certificate(&cert);
        let failed: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"homomorphism"));
    }

    #[test]
    fn central_element_to_identity_is_not_faithful() {
        let ring = RingSpec::new(5, 1, 10).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 2 }).unwrap();
        let piece = SymplecticPiece { images: vec![OKMatrix::identity(&ring, 2); 2], gram: j_std(&ring, 2) };
        let cert = SymplecticCertificate::new(&ring, inertia_split(&g, 5).unwrap(), &piece, AssertionLedger::default())
            .unwrap();
        let report = verify_certificate(&cert);
        assert_eq!(report.failed().map(|c| c.name.as_str()).collect::<Vec<_>>(), vec!["faithfulness mod ell"]);
    }

    #[test]
    fn padding() {
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let cert = c3_plane(&ring);
        let same = pad_embedding(&cert, 2).unwrap();
        assert_eq!(same.images, cert.images);
        let big = pad_embedding(&cert, 6).unwrap();
        assert_eq!(big.dim, 6);
        assert!(verify_certificate(&big).all_passed());
        assert_eq!(big.images[1].submatrix(2, 6, 2, 6), OKMatrix::identity(&big.ring, 4));
        assert!(matches!(pad_embedding(&cert, 0), Err(SymplecticError::BadTarget { current: 2, target: 0 })));
        assert!(matches!(pad_embedding(&cert, 5), Err(SymplecticError::BadTarget { .. })));
    }
}
