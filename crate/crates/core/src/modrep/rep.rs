use std::collections::VecDeque;

use super::{ModrepError, Result};
use crate::groups::{ConjugacyClasses, FiniteGroup};
use crate::linalg::{lattice_sum, FqMatrix, KMatrix, Lattice, OKMatrix, Subspace};
use crate::padic::RingSpec;

/// A representation over `K`, with the image of every group element.
#[derive(Clone, Debug)]
pub struct Representation {
    pub dim: usize,
    pub images: Vec<KMatrix>,
}

impl Representation {
    pub fn trivial(ring: &RingSpec, group: &FiniteGroup, dim: usize) -> Self {
        Representation { dim, images: vec![KMatrix::identity(ring, dim); group.order()] }
    }

    pub fn image(&self, g: u32) -> &KMatrix {
        &self.images[g as usize]
    }

    /// `g ↦ P⁻¹ ρ(g) P`.
    pub fn conjugate(&self, ring: &RingSpec, p: &KMatrix) -> Result<Self> {
        let pinv = p.inv(ring)?;
        let images = self.images.iter().map(|m| pinv.mul(ring, m).mul(ring, p)).collect();
        Ok(Representation { dim: self.dim, images })
    }
}

/// Extend generator images to all of `G` and check the homomorphism
/// property. Checking `ρ(g·s) = ρ(g)ρ(s)` for every `g` and every generator
/// `s` suffices: by induction on word length it gives `ρ(gh) = ρ(g)ρ(h)`.
pub fn rep_from_input(ring: &RingSpec, group: &FiniteGroup, gens: &[(u32, KMatrix)]) -> Result<Representation> {
    let dim = gens.first().map_or(0, |(_, m)| m.rows());
    for (_, m) in gens {
        if m.rows() != dim || m.cols() != dim {
            return Err(ModrepError::RelationViolated("generator images of different sizes".into()));
        }
        if m.inv(ring).is_err() {
            return Err(ModrepError::NotInvertible);
        }
    }
    let n = group.order();
    let mut images: Vec<Option<KMatrix>> = vec![None; n];
    images[group.identity() as usize] = Some(KMatrix::identity(ring, dim));
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for (s, m) in gens {
            let y = group.mul(x, *s);
            if images[y as usize].is_none() {
                images[y as usize] = Some(images[x as usize].as_ref().unwrap().mul(ring, m));
                queue.push_back(y);
            }
        }
    }
    if images.iter().any(Option::is_none) {
        return Err(ModrepError::RelationViolated("listed elements do not generate the group".into()));
    }
    let images: Vec<KMatrix> = images.into_iter().map(Option::unwrap).collect();
    for x in group.elements() {
        for (s, m) in gens {
            let lhs = &images[group.mul(x, *s) as usize];
            let rhs = images[x as usize].mul(ring, m);
            if !lhs.approx_eq(ring, &rhs) {
                return Err(ModrepError::RelationViolated(format!("ρ({x}·{s}) ≠ ρ({x})ρ({s})")));
            }
        }
    }
    Ok(Representation { dim, images })
}

/// Integral matrices of a representation on a lattice, one per group element.
#[derive(Clone, Debug)]
pub struct LatticeRep {
    pub images: Vec<OKMatrix>,
}

impl LatticeRep {
    pub fn dim(&self) -> usize {
        self.images.first().map_or(0, |m| m.rows())
    }

    pub fn prec(&self) -> u32 {
        self.images.iter().map(|m| m.prec).min().unwrap_or(u32::MAX)
    }

    pub fn image(&self, g: u32) -> &OKMatrix {
        &self.images[g as usize]
    }

    /// Action on a stable saturated sublattice, in its basis.
    pub fn restrict(&self, ring: &RingSpec, sub: &Subspace) -> LatticeRep {
        LatticeRep { images: self.images.iter().map(|m| sub.restrict(ring, m)).collect() }
    }

    /// Whether the sublattice is stable under the listed elements.
    pub fn stabilizes(&self, ring: &RingSpec, sub: &Subspace, elements: &[u32]) -> bool {
        elements.iter().all(|&g| sub.contains(ring, &self.image(g).mul(ring, &sub.basis)))
    }

    pub fn to_k(&self) -> Representation {
        Representation { dim: self.dim(), images: self.images.iter().cloned().map(KMatrix::from_integral).collect() }
    }

    /// Pull back along a surjection onto the indexing group.
    pub fn pull_back(&self, proj: &[u32]) -> LatticeRep {
        LatticeRep { images: proj.iter().map(|&q| self.images[q as usize].clone()).collect() }
    }

    pub fn reduce(&self, ring: &RingSpec, elements: &[u32]) -> Vec<FqMatrix> {
        elements.iter().map(|&g| self.image(g).reduce(ring)).collect()
    }

    /// Elements acting as the identity at the working precision.
    pub fn kernel(&self, ring: &RingSpec) -> Vec<u32> {
        (0..self.images.len() as u32).filter(|&g| self.image(g).is_identity(ring)).collect()
    }
}

/// The `O_K`-span of `ρ(g)·O_K^n` over the listed elements.
pub fn stabilize_lattice(ring: &RingSpec, rep: &Representation, elements: &[u32]) -> Result<Lattice> {
    let mats: Vec<KMatrix> = elements.iter().map(|&g| rep.image(g).clone()).collect();
    let lattice = lattice_sum(ring, &mats)?;
    let binv = lattice.basis.inv(ring)?;
    for &g in elements {
        let m = binv.mul(ring, rep.image(g)).mul(ring, &lattice.basis);
        if !m.is_integral(ring) {
            return Err(ModrepError::NotStable);
        }
    }
    Ok(lattice)
}

/// Matrices of every group element in the lattice basis; fails unless all
/// are integral.
pub fn lattice_rep(ring: &RingSpec, rep: &Representation, lattice: &Lattice) -> Result<LatticeRep> {
    let binv = lattice.basis.inv(ring)?;
    let images = rep
        .images
        .iter()
        .map(|m| binv.mul(ring, m).mul(ring, &lattice.basis).to_integral(ring).ok_or(ModrepError::NotStable))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeRep { images })
}

/// Reduction mod ℓ of the listed elements in the basis of a stable lattice.
pub fn reduce_mod_ell(
    ring: &RingSpec,
    rep: &Representation,
    lattice: &Lattice,
    elements: &[u32],
) -> Result<Vec<FqMatrix>> {
    let binv = lattice.basis.inv(ring)?;
    elements
        .iter()
        .map(|&g| {
            let m = binv.mul(ring, rep.image(g)).mul(ring, &lattice.basis);
            m.to_integral(ring).map(|m| m.reduce(ring)).ok_or(ModrepError::NotStable)
        })
        .collect()
}

/// `Σ_{g ∈ C} ρ(g)` for every conjugacy class `C`.
pub fn class_sums(ring: &RingSpec, rep: &LatticeRep, classes: &ConjugacyClasses, elements: &[u32]) -> Vec<OKMatrix> {
    classes
        .classes
        .iter()
        .map(|c| {
            let mut acc = OKMatrix::zeros(ring, rep.dim(), rep.dim()).with_prec(rep.prec());
            for &g in c {
                acc = acc.add(ring, rep.image(elements[g as usize]));
            }
            acc
        })
        .collect()
}

/// `Σ_g ρ(g) X ρ(g)⁻¹` over the listed elements of `group`.
pub fn reynolds(ring: &RingSpec, group: &FiniteGroup, rep: &LatticeRep, elements: &[u32], x: &OKMatrix) -> OKMatrix {
    let mut acc = OKMatrix::zeros(ring, x.rows(), x.cols()).with_prec(x.prec.min(rep.prec()));
    for &g in elements {
        let t = rep.image(g).mul(ring, x).mul(ring, rep.image(group.inv(g)));
        acc = acc.add(ring, &t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, FamilySpec};

    fn q8_rep(ring: &RingSpec) -> (FiniteGroup, Representation) {
        let g = build_family(&FamilySpec::Quaternion8).unwrap();
        let s = ring.sqrt(&ring.from_int(-1)).unwrap();
        let i = KMatrix::from_integral(OKMatrix::from_ints(ring, 2, 2, &[0, -1, 1, 0]));
        let mut j = OKMatrix::zeros(ring, 2, 2);
        j.set(0, 0, s);
        j.set(1, 1, ring.neg(&s));
        let rep = rep_from_input(ring, &g, &[(2, i), (4, KMatrix::from_integral(j))]).unwrap();
        (g, rep)
    }

    #[test]
    fn quaternion_rep_is_valid() {
        let ring = RingSpec::new(5, 1, 16).unwrap();
        let (g, rep) = q8_rep(&ring);
        let ij = rep.image(2).mul(&ring, rep.image(4));
        let ji = rep.image(4).mul(&ring, rep.image(2));
        assert!(ij.approx_eq(&ring, &ji.neg(&ring)));
        assert!(rep.image(1).approx_eq(&ring, &KMatrix::identity(&ring, 2).neg(&ring)));
        let lat = Lattice::standard(&ring, 2);
        let red = reduce_mod_ell(&ring, &rep, &lat, &[2]).unwrap();
        let fq = ring.residue_field();
        let sq = red[0].mul(fq, &red[0]);
        assert_eq!(sq, FqMatrix::identity(fq, 2).scale(fq, &fq.from_int(-1)));
        assert_eq!(g.order(), rep.images.len());
    }

    #[test]
    fn relation_violation_detected() {
        let ring = RingSpec::new(5, 1, 8).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        // An element of order 2 cannot be the image of a generator of C₃.
        let m = KMatrix::from_integral(OKMatrix::from_ints(&ring, 1, 1, &[-1]));
        assert!(matches!(rep_from_input(&ring, &g, &[(1, m)]), Err(ModrepError::RelationViolated(_))));
    }

    #[test]
    fn lattice_restabilized_after_conjugation() {
        let ring = RingSpec::new(5, 1, 16).unwrap();
        let (g, rep) = q8_rep(&ring);
        let lat = stabilize_lattice(&ring, &rep, &g.elements().collect::<Vec<_>>()).unwrap();
        assert!(lat.equals(&ring, &Lattice::standard(&ring, 2)).unwrap());
        let mut p = OKMatrix::identity(&ring, 2);
        p.set(0, 0, ring.from_int(5));
        let conj = rep.conjugate(&ring, &KMatrix::new(&ring, p, -1)).unwrap();
        assert!(lattice_rep(&ring, &conj, &Lattice::standard(&ring, 2)).is_err());
        let all: Vec<u32> = g.elements().collect();
        let lat = stabilize_lattice(&ring, &conj, &all).unwrap();
        let lr = lattice_rep(&ring, &conj, &lat).unwrap();
        assert_eq!(lr.images.len(), 8);
        let trivial = Representation::trivial(&ring, &g, 3);
        let lat = stabilize_lattice(&ring, &trivial, &[0]).unwrap();
        assert!(lat.equals(&ring, &Lattice::standard(&ring, 3)).unwrap());
    }
}
