use rand::Rng;

use super::{Result, SymplecticError};
use crate::groups::{CharacterTable, FiniteGroup};
use crate::linalg::{kernel, OKMatrix, Subspace};
use crate::modrep::{isotypic_projectors, reynolds, simple_split, LatticeRep};
use crate::padic::RingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// The form restricts to a nondegenerate form on the piece.
    Simple,
    /// The piece is isotropic; it stands for itself plus a dual partner.
    Flagged,
}

#[derive(Clone, Debug)]
pub struct DecomposedPiece {
    pub kind: PieceKind,
    /// Saturated `G`-stable sublattice in the input coordinates.
    pub sub: Subspace,
    /// Restriction of the input form (zero for flagged pieces).
    pub form: OKMatrix,
}

impl DecomposedPiece {
    /// Dimension of `V` accounted for by this piece.
    pub fn weight(&self) -> usize {
        match self.kind {
            PieceKind::Simple => self.sub.dim(),
            PieceKind::Flagged => 2 * self.sub.dim(),
        }
    }
}

fn gram(ring: &RingSpec, e: &OKMatrix, basis: &OKMatrix) -> OKMatrix {
    basis.transpose().mul(ring, e).mul(ring, basis)
}

/// Split a `G`-lattice with an invariant nondegenerate alternating form
/// into simple pieces: each carries either a nondegenerate restriction of
/// the form or is isotropic and paired with a dual partner that is split
/// off with it.
pub fn decompose_symplectic_g<R: Rng + ?Sized>(
    ring: &RingSpec,
    group: &FiniteGroup,
    table: &CharacterTable,
    rep: &LatticeRep,
    e: &OKMatrix,
    budget: usize,
    rng: &mut R,
) -> Result<Vec<DecomposedPiece>> {
    let elements: Vec<u32> = group.elements().collect();
    let mut out = Vec::new();
    let mut current = Subspace::full(ring, rep.dim());
    loop {
        let n = current.dim();
        if n == 0 {
            break;
        }
        let local = rep.restrict(ring, &current);
        let e_local = gram(ring, e, &current.basis);
        let projectors = isotypic_projectors(ring, group, table, &local)?;
        let first = projectors
            .first()
            .ok_or_else(|| SymplecticError::DecompositionFailure("no isotypic component".into()))?;
        let iso = first.image(ring)?;
        let simple_dim = first.characters.len() * first.degree as usize;
        let pieces = simple_split(ring, group, &local.restrict(ring, &iso), simple_dim, budget, rng)
            .map_err(|e| SymplecticError::DecompositionFailure(e.to_string()))?;
        let s = iso.compose(ring, &pieces[0]);
        let e_s = gram(ring, &e_local, &s.basis);
        let rest_basis = if !e_s.is_zero_mod(ring, e_s.prec) {
            out.push(DecomposedPiece { kind: PieceKind::Simple, sub: current.compose(ring, &s), form: e_s });
            kernel(ring, &s.basis.transpose().mul(ring, &e_local))
        } else {
            // S ⊆ S^⊥; a G-stable complement C of S^⊥ pairs perfectly with S.
            let perp = Subspace::new(ring, kernel(ring, &s.basis.transpose().mul(ring, &e_local)))?;
            let proj = perp.basis.mul(ring, &perp.left_inv);
            let avg = reynolds(ring, group, &local, &elements, &proj);
            let c = kernel(ring, &avg);
            if c.cols() != s.dim() {
                return Err(SymplecticError::DecompositionFailure(format!(
                    "dual partner has dimension {}, expected {}",
                    c.cols(),
                    s.dim()
                )));
            }
            out.push(DecomposedPiece {
                kind: PieceKind::Flagged,
                sub: current.compose(ring, &s),
                form: OKMatrix::zeros(ring, s.dim(), s.dim()),
            });
            kernel(ring, &s.basis.hstack(&c).transpose().mul(ring, &e_local))
        };
        let rest = Subspace::new(ring, rest_basis)?;
        if rest.dim() + out.last().map_or(0, DecomposedPiece::weight) != n {
            return Err(SymplecticError::DecompositionFailure("orthogonal complement has the wrong dimension".into()));
        }
        current = current.compose(ring, &rest);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, character_table_dixon, FamilySpec};
    use crate::linalg::j_std;
    use crate::symplectic::hyperbolic_double;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rotation_rep(ring: &RingSpec, g: &FiniteGroup) -> Vec<OKMatrix> {
        let r = OKMatrix::from_ints(ring, 2, 2, &[0, -1, 1, -1]);
        g.elements().map(|x| r.pow(ring, x as u128)).collect()
    }

    #[test]
    fn two_planes() {
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        let table = character_table_dixon(&g).unwrap();
        let rot = rotation_rep(&ring, &g);
        let rep = LatticeRep { images: rot.iter().map(|m| OKMatrix::block_diag(&ring, &[m, m])).collect() };
        let e = j_std(&ring, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pieces = decompose_symplectic_g(&ring, &g, &table, &rep, &e, 16, &mut rng).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(pieces.iter().all(|p| p.kind == PieceKind::Simple && p.sub.dim() == 2));
    }

    #[test]
    fn hyperbolic_input_is_flagged() {
        // C4 on Z5 by a primitive 4th root of unity, doubled: the line is
        // isotropic and its partner is the dual line.
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 4 }).unwrap();
        let table = character_table_dixon(&g).unwrap();
        let i = ring.sqrt(&ring.from_int(-1)).unwrap();
        let lines: Vec<OKMatrix> = g.elements().map(|x| OKMatrix::scalar(&ring, 1, &ring.pow(&i, x as u128))).collect();
        let d = hyperbolic_double(&ring, &lines).unwrap();
        let rep = LatticeRep { images: d.images };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pieces = decompose_symplectic_g(&ring, &g, &table, &rep, &d.gram, 16, &mut rng).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].kind, PieceKind::Flagged);
        assert_eq!(pieces[0].weight(), 2);
    }
}
