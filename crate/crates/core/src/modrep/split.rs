use rand::Rng;

use super::rep::{reynolds, LatticeRep};
use super::{ModrepError, Result};
use crate::groups::FiniteGroup;
use crate::linalg::poly::hensel_lift;
use crate::linalg::{kernel, FqPoly, OKMatrix, Subspace};
use crate::padic::RingSpec;

/// Split a lattice representation into `K`-simple constituents of dimension
/// `simple_dim`, by generalized eigenspaces of random elements of the
/// commutant. Pieces are returned as saturated sublattices in the
/// coordinates of `rep`.
pub fn simple_split<R: Rng + ?Sized>(
    ring: &RingSpec,
    group: &FiniteGroup,
    rep: &LatticeRep,
    simple_dim: usize,
    budget: usize,
    rng: &mut R,
) -> Result<Vec<Subspace>> {
    let n = rep.dim();
    if n <= simple_dim {
        return Ok(vec![Subspace::full(ring, n)]);
    }
    let elements: Vec<u32> = group.elements().collect();
    let fq = ring.residue_field();
    for _ in 0..budget {
        let x = reynolds(ring, group, rep, &elements, &OKMatrix::random(ring, n, n, rng));
        let cp = x.charpoly(ring);
        let factors = cp.reduce(ring).factor(fq, rng);
        if factors.len() < 2 {
            continue;
        }
        let powers: Vec<FqPoly> = factors
            .iter()
            .map(|(g, e)| (1..*e).fold(g.clone(), |acc, _| acc.mul(fq, g)))
            .collect();
        let mut pieces = Vec::new();
        for f in hensel_lift(ring, &cp, &powers) {
            let sub = Subspace::new(ring, kernel(ring, &x.eval_poly(ring, &f)))?;
            if sub.dim() == 0 {
                continue;
            }
            let inner = rep.restrict(ring, &sub);
            for piece in simple_split(ring, group, &inner, simple_dim, budget, rng)? {
                pieces.push(sub.compose(ring, &piece));
            }
        }
        if pieces.iter().map(Subspace::dim).sum::<usize>() != n {
            continue;
        }
        return Ok(pieces);
    }
    Err(ModrepError::SplitInconclusive(budget))
}
