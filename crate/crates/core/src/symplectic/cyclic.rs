use rand::Rng;

use super::certificate::SymplecticPiece;
use super::induce::induce_symplectic;
use super::{Result, SymplecticError};
use crate::groups::{build_family, FamilySpec, FiniteGroup};
use crate::linalg::poly::cyclotomic_int;
use crate::linalg::{invariant_forms, j_std, random_unimodular_combination, KMatrix, OKMatrix, OKPoly, Parity};
use crate::modrep::DEFAULT_BUDGET;
use crate::padic::RingSpec;

/// `C_ℓ` acting on `O_K[x]/(Φ_ℓ)` by multiplication by `x`, with a perfect
/// invariant alternating form.
#[derive(Clone, Debug)]
pub struct CyclicBase {
    pub companion: OKMatrix,
    pub gram: OKMatrix,
}

/// `{±1} × C_n` with `(−1)^a c^b` at index `a + 2b`.
pub fn cyclic_group(n: u64) -> Result<FiniteGroup> {
    Ok(build_family(&FamilySpec::Semidirect { n: 2, lk: n, s: 1 })?)
}

/// Companion matrix of a monic polynomial: multiplication by `x` on
/// `O_K[x]/(p)` in the basis `1, x, …`.
pub fn companion(ring: &RingSpec, poly: &OKPoly) -> OKMatrix {
    let d = poly.degree();
    OKMatrix::from_fn(ring, d, d, |i, j| {
        if j == d - 1 {
            ring.neg(&poly.coeffs[i])
        } else if i == j + 1 {
            ring.one()
        } else {
            ring.zero()
        }
    })
}

pub fn cyclic_base_embedding<R: Rng + ?Sized>(ring: &RingSpec, rng: &mut R) -> Result<CyclicBase> {
    let ell = ring.ell();
    let c = companion(ring, &OKPoly::from_ints(ring, &cyclotomic_int(ell)));
    if !c.pow(ring, ell as u128).is_identity(ring) {
        return Err(SymplecticError::CheckFailed("companion of the cyclotomic polynomial has wrong order".into()));
    }
    let forms = invariant_forms(ring, &[KMatrix::from_integral(c.clone())], Parity::Alternating);
    let gram = random_unimodular_combination(ring, &forms, rng, DEFAULT_BUDGET)
        .map_err(|_| SymplecticError::NoUnimodularSolution)?;
    Ok(CyclicBase { companion: c, gram })
}

/// A faithful symplectic representation of `{±1} × C_{ℓ^m}` (see
/// [`cyclic_group`]) of dimension `max(2, φ(ℓ^m))`, with `−1 ↦ −I`.
pub fn cyclic_embedding<R: Rng + ?Sized>(ring: &RingSpec, m: u32, rng: &mut R) -> Result<SymplecticPiece> {
    let ell = ring.ell();
    let n = ell.pow(m);
    let group = cyclic_group(n)?;
    if m == 0 {
        let id = OKMatrix::identity(ring, 2);
        return Ok(SymplecticPiece { images: vec![id.clone(), id.neg(ring)], gram: j_std(ring, 2) });
    }
    let base = cyclic_base_embedding(ring, rng)?;
    let d = base.companion.rows();
    let mut powers = vec![OKMatrix::identity(ring, d)];
    for b in 1..ell as usize {
        powers.push(powers[b - 1].mul(ring, &base.companion));
    }
    // Local index a + 2b of {±1} × C_ℓ.
    let base_images: Vec<OKMatrix> = (0..2 * ell as usize)
        .map(|i| {
            let p = &powers[i / 2];
            if i % 2 == 0 {
                p.clone()
            } else {
                p.neg(ring)
            }
        })
        .collect();
    let piece = SymplecticPiece { images: base_images, gram: base.gram };
    if m == 1 {
        return Ok(piece);
    }
    let step = ell.pow(m - 1) as u32;
    let sub: Vec<u32> = (0..2 * ell as u32).map(|i| i % 2 + 2 * (i / 2) * step).collect();
    Ok(induce_symplectic(ring, &group, &sub, &piece, None)?.piece)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check(ring: &RingSpec, m: u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = cyclic_embedding(ring, m, &mut rng).unwrap();
        let n = ring.ell().pow(m);
        let g = cyclic_group(n).unwrap();
        let expect = if m == 0 { 2 } else { ((ring.ell() - 1) * n / ring.ell()) as usize };
        assert_eq!(p.dim(), expect);
        assert!(p.is_invariant(ring) && p.is_injective(ring));
        assert!(ring.is_unit(&p.gram.det(ring)));
        for a in g.generators() {
            for b in g.elements() {
                let lhs = p.images[a as usize].mul(ring, &p.images[b as usize]);
                assert!(lhs.approx_eq(ring, &p.images[g.mul(a, b) as usize]));
            }
        }
        assert!(p.images[1].approx_eq(ring, &OKMatrix::identity(ring, expect).neg(ring)));
    }

    #[test]
    fn small_cases() {
        let ring = RingSpec::new(5, 1, 10).unwrap();
        for m in 0..=2 {
            check(&ring, m);
        }
        check(&RingSpec::new(3, 1, 10).unwrap(), 2);
    }

    #[test]
    fn base_for_ell_three() {
        let ring = RingSpec::new(3, 1, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = cyclic_base_embedding(&ring, &mut rng).unwrap();
        assert_eq!(b.companion, OKMatrix::from_ints(&ring, 2, 2, &[0, -1, 1, -1]));
    }
}
