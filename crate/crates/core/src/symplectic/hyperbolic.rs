use super::certificate::SymplecticPiece;
use super::Result;
use crate::linalg::OKMatrix;
use crate::padic::RingSpec;

/// `[[0, I], [−I, 0]]`, so that a vector `x` of the first summand pairs with
/// a functional `φ` of the second as `φ(x)`.
pub fn hyperbolic_gram(ring: &RingSpec, n: usize) -> OKMatrix {
    let mut j = OKMatrix::zeros(ring, 2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, ring.one());
        j.set(n + i, i, ring.from_int(-1));
    }
    j
}

/// `V ⊕ V*` with `g ↦ diag(M_g, (M_gᵀ)⁻¹)` and the hyperbolic form. Every
/// image must be invertible over `O_K`.
pub fn hyperbolic_double(ring: &RingSpec, images: &[OKMatrix]) -> Result<SymplecticPiece> {
    let n = images.first().map_or(0, OKMatrix::rows);
    let images = images
        .iter()
        .map(|m| Ok(OKMatrix::block_diag(ring, &[m, &m.transpose().inv(ring)?])))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymplecticPiece { images, gram: hyperbolic_gram(ring, n) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_example() {
        let ring = RingSpec::new(5, 1, 10).unwrap();
        let m = OKMatrix::from_ints(&ring, 2, 2, &[1, 1, 0, 1]);
        let p = hyperbolic_double(&ring, std::slice::from_ref(&m)).unwrap();
        assert_eq!(p.images[0].submatrix(0, 2, 0, 2), m);
        assert_eq!(p.images[0].submatrix(2, 4, 2, 4), OKMatrix::from_ints(&ring, 2, 2, &[1, 0, -1, 1]));
        assert!(p.is_invariant(&ring));
        assert!(ring.is_unit(&p.gram.det(&ring)));
    }

    #[test]
    fn non_invertible_is_rejected() {
        let ring = RingSpec::new(5, 1, 10).unwrap();
        let m = OKMatrix::from_ints(&ring, 1, 1, &[5]);
        assert!(hyperbolic_double(&ring, &[m]).is_err());
    }
}
