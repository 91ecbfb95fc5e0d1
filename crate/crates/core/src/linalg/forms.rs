//! Bilinear forms: invariant-form spaces, rescaling to perfect forms on a
//! lattice, and symplectic bases.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::okmatrix::{KMatrix, OKMatrix};
use super::solve::kernel;
use super::{LinalgError, Result};
use crate::padic::RingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Alternating,
    Symmetric,
}

impl Parity {
    fn sign(self) -> i64 {
        match self {
            Parity::Alternating => -1,
            Parity::Symmetric => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BilinearForm {
    pub gram: KMatrix,
    pub parity: Parity,
    pub perfect: bool,
}

impl BilinearForm {
    pub fn new(ring: &RingSpec, gram: KMatrix, parity: Parity) -> Result<Self> {
        if !gram.integral.is_square() {
            return Err(LinalgError::ShapeMismatch("Gram matrix must be square".into()));
        }
        if !has_parity(ring, &gram.integral, parity) {
            return Err(LinalgError::ShapeMismatch(format!("Gram matrix is not {parity:?}")));
        }
        let perfect = gram.shift == 0 && ring.is_unit(&gram.integral.det(ring));
        Ok(BilinearForm { gram, parity, perfect })
    }
}

/// Whether `g` is alternating (skew with zero diagonal) or symmetric.
pub fn has_parity(ring: &RingSpec, g: &OKMatrix, parity: Parity) -> bool {
    let n = g.rows();
    let p = g.prec;
    (0..n).all(|i| {
        (0..n).all(|j| {
            let t = *g.get(j, i);
            let expect = match parity {
                Parity::Alternating => ring.neg(&t),
                Parity::Symmetric => t,
            };
            ring.eq_mod(g.get(i, j), &expect, p)
        })
    }) && (parity == Parity::Symmetric || (0..n).all(|i| ring.eq_mod(g.get(i, i), &ring.zero(), p)))
}

/// The standard symplectic Gram matrix: blocks `[[0, 1], [−1, 0]]`.
pub fn j_std(ring: &RingSpec, n: usize) -> OKMatrix {
    assert!(n.is_multiple_of(2));
    let mut j = OKMatrix::zeros(ring, n, n);
    for k in (0..n).step_by(2) {
        j.set(k, k + 1, ring.one());
        j.set(k + 1, k, ring.from_int(-1));
    }
    j
}

/// Saturated basis of the space of forms `F` with `F^T = ±F` and
/// `M^T F M = F` for every given matrix.
pub fn invariant_forms(ring: &RingSpec, gens: &[KMatrix], parity: Parity) -> Vec<OKMatrix> {
    let Some(first) = gens.first() else { return Vec::new() };
    let n = first.rows();
    let sign = parity.sign();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| parity == Parity::Symmetric || i < j)
        .collect();
    let rows_per_gen = &unknowns;
    let m = rows_per_gen.len() * gens.len();
    let mut sys = OKMatrix::zeros(ring, m, unknowns.len());
    let mut prec = ring.precision();
    for (g, gen) in gens.iter().enumerate() {
        let mp = &gen.integral;
        prec = prec.min(mp.prec);
        // ℓ^(2s) M'^T F M' − F, scaled to be integral.
        let (left, right) = if gen.shift >= 0 { (2 * gen.shift as u32, 0) } else { (0, (-2 * gen.shift) as u32) };
        for (col, &(i, j)) in unknowns.iter().enumerate() {
            for (r, &(a, b)) in rows_per_gen.iter().enumerate() {
                let mut v = ring.mul(mp.get(i, a), mp.get(j, b));
                if i != j {
                    let t = ring.mul(mp.get(j, a), mp.get(i, b));
                    v = ring.add(&v, &ring.mul_int(&t, sign));
                }
                v = ring.mul_ell_pow(&v, left);
                if (a, b) == (i, j) {
                    v = ring.sub(&v, &ring.mul_ell_pow(&ring.one(), right));
                }
                sys.set(g * rows_per_gen.len() + r, col, v);
            }
        }
    }
    let sys = sys.with_prec(prec);
    let k = kernel(ring, &sys);
    (0..k.cols())
        .map(|c| {
            let mut f = OKMatrix::zeros(ring, n, n);
            for (idx, &(i, j)) in unknowns.iter().enumerate() {
                let x = *k.get(idx, c);
                f.set(i, j, x);
                if i != j {
                    f.set(j, i, ring.mul_int(&x, sign));
                }
            }
            f.with_prec(k.prec)
        })
        .collect()
}

/// Random `O_K`-combination of forms with unit determinant, if one is found
/// within the retry budget.
pub fn random_unimodular_combination<R: Rng + ?Sized>(
    ring: &RingSpec,
    forms: &[OKMatrix],
    rng: &mut R,
    budget: usize,
) -> Result<OKMatrix> {
    let Some(first) = forms.first() else { return Err(LinalgError::NoUnimodularSolution) };
    for _ in 0..budget {
        let mut f = OKMatrix::zeros(ring, first.rows(), first.cols()).with_prec(first.prec);
        for g in forms {
            f = f.add(ring, &g.scale(ring, &ring.random(rng)));
        }
        if ring.is_unit(&f.det(ring)) {
            return Ok(f);
        }
    }
    Err(LinalgError::NoUnimodularSolution)
}

/// Result of rescaling a form on a lattice so that it takes values exactly in `O_K`.
#[derive(Clone, Debug)]
pub struct NormalizedForm {
    /// The form on the lattice is `ℓ^i · F`.
    pub i: i32,
    pub gram: OKMatrix,
}

/// Gram matrix of `ℓ^i F` in the basis `t`, with `i` chosen so that the
/// values generate `O_K`; fails unless the result is perfect.
pub fn form_normalize(ring: &RingSpec, f: &KMatrix, t: &KMatrix) -> Result<NormalizedForm> {
    let g = t.transpose().mul(ring, f).mul(ring, t);
    if g.is_zero(ring) {
        return Err(LinalgError::DegenerateAfterScaling(g.integral.prec));
    }
    let det = g.integral.det(ring);
    match ring.valuation(&det) {
        Some(0) => Ok(NormalizedForm { i: -g.shift, gram: g.integral }),
        Some(v) => Err(LinalgError::DegenerateAfterScaling(v)),
        None => Err(LinalgError::DegenerateAfterScaling(ring.precision())),
    }
}

/// `S` with `S^T J S = J_std`, by symplectic Gram–Schmidt with unit pivots.
pub fn symplectic_basis(ring: &RingSpec, j: &OKMatrix) -> Result<OKMatrix> {
    let n = j.rows();
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension);
    }
    if !has_parity(ring, j, Parity::Alternating) || !ring.is_unit(&j.det(ring)) {
        return Err(LinalgError::NotPerfect);
    }
    let pair = |x: &[crate::padic::OKElem], y: &[crate::padic::OKElem]| {
        let jy = j.mul_vec(ring, y);
        x.iter().zip(&jy).fold(ring.zero(), |acc, (a, b)| ring.mul_add(&acc, a, b))
    };
    let mut vecs: Vec<Vec<_>> = (0..n)
        .map(|k| (0..n).map(|i| if i == k { ring.one() } else { ring.zero() }).collect())
        .collect();
    let mut out: Vec<Vec<_>> = Vec::with_capacity(n);
    while !vecs.is_empty() {
        let x = vecs.remove(0);
        let pos = vecs
            .iter()
            .position(|y| ring.is_unit(&pair(&x, y)))
            .ok_or(LinalgError::NotPerfect)?;
        let mut y = vecs.remove(pos);
        let s = ring.inv(&pair(&x, &y))?;
        if s != ring.one() {
            y = y.iter().map(|c| ring.mul(c, &s)).collect();
        }
        for z in vecs.iter_mut() {
            let zy = pair(z, &y);
            let zx = pair(z, &x);
            for i in 0..n {
                let t = ring.sub(&ring.mul(&zx, &y[i]), &ring.mul(&zy, &x[i]));
                z[i] = ring.add(&z[i], &t);
            }
        }
        out.push(x);
        out.push(y);
    }
    Ok(OKMatrix::from_columns(ring, n, &out).with_prec(j.prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z5() -> RingSpec {
        RingSpec::new(5, 1, 16).unwrap()
    }

    #[test]
    fn invariant_form_examples() {
        let r = z5();
        let triv = [KMatrix::identity(&r, 2)];
        let f = invariant_forms(&r, &triv, Parity::Alternating);
        assert_eq!(f.len(), 1);
        assert!(r.is_unit(f[0].get(0, 1)));
        let c3 = KMatrix::from_integral(OKMatrix::from_ints(&r, 2, 2, &[0, -1, 1, -1]));
        let f = invariant_forms(&r, std::slice::from_ref(&c3), Parity::Alternating);
        assert_eq!(f.len(), 1);
        let m = &c3.integral;
        assert!(m.transpose().mul(&r, &f[0]).mul(&r, m).approx_eq(&r, &f[0]));
        let neg = [KMatrix::from_integral(OKMatrix::from_ints(&r, 1, 1, &[-1]))];
        let f = invariant_forms(&r, &neg, Parity::Symmetric);
        assert_eq!(f.len(), 1);
        assert!(r.is_unit(f[0].get(0, 0)));
    }

    #[test]
    fn invariant_forms_nonintegral_generator() {
        let r = z5();
        // diag(1/5, 5) preserves the hyperbolic symmetric form and the standard
        // alternating one.
        let g = KMatrix::new(&r, OKMatrix::from_ints(&r, 2, 2, &[1, 0, 0, 25]), -1);
        let alt = invariant_forms(&r, std::slice::from_ref(&g), Parity::Alternating);
        assert_eq!(alt.len(), 1);
        let sym = invariant_forms(&r, &[g], Parity::Symmetric);
        assert_eq!(sym.len(), 1);
        assert!(r.is_zero(sym[0].get(0, 0)) && r.is_unit(sym[0].get(0, 1)));
    }

    #[test]
    fn normalize_examples() {
        let r = z5();
        let i2 = KMatrix::identity(&r, 2);
        let j = KMatrix::from_integral(j_std(&r, 2));
        let five_j = KMatrix::from_integral(j_std(&r, 2).mul_int(&r, 5)).normalized(&r);
        let n = form_normalize(&r, &five_j, &i2).unwrap();
        assert_eq!(n.i, -1);
        assert!(n.gram.approx_eq(&r, &j_std(&r, 2)));
        assert_eq!(form_normalize(&r, &j, &i2).unwrap().i, 0);
        let mut g = OKMatrix::zeros(&r, 4, 4);
        g.set(0, 1, r.one());
        g.set(1, 0, r.from_int(-1));
        g.set(2, 3, r.from_int(5));
        g.set(3, 2, r.from_int(-5));
        let e = form_normalize(&r, &KMatrix::from_integral(g), &KMatrix::identity(&r, 4));
        assert_eq!(e.unwrap_err(), LinalgError::DegenerateAfterScaling(2));
    }

    #[test]
    fn symplectic_basis_examples() {
        let r = z5();
        let js = j_std(&r, 4);
        assert_eq!(symplectic_basis(&r, &js).unwrap(), OKMatrix::identity(&r, 4));
        let two = OKMatrix::from_ints(&r, 2, 2, &[0, 2, -2, 0]);
        let s = symplectic_basis(&r, &two).unwrap();
        assert_eq!(s.transpose().mul(&r, &two).mul(&r, &s), j_std(&r, 2));
        let bad = OKMatrix::from_ints(&r, 2, 2, &[0, 5, -5, 0]);
        assert_eq!(symplectic_basis(&r, &bad), Err(LinalgError::NotPerfect));
    }

    #[test]
    fn symplectic_basis_random() {
        let r = RingSpec::new(7, 2, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [2, 4, 6, 8] {
            let p = OKMatrix::random_unimodular(&r, n, &mut rng);
            let j = p.transpose().mul(&r, &j_std(&r, n)).mul(&r, &p);
            let s = symplectic_basis(&r, &j).unwrap();
            assert!(s.transpose().mul(&r, &j).mul(&r, &s).approx_eq(&r, &j_std(&r, n)));
            assert!(r.is_unit(&s.det(&r)));
        }
    }
}
