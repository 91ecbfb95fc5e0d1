//! Valuation-aware elimination over `O_K`: Smith decomposition, kernels,
//! saturated subspaces and lattice sums.

use super::okmatrix::{KMatrix, OKMatrix};
use super::{LinalgError, Result};
use crate::padic::{OKElem, RingSpec};

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, computed by
/// full-pivot elimination (minimal valuation first).
#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries of `D` up to the rank.
    pub pivots: Vec<OKElem>,
    pub valuations: Vec<u32>,
    pub u: Option<OKMatrix>,
    pub v: OKMatrix,
    /// Certified precision of the input.
    pub prec: u32,
}

impl Smith {
    pub fn new(ring: &RingSpec, a: &OKMatrix, want_u: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let prec = a.prec;
        let mut w: Vec<OKElem> = a.data().to_vec();
        let mut u = if want_u { Some(OKMatrix::identity(ring, m).data().to_vec()) } else { None };
        let mut v = OKMatrix::identity(ring, n).data().to_vec();
        let mut pivots = Vec::new();
        let mut valuations = Vec::new();
        for k in 0..m.min(n) {
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for i in k..m {
                for j in k..n {
                    if let Some(val) = ring.valuation(&w[i * n + j]) {
                        if val < prec && best.is_none_or(|(bv, _, _)| val < bv) {
                            best = Some((val, i, j));
                            if val == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((val, pi, pj)) = best else { break };
            if pi != k {
                for j in 0..n {
                    w.swap(k * n + j, pi * n + j);
                }
                if let Some(u) = u.as_mut() {
                    for j in 0..m {
                        u.swap(k * m + j, pi * m + j);
                    }
                }
            }
            if pj != k {
                for i in 0..m {
                    w.swap(i * n + k, i * n + pj);
                }
                for i in 0..n {
                    v.swap(i * n + k, i * n + pj);
                }
            }
            let p = w[k * n + k];
            let unit_inv = ring.inv(&ring.div_ell_pow(&p, val)).expect("unit part of pivot");
            let (head, tail) = w.split_at_mut((k + 1) * n);
            let prow = &head[k * n..];
            for i in k + 1..m {
                let x = tail[(i - k - 1) * n + k];
                if ring.is_zero(&x) {
                    continue;
                }
                let f = ring.mul(&ring.div_ell_pow(&x, val), &unit_inv);
                let row = &mut tail[(i - k - 1) * n..(i - k) * n];
                for j in k..n {
                    row[j] = ring.sub(&row[j], &ring.mul(&f, &prow[j]));
                }
                if let Some(u) = u.as_mut() {
                    for j in 0..m {
                        let t = ring.mul(&f, &u[k * m + j]);
                        u[i * m + j] = ring.sub(&u[i * m + j], &t);
                    }
                }
            }
            for j in k + 1..n {
                let x = w[k * n + j];
                if ring.is_zero(&x) {
                    continue;
                }
                let f = ring.mul(&ring.div_ell_pow(&x, val), &unit_inv);
                w[k * n + j] = ring.zero();
                for i in 0..n {
                    let t = ring.mul(&f, &v[i * n + k]);
                    v[i * n + j] = ring.sub(&v[i * n + j], &t);
                }
            }
            pivots.push(p);
            valuations.push(val);
        }
        let vmax = valuations.iter().copied().max().unwrap_or(0);
        let out_prec = prec.saturating_sub(vmax);
        Smith {
            rows: m,
            cols: n,
            pivots,
            valuations,
            u: u.map(|d| OKMatrix::from_data(m, m, d, out_prec)),
            v: OKMatrix::from_data(n, n, v, out_prec),
            prec,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn max_valuation(&self) -> u32 {
        self.valuations.iter().copied().max().unwrap_or(0)
    }

    /// Saturated basis of the right kernel over `K`.
    pub fn kernel_basis(&self) -> OKMatrix {
        let idx: Vec<usize> = (self.rank()..self.cols).collect();
        self.v.select_columns(&idx)
    }

    /// Inverse over `K` of a square matrix of full rank.
    pub fn inverse(&self, ring: &RingSpec) -> Result<KMatrix> {
        if self.rows != self.cols || self.rank() < self.rows {
            return Err(LinalgError::NotInvertible);
        }
        let u = self.u.as_ref().expect("Smith form computed without U");
        let n = self.rows;
        let vmax = self.max_valuation();
        let mut du = OKMatrix::zeros(ring, n, n).with_prec(u.prec);
        for i in 0..n {
            let unit = ring.div_ell_pow(&self.pivots[i], self.valuations[i]);
            let d = ring.mul_ell_pow(&ring.inv(&unit)?, vmax - self.valuations[i]);
            for j in 0..n {
                du.set(i, j, ring.mul(&d, u.get(i, j)));
            }
        }
        let integral = self.v.mul(ring, &du).with_prec(self.prec.saturating_sub(vmax));
        Ok(KMatrix { shift: -(vmax as i32), integral })
    }

    /// Saturated basis of the `K`-span of the columns: the first `rank`
    /// columns of `U⁻¹`.
    pub fn image_basis(&self, ring: &RingSpec) -> Result<OKMatrix> {
        let u = self.u.as_ref().expect("Smith form computed without U");
        let uinv = u.inv(ring)?;
        let idx: Vec<usize> = (0..self.rank()).collect();
        Ok(uinv.select_columns(&idx))
    }
}

/// Saturated basis (as columns) of the kernel of `a` over `K`.
pub fn kernel(ring: &RingSpec, a: &OKMatrix) -> OKMatrix {
    Smith::new(ring, a, false).kernel_basis()
}

/// Saturated basis of the column span of `a` over `K`.
pub fn image(ring: &RingSpec, a: &OKMatrix) -> Result<OKMatrix> {
    Smith::new(ring, a, true).image_basis(ring)
}

/// A saturated sublattice `O_K^n ∩ W` given by a basis whose reduction mod ℓ
/// has full column rank, together with a left inverse for coordinates.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: OKMatrix,
    pub left_inv: OKMatrix,
}

impl Subspace {
    pub fn new(ring: &RingSpec, basis: OKMatrix) -> Result<Self> {
        let (n, k) = (basis.rows(), basis.cols());
        let s = Smith::new(ring, &basis, true);
        if s.rank() < k || s.max_valuation() > 0 {
            return Err(LinalgError::NotInvertible);
        }
        let u = s.u.as_ref().unwrap();
        let mut top = OKMatrix::zeros(ring, k, n).with_prec(u.prec);
        for i in 0..k {
            let d = ring.inv(&s.pivots[i])?;
            for j in 0..n {
                top.set(i, j, ring.mul(&d, u.get(i, j)));
            }
        }
        let left_inv = s.v.mul(ring, &top);
        Ok(Subspace { basis, left_inv })
    }

    pub fn full(ring: &RingSpec, n: usize) -> Self {
        Subspace { basis: OKMatrix::identity(ring, n), left_inv: OKMatrix::identity(ring, n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn prec(&self) -> u32 {
        self.basis.prec.min(self.left_inv.prec)
    }

    /// Coordinates of vectors (columns of `x`) lying in the subspace.
    pub fn coords(&self, ring: &RingSpec, x: &OKMatrix) -> OKMatrix {
        self.left_inv.mul(ring, x)
    }

    /// Whether every column of `x` lies in the subspace.
    pub fn contains(&self, ring: &RingSpec, x: &OKMatrix) -> bool {
        self.basis.mul(ring, &self.coords(ring, x)).approx_eq(ring, x)
    }

    /// The matrix of an endomorphism that preserves the subspace, in the
    /// subspace basis.
    pub fn restrict(&self, ring: &RingSpec, m: &OKMatrix) -> OKMatrix {
        self.left_inv.mul(ring, &m.mul(ring, &self.basis))
    }

    /// Subspace of this one given by a basis of coordinate vectors.
    pub fn compose(&self, ring: &RingSpec, coords: &Subspace) -> Self {
        Subspace {
            basis: self.basis.mul(ring, &coords.basis),
            left_inv: coords.left_inv.mul(ring, &self.left_inv),
        }
    }
}

/// A full-rank lattice in `K^n`, given by a basis (columns).
#[derive(Clone, Debug)]
pub struct Lattice {
    pub basis: KMatrix,
}

impl Lattice {
    pub fn standard(ring: &RingSpec, n: usize) -> Self {
        Lattice { basis: KMatrix::identity(ring, n) }
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, ring: &RingSpec, other: &Lattice) -> Result<bool> {
        let c = self.basis.inv(ring)?.mul(ring, &other.basis);
        Ok(c.is_integral(ring))
    }

    /// Equality by mutual containment.
    pub fn equals(&self, ring: &RingSpec, other: &Lattice) -> Result<bool> {
        Ok(self.contains(ring, other)? && other.contains(ring, self)?)
    }
}

/// Basis of the `O_K`-span of the columns of all given matrices, by column
/// elimination choosing the pivot of least valuation over the remaining block.
pub fn lattice_sum(ring: &RingSpec, mats: &[KMatrix]) -> Result<Lattice> {
    let n = mats.first().ok_or(LinalgError::ShapeMismatch("empty lattice sum".into()))?.rows();
    let s = mats.iter().filter(|m| !m.is_zero(ring)).map(|m| m.shift).min().unwrap_or(0);
    let mut cols: Vec<Vec<OKElem>> = Vec::new();
    let mut prec = ring.precision();
    for m in mats {
        if m.rows() != n {
            return Err(LinalgError::ShapeMismatch("lattice generators of different sizes".into()));
        }
        if m.is_zero(ring) {
            continue;
        }
        let scaled = m.integral.mul_ell_pow(ring, (m.shift - s) as u32);
        prec = prec.min(scaled.prec);
        for j in 0..scaled.cols() {
            cols.push(scaled.column(j));
        }
    }
    let mut done = vec![false; n];
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (j, c) in cols.iter().enumerate().skip(k) {
            for (i, x) in c.iter().enumerate() {
                if done[i] {
                    continue;
                }
                if let Some(v) = ring.valuation(x) {
                    if v < prec && best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return Err(LinalgError::PrecisionExhausted { valuation: prec, precision: prec });
        };
        cols.swap(k, pj);
        let unit_inv = ring.inv(&ring.div_ell_pow(&cols[k][pi], v))?;
        let (head, tail) = cols.split_at_mut(k + 1);
        let pc = &head[k];
        for c in tail.iter_mut() {
            let x = c[pi];
            if ring.is_zero(&x) {
                continue;
            }
            let f = ring.mul(&ring.div_ell_pow(&x, v), &unit_inv);
            for i in 0..n {
                if !done[i] {
                    c[i] = ring.sub(&c[i], &ring.mul(&f, &pc[i]));
                }
            }
        }
        done[pi] = true;
    }
    let basis = OKMatrix::from_columns(ring, n, &cols[..n]).with_prec(prec);
    Ok(Lattice { basis: KMatrix::new(ring, basis, s) })
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
    fn lattice_sum_examples() {
        let r = z5();
        let i = KMatrix::identity(&r, 2);
        let std = Lattice::standard(&r, 2);
        assert!(lattice_sum(&r, std::slice::from_ref(&i)).unwrap().equals(&r, &std).unwrap());
        let d = KMatrix::new(&r, OKMatrix::from_ints(&r, 2, 2, &[1, 0, 0, 5]), -1);
        let l = lattice_sum(&r, &[i.clone(), d.clone()]).unwrap();
        assert!(l.equals(&r, &Lattice { basis: d }).unwrap());
        let five = KMatrix::from_integral(OKMatrix::from_ints(&r, 2, 2, &[5, 0, 0, 5]));
        assert!(lattice_sum(&r, &[i, five]).unwrap().equals(&r, &std).unwrap());
    }

    #[test]
    fn lattice_sum_order_independent() {
        let r = z5();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let mats: Vec<KMatrix> = (0..3)
                .map(|k| KMatrix::new(&r, OKMatrix::random(&r, 3, 3, &mut rng), -k))
                .collect();
            let a = lattice_sum(&r, &mats).unwrap();
            let rev: Vec<KMatrix> = mats.iter().rev().cloned().collect();
            let b = lattice_sum(&r, &rev).unwrap();
            assert!(a.equals(&r, &b).unwrap());
            // Idempotence: adding the lattice itself changes nothing.
            let mut again = mats.clone();
            again.push(a.basis.clone());
            assert!(lattice_sum(&r, &again).unwrap().equals(&r, &a).unwrap());
        }
    }

    #[test]
    fn kernel_and_subspace() {
        let r = z5();
        let a = OKMatrix::from_ints(&r, 2, 3, &[1, 1, 0, 5, 5, 0]);
        let k = kernel(&r, &a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&r, &k).is_zero_mod(&r, 16));
        let s = Subspace::new(&r, k.clone()).unwrap();
        assert!(s.left_inv.mul(&r, &k).is_identity(&r));
        let img = image(&r, &OKMatrix::from_ints(&r, 3, 2, &[5, 10, 0, 0, 25, 50])).unwrap();
        assert_eq!(img.cols(), 1);
    }

    #[test]
    fn smith_inverse_of_random() {
        let r = z5();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            let a = OKMatrix::random(&r, n, n, &mut rng);
            let ka = KMatrix::from_integral(a);
            let inv = ka.inv(&r).unwrap();
            assert!(ka.mul(&r, &inv).approx_eq(&r, &KMatrix::identity(&r, n)));
        }
    }
}
