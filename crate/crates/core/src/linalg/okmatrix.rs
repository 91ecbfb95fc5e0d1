//! Dense matrices over `O_K/ℓ^N` with a certified precision, and matrices
//! over `K` stored as `ℓ^shift · integral`.

use rand::Rng;

use super::fqmatrix::FqMatrix;
use super::poly::OKPoly;
use super::{LinalgError, Result};
use crate::padic::{OKElem, RingSpec};

/// Integral matrix whose entries are correct modulo `ℓ^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OKMatrix {
    rows: usize,
    cols: usize,
    data: Vec<OKElem>,
    /// Number of ℓ-adic digits guaranteed correct.
    pub prec: u32,
}

impl OKMatrix {
    pub fn zeros(ring: &RingSpec, rows: usize, cols: usize) -> Self {
        OKMatrix { rows, cols, data: vec![ring.zero(); rows * cols], prec: ring.precision() }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn scalar(ring: &RingSpec, n: usize, x: &OKElem) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = *x;
        }
        m
    }

    pub fn from_fn(ring: &RingSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> OKElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        OKMatrix { rows, cols, data, prec: ring.precision() }
    }

    /// Row-major integer entries.
    pub fn from_ints(ring: &RingSpec, rows: usize, cols: usize, v: &[i64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(ring, rows, cols, |i, j| ring.from_int(v[i * cols + j]))
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<OKElem>, prec: u32) -> Self {
        assert_eq!(data.len(), rows * cols);
        OKMatrix { rows, cols, data, prec }
    }

    pub fn random<R: Rng + ?Sized>(ring: &RingSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(ring, rows, cols, |_, _| ring.random(rng))
    }

    /// Random matrix with unit determinant.
    pub fn random_unimodular<R: Rng + ?Sized>(ring: &RingSpec, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(ring, n, n, rng);
            if m.reduce(ring).rank(ring.residue_field()) == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[OKElem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &OKElem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: OKElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, ring: &RingSpec, other: &Self) -> Self {
        self.check_same_shape(other).expect("add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect();
        OKMatrix { rows: self.rows, cols: self.cols, data, prec: self.prec.min(other.prec) }
    }

    pub fn sub(&self, ring: &RingSpec, other: &Self) -> Self {
        self.check_same_shape(other).expect("sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect();
        OKMatrix { rows: self.rows, cols: self.cols, data, prec: self.prec.min(other.prec) }
    }

    pub fn neg(&self, ring: &RingSpec) -> Self {
        let data = self.data.iter().map(|a| ring.neg(a)).collect();
        OKMatrix { data, ..*self }
    }

    pub fn scale(&self, ring: &RingSpec, k: &OKElem) -> Self {
        let data = self.data.iter().map(|a| ring.mul(a, k)).collect();
        OKMatrix { data, ..*self }
    }

    pub fn mul_int(&self, ring: &RingSpec, k: i64) -> Self {
        let data = self.data.iter().map(|a| ring.mul_int(a, k)).collect();
        OKMatrix { data, ..*self }
    }

    /// Multiply by `ℓ^k`; the result is correct to `prec + k` digits.
    pub fn mul_ell_pow(&self, ring: &RingSpec, k: u32) -> Self {
        let data = self.data.iter().map(|a| ring.mul_ell_pow(a, k)).collect();
        OKMatrix { data, prec: (self.prec + k).min(ring.precision()), ..*self }
    }

    /// Exact division by `ℓ^k` of a matrix whose entries are all divisible by it.
    pub fn div_ell_pow(&self, ring: &RingSpec, k: u32) -> Self {
        let data = self.data.iter().map(|a| ring.div_ell_pow(a, k)).collect();
        OKMatrix { data, prec: self.prec.saturating_sub(k), ..*self }
    }

    pub fn try_mul(&self, ring: &RingSpec, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "product {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut data = vec![ring.zero(); n * p];
        for i in 0..n {
            let out = &mut data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = &self.data[i * m + k];
                if ring.is_zero(a) {
                    continue;
                }
                let row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out.iter_mut().zip(row) {
                    *o = ring.mul_add(o, a, b);
                }
            }
        }
        Ok(OKMatrix { rows: n, cols: p, data, prec: self.prec.min(other.prec) })
    }

    pub fn mul(&self, ring: &RingSpec, other: &Self) -> Self {
        self.try_mul(ring, other).expect("matrix product shape")
    }

    pub fn mul_vec(&self, ring: &RingSpec, v: &[OKElem]) -> Vec<OKElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(ring.zero(), |acc, (a, b)| ring.mul_add(&acc, a, b))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j]);
            }
        }
        OKMatrix { rows: self.cols, cols: self.rows, data, prec: self.prec }
    }

    pub fn trace(&self, ring: &RingSpec) -> OKElem {
        (0..self.rows.min(self.cols)).fold(ring.zero(), |acc, i| ring.add(&acc, self.get(i, i)))
    }

    pub fn pow(&self, ring: &RingSpec, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(ring, self.rows).with_prec(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Entrywise congruence modulo `ℓ^k`.
    pub fn eq_mod(&self, ring: &RingSpec, other: &Self, k: u32) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| ring.eq_mod(a, b, k))
    }

    /// Equality at the smaller of the two certified precisions.
    pub fn approx_eq(&self, ring: &RingSpec, other: &Self) -> bool {
        self.eq_mod(ring, other, self.prec.min(other.prec))
    }

    pub fn is_zero_mod(&self, ring: &RingSpec, k: u32) -> bool {
        let pk = k.min(ring.precision());
        self.data.iter().all(|a| ring.eq_mod(a, &ring.zero(), pk))
    }

    pub fn is_identity(&self, ring: &RingSpec) -> bool {
        self.is_square() && self.approx_eq(ring, &Self::identity(ring, self.rows))
    }

    /// Smallest entry valuation; `None` for the zero matrix.
    pub fn min_valuation(&self, ring: &RingSpec) -> Option<u32> {
        self.data.iter().filter_map(|a| ring.valuation(a)).min()
    }

    /// Entries reduced modulo `ℓ^prec`, so that equal matrices at the
    /// certified precision have equal representations.
    pub fn truncated(&self, ring: &RingSpec) -> Self {
        let data = self.data.iter().map(|a| ring.truncate(a, self.prec)).collect();
        OKMatrix { data, ..*self }
    }

    pub fn reduce(&self, ring: &RingSpec) -> FqMatrix {
        FqMatrix::from_data(self.rows, self.cols, self.data.iter().map(|a| ring.residue(a)).collect())
    }

    pub fn lift(ring: &RingSpec, m: &FqMatrix) -> Self {
        let data = m.data().iter().map(|a| ring.lift(a)).collect();
        OKMatrix { rows: m.rows(), cols: m.cols(), data, prec: ring.precision() }
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        OKMatrix { rows: r1 - r0, cols: c1 - c0, data, prec: self.prec }
    }

    pub fn column(&self, j: usize) -> Vec<OKElem> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn row(&self, i: usize) -> &[OKElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.data[i * self.cols + j]);
            }
        }
        OKMatrix { rows: self.rows, cols: idx.len(), data, prec: self.prec }
    }

    pub fn from_columns(ring: &RingSpec, rows: usize, cols: &[Vec<OKElem>]) -> Self {
        Self::from_fn(ring, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        OKMatrix { rows: self.rows, cols, data, prec: self.prec.min(other.prec) }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        OKMatrix { rows: self.rows + other.rows, cols: self.cols, data, prec: self.prec.min(other.prec) }
    }

    pub fn block_diag(ring: &RingSpec, blocks: &[&OKMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, *b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m.prec = blocks.iter().map(|b| b.prec).min().unwrap_or(ring.precision());
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, ring: &RingSpec, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let m = Self::from_fn(ring, r, c, |i, j| {
            ring.mul(self.get(i / other.rows, j / other.cols), other.get(i % other.rows, j % other.cols))
        });
        m.with_prec(self.prec.min(other.prec))
    }

    /// Determinant by full-pivot elimination over the valuation ring.
    pub fn det(&self, ring: &RingSpec) -> OKElem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ring.one();
        for k in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(v) = ring.valuation(&a[i * n + j]) {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else {
                return ring.zero();
            };
            if pi != k {
                for j in 0..n {
                    a.swap(k * n + j, pi * n + j);
                }
                det = ring.neg(&det);
            }
            if pj != k {
                for i in 0..n {
                    a.swap(i * n + k, i * n + pj);
                }
                det = ring.neg(&det);
            }
            let p = a[k * n + k];
            det = ring.mul(&det, &p);
            let unit_inv = ring.inv(&ring.div_ell_pow(&p, v)).expect("unit part");
            for i in k + 1..n {
                let x = a[i * n + k];
                if ring.is_zero(&x) {
                    continue;
                }
                let f = ring.mul(&ring.div_ell_pow(&x, v), &unit_inv);
                for j in k..n {
                    let t = ring.mul(&f, &a[k * n + j]);
                    a[i * n + j] = ring.sub(&a[i * n + j], &t);
                }
            }
        }
        det
    }

    /// Inverse of a matrix with unit determinant, by Gauss–Jordan with unit
    /// pivots; loses no precision.
    pub fn inv(&self, ring: &RingSpec) -> Result<Self> {
        if !self.is_square() {
            return Err(LinalgError::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = Self::identity(ring, n).data;
        for k in 0..n {
            let pivot = (k..n).find(|&i| ring.is_unit(&a[i * n + k])).ok_or(LinalgError::NotInvertible)?;
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                    b.swap(k * n + j, pivot * n + j);
                }
            }
            let inv = ring.inv(&a[k * n + k])?;
            for j in 0..n {
                a[k * n + j] = ring.mul(&a[k * n + j], &inv);
                b[k * n + j] = ring.mul(&b[k * n + j], &inv);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k];
                if ring.is_zero(&f) {
                    continue;
                }
                for j in 0..n {
                    let t = ring.mul(&f, &a[k * n + j]);
                    a[i * n + j] = ring.sub(&a[i * n + j], &t);
                    let t = ring.mul(&f, &b[k * n + j]);
                    b[i * n + j] = ring.sub(&b[i * n + j], &t);
                }
            }
        }
        Ok(OKMatrix { rows: n, cols: n, data: b, prec: self.prec })
    }

    /// Characteristic polynomial `det(xI − A)` by the division-free
    /// Samuelson–Berkowitz recursion; monic, low degree first.
    pub fn charpoly(&self, ring: &RingSpec) -> OKPoly {
        assert!(self.is_square());
        let n = self.rows;
        // Coefficients of the current trailing principal minor, highest first.
        let mut c = vec![ring.one()];
        for k in (0..n).rev() {
            let s = n - k - 1;
            let a = *self.get(k, k);
            let mut t = Vec::with_capacity(s + 2);
            t.push(ring.one());
            t.push(ring.neg(&a));
            let mut v: Vec<OKElem> = (k + 1..n).map(|i| *self.get(i, k)).collect();
            for step in 0..s {
                let rv = (0..s).fold(ring.zero(), |acc, j| ring.mul_add(&acc, self.get(k, k + 1 + j), &v[j]));
                t.push(ring.neg(&rv));
                if step + 1 < s {
                    v = (0..s)
                        .map(|i| {
                            (0..s).fold(ring.zero(), |acc, j| ring.mul_add(&acc, self.get(k + 1 + i, k + 1 + j), &v[j]))
                        })
                        .collect();
                }
            }
            let mut next = vec![ring.zero(); s + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        *slot = ring.mul_add(slot, &t[i - j], cj);
                    }
                }
            }
            c = next;
        }
        c.reverse();
        OKPoly { coeffs: c }
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, ring: &RingSpec, p: &OKPoly) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(ring, n, n).with_prec(self.prec);
        for c in p.coeffs.iter().rev() {
            acc = acc.mul(ring, self);
            for i in 0..n {
                let d = ring.add(acc.get(i, i), c);
                acc.set(i, i, d);
            }
        }
        acc
    }

    /// Row-major flattening, used to view matrices as vectors.
    pub fn flatten(&self) -> Vec<OKElem> {
        self.data.clone()
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Self {
        assert_eq!(rows * cols, self.data.len());
        OKMatrix { rows, cols, data: self.data.clone(), prec: self.prec }
    }
}

/// Matrix over `K`, stored as `ℓ^shift · integral`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMatrix {
    pub shift: i32,
    pub integral: OKMatrix,
}

impl KMatrix {
    pub fn from_integral(m: OKMatrix) -> Self {
        KMatrix { shift: 0, integral: m }
    }

    pub fn new(ring: &RingSpec, integral: OKMatrix, shift: i32) -> Self {
        KMatrix { shift, integral }.normalized(ring)
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        Self::from_integral(OKMatrix::identity(ring, n))
    }

    pub fn rows(&self) -> usize {
        self.integral.rows()
    }
    pub fn cols(&self) -> usize {
        self.integral.cols()
    }

    /// Absolute precision: entries are known modulo `ℓ^(shift + prec)`.
    pub fn abs_prec(&self) -> i32 {
        self.shift + self.integral.prec as i32
    }

    /// Pull common factors of ℓ out of the integral part into the shift.
    pub fn normalized(mut self, ring: &RingSpec) -> Self {
        if let Some(v) = self.integral.min_valuation(ring) {
            let v = v.min(self.integral.prec);
            if v > 0 && v < self.integral.prec {
                self.integral = self.integral.div_ell_pow(ring, v);
                self.shift += v as i32;
            }
        } else {
            self.shift = 0;
        }
        self
    }

    pub fn is_zero(&self, ring: &RingSpec) -> bool {
        self.integral.is_zero_mod(ring, self.integral.prec)
    }

    pub fn is_integral(&self, ring: &RingSpec) -> bool {
        self.shift >= 0 || self.is_zero(ring)
    }

    /// The integral matrix `ℓ^shift · M` for nonnegative shift.
    pub fn to_integral(&self, ring: &RingSpec) -> Option<OKMatrix> {
        if self.is_zero(ring) {
            return Some(OKMatrix::zeros(ring, self.rows(), self.cols()).with_prec(self.integral.prec));
        }
        if self.shift < 0 {
            return None;
        }
        Some(self.integral.mul_ell_pow(ring, self.shift as u32))
    }

    pub fn mul(&self, ring: &RingSpec, other: &Self) -> Self {
        KMatrix { shift: self.shift + other.shift, integral: self.integral.mul(ring, &other.integral) }
            .normalized(ring)
    }

    pub fn mul_ok(&self, ring: &RingSpec, other: &OKMatrix) -> Self {
        self.mul(ring, &KMatrix::from_integral(other.clone()))
    }

    /// Both operands rewritten over the common shift `min(s1, s2)`.
    fn aligned(&self, ring: &RingSpec, other: &Self) -> (OKMatrix, OKMatrix, i32) {
        let s = self.shift.min(other.shift);
        let a = self.integral.mul_ell_pow(ring, (self.shift - s) as u32);
        let b = other.integral.mul_ell_pow(ring, (other.shift - s) as u32);
        (a, b, s)
    }

    pub fn add(&self, ring: &RingSpec, other: &Self) -> Self {
        let (a, b, s) = self.aligned(ring, other);
        KMatrix { shift: s, integral: a.add(ring, &b) }.normalized(ring)
    }

    pub fn sub(&self, ring: &RingSpec, other: &Self) -> Self {
        let (a, b, s) = self.aligned(ring, other);
        KMatrix { shift: s, integral: a.sub(ring, &b) }.normalized(ring)
    }

    pub fn neg(&self, ring: &RingSpec) -> Self {
        KMatrix { shift: self.shift, integral: self.integral.neg(ring) }
    }

    pub fn transpose(&self) -> Self {
        KMatrix { shift: self.shift, integral: self.integral.transpose() }
    }

    pub fn scale_unit(&self, ring: &RingSpec, u: &OKElem) -> Self {
        KMatrix { shift: self.shift, integral: self.integral.scale(ring, u) }
    }

    /// Equality as matrices over `K` at the common absolute precision.
    pub fn approx_eq(&self, ring: &RingSpec, other: &Self) -> bool {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return false;
        }
        let (a, b, s) = self.aligned(ring, other);
        let p = (self.abs_prec().min(other.abs_prec()) - s).max(0) as u32;
        a.eq_mod(ring, &b, p)
    }

    /// Inverse over `K`; precision drops by the largest elementary-divisor valuation.
    pub fn inv(&self, ring: &RingSpec) -> Result<Self> {
        let inv = super::solve::Smith::new(ring, &self.integral, true).inverse(ring)?;
        Ok(KMatrix { shift: inv.shift - self.shift, integral: inv.integral }.normalized(ring))
    }
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
    fn inverse_examples() {
        let r = z5();
        let i = OKMatrix::identity(&r, 3);
        assert_eq!(i.inv(&r).unwrap(), i);
        let d = OKMatrix::from_ints(&r, 2, 2, &[5, 0, 0, 1]);
        assert_eq!(r.valuation(&d.det(&r)), Some(1));
        assert_eq!(d.inv(&r), Err(LinalgError::NotInvertible));
        let j = OKMatrix::from_ints(&r, 2, 2, &[0, -1, 1, 0]);
        assert_eq!(j.inv(&r).unwrap(), OKMatrix::from_ints(&r, 2, 2, &[0, 1, -1, 0]));
    }

    #[test]
    fn random_unimodular_inverse() {
        let r = RingSpec::new(7, 2, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..7 {
            let a = OKMatrix::random_unimodular(&r, n, &mut rng);
            let b = a.inv(&r).unwrap();
            assert!(a.mul(&r, &b).is_identity(&r));
            assert!(r.is_unit(&a.det(&r)));
        }
    }

    /// Cayley–Hamilton as an independent check of the characteristic polynomial.
    #[test]
    fn charpoly_cayley_hamilton() {
        let r = z5();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..9 {
            let a = OKMatrix::random(&r, n, n, &mut rng);
            let p = a.charpoly(&r);
            assert_eq!(p.coeffs.len(), n + 1);
            assert_eq!(p.coeffs[n], r.one());
            assert_eq!(p.coeffs[n - 1], r.neg(&a.trace(&r)));
            assert!(a.eval_poly(&r, &p).is_zero_mod(&r, 16));
            let sign = if n % 2 == 0 { r.one() } else { r.from_int(-1) };
            assert_eq!(p.coeffs[0], r.mul(&sign, &a.det(&r)));
        }
    }

    #[test]
    fn det_multiplicative() {
        let r = RingSpec::new(5, 3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..6 {
            let a = OKMatrix::random(&r, n, n, &mut rng);
            let b = OKMatrix::random(&r, n, n, &mut rng);
            assert_eq!(a.mul(&r, &b).det(&r), r.mul(&a.det(&r), &b.det(&r)));
        }
    }

    #[test]
    fn kmatrix_inverse_nonintegral() {
        let r = z5();
        let d = KMatrix::from_integral(OKMatrix::from_ints(&r, 2, 2, &[5, 1, 0, 25]));
        let di = d.inv(&r).unwrap();
        assert_eq!(di.shift, -3);
        assert!(d.mul(&r, &di).approx_eq(&r, &KMatrix::identity(&r, 2)));
    }
}
