//! Dense matrices over the residue field `F_q`.

use rand::Rng;

use super::poly::FqPoly;
use crate::padic::{FqElem, ResidueField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zeros(fq: &ResidueField, rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![fq.zero(); rows * cols] }
    }

    pub fn identity(fq: &ResidueField, n: usize) -> Self {
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            m.data[i * n + i] = fq.one();
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<FqElem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FqMatrix { rows, cols, data }
    }

    pub fn from_ints(fq: &ResidueField, rows: usize, cols: usize, v: &[i64]) -> Self {
        Self::from_data(rows, cols, v.iter().map(|&x| fq.from_int(x)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(fq: &ResidueField, rows: usize, cols: &[Vec<FqElem>]) -> Self {
        let mut m = Self::zeros(fq, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(fq: &ResidueField, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_data(rows, cols, (0..rows * cols).map(|_| fq.random(rng)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[FqElem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FqElem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FqElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn add(&self, fq: &ResidueField, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| fq.add(a, b)).collect();
        FqMatrix { data, ..*self }
    }

    pub fn sub(&self, fq: &ResidueField, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| fq.sub(a, b)).collect();
        FqMatrix { data, ..*self }
    }

    pub fn scale(&self, fq: &ResidueField, k: &FqElem) -> Self {
        let data = self.data.iter().map(|a| fq.mul(a, k)).collect();
        FqMatrix { data, ..*self }
    }

    pub fn mul(&self, fq: &ResidueField, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut data = vec![fq.zero(); n * p];
        for i in 0..n {
            for k in 0..m {
                let a = &self.data[i * m + k];
                if fq.is_zero(a) {
                    continue;
                }
                for j in 0..p {
                    data[i * p + j] = fq.add(&data[i * p + j], &fq.mul(a, &other.data[k * p + j]));
                }
            }
        }
        FqMatrix { rows: n, cols: p, data }
    }

    pub fn mul_vec(&self, fq: &ResidueField, v: &[FqElem]) -> Vec<FqElem> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(fq.zero(), |acc, j| fq.add(&acc, &fq.mul(self.get(i, j), &v[j])))
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
        FqMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_zero(&self, fq: &ResidueField) -> bool {
        self.data.iter().all(|a| fq.is_zero(a))
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, fq: &ResidueField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !fq.is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fq.inv(self.get(r, c)).unwrap();
            for j in 0..self.cols {
                let v = fq.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = *self.get(i, c);
                if fq.is_zero(&f) {
                    continue;
                }
                for j in 0..self.cols {
                    let v = fq.sub(self.get(i, j), &fq.mul(&f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, fq: &ResidueField) -> usize {
        self.clone().rref(fq).len()
    }

    /// Echelonized basis of the right kernel, one vector per free column.
    pub fn kernel(&self, fq: &ResidueField) -> Vec<Vec<FqElem>> {
        let mut m = self.clone();
        let pivots = m.rref(fq);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![fq.zero(); self.cols];
                v[f] = fq.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = fq.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }

    pub fn eval_poly(&self, fq: &ResidueField, p: &FqPoly) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(fq, n, n);
        for c in p.coeffs.iter().rev() {
            acc = acc.mul(fq, self);
            for i in 0..n {
                let d = fq.add(acc.get(i, i), c);
                acc.set(i, i, d);
            }
        }
        acc
    }

    /// Characteristic polynomial by the Samuelson–Berkowitz recursion.
    pub fn charpoly(&self, fq: &ResidueField) -> FqPoly {
        let n = self.rows;
        let mut c = vec![fq.one()];
        for k in (0..n).rev() {
            let s = n - k - 1;
            let mut t = vec![fq.one(), fq.neg(self.get(k, k))];
            let mut v: Vec<FqElem> = (k + 1..n).map(|i| *self.get(i, k)).collect();
            for step in 0..s {
                let rv = (0..s).fold(fq.zero(), |acc, j| fq.add(&acc, &fq.mul(self.get(k, k + 1 + j), &v[j])));
                t.push(fq.neg(&rv));
                if step + 1 < s {
                    v = (0..s)
                        .map(|i| {
                            (0..s).fold(fq.zero(), |acc, j| {
                                fq.add(&acc, &fq.mul(self.get(k + 1 + i, k + 1 + j), &v[j]))
                            })
                        })
                        .collect();
                }
            }
            let mut next = vec![fq.zero(); s + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        *slot = fq.add(slot, &fq.mul(&t[i - j], cj));
                    }
                }
            }
            c = next;
        }
        c.reverse();
        FqPoly::new(fq, c)
    }
}

/// Incrementally maintained echelon basis of a subspace of `F_q^n`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    n: usize,
    /// Basis vectors as inserted (before reduction).
    pub vectors: Vec<Vec<FqElem>>,
    reduced: Vec<(usize, Vec<FqElem>)>,
}

impl EchelonBasis {
    pub fn new(n: usize) -> Self {
        EchelonBasis { n, vectors: Vec::new(), reduced: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn reduce(&self, fq: &ResidueField, v: &[FqElem]) -> Vec<FqElem> {
        let mut v = v.to_vec();
        for (p, b) in &self.reduced {
            let f = v[*p];
            if !fq.is_zero(&f) {
                for i in 0..self.n {
                    v[i] = fq.sub(&v[i], &fq.mul(&f, &b[i]));
                }
            }
        }
        v
    }

    pub fn contains(&self, fq: &ResidueField, v: &[FqElem]) -> bool {
        self.reduce(fq, v).iter().all(|x| fq.is_zero(x))
    }

    /// Insert `v`; returns whether it was independent.
    pub fn insert(&mut self, fq: &ResidueField, v: &[FqElem]) -> bool {
        let mut r = self.reduce(fq, v);
        let Some(p) = r.iter().position(|x| !fq.is_zero(x)) else {
            return false;
        };
        let inv = fq.inv(&r[p]).unwrap();
        for x in r.iter_mut() {
            *x = fq.mul(x, &inv);
        }
        for (_, b) in self.reduced.iter_mut() {
            let f = b[p];
            if !fq.is_zero(&f) {
                for i in 0..self.n {
                    b[i] = fq.sub(&b[i], &fq.mul(&f, &r[i]));
                }
            }
        }
        self.reduced.push((p, r));
        self.vectors.push(v.to_vec());
        true
    }
}

/// Span of the orbit of `seeds` under the algebra generated by `gens`.
pub fn spin(fq: &ResidueField, gens: &[FqMatrix], seeds: &[Vec<FqElem>]) -> EchelonBasis {
    let n = gens.first().map_or_else(|| seeds.first().map_or(0, |s| s.len()), |g| g.rows());
    let mut basis = EchelonBasis::new(n);
    let mut queue = Vec::new();
    for s in seeds {
        if basis.insert(fq, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(fq, &v);
            if basis.insert(fq, &w) {
                queue.push(w);
            }
        }
    }
    basis
}
