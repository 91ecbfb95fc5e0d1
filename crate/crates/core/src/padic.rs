//! Truncated arithmetic in `O_K`, the ring of integers of an unramified
//! extension `K` of `Q_ℓ`, and in its residue field `F_q`.
//!
//! `O_K / ℓ^N` is modelled as `(Z/ℓ^N)[x] / (f(x))` where `f` is monic of
//! degree `m` and irreducible mod `ℓ`. The uniformizer is always `ℓ`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::poly::FqPoly;

/// Largest unramified degree supported by the fixed-width element layout.
pub const MAX_DEGREE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ell must be odd")]
    EvenPrime,
    #[error("precision {0} is below the minimum of 4 digits")]
    PrecisionTooLow(u32),
    #[error("ell^N does not fit the 62-bit coefficient word (ell = {ell}, N = {precision})")]
    PrecisionTooHigh { ell: u64, precision: u32 },
    #[error("unramified degree {0} unsupported (1..={max})", max = MAX_DEGREE)]
    DegreeUnsupported(usize),
    #[error("defining polynomial is not monic irreducible mod ell")]
    ReduciblePolynomial,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("element is not a square")]
    NonResidue,
    #[error("zero has no Teichmüller lift")]
    ZeroInput,
    #[error("division by zero in the residue field")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, PadicError>;

/// Odd modulus below 2^63 with Montgomery constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    n: u64,
    neg_inv: u64,
    r2: u64,
}

impl Modulus {
    pub fn new(n: u64) -> Self {
        assert!(n % 2 == 1 && n < (1 << 63), "modulus must be odd and below 2^63");
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % n as u128;
        let r2 = ((r * r) % n as u128) as u64;
        Modulus { n, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.n
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = self.redc(a as u128 * b as u128);
        self.redc(t as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    pub fn reduce_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.n as i128) as u64
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of the largest power of `p` dividing `n` (`n != 0`).
pub fn int_valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Element of the residue field `F_q`: coefficients mod ℓ in the power basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FqElem(pub [u64; MAX_DEGREE]);

/// Element of `O_K / ℓ^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct OKElem(pub [u64; MAX_DEGREE]);

/// The residue field `F_q = F_ℓ[x]/(f mod ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    ell: u64,
    degree: usize,
    poly: [u64; MAX_DEGREE + 1],
    q: u64,
}

impl ResidueField {
    /// The prime field `F_ℓ`.
    pub fn prime(ell: u64) -> Self {
        let mut poly = [0; MAX_DEGREE + 1];
        poly[1] = 1;
        ResidueField { ell, degree: 1, poly, q: ell }
    }

    fn with_poly(ell: u64, poly: &[u64]) -> Self {
        let degree = poly.len() - 1;
        let mut p = [0; MAX_DEGREE + 1];
        for (i, &c) in poly.iter().enumerate() {
            p[i] = c % ell;
        }
        ResidueField { ell, degree, poly: p, q: ell.pow(degree as u32) }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> FqElem {
        FqElem::default()
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> FqElem {
        let mut e = FqElem::default();
        e.0[0] = a.rem_euclid(self.ell as i64) as u64;
        e
    }

    pub fn from_coeffs(&self, c: &[u64]) -> FqElem {
        let mut e = FqElem::default();
        for (i, &v) in c.iter().enumerate().take(self.degree) {
            e.0[i] = v % self.ell;
        }
        e
    }

    pub fn coeffs<'a>(&self, x: &'a FqElem) -> &'a [u64] {
        &x.0[..self.degree]
    }

    /// Element number `k` in the base-ℓ enumeration of `F_q` (k < q).
    pub fn element(&self, mut k: u64) -> FqElem {
        let mut e = FqElem::default();
        for i in 0..self.degree {
            e.0[i] = k % self.ell;
            k /= self.ell;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        let mut e = FqElem::default();
        for i in 0..self.degree {
            e.0[i] = rng.gen_range(0..self.ell);
        }
        e
    }

    #[inline]
    pub fn is_zero(&self, x: &FqElem) -> bool {
        x.0[..self.degree].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, x: &FqElem, y: &FqElem) -> FqElem {
        let mut r = FqElem::default();
        for i in 0..self.degree {
            r.0[i] = (x.0[i] + y.0[i]) % self.ell;
        }
        r
    }

    #[inline]
    pub fn sub(&self, x: &FqElem, y: &FqElem) -> FqElem {
        let mut r = FqElem::default();
        for i in 0..self.degree {
            r.0[i] = (x.0[i] + self.ell - y.0[i]) % self.ell;
        }
        r
    }

    #[inline]
    pub fn neg(&self, x: &FqElem) -> FqElem {
        self.sub(&FqElem::default(), x)
    }

    #[inline]
    pub fn mul(&self, x: &FqElem, y: &FqElem) -> FqElem {
        let p = self.ell;
        if self.degree == 1 {
            let mut r = FqElem::default();
            r.0[0] = x.0[0] * y.0[0] % p;
            return r;
        }
        let m = self.degree;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x.0[i] * y.0[j]) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + (p - t) * self.poly[j]) % p;
            }
        }
        let mut r = FqElem::default();
        r.0[..m].copy_from_slice(&prod[..m]);
        r
    }

    pub fn scale(&self, x: &FqElem, k: u64) -> FqElem {
        self.mul(x, &self.from_int((k % self.ell) as i64))
    }

    pub fn pow(&self, x: &FqElem, mut e: u128) -> FqElem {
        let mut base = *x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FqElem) -> Result<FqElem> {
        if self.is_zero(x) {
            return Err(PadicError::DivisionByZero);
        }
        Ok(self.pow(x, (self.q - 2) as u128))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, x: &FqElem) -> bool {
        self.is_zero(x) || self.pow(x, ((self.q - 1) / 2) as u128) == self.one()
    }

    /// A square root by Tonelli–Shanks, with the non-residue found by
    /// enumerating `F_q` in order. Which of the two roots comes out is not
    /// normalized here.
    pub fn sqrt(&self, x: &FqElem) -> Result<FqElem> {
        if self.is_zero(x) {
            return Ok(*x);
        }
        if !self.is_square(x) {
            return Err(PadicError::NonResidue);
        }
        let mut s = 0u32;
        let mut odd = self.q - 1;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let z = (1..self.q)
            .map(|k| self.element(k))
            .find(|e| !self.is_square(e))
            .expect("F_q has non-residues for odd q");
        let mut m = s;
        let mut c = self.pow(&z, odd as u128);
        let mut t = self.pow(x, odd as u128);
        let mut r = self.pow(x, odd.div_ceil(2) as u128);
        let one = self.one();
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Ok(r)
    }
}

/// Ring descriptor for `O_K / ℓ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    ell: u64,
    degree: usize,
    precision: u32,
    modulus: Modulus,
    /// Monic defining polynomial, low degree first, coefficients in `[0, ℓ)`.
    poly: [u64; MAX_DEGREE + 1],
    residue: ResidueField,
    pow_ell: Vec<u64>,
}

/// Serializable ring parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingParams {
    pub ell: u64,
    pub degree: usize,
    pub precision: u32,
    pub defining_poly: Vec<u64>,
}

impl RingSpec {
    /// Build `O_K/ℓ^N` for the unramified extension of degree `m`, choosing the
    /// first monic irreducible polynomial in base-ℓ coefficient order.
    pub fn new(ell: u64, m: usize, precision: u32) -> Result<Self> {
        Self::check_params(ell, m, precision)?;
        if m == 1 {
            return Self::with_poly(ell, &[0, 1], precision);
        }
        let prime = ResidueField::prime(ell);
        let count = ell.pow(m as u32);
        for k in 0..count {
            let mut c = Vec::with_capacity(m + 1);
            let mut r = k;
            for _ in 0..m {
                c.push(r % ell);
                r /= ell;
            }
            c.push(1);
            let f = FqPoly::from_ints(&prime, &c);
            if f.is_irreducible(&prime) {
                return Self::with_poly(ell, &c, precision);
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_ell")
    }

    fn check_params(ell: u64, m: usize, precision: u32) -> Result<()> {
        if ell == 2 {
            return Err(PadicError::EvenPrime);
        }
        if !is_prime(ell) {
            return Err(PadicError::NotPrime(ell));
        }
        if ell >= 1 << 31 {
            return Err(PadicError::PrecisionTooHigh { ell, precision });
        }
        if precision < 4 {
            return Err(PadicError::PrecisionTooLow(precision));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(PadicError::DegreeUnsupported(m));
        }
        let too_big = (ell as u128)
            .checked_pow(precision)
            .is_none_or(|v| v >= 1u128 << 62);
        let q_big = (ell as u128).checked_pow(m as u32).is_none_or(|v| v >= 1u128 << 62);
        if too_big || q_big {
            return Err(PadicError::PrecisionTooHigh { ell, precision });
        }
        Ok(())
    }

    /// Build the ring for an explicit monic defining polynomial (low degree
    /// first, leading 1 included).
    pub fn with_poly(ell: u64, poly: &[u64], precision: u32) -> Result<Self> {
        let m = poly.len().saturating_sub(1);
        Self::check_params(ell, m, precision)?;
        if poly[m] % ell != 1 {
            return Err(PadicError::ReduciblePolynomial);
        }
        let prime = ResidueField::prime(ell);
        if m > 1 && !FqPoly::from_ints(&prime, poly).is_irreducible(&prime) {
            return Err(PadicError::ReduciblePolynomial);
        }
        let mut p = [0; MAX_DEGREE + 1];
        for (i, &c) in poly.iter().enumerate() {
            p[i] = c % ell;
        }
        p[m] = 1;
        let modulus = Modulus::new(ell.pow(precision));
        let pow_ell = (0..=precision).map(|k| ell.pow(k)).collect();
        Ok(RingSpec {
            ell,
            degree: m,
            precision,
            modulus,
            poly: p,
            residue: ResidueField::with_poly(ell, &p[..=m]),
            pow_ell,
        })
    }

    pub fn from_params(p: &RingParams) -> Result<Self> {
        Self::with_poly(p.ell, &p.defining_poly, p.precision)
    }

    pub fn params(&self) -> RingParams {
        RingParams {
            ell: self.ell,
            degree: self.degree,
            precision: self.precision,
            defining_poly: self.poly[..=self.degree].to_vec(),
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.residue.q
    }
    pub fn modulus(&self) -> u64 {
        self.modulus.n
    }
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly[..=self.degree]
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }
    /// `ℓ^k` for `k ≤ N`.
    pub fn ell_pow(&self, k: u32) -> u64 {
        self.pow_ell[k as usize]
    }

    /// Same extension at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::with_poly(self.ell, self.defining_poly(), precision)
    }

    pub fn zero(&self) -> OKElem {
        OKElem::default()
    }

    pub fn one(&self) -> OKElem {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> OKElem {
        let mut e = OKElem::default();
        e.0[0] = self.modulus.reduce_i128(a as i128);
        e
    }

    pub fn from_u64(&self, a: u64) -> OKElem {
        let mut e = OKElem::default();
        e.0[0] = a % self.modulus.n;
        e
    }

    pub fn from_coeffs(&self, c: &[u64]) -> OKElem {
        let mut e = OKElem::default();
        for (i, &v) in c.iter().enumerate().take(self.degree) {
            e.0[i] = v % self.modulus.n;
        }
        e
    }

    pub fn from_signed_coeffs(&self, c: &[i64]) -> OKElem {
        let mut e = OKElem::default();
        for (i, &v) in c.iter().enumerate().take(self.degree) {
            e.0[i] = self.modulus.reduce_i128(v as i128);
        }
        e
    }

    pub fn coeffs<'a>(&self, x: &'a OKElem) -> &'a [u64] {
        &x.0[..self.degree]
    }

    /// Whether `x` is a valid reduced element of this ring.
    pub fn contains(&self, x: &OKElem) -> bool {
        x.0[..self.degree].iter().all(|&c| c < self.modulus.n) && x.0[self.degree..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn is_zero(&self, x: &OKElem) -> bool {
        x.0[..self.degree].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, x: &OKElem, y: &OKElem) -> OKElem {
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = self.modulus.add(x.0[i], y.0[i]);
        }
        r
    }

    #[inline]
    pub fn sub(&self, x: &OKElem, y: &OKElem) -> OKElem {
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = self.modulus.sub(x.0[i], y.0[i]);
        }
        r
    }

    #[inline]
    pub fn neg(&self, x: &OKElem) -> OKElem {
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = self.modulus.neg(x.0[i]);
        }
        r
    }

    #[inline]
    pub fn mul(&self, x: &OKElem, y: &OKElem) -> OKElem {
        let md = &self.modulus;
        if self.degree == 1 {
            let mut r = OKElem::default();
            r.0[0] = md.mul(x.0[0], y.0[0]);
            return r;
        }
        let m = self.degree;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = md.add(prod[i + j], md.mul(x.0[i], y.0[j]));
            }
        }
        for i in (m..2 * m - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                if self.poly[j] != 0 {
                    prod[i - m + j] = md.sub(prod[i - m + j], md.mul(t, self.poly[j]));
                }
            }
        }
        let mut r = OKElem::default();
        r.0[..m].copy_from_slice(&prod[..m]);
        r
    }

    /// `x * y + acc`, the inner step of matrix products.
    #[inline]
    pub fn mul_add(&self, acc: &OKElem, x: &OKElem, y: &OKElem) -> OKElem {
        self.add(acc, &self.mul(x, y))
    }

    pub fn mul_int(&self, x: &OKElem, k: i64) -> OKElem {
        let c = self.modulus.reduce_i128(k as i128);
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = self.modulus.mul(x.0[i], c);
        }
        r
    }

    pub fn pow(&self, x: &OKElem, mut e: u128) -> OKElem {
        let mut base = *x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Largest `v` with `ℓ^v | x`; `None` stands for +∞ (x ≡ 0 mod ℓ^N).
    pub fn valuation(&self, x: &OKElem) -> Option<u32> {
        x.0[..self.degree]
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| int_valuation(c, self.ell))
            .min()
    }

    #[inline]
    pub fn is_unit(&self, x: &OKElem) -> bool {
        x.0[..self.degree].iter().any(|&c| c % self.ell != 0)
    }

    /// Whether `x ≡ y (mod ℓ^k)`.
    pub fn eq_mod(&self, x: &OKElem, y: &OKElem, k: u32) -> bool {
        let pk = self.pow_ell[k.min(self.precision) as usize];
        (0..self.degree).all(|i| x.0[i] % pk == y.0[i] % pk)
    }

    /// `x mod ℓ^k`, as a representative in `[0, ℓ^k)`.
    pub fn truncate(&self, x: &OKElem, k: u32) -> OKElem {
        let pk = self.pow_ell[k.min(self.precision) as usize];
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = x.0[i] % pk;
        }
        r
    }

    pub fn mul_ell_pow(&self, x: &OKElem, k: u32) -> OKElem {
        if k >= self.precision {
            return OKElem::default();
        }
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = self.modulus.mul(x.0[i], self.pow_ell[k as usize]);
        }
        r
    }

    /// Exact division by `ℓ^k`; the low `k` digits of `x` are discarded, so the
    /// result is meaningful modulo `ℓ^(N-k)` only.
    pub fn div_ell_pow(&self, x: &OKElem, k: u32) -> OKElem {
        let pk = self.pow_ell[k.min(self.precision) as usize];
        let mut r = OKElem::default();
        for i in 0..self.degree {
            r.0[i] = x.0[i] / pk;
        }
        r
    }

    pub fn residue(&self, x: &OKElem) -> FqElem {
        let mut e = FqElem::default();
        for i in 0..self.degree {
            e.0[i] = x.0[i] % self.ell;
        }
        e
    }

    /// The lift of a residue with coefficients in `[0, ℓ)`.
    pub fn lift(&self, r: &FqElem) -> OKElem {
        let mut e = OKElem::default();
        e.0[..self.degree].copy_from_slice(&r.0[..self.degree]);
        e
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> OKElem {
        let mut e = OKElem::default();
        for i in 0..self.degree {
            e.0[i] = rng.gen_range(0..self.modulus.n);
        }
        e
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> OKElem {
        loop {
            let x = self.random(rng);
            if self.is_unit(&x) {
                return x;
            }
        }
    }

    /// Inverse of a unit: invert the residue, then Newton `y ← y(2 − xy)`.
    pub fn inv(&self, x: &OKElem) -> Result<OKElem> {
        if !self.is_unit(x) {
            return Err(PadicError::NotUnit);
        }
        let r = self.residue.inv(&self.residue(x))?;
        let mut y = self.lift(&r);
        let two = self.from_int(2);
        let mut digits = 1;
        while digits < self.precision {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            digits *= 2;
        }
        Ok(y)
    }

    /// Square root of a unit square, Hensel-lifted from `F_q`. Of the two
    /// roots the one whose residue has the lexicographically smaller
    /// coefficient vector is returned.
    pub fn sqrt(&self, x: &OKElem) -> Result<OKElem> {
        if !self.is_unit(x) {
            return Err(PadicError::NotUnit);
        }
        let fq = &self.residue;
        let r = fq.sqrt(&self.residue(x))?;
        let other = fq.neg(&r);
        let r = if fq.coeffs(&other) < fq.coeffs(&r) { other } else { r };
        let mut y = self.lift(&r);
        let half = self.inv(&self.from_int(2))?;
        let mut digits = 1;
        while digits < self.precision {
            let q = self.mul(x, &self.inv(&y)?);
            y = self.mul(&half, &self.add(&y, &q));
            digits *= 2;
        }
        Ok(y)
    }

    /// Teichmüller lift: the `(q−1)`-st root of unity reducing to `r`.
    pub fn teichmuller(&self, r: &FqElem) -> Result<OKElem> {
        if self.residue.is_zero(r) {
            return Err(PadicError::ZeroInput);
        }
        let mut y = self.lift(r);
        for _ in 0..self.precision {
            let next = self.pow(&y, self.q() as u128);
            if next == y {
                break;
            }
            y = next;
        }
        Ok(y)
    }

    pub fn display(&self, x: &OKElem) -> String {
        if self.degree == 1 {
            x.0[0].to_string()
        } else {
            format!("{:?}", self.coeffs(x))
        }
    }
}

/// An element bundled with its ring, for the checked arithmetic surface.
#[derive(Clone, Copy, Debug)]
pub struct Element<'a> {
    pub ring: &'a RingSpec,
    pub value: OKElem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl<'a> Element<'a> {
    pub fn new(ring: &'a RingSpec, value: OKElem) -> Self {
        Element { ring, value }
    }
}

impl fmt::Display for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.display(&self.value))
    }
}

/// Ring operation on two elements that must share a ring.
pub fn ok_arith<'a>(x: Element<'a>, y: Element<'a>, op: ArithOp) -> Result<Element<'a>> {
    if x.ring != y.ring || !x.ring.contains(&x.value) || !y.ring.contains(&y.value) {
        return Err(PadicError::RingMismatch);
    }
    let r = x.ring;
    let value = match op {
        ArithOp::Add => r.add(&x.value, &y.value),
        ArithOp::Sub => r.sub(&x.value, &y.value),
        ArithOp::Mul => r.mul(&x.value, &y.value),
    };
    Ok(Element { ring: r, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z5(n: u32) -> RingSpec {
        RingSpec::new(5, 1, n).unwrap()
    }

    #[test]
    fn ring_create_cases() {
        let r = z5(16);
        assert_eq!(r.q(), 5);
        assert_eq!(r.defining_poly(), &[0, 1]);
        let r2 = RingSpec::new(5, 2, 8).unwrap();
        assert_eq!(r2.q(), 25);
        assert_eq!(RingSpec::new(2, 1, 8), Err(PadicError::EvenPrime));
        assert_eq!(RingSpec::new(9, 1, 8), Err(PadicError::NotPrime(9)));
        assert_eq!(RingSpec::new(5, 1, 3), Err(PadicError::PrecisionTooLow(3)));
        assert!(matches!(RingSpec::new(5, 1, 40), Err(PadicError::PrecisionTooHigh { .. })));
    }

    #[test]
    fn defining_poly_irreducible_by_brute_force() {
        // No root and no monic quadratic factor over F_5 ⇔ irreducible (deg 2, 3).
        for m in 2..=3 {
            let r = RingSpec::new(5, m, 8).unwrap();
            let f = r.defining_poly();
            let eval = |x: u64| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % 5);
            assert!((0..5).all(|x| eval(x) != 0), "root found for degree {m}");
        }
    }

    #[test]
    fn arith_examples() {
        let r = z5(16);
        let one = Element::new(&r, r.one());
        let m1 = Element::new(&r, r.from_int(-1));
        assert!(r.is_zero(&ok_arith(one, m1, ArithOp::Add).unwrap().value));
        let r3 = z5(4);
        let p = r3.mul(&r3.from_int(2), &r3.from_int(63));
        assert!(r3.eq_mod(&p, &r3.one(), 3));
        assert!(r.is_zero(&r.mul(&r.from_int(1234), &r.zero())));
        let other = z5(8);
        assert_eq!(
            ok_arith(one, Element::new(&other, other.one()), ArithOp::Mul).unwrap_err(),
            PadicError::RingMismatch
        );
    }

    #[test]
    fn inverse_examples() {
        let r = z5(4);
        assert_eq!(r.inv(&r.one()).unwrap(), r.one());
        let i2 = r.inv(&r.from_int(2)).unwrap();
        assert_eq!(r.truncate(&i2, 3).0[0], 63);
        assert_eq!(r.inv(&r.from_int(5)), Err(PadicError::NotUnit));
    }

    #[test]
    fn valuation_examples() {
        let r = z5(16);
        assert_eq!(r.valuation(&r.from_int(75)), Some(2));
        assert_eq!(r.valuation(&r.zero()), None);
        assert_eq!(r.valuation(&r.from_int(7)), Some(0));
    }

    #[test]
    fn sqrt_examples() {
        let r = z5(4);
        assert_eq!(r.sqrt(&r.one()).unwrap(), r.one());
        // Brute force mod 25: the square roots of 6 are 9 and 16.
        let roots: Vec<u64> = (0..25).filter(|y| y * y % 25 == 6).collect();
        assert_eq!(roots, vec![9, 16]);
        let s = r.sqrt(&r.from_int(6)).unwrap();
        let s25 = r.truncate(&s, 2).0[0];
        assert!(roots.contains(&s25));
        // Residue 1 < residue 4, so the root ≡ 1 mod 5 is chosen.
        assert_eq!(s25, 16);
        // Euler: squares mod 5 are {1, 4}.
        assert_eq!(r.sqrt(&r.from_int(2)), Err(PadicError::NonResidue));
        assert_eq!(r.sqrt(&r.from_int(10)), Err(PadicError::NotUnit));
    }

    #[test]
    fn teichmuller_examples() {
        let r = z5(4);
        let fq = r.residue_field();
        assert_eq!(r.teichmuller(&fq.one()).unwrap(), r.one());
        let t2 = r.teichmuller(&fq.from_int(2)).unwrap();
        assert_eq!(r.truncate(&t2, 2).0[0], 7);
        let t4 = r.teichmuller(&fq.from_int(4)).unwrap();
        assert_eq!(t4, r.from_int(-1));
        assert_eq!(r.teichmuller(&fq.zero()), Err(PadicError::ZeroInput));
    }

    #[test]
    fn fq_examples() {
        let f5 = ResidueField::prime(5);
        assert_eq!(f5.inv(&f5.one()).unwrap(), f5.one());
        let squares: Vec<u64> = (1..5).map(|x| x * x % 5).collect();
        assert!(!squares.contains(&2));
        assert!(!f5.is_square(&f5.from_int(2)));
        let r = RingSpec::new(5, 2, 6).unwrap();
        let fq = r.residue_field();
        for k in 1..25 {
            let g = fq.element(k);
            assert_eq!(fq.pow(&g, 24), fq.one());
        }
        assert_eq!(fq.inv(&fq.zero()), Err(PadicError::DivisionByZero));
    }

    #[test]
    fn degree_two_units() {
        let r = RingSpec::new(7, 2, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = r.random_unit(&mut rng);
            assert_eq!(r.mul(&x, &r.inv(&x).unwrap()), r.one());
            let sq = r.mul(&x, &x);
            let s = r.sqrt(&sq).unwrap();
            assert!(s == x || s == r.neg(&x));
            let t = r.teichmuller(&r.residue(&x)).unwrap();
            assert_eq!(r.pow(&t, (r.q() - 1) as u128), r.one());
        }
    }
}
