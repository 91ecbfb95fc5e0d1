//! Dense univariate polynomials over `F_q` and over `O_K/ℓ^N`, with
//! factorization over `F_q` and Hensel lifting of coprime factorizations.

use rand::Rng;

use super::LinalgError;
use crate::padic::{FqElem, OKElem, ResidueField, RingSpec};

/// Polynomial over a residue field, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    pub coeffs: Vec<FqElem>,
}

impl FqPoly {
    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one(fq: &ResidueField) -> Self {
        FqPoly { coeffs: vec![fq.one()] }
    }

    /// `x`.
    pub fn x(fq: &ResidueField) -> Self {
        FqPoly { coeffs: vec![fq.zero(), fq.one()] }
    }

    pub fn new(fq: &ResidueField, coeffs: Vec<FqElem>) -> Self {
        let mut p = FqPoly { coeffs };
        p.trim(fq);
        p
    }

    /// Coefficients given as integers in the prime field.
    pub fn from_ints(fq: &ResidueField, c: &[u64]) -> Self {
        Self::new(fq, c.iter().map(|&v| fq.from_int((v % fq.ell()) as i64)).collect())
    }

    pub fn from_signed(fq: &ResidueField, c: &[i64]) -> Self {
        Self::new(fq, c.iter().map(|&v| fq.from_int(v)).collect())
    }

    fn trim(&mut self, fq: &ResidueField) {
        while self.coeffs.last().is_some_and(|c| fq.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_one(&self, fq: &ResidueField) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == fq.one()
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn monic(&self, fq: &ResidueField) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = fq.inv(l).expect("nonzero leading coefficient");
                self.scale(fq, &inv)
            }
        }
    }

    pub fn scale(&self, fq: &ResidueField, k: &FqElem) -> Self {
        Self::new(fq, self.coeffs.iter().map(|c| fq.mul(c, k)).collect())
    }

    pub fn add(&self, fq: &ResidueField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = fq.zero();
        let c = (0..n)
            .map(|i| fq.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(fq, c)
    }

    pub fn sub(&self, fq: &ResidueField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = fq.zero();
        let c = (0..n)
            .map(|i| fq.sub(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(fq, c)
    }

    pub fn mul(&self, fq: &ResidueField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![fq.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if fq.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = fq.add(&c[i + j], &fq.mul(a, b));
            }
        }
        Self::new(fq, c)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, fq: &ResidueField, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = fq.inv(d.leading().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![fq.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let t = fq.mul(&r[i], &inv);
            if fq.is_zero(&t) {
                continue;
            }
            q[i - dd] = t;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = fq.sub(&r[i - dd + j], &fq.mul(&t, dc));
            }
        }
        r.truncate(dd);
        (Self::new(fq, q), Self::new(fq, r))
    }

    pub fn rem(&self, fq: &ResidueField, d: &Self) -> Self {
        self.divrem(fq, d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, fq: &ResidueField, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(fq, &b);
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    /// `(g, s, t)` with `s·self + t·other = g` monic.
    pub fn ext_gcd(&self, fq: &ResidueField, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(fq), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(fq));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(fq, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(fq, &q.mul(fq, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(fq, &q.mul(fq, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = fq.inv(l).unwrap();
                (r0.scale(fq, &inv), s0.scale(fq, &inv), t0.scale(fq, &inv))
            }
        }
    }

    pub fn derivative(&self, fq: &ResidueField) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| fq.scale(a, i as u64))
            .collect();
        Self::new(fq, c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, fq: &ResidueField, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(fq, m);
        let mut acc = Self::one(fq).rem(fq, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base).rem(fq, m);
            }
            base = base.mul(fq, &base).rem(fq, m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, fq: &ResidueField, x: &FqElem) -> FqElem {
        self.coeffs.iter().rev().fold(fq.zero(), |acc, c| fq.add(&fq.mul(&acc, x), c))
    }

    pub fn is_squarefree(&self, fq: &ResidueField) -> bool {
        let d = self.derivative(fq);
        !d.is_zero() && self.gcd(fq, &d).is_one(fq)
    }

    /// Rabin's test.
    pub fn is_irreducible(&self, fq: &ResidueField) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic(fq);
        let x = Self::x(fq);
        let q = fq.size() as u128;
        // x^(q^k) mod f by repeated Frobenius.
        let frob = |k: usize| {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.powmod(fq, q, &f);
            }
            y
        };
        if frob(n).sub(fq, &x).rem(fq, &f) != Self::zero() {
            return false;
        }
        for p in prime_divisors(n as u64) {
            let y = frob(n / p as usize).sub(fq, &x);
            if !y.gcd(fq, &f).is_one(fq) {
                return false;
            }
        }
        true
    }

    /// ℓ-th root of a polynomial in `x^ℓ`.
    fn pth_root(&self, fq: &ResidueField) -> Self {
        let p = fq.ell() as usize;
        let e = (fq.size() / fq.ell()) as u128;
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|a| fq.pow(a, e))
            .collect();
        Self::new(fq, c)
    }

    /// Squarefree decomposition: monic `(g, i)` with `self = lc · Π g^i`.
    pub fn squarefree_decomposition(&self, fq: &ResidueField) -> Vec<(FqPoly, usize)> {
        let f = self.monic(fq);
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let p = fq.ell() as usize;
        let d = f.derivative(fq);
        if d.is_zero() {
            for (g, j) in f.pth_root(fq).squarefree_decomposition(fq) {
                out.push((g, j * p));
            }
            return out;
        }
        let mut c = f.gcd(fq, &d);
        let mut w = f.divrem(fq, &c).0;
        let mut i = 1;
        while !w.is_one(fq) {
            let y = w.gcd(fq, &c);
            let z = w.divrem(fq, &y).0;
            if z.deg() > 0 {
                out.push((z.monic(fq), i));
            }
            i += 1;
            w = y;
            c = c.divrem(fq, &w).0;
        }
        if c.deg() > 0 {
            for (g, j) in c.pth_root(fq).squarefree_decomposition(fq) {
                out.push((g, j * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self, fq: &ResidueField) -> Vec<(FqPoly, usize)> {
        let q = fq.size() as u128;
        let x = Self::x(fq);
        let mut f = self.monic(fq);
        let mut out = Vec::new();
        let mut h = x.clone();
        let mut d = 0;
        while f.deg() >= 2 * (d + 1) {
            d += 1;
            h = h.powmod(fq, q, &f);
            let g = h.sub(fq, &x).gcd(fq, &f);
            if !g.is_one(fq) {
                f = f.divrem(fq, &g).0;
                h = h.rem(fq, &f);
                out.push((g, d));
            }
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus, odd `q`).
    fn equal_degree<R: Rng + ?Sized>(&self, fq: &ResidueField, d: usize, rng: &mut R) -> Vec<FqPoly> {
        let n = self.deg();
        if n == d {
            return vec![self.monic(fq)];
        }
        let q = fq.size() as u128;
        loop {
            let a = Self::new(fq, (0..n).map(|_| fq.random(rng)).collect());
            if a.deg() == 0 {
                continue;
            }
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut t = Self::one(fq);
            let mut ai = a.rem(fq, self);
            for _ in 0..d {
                t = t.mul(fq, &ai).rem(fq, self);
                ai = ai.powmod(fq, q, self);
            }
            let b = t.powmod(fq, (q - 1) / 2, self).sub(fq, &Self::one(fq));
            let g = b.gcd(fq, self);
            if g.deg() > 0 && g.deg() < n {
                let h = self.divrem(fq, &g).0.monic(fq);
                let mut out = g.equal_degree(fq, d, rng);
                out.extend(h.equal_degree(fq, d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
    pub fn factor<R: Rng + ?Sized>(&self, fq: &ResidueField, rng: &mut R) -> Vec<(FqPoly, usize)> {
        let mut out = Vec::new();
        for (g, mult) in self.squarefree_decomposition(fq) {
            for (part, d) in g.distinct_degree(fq) {
                for irr in part.equal_degree(fq, d, rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.coeffs).cmp(&(b.0.deg(), &b.0.coeffs)));
        out
    }
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial over `O_K/ℓ^N`, low degree first. Not trimmed: leading zeros
/// are meaningful only up to precision, so callers track degree explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OKPoly {
    pub coeffs: Vec<OKElem>,
}

impl OKPoly {
    pub fn from_ints(ring: &RingSpec, c: &[i64]) -> Self {
        OKPoly { coeffs: c.iter().map(|&v| ring.from_int(v)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self, ring: &RingSpec) -> bool {
        self.coeffs.last().is_some_and(|c| *c == ring.one())
    }

    pub fn reduce(&self, ring: &RingSpec) -> FqPoly {
        let fq = ring.residue_field();
        FqPoly::new(fq, self.coeffs.iter().map(|c| ring.residue(c)).collect())
    }

    pub fn lift(ring: &RingSpec, p: &FqPoly) -> Self {
        OKPoly { coeffs: p.coeffs.iter().map(|c| ring.lift(c)).collect() }
    }

    pub fn mul(&self, ring: &RingSpec, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return OKPoly { coeffs: Vec::new() };
        }
        let mut c = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = ring.mul_add(&c[i + j], a, b);
            }
        }
        OKPoly { coeffs: c }
    }

    pub fn sub(&self, ring: &RingSpec, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = ring.zero();
        OKPoly {
            coeffs: (0..n)
                .map(|i| ring.sub(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        }
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, ring: &RingSpec, m: &Self) -> Self {
        let d = m.degree();
        let mut r = self.coeffs.clone();
        for i in (d..r.len()).rev() {
            let t = r[i];
            if ring.is_zero(&t) {
                continue;
            }
            for (j, mc) in m.coeffs.iter().enumerate() {
                r[i - d + j] = ring.sub(&r[i - d + j], &ring.mul(&t, mc));
            }
        }
        r.truncate(d);
        OKPoly { coeffs: r }
    }

    /// Exact quotient by a monic polynomial (remainder discarded).
    pub fn div_monic(&self, ring: &RingSpec, m: &Self) -> Self {
        let d = m.degree();
        let mut r = self.coeffs.clone();
        if r.len() <= d {
            return OKPoly { coeffs: vec![] };
        }
        let mut q = vec![ring.zero(); r.len() - d];
        for i in (d..r.len()).rev() {
            let t = r[i];
            q[i - d] = t;
            for (j, mc) in m.coeffs.iter().enumerate() {
                r[i - d + j] = ring.sub(&r[i - d + j], &ring.mul(&t, mc));
            }
        }
        OKPoly { coeffs: q }
    }

    pub fn eval(&self, ring: &RingSpec, x: &OKElem) -> OKElem {
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
    }

    /// Equality modulo `ℓ^k` after padding with zeros.
    pub fn eq_mod(&self, ring: &RingSpec, other: &Self, k: u32) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = ring.zero();
        (0..n).all(|i| ring.eq_mod(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z), k))
    }
}

/// Lift `f ≡ g·h (mod ℓ)` with `g, h` monic and coprime mod ℓ to a
/// factorization mod `ℓ^N`, one digit per step.
pub fn hensel_lift_pair(ring: &RingSpec, f: &OKPoly, g0: &FqPoly, h0: &FqPoly) -> (OKPoly, OKPoly) {
    let fq = ring.residue_field();
    let (gcd, s, t) = g0.ext_gcd(fq, h0);
    debug_assert!(gcd.is_one(fq), "Hensel factors must be coprime mod ell");
    let _ = s;
    let mut g = OKPoly::lift(ring, g0);
    let mut h = OKPoly::lift(ring, h0);
    for k in 1..ring.precision() {
        let e = f.sub(ring, &g.mul(ring, &h));
        let eb = FqPoly::new(fq, e.coeffs.iter().map(|c| ring.residue(&ring.div_ell_pow(c, k))).collect());
        if eb.is_zero() {
            continue;
        }
        let dg = t.mul(fq, &eb).rem(fq, g0);
        let dh = eb.sub(fq, &h0.mul(fq, &dg)).divrem(fq, g0).0;
        let pk = ring.ell_pow(k);
        for (i, c) in dg.coeffs.iter().enumerate() {
            let add = ring.mul_int(&ring.lift(c), pk as i64);
            g.coeffs[i] = ring.add(&g.coeffs[i], &add);
        }
        for (i, c) in dh.coeffs.iter().enumerate() {
            let add = ring.mul_int(&ring.lift(c), pk as i64);
            h.coeffs[i] = ring.add(&h.coeffs[i], &add);
        }
    }
    (g, h)
}

/// Lift a factorization of `f mod ℓ` into pairwise coprime monic factors.
pub fn hensel_lift(ring: &RingSpec, f: &OKPoly, factors: &[FqPoly]) -> Vec<OKPoly> {
    let fq = ring.residue_field();
    match factors.len() {
        0 => vec![],
        1 => vec![f.clone()],
        _ => {
            let rest = factors[1..].iter().fold(FqPoly::one(fq), |acc, p| acc.mul(fq, p));
            let (g, h) = hensel_lift_pair(ring, f, &factors[0], &rest);
            let mut out = vec![g];
            out.extend(hensel_lift(ring, &h, &factors[1..]));
            out
        }
    }
}

/// Factor a monic polynomial whose reduction mod ℓ is squarefree into
/// Hensel lifts of its irreducible factors mod ℓ.
pub fn poly_factor_squarefree_local<R: Rng + ?Sized>(
    ring: &RingSpec,
    p: &OKPoly,
    rng: &mut R,
) -> Result<Vec<OKPoly>, LinalgError> {
    if !p.is_monic(ring) {
        return Err(LinalgError::NotMonic);
    }
    let fq = ring.residue_field();
    let pb = p.reduce(ring);
    if pb.deg() == 0 {
        return Ok(vec![p.clone()]);
    }
    if !pb.is_squarefree(fq) {
        return Err(LinalgError::NotSquarefreeModEll);
    }
    let factors: Vec<FqPoly> = pb.factor(fq, rng).into_iter().map(|(g, _)| g).collect();
    Ok(hensel_lift(ring, p, &factors))
}

/// Monic factors over `O_K` of `Φ_n`, `ℓ ∤ n`, in a deterministic order.
pub fn cyclotomic_local_factors<R: Rng + ?Sized>(
    ring: &RingSpec,
    n: u64,
    rng: &mut R,
) -> Result<Vec<OKPoly>, LinalgError> {
    let phi = OKPoly::from_ints(ring, &cyclotomic_int(n));
    let mut factors = poly_factor_squarefree_local(ring, &phi, rng)?;
    factors.sort_by_key(|p| (p.degree(), p.coeffs.iter().map(|c| c.0).collect::<Vec<_>>()));
    Ok(factors)
}

/// Integer coefficients of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_int(n: u64) -> Vec<i64> {
    // Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = int_poly_div_exact(&num, &cyclotomic_int(d));
        }
    }
    num
}

/// Exact quotient of integer polynomials by a monic divisor.
pub fn int_poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (db..a.len()).rev() {
        let t = r[i];
        q[i - db] = t;
        for (j, &bc) in b.iter().enumerate() {
            r[i - db + j] -= t * bc;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "inexact polynomial division");
    q
}

/// Remainder of an integer polynomial modulo a monic integer polynomial.
pub fn int_poly_rem(a: &[i64], m: &[i64]) -> Vec<i64> {
    let d = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() < d {
        r.resize(d, 0);
        return r;
    }
    for i in (d..r.len()).rev() {
        let t = r[i];
        if t == 0 {
            continue;
        }
        for (j, &mc) in m.iter().enumerate() {
            r[i - d + j] -= t * mc;
        }
    }
    r.truncate(d);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_int(1), vec![-1, 1]);
        assert_eq!(cyclotomic_int(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_int(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_int(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_int(41).len(), 41);
    }

    #[test]
    fn squarefree_factor_roots() {
        let ring = RingSpec::new(5, 1, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = OKPoly::from_ints(&ring, &[-1, 0, 1]);
        let f = poly_factor_squarefree_local(&ring, &p, &mut rng).unwrap();
        assert_eq!(f.len(), 2);
        let roots: Vec<OKElem> = f.iter().map(|g| ring.neg(&g.coeffs[0])).collect();
        assert!(roots.contains(&ring.one()) && roots.contains(&ring.from_int(-1)));
        let x2 = OKPoly::from_ints(&ring, &[0, 0, 1]);
        assert_eq!(poly_factor_squarefree_local(&ring, &x2, &mut rng), Err(LinalgError::NotSquarefreeModEll));
    }

    /// Distinct-degree oracle: the number of irreducible factors of degree d
    /// of Φ_n mod ℓ equals φ(n)/ord_n(ℓ), all of degree ord_n(ℓ).
    #[test]
    fn cyclotomic_41_mod_5() {
        let ring = RingSpec::new(5, 1, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let order = (1..).find(|&k| 5u64.pow(k) % 41 == 1).unwrap();
        assert_eq!(order, 20);
        let p = OKPoly::from_ints(&ring, &cyclotomic_int(41));
        let f = poly_factor_squarefree_local(&ring, &p, &mut rng).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|g| g.degree() == 20));
        let prod = f[0].mul(&ring, &f[1]);
        assert!(prod.eq_mod(&ring, &p, ring.precision()));
    }

    #[test]
    fn factor_with_multiplicity() {
        let fq = ResidueField::prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // (x - 1)^5 (x^2 + 2) over F_5: x^5 - 1 is a fifth power.
        let a = FqPoly::from_signed(&fq, &[-1, 1]);
        let mut p = FqPoly::one(&fq);
        for _ in 0..5 {
            p = p.mul(&fq, &a);
        }
        p = p.mul(&fq, &FqPoly::from_ints(&fq, &[2, 0, 1]));
        let f = p.factor(&fq, &mut rng);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], (a.clone(), 5));
        assert_eq!(f[1].1, 1);
        assert_eq!(f[1].0.deg(), 2);
    }

    #[test]
    fn irreducibility_matches_root_search() {
        let fq = ResidueField::prime(7);
        for a in 0..7 {
            for b in 0..7 {
                let p = FqPoly::from_ints(&fq, &[b, a, 1]);
                let has_root = (0..7).any(|x| (x * x + a * x + b) % 7 == 0);
                assert_eq!(p.is_irreducible(&fq), !has_root);
            }
        }
    }
}
