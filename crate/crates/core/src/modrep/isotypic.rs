//! Central idempotents of `K[G]` attached to orbits of `Gal(K(ζ_e)/K)` on
//! the irreducible characters, acting on a lattice representation.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::rep::{class_sums, LatticeRep};
use super::{ModrepError, Result};
use crate::groups::{gcd, CharacterTable, FiniteGroup};
use crate::linalg::poly::{cyclotomic_int, int_poly_rem};
use crate::linalg::{kernel, poly_factor_squarefree_local, KMatrix, OKMatrix, OKPoly, Subspace};
use crate::padic::{int_valuation, OKElem, RingSpec};

#[derive(Clone, Debug)]
pub struct IsotypicProjector {
    /// Indices into the character table.
    pub characters: Vec<usize>,
    pub degree: u64,
    pub matrix: KMatrix,
}

impl IsotypicProjector {
    /// Saturated lattice `P(K^n) ∩ O_K^n`.
    pub fn image(&self, ring: &RingSpec) -> Result<Subspace> {
        let n = self.matrix.rows();
        let comp = KMatrix::identity(ring, n).sub(ring, &self.matrix);
        Ok(Subspace::new(ring, kernel(ring, &comp.integral))?)
    }

    pub fn rank(&self, ring: &RingSpec) -> Result<usize> {
        Ok(self.image(ring)?.dim())
    }
}

/// Orbits of the decomposition group `{t ∈ (Z/e)^* : t mod e' ∈ ⟨q⟩}` on
/// characters, where `e = e'·ℓ^a` with `ℓ ∤ e'`.
pub fn galois_orbits(table: &CharacterTable, ell: u64, q: u64) -> Vec<Vec<usize>> {
    let e = table.exponent;
    let e_prime = e / ell.pow(int_valuation(e, ell));
    let mut q_powers = vec![1 % e_prime];
    loop {
        let next = (*q_powers.last().unwrap() as u128 * q as u128 % e_prime as u128) as u64;
        if next == 1 % e_prime {
            break;
        }
        q_powers.push(next);
    }
    let group_d: Vec<u64> = (1..=e).filter(|&t| gcd(t, e) == 1 && q_powers.contains(&(t % e_prime))).collect();
    let index: HashMap<&[_], usize> =
        table.characters.iter().enumerate().map(|(i, c)| (c.values.as_slice(), i)).collect();
    let mut seen = vec![false; table.len()];
    let mut orbits = Vec::new();
    for i in 0..table.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for &t in &group_d {
            let image: Vec<_> = table.characters[i].values.iter().map(|v| v.galois(t, e)).collect();
            let j = index[image.as_slice()];
            if !seen[j] {
                seen[j] = true;
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

fn ramanujan_sum(j: u64, ell: u64, a: u32) -> i64 {
    if a == 0 {
        return 1;
    }
    let la = ell.pow(a);
    let la1 = ell.pow(a - 1);
    if j.is_multiple_of(la) {
        (la - la1) as i64
    } else if j.is_multiple_of(la1) {
        -(la1 as i64)
    } else {
        0
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    (1..m).find(|&x| a % m * x % m == 1).expect("unit modulo m")
}

/// Evaluates orbit sums of character values in `O_K` through a fixed
/// embedding of `ζ_{e'}`.
struct OrbitEvaluator {
    e: u64,
    e_prime: u64,
    ell: u64,
    a: u32,
    alpha: u64,
    beta: u64,
    phi_e_prime: Vec<i64>,
    factor: OKPoly,
}

impl OrbitEvaluator {
    fn new(ring: &RingSpec, e: u64) -> Result<Self> {
        let ell = ring.ell();
        let a = int_valuation(e, ell);
        let la = ell.pow(a);
        let e_prime = e / la;
        let phi_e_prime = cyclotomic_int(e_prime);
        let mut rng = ChaCha8Rng::seed_from_u64(e);
        let factors = poly_factor_squarefree_local(ring, &OKPoly::from_ints(ring, &phi_e_prime), &mut rng)?;
        Ok(OrbitEvaluator {
            e,
            e_prime,
            ell,
            a,
            alpha: inv_mod(la % e_prime.max(1), e_prime),
            beta: inv_mod(e_prime % la, la),
            phi_e_prime,
            factor: factors.into_iter().min_by_key(|f| f.coeffs.iter().map(|c| c.0).collect::<Vec<_>>()).unwrap(),
        })
    }

    /// `Σ n_b ζ_e^b`, known to be fixed by every automorphism of `ζ_{ℓ^a}`.
    fn eval(&self, ring: &RingSpec, mult: &[i64]) -> Result<OKElem> {
        let mut acc = vec![0i64; self.e_prime as usize];
        for (b, &n) in mult.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let b = b as u64;
            let idx = (b * self.alpha % self.e_prime) as usize;
            acc[idx] += n * ramanujan_sum(b * self.beta % self.ell.pow(self.a), self.ell, self.a);
        }
        let phi_la = if self.a == 0 { 1 } else { (self.ell.pow(self.a) - self.ell.pow(self.a - 1)) as i64 };
        let reduced = int_poly_rem(&acc, &self.phi_e_prime);
        if reduced.iter().any(|c| c % phi_la != 0) {
            return Err(ModrepError::ProjectorCheck("orbit sum is not invariant under the ramified part".into()));
        }
        let exact: Vec<i64> = reduced.iter().map(|c| c / phi_la).collect();
        let r = OKPoly::from_ints(ring, &exact).rem_monic(ring, &self.factor);
        if r.coeffs.iter().skip(1).any(|c| !ring.is_zero(c)) {
            return Err(ModrepError::ProjectorCheck("orbit sum does not lie in K".into()));
        }
        Ok(r.coeffs.first().copied().unwrap_or_else(|| ring.zero()))
    }
}

/// The nonzero projectors `e_O = (d/|G|) Σ_r S_O(C_r^{-1}) · Σ_{g ∈ C_r} ρ(g)`,
/// checked to be idempotent, complete and `G`-equivariant.
pub fn isotypic_projectors(
    ring: &RingSpec,
    group: &FiniteGroup,
    table: &CharacterTable,
    rep: &LatticeRep,
) -> Result<Vec<IsotypicProjector>> {
    let n = rep.dim();
    let e = table.exponent;
    let ev = OrbitEvaluator::new(ring, e)?;
    let elements: Vec<u32> = group.elements().collect();
    let sums = class_sums(ring, rep, &table.classes, &elements);
    let inv_class: Vec<usize> =
        (0..table.classes.len()).map(|r| table.classes.class_of[group.inv(table.classes.rep(r)) as usize]).collect();
    let order = group.order() as u64;
    let mut out = Vec::new();
    for orbit in galois_orbits(table, ring.ell(), ring.q()) {
        let d = table.characters[orbit[0]].degree;
        let mut m = OKMatrix::zeros(ring, n, n).with_prec(rep.prec());
        for r in 0..table.classes.len() {
            let mut mult = vec![0i64; ev.e as usize];
            for &chi in &orbit {
                for &(b, k) in &table.characters[chi].values[inv_class[r]].terms {
                    mult[b as usize] += k as i64;
                }
            }
            let s = ev.eval(ring, &mult)?;
            if !ring.is_zero(&s) {
                m = m.add(ring, &sums[r].scale(ring, &s));
            }
        }
        let quotient = order / d;
        let v = int_valuation(quotient, ring.ell());
        let u = ring.inv(&ring.from_u64(quotient / ring.ell().pow(v)))?;
        let p = KMatrix::new(ring, m.scale(ring, &u), -(v as i32));
        if !p.is_zero(ring) {
            out.push(IsotypicProjector { characters: orbit, degree: d, matrix: p });
        }
    }
    verify_projectors(ring, group, rep, &out)?;
    Ok(out)
}

fn verify_projectors(ring: &RingSpec, group: &FiniteGroup, rep: &LatticeRep, ps: &[IsotypicProjector]) -> Result<()> {
    let n = rep.dim();
    let mut total = KMatrix::from_integral(OKMatrix::zeros(ring, n, n));
    for p in ps {
        if !p.matrix.mul(ring, &p.matrix).approx_eq(ring, &p.matrix) {
            return Err(ModrepError::ProjectorCheck("projector is not idempotent".into()));
        }
        for g in group.generators() {
            let r = KMatrix::from_integral(rep.image(g).clone());
            if !r.mul(ring, &p.matrix).approx_eq(ring, &p.matrix.mul(ring, &r)) {
                return Err(ModrepError::ProjectorCheck("projector is not equivariant".into()));
            }
        }
        total = total.add(ring, &p.matrix);
    }
    if n > 0 && !total.approx_eq(ring, &KMatrix::identity(ring, n)) {
        return Err(ModrepError::ProjectorCheck("projectors do not sum to the identity".into()));
    }
    Ok(())
}
