use rand::Rng;

use super::{Result, SymplecticError};
use crate::groups::{conjugacy_classes, InertiaStructure};
use crate::linalg::{has_parity, FqMatrix, OKMatrix, Parity};
use crate::modrep::{centralizer_field, intertwiner, CentralizerData, LatticeRep, ModrepError};
use crate::padic::RingSpec;

/// Intermediate objects of the extension from `H` to `G`, kept so that each
/// identity can be rechecked.
#[derive(Clone, Debug)]
pub struct ExtensionTrace {
    /// `τ(c h c⁻¹) = A τ(h) A⁻¹`.
    pub a_mat: OKMatrix,
    /// `AᵀFA = F·a`.
    pub a: OKMatrix,
    /// `a₁² = a·σ⁻¹(a)` where `σ⁻¹(a) = A⁻¹aA`.
    pub a1: OKMatrix,
    /// `A₁ = A²a₁⁻¹`, preserving `F`.
    pub a1_mat: OKMatrix,
    /// `A₁^#L`.
    pub b: OKMatrix,
    /// Number of roots of unity in `E0`.
    pub mu: u128,
    /// `B = A₁^μ`, with `B^#L = I`.
    pub big_b: OKMatrix,
    /// `2μs ≡ 1 mod #L`; `τ_G(c) = B^s`.
    pub s: u64,
    pub l_order: u64,
    pub e_degree: usize,
    pub e0_degree: usize,
    /// Order of conjugation by `A` on `E`.
    pub iota_order: u64,
    pub parity: Parity,
}

impl ExtensionTrace {
    /// One line per scalar invariant.
    pub fn summary(&self) -> String {
        format!(
            "#L = {}\n[E:K] = {}\n[E0:K] = {}\n#iota(L) = {}\nmu = {}\ns = {}\nparity = {:?}\n",
            self.l_order, self.e_degree, self.e0_degree, self.iota_order, self.mu, self.s, self.parity
        )
    }

    /// Recheck `AᵀFA = F·a`, `a·σ⁻¹(a) = a₁²`, `A₁ᵀFA₁ = F`, `A₁ = A²a₁⁻¹`
    /// and `B^#L = I`.
    pub fn check(&self, ring: &RingSpec, form: &OKMatrix) -> Result<()> {
        let fail = |s: &str| Err(SymplecticError::CheckFailed(s.into()));
        let at = self.a_mat.transpose();
        if !at.mul(ring, form).mul(ring, &self.a_mat).approx_eq(ring, &form.mul(ring, &self.a)) {
            return fail("AᵀFA ≠ F·a");
        }
        let sigma_inv_a = self.a_mat.inv(ring)?.mul(ring, &self.a).mul(ring, &self.a_mat);
        if !self.a.mul(ring, &sigma_inv_a).approx_eq(ring, &self.a1.mul(ring, &self.a1)) {
            return fail("a·σ⁻¹(a) ≠ a₁²");
        }
        let a1_expect = self.a_mat.mul(ring, &self.a_mat).mul(ring, &self.a1.inv(ring)?);
        if !self.a1_mat.approx_eq(ring, &a1_expect) {
            return fail("A₁ ≠ A²a₁⁻¹");
        }
        if !self.a1_mat.transpose().mul(ring, form).mul(ring, &self.a1_mat).approx_eq(ring, form) {
            return fail("A₁ᵀFA₁ ≠ F");
        }
        if !self.big_b.pow(ring, self.l_order as u128).is_identity(ring) {
            return fail("B^#L ≠ I");
        }
        Ok(())
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// Rescale the intertwiner by a unit `e ∈ O_E` so that `(Ae)^#L = I`,
/// solving `N(e) = A^{-#L}` for `N(x) = ∏_{k=1}^{#L} σ^k(x)`: first in the
/// residue field by search, then one ℓ-adic digit at a time through the
/// trace. Returns `A` unchanged when `A^#L` already lies in `E0`.
fn normalize_intertwiner<R: Rng + ?Sized>(
    ring: &RingSpec,
    cd: &CentralizerData,
    a_mat: &OKMatrix,
    l_order: u64,
    iota_order: u64,
    budget: usize,
    rng: &mut R,
) -> Result<OKMatrix> {
    let beta = a_mat.pow(ring, l_order as u128);
    if cd.contains_e0(ring, &beta) {
        return Ok(a_mat.clone());
    }
    let fq = ring.residue_field();
    let a_inv = a_mat.inv(ring)?;
    let sigma = |x: &OKMatrix| a_mat.mul(ring, x).mul(ring, &a_inv);
    let norm = |x: &OKMatrix| {
        let (mut y, mut acc) = (x.clone(), OKMatrix::identity(ring, x.rows()));
        for _ in 0..l_order {
            y = sigma(&y);
            acc = acc.mul(ring, &y);
        }
        acc
    };
    let from_coords = |co: &[crate::padic::OKElem]| {
        let mut m = OKMatrix::zeros(ring, cd.w, cd.w);
        for (c, b) in co.iter().zip(&cd.e_basis) {
            m = m.add(ring, &b.scale(ring, c));
        }
        m
    };
    let fixed_exp = (cd.f() as u64 / iota_order) as u32;
    let order = (ring.q() as u128).checked_pow(fixed_exp).filter(|&n| n <= 1 << 20).ok_or(SymplecticError::NonScalarPower)?;
    let target = beta.inv(ring)?.reduce(ring);
    let mut e = None;
    for _ in 0..budget {
        let x = from_coords(&(0..cd.f()).map(|_| ring.random(rng)).collect::<Vec<_>>());
        if !ring.is_unit(&x.det(ring)) {
            continue;
        }
        let n = norm(&x).reduce(ring);
        let mut p = FqMatrix::identity(fq, cd.w);
        if let Some(k) = (0..order).find(|_| {
            let hit = p == target;
            p = p.mul(fq, &n);
            hit
        }) {
            e = Some(x.pow(ring, k));
            break;
        }
    }
    let mut e = e.ok_or(SymplecticError::NonScalarPower)?;

    let trace = cd
        .matrix_of(ring, |u| {
            let (mut y, mut acc) = (u.clone(), OKMatrix::zeros(ring, cd.w, cd.w));
            for _ in 0..l_order {
                y = sigma(&y);
                acc = acc.add(ring, &y);
            }
            acc
        })
        .ok_or(SymplecticError::NonScalarPower)?
        .reduce(ring);
    let id = OKMatrix::identity(ring, cd.w);
    for _ in 0..ring.precision() {
        let r = beta.mul(ring, &norm(&e)).sub(ring, &id);
        let Some(k) = r.min_valuation(ring).filter(|&k| k < ring.precision()) else { break };
        let y = cd.coords_e(ring, &r.div_ell_pow(ring, k)).reduce(ring);
        let f = cd.f();
        let mut cols: Vec<Vec<_>> = (0..f).map(|j| trace.column(j)).collect();
        cols.push(y.column(0));
        let ker = FqMatrix::from_columns(fq, f, &cols).kernel(fq);
        let v = ker.iter().find(|v| !fq.is_zero(&v[f])).ok_or(SymplecticError::NonScalarPower)?;
        let scale = fq.inv(&v[f])?;
        let x: Vec<_> = v[..f].iter().map(|c| ring.lift(&fq.mul(c, &scale))).collect();
        e = e.mul(ring, &id.add(ring, &from_coords(&x).mul_ell_pow(ring, k)));
    }
    let normalized = a_mat.mul(ring, &e);
    if !normalized.pow(ring, l_order as u128).is_identity(ring) {
        return Err(SymplecticError::NonScalarPower);
    }
    Ok(normalized)
}

fn commutes_with_e(ring: &RingSpec, cd: &CentralizerData, x: &OKMatrix) -> bool {
    cd.e_basis.iter().all(|u| x.mul(ring, u).approx_eq(ring, &u.mul(ring, x)))
}

/// Extend `τ: H → Aut(T, F)` to `τ_G: G → Aut(T, F)`. `tau` is indexed by
/// the local numbering of `structure.h_group()`, `form` must be perfect and
/// `H`-invariant, and `T` must be simple mod ℓ. Returns images of every
/// element of `G`.
pub fn extend_to_g<R: Rng + ?Sized>(
    ring: &RingSpec,
    structure: &InertiaStructure,
    tau: &LatticeRep,
    form: &OKMatrix,
    budget: usize,
    rng: &mut R,
) -> Result<(Vec<OKMatrix>, ExtensionTrace)> {
    let g = &structure.group;
    let (h_group, emb) = structure.h_group();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in emb.iter().enumerate() {
        local[x as usize] = i;
    }
    let parity = if has_parity(ring, form, Parity::Alternating) {
        Parity::Alternating
    } else if has_parity(ring, form, Parity::Symmetric) {
        Parity::Symmetric
    } else {
        return Err(SymplecticError::FormNotPerfect);
    };
    if !ring.is_unit(&form.det(ring)) {
        return Err(SymplecticError::FormNotPerfect);
    }
    let c = structure.c;
    let l_order = structure.l_order();
    let twisted = LatticeRep {
        images: emb.iter().map(|&x| tau.images[local[g.conj(c, x) as usize]].clone()).collect(),
    };

    let a_mat = intertwiner(ring, &h_group, tau, &twisted, budget, rng).map_err(|e| match e {
        ModrepError::NotIsomorphic { hom_dim } => SymplecticError::NotIsomorphicTwist { hom_dim },
        other => other.into(),
    })?;
    let classes = conjugacy_classes(&h_group);
    let cd = centralizer_field(ring, &h_group, &classes, tau, form)?;

    let mut iota_order = 1;
    let mut ak = a_mat.clone();
    while !commutes_with_e(ring, &cd, &ak) {
        ak = ak.mul(ring, &a_mat);
        iota_order += 1;
        if iota_order > l_order {
            return Err(SymplecticError::CheckFailed("conjugation by A has order exceeding #L on E".into()));
        }
    }
    let a_mat = normalize_intertwiner(ring, &cd, &a_mat, l_order, iota_order, budget, rng)?;

    let finv = form.inv(ring)?;
    let a = finv.mul(ring, &a_mat.transpose()).mul(ring, form).mul(ring, &a_mat);
    if !cd.contains_e0(ring, &a) || !ring.is_unit(&a.det(ring)) {
        return Err(SymplecticError::MultiplierEscapesE0);
    }
    let a_inv_mat = a_mat.inv(ring)?;
    let sigma_inv_a = a_inv_mat.mul(ring, &a).mul(ring, &a_mat);
    let a1 = cd.sqrt_e0(ring, &a.mul(ring, &sigma_inv_a))?;
    let a1_mat = a_mat.mul(ring, &a_mat).mul(ring, &a1.inv(ring)?);

    let b = a1_mat.pow(ring, l_order as u128);
    if !cd.contains_e0(ring, &b) {
        return Err(SymplecticError::NonScalarPower);
    }
    let mu = cd.e0_residue_size(ring) - 1;
    let big_b = a1_mat.pow(ring, mu);
    let s = inverse_mod(((2 * mu) % l_order as u128) as u64, l_order).ok_or(SymplecticError::NonScalarPower)?;


    let trace = ExtensionTrace {
        a_mat,
        a,
        a1,
        a1_mat,
        b,
        mu,
        big_b,
        s,
        l_order,
        e_degree: cd.f(),
        e0_degree: cd.f0(),
        iota_order,
        parity,
    };
    trace.check(ring, form)?;

    let gen = trace.big_b.pow(ring, s as u128);
    let mut powers = vec![OKMatrix::identity(ring, tau.dim())];
    for j in 1..l_order as usize {
        powers.push(powers[j - 1].mul(ring, &gen));
    }
    let images: Vec<OKMatrix> = g
        .elements()
        .map(|x| {
            let (h, j) = structure.decompose(x);
            tau.images[local[h as usize]].mul(ring, &powers[j as usize])
        })
        .collect();

    let tc = &images[c as usize];
    let tc_inv = tc.inv(ring)?;
    for (i, &h) in emb.iter().enumerate() {
        let lhs = tc.mul(ring, &tau.images[i]).mul(ring, &tc_inv);
        if !lhs.approx_eq(ring, &tau.images[local[g.conj(c, h) as usize]]) {
            return Err(SymplecticError::CheckFailed(format!("τ_G(c)τ({h})τ_G(c)⁻¹ ≠ τ(c{h}c⁻¹)")));
        }
    }
    if !tc.pow(ring, l_order as u128).is_identity(ring) {
        return Err(SymplecticError::CheckFailed("τ_G(c)^#L ≠ I".into()));
    }
    for m in &images {
        if !m.transpose().mul(ring, form).mul(ring, m).approx_eq(ring, form) {
            return Err(SymplecticError::CheckFailed("τ_G does not preserve the form".into()));
        }
    }
    Ok((images, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, inertia_split, FamilySpec};
    use crate::linalg::poly::cyclotomic_local_factors;
    use crate::linalg::{invariant_forms, j_std, random_unimodular_combination, KMatrix};
    use crate::symplectic::cyclic::companion;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_mod_cases() {
        assert_eq!(inverse_mod(8, 5), Some(2));
        assert_eq!(inverse_mod(0, 1), Some(0));
        assert_eq!(inverse_mod(5, 25), None);
    }

    #[test]
    fn trivial_action_collapses() {
        // G = C3 × C5 with H = C3 acting on a plane; c centralizes H.
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let g = build_family(&FamilySpec::Semidirect { n: 3, lk: 5, s: 1 }).unwrap();
        let st = inertia_split(&g, 5).unwrap();
        let (_, emb) = st.h_group();
        let r = OKMatrix::from_ints(&ring, 2, 2, &[0, -1, 1, -1]);
        let tau = LatticeRep { images: emb.iter().map(|&x| r.pow(&ring, (x % 3) as u128)).collect() };
        let f = j_std(&ring, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (images, trace) = extend_to_g(&ring, &st, &tau, &f, 8, &mut rng).unwrap();
        assert!(trace.a_mat.is_identity(&ring));
        assert!(trace.a.is_identity(&ring));
        assert!(trace.big_b.is_identity(&ring));
        assert!(images[st.c as usize].is_identity(&ring));
    }

    #[test]
    fn twist_not_isomorphic() {
        // ℓ = 7 has order 6 mod 43, so Φ43 has seven sextic factors over Q7,
        // permuted transitively by an action of order 7; c moves W off itself.
        let ring = RingSpec::new(7, 1, 8).unwrap();
        let s = (2..43u64).find(|&s| (1..=7).fold(1, |acc, _| acc * s % 43) == 1).unwrap();
        let g = build_family(&FamilySpec::Semidirect { n: 43, lk: 7, s }).unwrap();
        let st = inertia_split(&g, 7).unwrap();
        let (_, emb) = st.h_group();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let factor = cyclotomic_local_factors(&ring, 43, &mut rng).unwrap().remove(0);
        let w = companion(&ring, &factor);
        let tau = LatticeRep { images: emb.iter().map(|&x| w.pow(&ring, (x % 43) as u128)).collect() };
        let forms = invariant_forms(&ring, &[KMatrix::from_integral(w.clone())], Parity::Alternating);
        let f = random_unimodular_combination(&ring, &forms, &mut rng, 16).unwrap();
        assert!(matches!(
            extend_to_g(&ring, &st, &tau, &f, 4, &mut rng),
            Err(SymplecticError::NotIsomorphicTwist { hom_dim: 0 })
        ));
    }
}
