//! The commutant `E = End_H(W)` of an `H`-simple lattice, its fixed field
//! `E0` under the adjoint involution of an invariant form, and
//! intertwiners between isomorphic representations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rep::{class_sums, LatticeRep};
use super::{ModrepError, Result};
use crate::groups::{ConjugacyClasses, FiniteGroup};
use crate::linalg::solve::image;
use crate::linalg::{kernel, FqMatrix, OKMatrix, Subspace};
use crate::padic::{PadicError, RingSpec};

/// `O_E` as an `O_K`-order of `w × w` matrices, with the involution
/// `u ↦ F⁻¹ uᵀ F` and its fixed ring `O_{E0}`.
#[derive(Clone, Debug)]
pub struct CentralizerData {
    pub w: usize,
    pub e_basis: Vec<OKMatrix>,
    e_sub: Subspace,
    /// Matrix of the involution in the coordinates of `e_basis`.
    pub involution: OKMatrix,
    pub e0_basis: Vec<OKMatrix>,
    e0_sub: Subspace,
}

fn as_column(m: &OKMatrix) -> OKMatrix {
    OKMatrix::from_data(m.rows() * m.cols(), 1, m.flatten(), m.prec)
}

fn columns_as_matrices(basis: &OKMatrix, w: usize) -> Vec<OKMatrix> {
    (0..basis.cols())
        .map(|j| OKMatrix::from_data(w, w, basis.column(j), basis.prec))
        .collect()
}

fn fq_pow(fq: &crate::padic::ResidueField, m: &FqMatrix, mut e: u128) -> FqMatrix {
    let mut base = m.clone();
    let mut acc = FqMatrix::identity(fq, m.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(fq, &base);
        }
        base = base.mul(fq, &base);
        e >>= 1;
    }
    acc
}

impl CentralizerData {
    pub fn f(&self) -> usize {
        self.e_basis.len()
    }

    pub fn f0(&self) -> usize {
        self.e0_basis.len()
    }

    pub fn contains_e(&self, ring: &RingSpec, u: &OKMatrix) -> bool {
        self.e_sub.contains(ring, &as_column(u))
    }

    pub fn contains_e0(&self, ring: &RingSpec, u: &OKMatrix) -> bool {
        self.e0_sub.contains(ring, &as_column(u))
    }

    /// Coordinates of an element of `O_E` in `e_basis`.
    pub fn coords_e(&self, ring: &RingSpec, u: &OKMatrix) -> OKMatrix {
        self.e_sub.coords(ring, &as_column(u))
    }

    pub fn coords_e0(&self, ring: &RingSpec, u: &OKMatrix) -> OKMatrix {
        self.e0_sub.coords(ring, &as_column(u))
    }

    /// Matrix of `x ↦ ψ(x)` on `E` for a `K`-linear map `ψ` preserving `E`.
    pub fn matrix_of(&self, ring: &RingSpec, psi: impl Fn(&OKMatrix) -> OKMatrix) -> Option<OKMatrix> {
        let cols: Vec<OKMatrix> = self.e_basis.iter().map(psi).collect();
        if !cols.iter().all(|c| self.contains_e(ring, c)) {
            return None;
        }
        let f = self.f();
        let mut m = OKMatrix::zeros(ring, f, f);
        for (j, c) in cols.iter().enumerate() {
            let x = self.coords_e(ring, c);
            for i in 0..f {
                m.set(i, j, *x.get(i, 0));
            }
        }
        Some(m.with_prec(cols.iter().map(|c| c.prec).min().unwrap_or(ring.precision())))
    }

    /// Size of the residue field of `E0`.
    pub fn e0_residue_size(&self, ring: &RingSpec) -> u128 {
        (ring.q() as u128).pow(self.f0() as u32)
    }

    /// A square root in `O_{E0}` of a unit `a ∈ O_{E0}`: Tonelli–Shanks in
    /// the residue field, the root with the lexicographically smaller
    /// residue coordinates, then Newton's iteration.
    pub fn sqrt_e0(&self, ring: &RingSpec, a: &OKMatrix) -> Result<OKMatrix> {
        let fq = ring.residue_field();
        let abar = a.reduce(ring);
        if abar.is_zero(fq) {
            return Err(PadicError::ZeroInput.into());
        }
        let big_q = self.e0_residue_size(ring);
        let mut odd = big_q - 1;
        let mut s = 0u32;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let id = FqMatrix::identity(fq, self.w);
        if fq_pow(fq, &abar, (big_q - 1) / 2) != id {
            return Err(PadicError::NonResidue.into());
        }
        let basis_bar: Vec<FqMatrix> = self.e0_basis.iter().map(|b| b.reduce(ring)).collect();
        let q = ring.q() as u128;
        let f0 = self.f0();
        let z = (1..big_q)
            .map(|k| {
                let mut m = FqMatrix::zeros(fq, self.w, self.w);
                let mut rest = k;
                for i in (0..f0).rev() {
                    let digit = (rest % q) as u64;
                    rest /= q;
                    m = m.add(fq, &basis_bar[i].scale(fq, &fq.element(digit)));
                }
                m
            })
            .find(|m| fq_pow(fq, m, (big_q - 1) / 2) != id)
            .expect("odd residue field has non-residues");
        let mut m = s;
        let mut c = fq_pow(fq, &z, odd);
        let mut t = fq_pow(fq, &abar, odd);
        let mut r = fq_pow(fq, &abar, odd.div_ceil(2));
        while t != id {
            let mut i = 0;
            let mut t2 = t.clone();
            while t2 != id {
                t2 = t2.mul(fq, &t2);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.mul(fq, &b);
            }
            m = i;
            c = b.mul(fq, &b);
            t = t.mul(fq, &c);
            r = r.mul(fq, &b);
        }
        let neg = r.scale(fq, &fq.from_int(-1));
        let key = |x: &FqMatrix| -> Vec<u64> {
            let co = self.coords_e0(ring, &OKMatrix::lift(ring, x));
            (0..co.rows()).flat_map(|i| fq.coeffs(&ring.residue(co.get(i, 0))).to_vec()).collect()
        };
        let r = if key(&neg) < key(&r) { neg } else { r };
        let half = ring.inv(&ring.from_int(2))?;
        // Project the lift onto O_{E0} so that the iterates commute with `a`.
        let co = self.coords_e0(ring, &OKMatrix::lift(ring, &r));
        let mut y = OKMatrix::zeros(ring, self.w, self.w).with_prec(a.prec);
        for (i, b) in self.e0_basis.iter().enumerate() {
            y = y.add(ring, &b.scale(ring, co.get(i, 0)));
        }
        for _ in 0..64 {
            if y.mul(ring, &y).approx_eq(ring, a) {
                return Ok(y);
            }
            let yinv = y.inv(ring)?;
            y = y.add(ring, &a.mul(ring, &yinv)).scale(ring, &half);
        }
        Err(ModrepError::NotUnramified("square-root iteration did not converge".into()))
    }
}

/// Dimension over `F_q` of `{X ∈ F_q^{n×m} : X·a_i = b_i·X for all i}`.
pub fn commutant_dim_mod_ell(
    fq: &crate::padic::ResidueField,
    (n, m): (usize, usize),
    a: &[FqMatrix],
    b: &[FqMatrix],
) -> usize {
    let unknowns = n * m;
    let mut sys = FqMatrix::zeros(fq, a.len() * unknowns, unknowns);
    for (g, (ai, bi)) in a.iter().zip(b).enumerate() {
        for i in 0..n {
            for j in 0..m {
                let row = g * unknowns + i * m + j;
                for k in 0..m {
                    let col = i * m + k;
                    let v = fq.add(sys.get(row, col), ai.get(k, j));
                    sys.set(row, col, v);
                }
                for k in 0..n {
                    let col = k * m + j;
                    let v = fq.sub(sys.get(row, col), bi.get(i, k));
                    sys.set(row, col, v);
                }
            }
        }
    }
    unknowns - sys.rank(fq)
}

/// Compute `O_E` as the saturated span of the class sums of `H` acting on
/// `W`, and check that it is a commutative unramified field of degree equal
/// to the commutant mod ℓ, closed under the adjoint involution of `form`.
pub fn centralizer_field(
    ring: &RingSpec,
    h_group: &FiniteGroup,
    classes: &ConjugacyClasses,
    tau: &LatticeRep,
    form: &OKMatrix,
) -> Result<CentralizerData> {
    let w = tau.dim();
    let fq = ring.residue_field();
    let elements: Vec<u32> = h_group.elements().collect();
    let sums = class_sums(ring, tau, classes, &elements);
    let mut flat = OKMatrix::zeros(ring, w * w, 0);
    for s in &sums {
        flat = flat.hstack(&as_column(s));
    }
    let e_basis_mat = image(ring, &flat)?;
    let e_sub = Subspace::new(ring, e_basis_mat.clone())?;
    let e_basis = columns_as_matrices(&e_basis_mat, w);
    let f = e_basis.len();

    for (i, x) in e_basis.iter().enumerate() {
        for y in &e_basis[i + 1..] {
            if !x.mul(ring, y).approx_eq(ring, &y.mul(ring, x)) {
                return Err(ModrepError::NotCommutative);
            }
        }
        for g in h_group.generators() {
            if !x.mul(ring, tau.image(g)).approx_eq(ring, &tau.image(g).mul(ring, x)) {
                return Err(ModrepError::NotCommutative);
            }
        }
    }

    let gens: Vec<FqMatrix> = h_group.generators().iter().map(|&g| tau.image(g).reduce(ring)).collect();
    let comm = commutant_dim_mod_ell(fq, (w, w), &gens, &gens);
    if comm != f {
        return Err(ModrepError::NotUnramified(format!("commutant mod ell has dimension {comm}, expected {f}")));
    }

    let mut data = CentralizerData {
        w,
        e_basis,
        e_sub: e_sub.clone(),
        involution: OKMatrix::identity(ring, f),
        e0_basis: Vec::new(),
        e0_sub: e_sub,
    };
    check_residue_field(ring, &data)?;

    let finv = form.inv(ring)?;
    let inv = data
        .matrix_of(ring, |u| finv.mul(ring, &u.transpose()).mul(ring, form))
        .ok_or(ModrepError::InvolutionEscapesE)?;
    let fixed = kernel(ring, &inv.sub(ring, &OKMatrix::identity(ring, f)));
    let e0_flat = e_basis_mat.mul(ring, &fixed);
    data.e0_sub = Subspace::new(ring, e0_flat.clone())?;
    data.e0_basis = columns_as_matrices(&e0_flat, w);
    data.involution = inv;
    Ok(data)
}

/// Look for an element of `O_E` whose multiplication has an irreducible
/// characteristic polynomial of degree `f` mod ℓ, so that `O_E/ℓ` is the
/// field `F_{q^f}`.
fn check_residue_field(ring: &RingSpec, data: &CentralizerData) -> Result<()> {
    let fq = ring.residue_field();
    let f = data.f();
    let mut rng = ChaCha8Rng::seed_from_u64(f as u64);
    let mult = |u: &OKMatrix| data.matrix_of(ring, |b| u.mul(ring, b));
    let candidates = data.e_basis.clone().into_iter().chain((0..32).map(|_| {
        data.e_basis.iter().fold(OKMatrix::zeros(ring, data.w, data.w), |acc, b| {
            acc.add(ring, &b.scale(ring, &ring.random(&mut rng)))
        })
    }));
    for u in candidates {
        if let Some(m) = mult(&u) {
            let cp = m.reduce(ring).charpoly(fq);
            if cp.deg() == f && cp.is_irreducible(fq) {
                return Ok(());
            }
        }
    }
    Err(ModrepError::NotUnramified("no generator of the residue field of E found".into()))
}

/// `A` with `τ'(h)·A = A·τ(h)` for all `h` and `det A` a unit, by averaging
/// matrices over `H`.
pub fn intertwiner<R: Rng + ?Sized>(
    ring: &RingSpec,
    h_group: &FiniteGroup,
    tau: &LatticeRep,
    tau_prime: &LatticeRep,
    budget: usize,
    rng: &mut R,
) -> Result<OKMatrix> {
    let (w, wp) = (tau.dim(), tau_prime.dim());
    let hom_dim = || {
        let fq = ring.residue_field();
        let gens = h_group.generators();
        let a: Vec<FqMatrix> = gens.iter().map(|&g| tau.image(g).reduce(ring)).collect();
        let b: Vec<FqMatrix> = gens.iter().map(|&g| tau_prime.image(g).reduce(ring)).collect();
        commutant_dim_mod_ell(fq, (wp, w), &a, &b)
    };
    if w != wp {
        return Err(ModrepError::NotIsomorphic { hom_dim: hom_dim() });
    }
    let inv_order = ring.inv(&ring.from_u64(h_group.order() as u64))?;
    // The identity is tried first so that equal representations give A = I.
    for attempt in 0..=budget {
        let x = if attempt == 0 { OKMatrix::identity(ring, w) } else { OKMatrix::random(ring, w, w, rng) };
        let mut acc = OKMatrix::zeros(ring, w, w).with_prec(tau.prec().min(tau_prime.prec()));
        for h in h_group.elements() {
            acc = acc.add(ring, &tau_prime.image(h).mul(ring, &x).mul(ring, tau.image(h_group.inv(h))));
        }
        let acc = acc.scale(ring, &inv_order);
        if ring.is_unit(&acc.det(ring)) {
            for h in h_group.elements() {
                if !tau_prime.image(h).mul(ring, &acc).approx_eq(ring, &acc.mul(ring, tau.image(h))) {
                    return Err(ModrepError::ProjectorCheck("averaged map is not an intertwiner".into()));
                }
            }
            return Ok(acc);
        }
    }
    Err(ModrepError::NotIsomorphic { hom_dim: hom_dim() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, conjugacy_classes, FamilySpec};
    use crate::linalg::{invariant_forms, KMatrix, Parity};

    /// `C_n` acting on `K[x]/(g)` by multiplication by `x`.
    fn companion_rep(ring: &RingSpec, g: &FiniteGroup, poly: &[i64]) -> LatticeRep {
        let d = poly.len() - 1;
        let c = OKMatrix::from_fn(ring, d, d, |i, j| {
            if j == d - 1 {
                ring.from_int(-poly[i])
            } else if i == j + 1 {
                ring.one()
            } else {
                ring.zero()
            }
        });
        LatticeRep { images: g.elements().map(|x| c.pow(ring, x as u128)).collect() }
    }

    #[test]
    fn cyclic_three_over_q5_has_quadratic_centralizer() {
        // Φ_3 = x² + x + 1 is irreducible mod 5.
        let ring = RingSpec::new(5, 1, 12).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        let tau = companion_rep(&ring, &g, &[1, 1, 1]);
        let gens: Vec<KMatrix> = vec![KMatrix::from_integral(tau.image(1).clone())];
        let forms = invariant_forms(&ring, &gens, Parity::Alternating);
        assert_eq!(forms.len(), 1);
        let cd = centralizer_field(&ring, &g, &conjugacy_classes(&g), &tau, &forms[0]).unwrap();
        assert_eq!(cd.f(), 2);
        // The adjoint involution of an alternating form on a 2-dim space
        // inverts the rotation, so E0 = K.
        assert_eq!(cd.f0(), 1);
        let a = OKMatrix::scalar(&ring, 2, &ring.from_int(4));
        let r = cd.sqrt_e0(&ring, &a).unwrap();
        assert!(r.mul(&ring, &r).approx_eq(&ring, &a));
        assert_eq!(*r.get(0, 0), ring.from_int(2));
    }

    #[test]
    fn sqrt_picks_lexicographically_smaller_root() {
        // 4 ≡ 2² ≡ 3² mod 5; the residue 2 is the smaller.
        let ring = RingSpec::new(5, 1, 10).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 1 }).unwrap();
        let tau = LatticeRep { images: vec![OKMatrix::identity(&ring, 1)] };
        let f = OKMatrix::identity(&ring, 1);
        let cd = centralizer_field(&ring, &g, &conjugacy_classes(&g), &tau, &f).unwrap();
        let a = OKMatrix::scalar(&ring, 1, &ring.from_int(-1));
        let r = cd.sqrt_e0(&ring, &a).unwrap();
        assert_eq!(ring.residue(r.get(0, 0)), ring.residue_field().from_int(2));
        let nonres = OKMatrix::scalar(&ring, 1, &ring.from_int(2));
        assert!(matches!(cd.sqrt_e0(&ring, &nonres), Err(ModrepError::Linalg(_))));
    }

    #[test]
    fn intertwiner_and_non_isomorphic() {
        let ring = RingSpec::new(5, 1, 10).unwrap();
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        let tau = companion_rep(&ring, &g, &[1, 1, 1]);
        let p = OKMatrix::from_ints(&ring, 2, 2, &[1, 2, 3, 4]);
        let pinv = p.inv(&ring).unwrap();
        let conj = LatticeRep { images: tau.images.iter().map(|m| p.mul(&ring, m).mul(&ring, &pinv)).collect() };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = intertwiner(&ring, &g, &tau, &conj, 16, &mut rng).unwrap();
        assert!(ring.is_unit(&a.det(&ring)));
        let triv = LatticeRep { images: vec![OKMatrix::identity(&ring, 2); 3] };
        assert!(matches!(
            intertwiner(&ring, &g, &tau, &triv, 4, &mut rng),
            Err(ModrepError::NotIsomorphic { hom_dim: 0 })
        ));
    }
}
