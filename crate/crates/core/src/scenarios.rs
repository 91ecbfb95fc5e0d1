//! Built-in problems: the demo families and a seeded random corpus of
//! semidirect products.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groups::{build_family, inertia_split, FamilySpec, FiniteGroup, GroupError, InertiaStructure};
use crate::linalg::poly::{cyclotomic_int, cyclotomic_local_factors};
use crate::linalg::{invariant_forms, j_std, KMatrix, LinalgError, OKMatrix, OKPoly, Parity};
use crate::modrep::{rep_from_input, LatticeRep, ModrepError, Representation};
use crate::padic::{PadicError, RingSpec};
use crate::symplectic::{companion, cyclic_base_embedding, cyclic_group, hyperbolic_double, SymplecticError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} is defined only for ell = {expected}")]
    WrongEll { family: DemoFamily, expected: u64 },
    #[error("no {0} found within the retry budget")]
    SearchFailed(&'static str),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Modrep(#[from] ModrepError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

/// Input to the embedding: a representation over `K` with an invariant
/// nondegenerate alternating form.
#[derive(Clone, Debug)]
pub struct EmbedProblem {
    pub name: String,
    pub ring: RingSpec,
    pub structure: InertiaStructure,
    pub rep: Representation,
    pub form: KMatrix,
}

/// Input to the extension step alone: an `H`-simple lattice with a perfect
/// invariant form.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub ring: RingSpec,
    pub structure: InertiaStructure,
    /// Indexed by the local numbering of `structure.h_group()`.
    pub tau: LatticeRep,
    pub form: OKMatrix,
}

#[derive(Clone, Debug)]
pub enum Demo {
    Embed(EmbedProblem),
    Extension(ExtensionProblem),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoFamily {
    C3xC5,
    Q8,
    C11sd5,
    C41sd5,
    Cyclic25,
    Ell3BudgetProbe,
}

impl DemoFamily {
    pub const ALL: [DemoFamily; 6] = [
        DemoFamily::C3xC5,
        DemoFamily::Q8,
        DemoFamily::C11sd5,
        DemoFamily::C41sd5,
        DemoFamily::Cyclic25,
        DemoFamily::Ell3BudgetProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DemoFamily::C3xC5 => "c3xc5",
            DemoFamily::Q8 => "q8",
            DemoFamily::C11sd5 => "c11sd5",
            DemoFamily::C41sd5 => "c41sd5",
            DemoFamily::Cyclic25 => "cyclic25",
            DemoFamily::Ell3BudgetProbe => "ell3-budget-probe",
        }
    }

    /// Prime used when none is given.
    pub fn default_ell(self) -> u64 {
        match self {
            DemoFamily::Ell3BudgetProbe => 3,
            _ => 5,
        }
    }

    /// Whether the family makes sense for other primes.
    fn fixed_ell(self) -> bool {
        matches!(self, DemoFamily::C11sd5 | DemoFamily::C41sd5 | DemoFamily::Ell3BudgetProbe)
    }
}

impl fmt::Display for DemoFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DemoFamily {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self> {
        DemoFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ScenarioError::UnknownFamily(s.to_string()))
    }
}

/// Build a demo scenario. `ell` defaults to the family's prime.
pub fn build_demo(family: DemoFamily, ell: Option<u64>, precision: u32, seed: u64) -> Result<Demo> {
    let ell = ell.unwrap_or(family.default_ell());
    if family.fixed_ell() && ell != family.default_ell() {
        return Err(ScenarioError::WrongEll { family, expected: family.default_ell() });
    }
    let ring = RingSpec::new(ell, 1, precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match family {
        DemoFamily::C3xC5 => Demo::Embed(c3_times_cyclic(&ring, &mut rng)?),
        DemoFamily::Q8 => Demo::Embed(quaternion(&ring)?),
        DemoFamily::C11sd5 => Demo::Embed(hyperbolic_semidirect(&ring, 11, 3, &mut rng)?),
        DemoFamily::C41sd5 => Demo::Extension(c41_extension(&ring, &mut rng)?),
        DemoFamily::Cyclic25 => Demo::Embed(cyclic_square(&ring, &mut rng)?),
        DemoFamily::Ell3BudgetProbe => Demo::Embed(ell3_probe(&ring, &mut rng)?),
    })
}

fn problem(
    name: String,
    ring: &RingSpec,
    group: FiniteGroup,
    gens: &[(u32, OKMatrix)],
    form: OKMatrix,
) -> Result<EmbedProblem> {
    let gens: Vec<(u32, KMatrix)> = gens.iter().map(|(g, m)| (*g, KMatrix::from_integral(m.clone()))).collect();
    let rep = rep_from_input(ring, &group, &gens)?;
    let structure = inertia_split(&group, ring.ell())?;
    Ok(EmbedProblem { name, ring: ring.clone(), structure, rep, form: KMatrix::from_integral(form) })
}

/// Conjugate by a random matrix of `GL_n(K)`, usually outside `GL_n(O_K)`.
fn scramble<R: Rng + ?Sized>(p: EmbedProblem, rng: &mut R) -> Result<EmbedProblem> {
    let ring = &p.ring;
    let n = p.rep.dim;
    let ell = ring.ell() as i64;
    // At most two coordinates are scaled, keeping det small against the precision.
    let scaled = [rng.gen_range(0..n), rng.gen_range(0..n)];
    let d = OKMatrix::from_fn(ring, n, n, |i, j| {
        if i != j {
            ring.zero()
        } else if scaled.contains(&i) {
            ring.from_int(ell)
        } else {
            ring.one()
        }
    });
    let m = OKMatrix::random_unimodular(ring, n, rng)
        .mul(ring, &d)
        .mul(ring, &OKMatrix::random_unimodular(ring, n, rng));
    let conj = KMatrix::new(ring, m, -1);
    let rep = p.rep.conjugate(ring, &conj)?;
    let form = conj.transpose().mul(ring, &p.form).mul(ring, &conj);
    Ok(EmbedProblem { rep, form, ..p })
}

/// A random `O_K`-combination of `forms` whose determinant has the least
/// valuation among a few draws; a unit determinant ends the search.
fn nondegenerate_combination<R: Rng + ?Sized>(ring: &RingSpec, forms: &[OKMatrix], rng: &mut R) -> Result<OKMatrix> {
    let first = forms.first().ok_or(ScenarioError::SearchFailed("invariant form"))?;
    let mut best: Option<(u32, OKMatrix)> = None;
    for _ in 0..32 {
        let mut f = OKMatrix::zeros(ring, first.rows(), first.cols()).with_prec(first.prec);
        for g in forms {
            f = f.add(ring, &g.scale(ring, &ring.random(rng)));
        }
        let Some(v) = ring.valuation(&f.det(ring)) else { continue };
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, f));
        }
        if v == 0 {
            break;
        }
    }
    best.map(|(_, f)| f).ok_or(ScenarioError::SearchFailed("nondegenerate invariant form"))
}

fn invariant_form<R: Rng + ?Sized>(ring: &RingSpec, m: &OKMatrix, parity: Parity, rng: &mut R) -> Result<OKMatrix> {
    nondegenerate_combination(ring, &invariant_forms(ring, &[KMatrix::from_integral(m.clone())], parity), rng)
}

/// `C_3 × C_ℓ` on a rotation plane plus the cyclotomic block of `C_ℓ`.
fn c3_times_cyclic<R: Rng + ?Sized>(ring: &RingSpec, rng: &mut R) -> Result<EmbedProblem> {
    let ell = ring.ell();
    let g = build_family(&FamilySpec::Semidirect { n: 3, lk: ell, s: 1 })?;
    let base = cyclic_base_embedding(ring, rng)?;
    let d = base.companion.rows();
    let rot = OKMatrix::from_ints(ring, 2, 2, &[0, -1, 1, -1]);
    let h = OKMatrix::block_diag(ring, &[&rot, &OKMatrix::identity(ring, d)]);
    let c = OKMatrix::block_diag(ring, &[&OKMatrix::identity(ring, 2), &base.companion]);
    let form = OKMatrix::block_diag(ring, &[&j_std(ring, 2), &base.gram]);
    problem(format!("c3xc{ell}"), ring, g, &[(1, h), (3, c)], form)
}

/// The 2-dimensional representation of `Q_8`, conjugated by `diag(1/ℓ, 1)`.
fn quaternion(ring: &RingSpec) -> Result<EmbedProblem> {
    let g = build_family(&FamilySpec::Quaternion8)?;
    // a² + b² = −1 has a solution mod ℓ with b ≠ 0 for every odd ℓ ≥ 5.
    let ell = ring.ell() as i64;
    let (a, b) = (0..ell)
        .flat_map(|a| (1..ell).map(move |b| (a, b)))
        .find(|&(a, b)| (a * a + b * b + 1) % ell == 0)
        .ok_or(ScenarioError::SearchFailed("sum of two squares"))?;
    let b = ring.sqrt(&ring.sub(&ring.from_int(-1), &ring.from_int(a * a)))
        .map(|r| if ring.eq_mod(&r, &ring.from_int(b), 1) { r } else { ring.neg(&r) })?;
    let a = ring.from_int(a);
    let mut i = OKMatrix::zeros(ring, 2, 2);
    i.set(0, 0, a);
    i.set(0, 1, b);
    i.set(1, 0, b);
    i.set(1, 1, ring.neg(&a));
    let j = OKMatrix::from_ints(ring, 2, 2, &[0, 1, -1, 0]);
    let p = problem("q8".into(), ring, g, &[(2, i), (4, j)], j_std(ring, 2))?;
    let conj = KMatrix::new(ring, OKMatrix::from_ints(ring, 2, 2, &[1, 0, 0, ring.ell() as i64]), -1);
    let rep = p.rep.conjugate(ring, &conj)?;
    let form = conj.transpose().mul(ring, &p.form).mul(ring, &conj);
    Ok(EmbedProblem { rep, form, ..p })
}

/// Companion matrix of the first local factor of `Φ_n`.
fn cyclotomic_block<R: Rng + ?Sized>(ring: &RingSpec, n: u64, rng: &mut R) -> Result<(OKMatrix, OKPoly)> {
    let g = cyclotomic_local_factors(ring, n, rng)?.remove(0);
    Ok((companion(ring, &g), g))
}

/// `c` acting on `O_K[x]/(g)` by `p(x) ↦ p(x^s)`, where `g | Φ_n` is stable
/// under `x ↦ x^s`.
fn galois_twist(ring: &RingSpec, x: &OKMatrix, n: u64, s: u64) -> OKMatrix {
    let w = x.rows();
    let mut e0 = OKMatrix::zeros(ring, w, 1);
    e0.set(0, 0, ring.one());
    let cols: Vec<_> = (0..w as u64).map(|j| x.pow(ring, ((s * j) % n) as u128).mul(ring, &e0).column(0)).collect();
    OKMatrix::from_columns(ring, w, &cols)
}

/// `C_n ⋊ C_5` on `W ⊕ W*` with the hyperbolic form, `W` a non-self-dual
/// local factor of the cyclotomic module; randomly conjugated over `K`.
pub fn hyperbolic_semidirect<R: Rng + ?Sized>(ring: &RingSpec, n: u64, s: u64, rng: &mut R) -> Result<EmbedProblem> {
    let g = build_family(&FamilySpec::Semidirect { n, lk: 5, s })?;
    let (x, _) = cyclotomic_block(ring, n, rng)?;
    let c = galois_twist(ring, &x, n, s);
    let d = hyperbolic_double(ring, &[x, c])?;
    let p = problem(format!("c{n}sd5_s{s}"), ring, g, &[(1, d.images[0].clone()), (n as u32, d.images[1].clone())], d.gram)?;
    scramble(p, rng)
}

/// `C_n × C_5` on `W ⊗ X`, `W` a self-dual local factor of the cyclotomic
/// module of `C_n` with an alternating form and `X` the cyclotomic block of
/// `C_5` with a symmetric one; randomly conjugated over `K`.
pub fn self_dual_tensor<R: Rng + ?Sized>(ring: &RingSpec, n: u64, rng: &mut R) -> Result<EmbedProblem> {
    let g = build_family(&FamilySpec::Semidirect { n, lk: 5, s: 1 })?;
    let (x, _) = cyclotomic_block(ring, n, rng)?;
    let u = companion(ring, &OKPoly::from_ints(ring, &cyclotomic_int(5)));
    let fw = invariant_form(ring, &x, Parity::Alternating, rng)?;
    let fu = invariant_form(ring, &u, Parity::Symmetric, rng)?;
    let (w, k) = (x.rows(), u.rows());
    let h = x.kron(ring, &OKMatrix::identity(ring, k));
    let c = OKMatrix::identity(ring, w).kron(ring, &u);
    let p = problem(format!("c{n}xc5_tensor"), ring, g, &[(1, h), (n as u32, c)], fw.kron(ring, &fu))?;
    scramble(p, rng)
}

/// `{±1} × C_{ℓ²}` on the cyclotomic module of `C_{ℓ²}`.
fn cyclic_square<R: Rng + ?Sized>(ring: &RingSpec, rng: &mut R) -> Result<EmbedProblem> {
    let ell = ring.ell();
    let g = cyclic_group(ell * ell)?;
    let c = companion(ring, &OKPoly::from_ints(ring, &cyclotomic_int(ell * ell)));
    let n = c.rows();
    let form = invariant_form(ring, &c, Parity::Alternating, rng)?;
    problem(format!("cyclic{}", ell * ell), ring, g, &[(1, OKMatrix::identity(ring, n).neg(ring)), (2, c)], form)
}

/// `C_4 × C_3` at ℓ = 3 on `W ⊗ U`, `W` the rotation plane of `C_4` with
/// its alternating form and `U` the cyclotomic block of `C_3` with a
/// symmetric form.
fn ell3_probe<R: Rng + ?Sized>(ring: &RingSpec, rng: &mut R) -> Result<EmbedProblem> {
    let g = build_family(&FamilySpec::Semidirect { n: 4, lk: 3, s: 1 })?;
    let rot = OKMatrix::from_ints(ring, 2, 2, &[0, -1, 1, 0]);
    let u = companion(ring, &OKPoly::from_ints(ring, &cyclotomic_int(3)));
    let su = invariant_form(ring, &u, Parity::Symmetric, rng)?;
    let h = rot.kron(ring, &OKMatrix::identity(ring, 2));
    let c = OKMatrix::identity(ring, 2).kron(ring, &u);
    problem("ell3-budget-probe".into(), ring, g, &[(1, h), (4, c)], j_std(ring, 2).kron(ring, &su))
}

/// `C_41 ⋊ C_5` with `c h c⁻¹ = h^10` and `H` on a 20-dimensional local
/// factor of the cyclotomic module, with a perfect invariant alternating
/// form.
fn c41_extension<R: Rng + ?Sized>(ring: &RingSpec, rng: &mut R) -> Result<ExtensionProblem> {
    let g = build_family(&FamilySpec::Semidirect { n: 41, lk: 5, s: 10 })?;
    let structure = inertia_split(&g, 5)?;
    let (x, _) = cyclotomic_block(ring, 41, rng)?;
    let forms = invariant_forms(ring, &[KMatrix::from_integral(x.clone())], Parity::Alternating);
    let form = crate::linalg::random_unimodular_combination(ring, &forms, rng, 64)?;
    let (_, emb) = structure.h_group();
    let mut powers = vec![OKMatrix::identity(ring, x.rows())];
    for k in 1..41 {
        powers.push(powers[k - 1].mul(ring, &x));
    }
    let tau = LatticeRep { images: emb.iter().map(|&e| powers[(e % 41) as usize].clone()).collect() };
    Ok(ExtensionProblem { ring: ring.clone(), structure, tau, form })
}

/// Orders `n ≤ 200` of `H` in the random corpus: self-dual constituents
/// with `C_5` acting trivially, and non-self-dual ones where `5` has order
/// 5 mod `n`.
pub const SELF_DUAL_ORDERS: [u64; 4] = [3, 6, 13, 26];
pub const NON_SELF_DUAL_ORDERS: [u64; 5] = [11, 22, 44, 71, 142];

/// Seeded random instance of the corpus at ℓ = 5.
pub fn random_instance(seed: u64, precision: u32) -> Result<EmbedProblem> {
    let ring = RingSpec::new(5, 1, precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.gen_bool(0.5) {
        let n = SELF_DUAL_ORDERS[rng.gen_range(0..SELF_DUAL_ORDERS.len())];
        self_dual_tensor(&ring, n, &mut rng)
    } else {
        let n = NON_SELF_DUAL_ORDERS[rng.gen_range(0..NON_SELF_DUAL_ORDERS.len())];
        let k = rng.gen_range(1..5u32);
        let s = (0..k).fold(1, |acc, _| acc * 5 % n);
        hyperbolic_semidirect(&ring, n, s, &mut rng)
    }
}
