use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::certificate::{verify_certificate, SymplecticCertificate, SymplecticPiece};
use super::cyclic::cyclic_embedding;
use super::decompose::{decompose_symplectic_g, PieceKind};
use super::extension::extend_to_g;
use super::hyperbolic::hyperbolic_double;
use super::induce::induce_symplectic;
use super::{Result, SymplecticError};
use crate::groups::{character_table_dixon, inertia_split, InertiaStructure};
use crate::linalg::{
    form_normalize, has_parity, invariant_forms, symplectic_basis, KMatrix, OKMatrix, Parity,
};
use crate::modrep::{
    isotypic_projectors, lattice_rep, meataxe_is_simple, simple_split, stabilize_lattice, LatticeRep,
    Representation, DEFAULT_BUDGET,
};
use crate::padic::RingSpec;

#[derive(Clone, Debug)]
pub struct EmbedOptions {
    pub seed: u64,
    /// Allow ℓ = 3, outside the range covered by the dimension budget.
    pub force: bool,
    /// Retry budget for randomized searches.
    pub budget: usize,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions { seed: 0, force: false, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCheck {
    pub relation: String,
    pub holds: bool,
}

/// Parameters of one branch of the construction and the inequalities
/// checked there.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub path: String,
    /// Order of the group acting on this piece.
    pub group_order: usize,
    pub dim: usize,
    pub w: Option<usize>,
    pub r: Option<usize>,
    /// `#L0 = ℓ^t`.
    pub t: Option<u32>,
    pub e0_degree: Option<usize>,
    pub iota_order: Option<u64>,
    pub l_order: u64,
    pub checks: Vec<LedgerCheck>,
}

impl LedgerRecord {
    fn check(&mut self, relation: String, holds: bool) -> bool {
        self.checks.push(LedgerCheck { relation, holds });
        holds
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionLedger {
    pub records: Vec<LedgerRecord>,
}

impl AssertionLedger {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.checks.iter().all(|c| c.holds))
    }
}

fn phi_prime_power(ell: u64, k: u32) -> u64 {
    if k == 0 {
        1
    } else {
        (ell - 1) * ell.pow(k - 1)
    }
}

struct Ctx {
    budget: usize,
    rng: ChaCha8Rng,
    ledger: AssertionLedger,
}

/// Build `G ↪ Sp_2d(O_K)` from a faithful representation over `K` with an
/// invariant nondegenerate alternating form, and verify the result.
pub fn embed_inertia_group(
    ring: &RingSpec,
    structure: &InertiaStructure,
    rep: &Representation,
    form: &KMatrix,
    opts: &EmbedOptions,
) -> Result<SymplecticCertificate> {
    let ell = ring.ell();
    if ell == 2 {
        return Err(SymplecticError::BadForm("ell must be odd".into()));
    }
    if ell == 3 && !opts.force {
        return Err(SymplecticError::ForceRequired);
    }
    let g = &structure.group;
    let n = rep.dim;
    if n % 2 == 1 || form.rows() != n || form.cols() != n {
        return Err(SymplecticError::BadForm(format!("form of size {}x{} on a space of dimension {n}", form.rows(), form.cols())));
    }
    if !has_parity(ring, &form.integral, Parity::Alternating) {
        return Err(SymplecticError::BadForm("not alternating".into()));
    }
    if form.is_zero(ring) || ring.valuation(&form.integral.det(ring)).is_none() {
        return Err(SymplecticError::BadForm("degenerate".into()));
    }
    for x in g.elements() {
        let m = rep.image(x);
        if !m.transpose().mul(ring, form).mul(ring, m).approx_eq(ring, form) {
            return Err(SymplecticError::BadForm(format!("not invariant under element {x}")));
        }
    }
    let id = KMatrix::identity(ring, n);
    if let Some(x) = g.elements().find(|&x| x != g.identity() && rep.image(x).approx_eq(ring, &id)) {
        return Err(SymplecticError::NotFaithful(x));
    }

    let elements: Vec<u32> = g.elements().collect();
    let lattice = stabilize_lattice(ring, rep, &elements)?;
    let lrep = lattice_rep(ring, rep, &lattice)?;
    let e = lattice.basis.transpose().mul(ring, form).mul(ring, &lattice.basis).normalized(ring).integral;

    let mut ctx = Ctx { budget: opts.budget, rng: ChaCha8Rng::seed_from_u64(opts.seed), ledger: AssertionLedger::default() };
    let table = character_table_dixon(g)?;
    let pieces = decompose_symplectic_g(ring, g, &table, &lrep, &e, ctx.budget, &mut ctx.rng)?;

    let mut total = SymplecticPiece::empty(ring, g.order());
    for piece in &pieces {
        let sub_rep = lrep.restrict(ring, &piece.sub);
        let built = match piece.kind {
            PieceKind::Flagged => {
                let d = hyperbolic_double(ring, &sub_rep.images)?;
                ctx.ledger.records.push(LedgerRecord {
                    path: "hyperbolic".into(),
                    group_order: g.order(),
                    dim: d.dim(),
                    l_order: structure.l_order(),
                    ..Default::default()
                });
                d
            }
            PieceKind::Simple => embed_piece(ring, structure, &sub_rep, &piece.form, &mut ctx)?,
        };
        total = total.direct_sum(ring, &built);
    }
    if total.dim() > n {
        return Err(SymplecticError::BudgetViolation(format!("pieces need dimension {} > {n}", total.dim())));
    }
    let padded = total.pad(ring, n)?;
    let s = symplectic_basis(ring, &padded.gram)?;
    let standard = padded.change_basis(ring, &s)?;
    let cert = SymplecticCertificate::new(ring, structure.clone(), &standard, ctx.ledger)?;
    let report = verify_certificate(&cert);
    if let Some(bad) = report.failed().next() {
        return Err(SymplecticError::CheckFailed(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(cert)
}

/// Embed a `G`-lattice whose span is a simple `G`-module carrying the
/// nondegenerate invariant alternating form `form`; the result has the
/// same kernel as `rep`.
fn embed_piece(
    ring: &RingSpec,
    st: &InertiaStructure,
    rep: &LatticeRep,
    form: &OKMatrix,
    ctx: &mut Ctx,
) -> Result<SymplecticPiece> {
    let g = &st.group;
    let kernel = rep.kernel(ring);
    if kernel.len() == 1 {
        return embed_faithful(ring, st, rep, form, ctx);
    }
    let (q, proj) = g.quotient(&kernel);
    let mut images = vec![None; q.order()];
    for x in g.elements() {
        images[proj[x as usize] as usize].get_or_insert_with(|| rep.image(x).clone());
    }
    let qrep = LatticeRep { images: images.into_iter().map(Option::unwrap).collect() };
    let qst = inertia_split(&q, ring.ell())?;
    Ok(embed_faithful(ring, &qst, &qrep, form, ctx)?.pull_back(&proj))
}

fn embed_faithful(
    ring: &RingSpec,
    st: &InertiaStructure,
    rep: &LatticeRep,
    form: &OKMatrix,
    ctx: &mut Ctx,
) -> Result<SymplecticPiece> {
    let g = &st.group;
    let fq = ring.residue_field();
    let n = rep.dim();
    let (h_group, h_emb) = st.h_group();
    let h_rep = LatticeRep { images: h_emb.iter().map(|&x| rep.image(x).clone()).collect() };
    let mut record = LedgerRecord { group_order: g.order(), l_order: st.l_order(), ..Default::default() };

    let h_gens: Vec<_> = h_group.generators().iter().map(|&x| h_rep.image(x).reduce(ring)).collect();
    if meataxe_is_simple(fq, &h_gens, ctx.budget, &mut ctx.rng)?.is_simple() {
        let normalized = form_normalize(ring, &KMatrix::from_integral(form.clone()), &KMatrix::identity(ring, n))?;
        record.path = "h_simple".into();
        record.dim = n;
        ctx.ledger.records.push(record);
        return Ok(SymplecticPiece { images: rep.images.clone(), gram: normalized.gram });
    }

    let h_table = character_table_dixon(&h_group)?;
    let projectors = isotypic_projectors(ring, &h_group, &h_table, &h_rep)?;
    if projectors.len() > 1 {
        return induced_branch(ring, st, rep, &projectors[0].image(ring)?, ctx, record);
    }

    let simple_dim = projectors[0].characters.len() * projectors[0].degree as usize;
    let w_sub = simple_split(ring, &h_group, &h_rep, simple_dim, ctx.budget, &mut ctx.rng)?.remove(0);
    let tau = h_rep.restrict(ring, &w_sub);
    let w = tau.dim();
    let r = n / w;
    record.w = Some(w);
    record.r = Some(r);
    let ell = ring.ell();

    if w == 1 {
        return cyclic_branch(ring, st, &tau, n, ctx, record, "cyclic_w1");
    }

    let tau_gens: Vec<KMatrix> =
        h_group.generators().iter().map(|&x| KMatrix::from_integral(tau.image(x).clone())).collect();
    let forms = {
        let alt = invariant_forms(ring, &tau_gens, Parity::Alternating);
        if alt.is_empty() {
            invariant_forms(ring, &tau_gens, Parity::Symmetric)
        } else {
            alt
        }
    };
    let f = forms
        .first()
        .ok_or_else(|| SymplecticError::CheckFailed("simple H-constituent is not self-dual".into()))?;
    let f = form_normalize(ring, &KMatrix::from_integral(f.clone()), &KMatrix::identity(ring, w))?.gram;
    let (images, trace) = extend_to_g(ring, st, &tau, &f, ctx.budget, &mut ctx.rng)?;
    record.e0_degree = Some(trace.e0_degree);
    record.iota_order = Some(trace.iota_order);
    record.check(format!("#iota(L) = {} divides [E0:K] = {}", trace.iota_order, trace.e0_degree), (trace.e0_degree as u64).is_multiple_of(trace.iota_order));

    let tau_piece = match trace.parity {
        Parity::Alternating => SymplecticPiece { images, gram: f },
        Parity::Symmetric => hyperbolic_double(ring, &images)?,
    };
    if tau_piece.is_injective(ring) {
        record.path = format!("extension_{:?}", trace.parity).to_lowercase();
        record.dim = tau_piece.dim();
        ctx.ledger.records.push(record);
        return Ok(tau_piece);
    }

    let kernel = tau_piece.kernel(ring);
    for &k in &kernel {
        let central = g.elements().all(|x| g.mul(x, k) == g.mul(k, x));
        if !central || st.decompose(k).0 != g.identity() {
            return Err(SymplecticError::CheckFailed(format!("kernel element {k} of τ_G is not central in L")));
        }
    }
    if trace.e0_degree == w {
        return cyclic_branch(ring, st, &tau, n, ctx, record, "cyclic_e0_line");
    }

    let l_order = st.l_order();
    let l0 = l_order / trace.iota_order;
    let t = l0.trailing_zeros_in(ell);
    record.t = Some(t);
    let phi_l = phi_prime_power(ell, st.k);
    let mut ok = true;
    ok &= record.check(
        format!("#iota(L) = {} <= [E0:K] = {} <= w/2 = {}", trace.iota_order, trace.e0_degree, w / 2),
        trace.iota_order <= trace.e0_degree as u64 && 2 * trace.e0_degree <= w,
    );
    ok &= record.check(format!("r = {r} >= phi(ell^t) = {}", phi_prime_power(ell, t)), r as u64 >= phi_prime_power(ell, t));
    ok &= record.check(format!("2w + phi(#L) = {} <= rw = {n}", 2 * w as u64 + phi_l), 2 * w as u64 + phi_l <= n as u64);
    if !ok {
        let failed: Vec<&str> = record.checks.iter().filter(|c| !c.holds).map(|c| c.relation.as_str()).collect();
        return Err(SymplecticError::BudgetViolation(failed.join("; ")));
    }
    let cyc = cyclic_embedding(ring, st.k, &mut ctx.rng)?;
    let psi_map: Vec<u32> = g.elements().map(|x| 2 * st.decompose(x).1).collect();
    let out = tau_piece.direct_sum(ring, &cyc.pull_back(&psi_map));
    record.path = "extension_plus_cyclic".into();
    record.dim = out.dim();
    ctx.ledger.records.push(record);
    if !out.is_injective(ring) {
        return Err(SymplecticError::CheckFailed("τ_G ⊕ ψ is not injective mod ell".into()));
    }
    Ok(out)
}

trait EllValuation {
    fn trailing_zeros_in(self, ell: u64) -> u32;
}

impl EllValuation for u64 {
    fn trailing_zeros_in(mut self, ell: u64) -> u32 {
        let mut k = 0;
        while self > 1 && self.is_multiple_of(ell) {
            self /= ell;
            k += 1;
        }
        k
    }
}

/// `H` acts through `{±1}`: embed `G → {±1} × L` and use the cyclic
/// construction.
fn cyclic_branch(
    ring: &RingSpec,
    st: &InertiaStructure,
    tau: &LatticeRep,
    n: usize,
    ctx: &mut Ctx,
    mut record: LedgerRecord,
    path: &str,
) -> Result<SymplecticPiece> {
    let g = &st.group;
    let w = tau.dim();
    let minus = OKMatrix::identity(ring, w).neg(ring);
    let (_, h_emb) = st.h_group();
    let mut sign = vec![0u32; g.order()];
    for (i, &h) in h_emb.iter().enumerate() {
        let m = tau.image(i as u32);
        sign[h as usize] = if m.is_identity(ring) {
            0
        } else if m.approx_eq(ring, &minus) {
            1
        } else {
            return Err(SymplecticError::CheckFailed(format!("H does not act through ±1 (element {h})")));
        };
    }
    let map: Vec<u32> = g
        .elements()
        .map(|x| {
            let (h, j) = st.decompose(x);
            sign[h as usize] + 2 * j
        })
        .collect();
    let cyc = cyclic_embedding(ring, st.k, &mut ctx.rng)?;
    record.path = path.into();
    record.dim = cyc.dim();
    record.check(format!("cyclic dimension {} <= {n}", cyc.dim()), cyc.dim() <= n);
    if cyc.dim() > n {
        return Err(SymplecticError::BudgetViolation(format!("cyclic embedding needs dimension {} > {n}", cyc.dim())));
    }
    ctx.ledger.records.push(record);
    let out = cyc.pull_back(&map);
    if !out.is_injective(ring) {
        return Err(SymplecticError::CheckFailed("cyclic embedding is not injective on G".into()));
    }
    Ok(out)
}

/// Several `H`-isotypic components: recurse on the stabilizer of one and
/// induce.
fn induced_branch(
    ring: &RingSpec,
    st: &InertiaStructure,
    rep: &LatticeRep,
    v1: &crate::linalg::Subspace,
    ctx: &mut Ctx,
    mut record: LedgerRecord,
) -> Result<SymplecticPiece> {
    let g = &st.group;
    let g1_elements: Vec<u32> = g.elements().filter(|&x| rep.stabilizes(ring, v1, &[x])).collect();
    if !g.is_normal(&g1_elements) {
        return Err(SymplecticError::CheckFailed("stabilizer of an isotypic component is not normal".into()));
    }
    let (g1, emb) = g.subgroup(&g1_elements);
    let index = (g.order() / g1.order()) as u64;
    let local = |x: u32| emb.iter().position(|&y| y == x).map(|i| i as u32);
    let h_local: Vec<u32> = st.h.iter().map(|&x| local(x)).collect::<Option<_>>().ok_or_else(|| {
        SymplecticError::CheckFailed("stabilizer does not contain H".into())
    })?;
    let c1 = local(g.pow(st.c, index)).ok_or_else(|| SymplecticError::CheckFailed("c^[G:G1] escapes G1".into()))?;
    let st1 = InertiaStructure::new(g1.clone(), st.ell, h_local, c1)?;
    let rep1 = LatticeRep { images: emb.iter().map(|&x| v1.restrict(ring, rep.image(x))).collect() };
    let gens: Vec<KMatrix> = g1.generators().iter().map(|&x| KMatrix::from_integral(rep1.image(x).clone())).collect();
    let form1 = invariant_forms(ring, &gens, Parity::Alternating)
        .into_iter()
        .next()
        .ok_or_else(|| SymplecticError::CheckFailed("isotypic component carries no invariant alternating form".into()))?;
    let inner = embed_piece(ring, &st1, &rep1, &form1, ctx)?;
    let induced = induce_symplectic(ring, g, &emb, &inner, None)?;
    record.path = format!("induced_index_{index}");
    record.dim = induced.piece.dim();
    ctx.ledger.records.push(record);
    Ok(induced.piece)
}
