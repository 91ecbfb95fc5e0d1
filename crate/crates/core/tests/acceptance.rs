//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use inertia_core::groups::{build_family, inertia_split, FamilySpec, GroupError};
use inertia_core::linalg::poly::cyclotomic_local_factors;
use inertia_core::linalg::{
    form_normalize, invariant_forms, j_std, random_unimodular_combination, KMatrix, LinalgError, OKMatrix, Parity,
};
use inertia_core::modrep::{stabilize_lattice, LatticeRep};
use inertia_core::padic::{OKElem, RingSpec};
use inertia_core::scenarios::{build_demo, random_instance, Demo, DemoFamily, EmbedProblem, ExtensionProblem};
use inertia_core::selftest::{
    arithmetic_checks, cyclic_base_checks, embed_problem, hyperbolic_checks, random_section,
};
use inertia_core::symplectic::{
    companion, cyclic_embedding, cyclic_group, extend_to_g, section_independence, verify_certificate,
    SymplecticError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;
/// Working precision N.
const PRECISION: u32 = 16;
/// Extension identities must hold modulo ℓ^EXTENSION_DIGITS.
const EXTENSION_DIGITS: u32 = 12;
const EXTENSION_BUDGET: Duration = Duration::from_secs(60);
const DEMO_BUDGET: Duration = Duration::from_secs(300);
const ARITHMETIC_BUDGET: Duration = Duration::from_secs(30);
const ARITHMETIC_SAMPLES: usize = 10_000;
const HYPERBOLIC_SAMPLES: usize = 100;
const RANDOM_INSTANCES: usize = 20;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, budget: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < budget, || format!("took {e:.2?}, budget {budget:?}"))?;
    Ok(e)
}

fn embed_demo(family: DemoFamily) -> Result<EmbedProblem, String> {
    match build_demo(family, None, PRECISION, SEED).map_err(|e| e.to_string())? {
        Demo::Embed(p) => Ok(p),
        Demo::Extension(_) => Err(format!("{family} is not an embedding demo")),
    }
}

fn extension_demo() -> Result<ExtensionProblem, String> {
    match build_demo(DemoFamily::C41sd5, None, PRECISION, SEED).map_err(|e| e.to_string())? {
        Demo::Extension(p) => Ok(p),
        Demo::Embed(_) => Err("c41sd5 is not an extension demo".into()),
    }
}

/// C41 ⋊ C5: every identity of the extension, the conjugation identity for
/// every power of c and every h, and the homomorphism property on G.
fn criterion_1() -> Outcome {
    let p = extension_demo()?;
    let ring = &p.ring;
    let k = EXTENSION_DIGITS;
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (images, tr) = extend_to_g(ring, &p.structure, &p.tau, &p.form, 64, &mut rng).map_err(|e| e.to_string())?;
    let elapsed = within(t, EXTENSION_BUDGET)?;
    let f = &p.form;
    let eq = |a: &OKMatrix, b: &OKMatrix| a.eq_mod(ring, b, k);
    ensure(eq(&tr.a_mat.transpose().mul(ring, f).mul(ring, &tr.a_mat), &f.mul(ring, &tr.a)), || "AᵀFA ≠ F·a".into())?;
    let sigma_inv_a = tr.a_mat.inv(ring).map_err(|e| e.to_string())?.mul(ring, &tr.a).mul(ring, &tr.a_mat);
    ensure(eq(&tr.a.mul(ring, &sigma_inv_a), &tr.a1.mul(ring, &tr.a1)), || "a·σ⁻¹(a) ≠ a₁²".into())?;
    let a1_inv = tr.a1.inv(ring).map_err(|e| e.to_string())?;
    ensure(eq(&tr.a1_mat, &tr.a_mat.mul(ring, &tr.a_mat).mul(ring, &a1_inv)), || "A₁ ≠ A²a₁⁻¹".into())?;
    ensure(eq(&tr.a1_mat.transpose().mul(ring, f).mul(ring, &tr.a1_mat), f), || "A₁ᵀFA₁ ≠ F".into())?;
    let id = OKMatrix::identity(ring, p.tau.dim());
    ensure(eq(&tr.big_b.pow(ring, tr.l_order as u128), &id), || "B^#L ≠ I".into())?;
    let g = &p.structure.group;
    let (_, emb) = p.structure.h_group();
    let mut conj_checks = 0;
    for j in 0..tr.l_order {
        let cj = g.pow(p.structure.c, j);
        let m = &images[cj as usize];
        for &h in &emb {
            let lhs = m.mul(ring, &images[h as usize]);
            let rhs = images[g.conj(cj, h) as usize].mul(ring, m);
            ensure(eq(&lhs, &rhs), || format!("conjugation identity fails for c^{j}, h = {h}"))?;
            conj_checks += 1;
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            let prod = images[a as usize].mul(ring, &images[b as usize]);
            ensure(eq(&prod, &images[g.mul(a, b) as usize]), || format!("τ_G({a}·{b}) ≠ τ_G({a})τ_G({b})"))?;
        }
        ensure(eq(&images[a as usize].transpose().mul(ring, f).mul(ring, &images[a as usize]), f), || format!("τ_G({a}) moves F"))?;
    }
    Ok(format!(
        "C41⋊C5, dim {}, {} elements, {conj_checks} conjugation checks, exact mod 5^{k}, [E:K] = {}, [E0:K] = {}, {elapsed:.2?}",
        p.tau.dim(),
        images.len(),
        tr.e_degree,
        tr.e0_degree
    ))
}

/// The demo corpus certifies with the listed dimensions.
fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    for (family, dim) in [(DemoFamily::C3xC5, 6), (DemoFamily::Q8, 2), (DemoFamily::C11sd5, 10), (DemoFamily::Cyclic25, 20)] {
        let p = embed_demo(family)?;
        if family == DemoFamily::Q8 {
            let ring = &p.ring;
            ensure(p.rep.images.iter().any(|m| !m.is_integral(ring)), || "q8 input is already integral".into())?;
        }
        let cert = embed_problem(&p, SEED).map_err(|e| format!("{family}: {e}"))?;
        let report = verify_certificate(&cert);
        let failed: Vec<_> = report.failed().map(|c| c.name.clone()).collect();
        ensure(failed.is_empty(), || format!("{family}: failed {failed:?}"))?;
        ensure(cert.dim == dim, || format!("{family}: dimension {} ≠ {dim}", cert.dim))?;
        lines.push(format!("{family} → Sp_{} at 5^{}", cert.dim, report.precision));
    }
    let elapsed = within(t, DEMO_BUDGET)?;
    Ok(format!("{}, {elapsed:.2?}", lines.join(", ")))
}

fn criterion_3a() -> Outcome {
    let ring = RingSpec::new(5, 1, PRECISION).map_err(|e| e.to_string())?;
    hyperbolic_checks(&ring, HYPERBOLIC_SAMPLES, &mut ChaCha8Rng::seed_from_u64(SEED))
}

fn criterion_3b() -> Outcome {
    let ring = RingSpec::new(5, 1, PRECISION).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let group = cyclic_group(25).map_err(|e| e.to_string())?;
    let piece = cyclic_embedding(&ring, 1, &mut rng).map_err(|e| e.to_string())?;
    let sub: Vec<u32> = (0..10u32).map(|i| i % 2 + 2 * (i / 2) * 5).collect();
    let first = random_section(&group, &sub, &mut rng);
    let second = random_section(&group, &sub, &mut rng);
    ensure(first != second, || "sections coincide".into())?;
    section_independence(&ring, &group, &sub, &piece, &first, &second).map_err(|e| e.to_string())?;
    Ok(format!("C25×{{±1}} from C5×{{±1}}, sections {first:?} / {second:?}"))
}

/// Normalizing a non-perfect invariant form on an H-simple lattice gives a
/// perfect one; on a lattice that is not H-simple it fails.
fn criterion_3c() -> Outcome {
    let mut lines = Vec::new();
    let check = |name: &str, ring: &RingSpec, images: &[KMatrix], form: &KMatrix, lines: &mut Vec<String>| -> Result<(), String> {
        let elements: Vec<u32> = (0..images.len() as u32).collect();
        let rep = inertia_core::modrep::Representation { dim: form.rows(), images: images.to_vec() };
        let lattice = stabilize_lattice(ring, &rep, &elements).map_err(|e| e.to_string())?;
        let basis = lattice.basis.clone();
        let n = form_normalize(ring, form, &basis).map_err(|e| format!("{name}: {e}"))?;
        ensure(ring.is_unit(&n.gram.det(ring)), || format!("{name}: det not a unit"))?;
        lines.push(format!("{name} (scale 5^{})", n.i));
        Ok(())
    };

    // The H-simple lattices of the demos, with forms scaled off perfection.
    let q8 = embed_demo(DemoFamily::Q8)?;
    check("q8", &q8.ring, &q8.rep.images, &q8.form, &mut lines)?;

    let ring = RingSpec::new(5, 1, PRECISION).map_err(|e| e.to_string())?;
    let rot = OKMatrix::from_ints(&ring, 2, 2, &[0, -1, 1, -1]);
    let plane: Vec<KMatrix> = (0..3).map(|k| KMatrix::from_integral(rot.pow(&ring, k))).collect();
    let five_j = KMatrix::new(&ring, j_std(&ring, 2), 1);
    check("c3 plane", &ring, &plane, &five_j, &mut lines)?;

    let c41 = extension_demo()?;
    let r = &c41.ring;
    let w: Vec<KMatrix> = c41.tau.images.iter().map(|m| KMatrix::from_integral(m.clone())).collect();
    let forms = invariant_forms(r, &w[1..2], Parity::Alternating);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f = random_unimodular_combination(r, &forms, &mut rng, 64).map_err(|e| e.to_string())?;
    check("c41 W", r, &w, &KMatrix::new(r, f, 2), &mut lines)?;

    // R ⊕ R with J ⊕ 5J: invariant and nondegenerate, but no scaling is perfect.
    let g = OKMatrix::block_diag(&ring, &[&j_std(&ring, 2), &j_std(&ring, 2).mul_int(&ring, 5)]);
    let e = form_normalize(&ring, &KMatrix::from_integral(g), &KMatrix::identity(&ring, 4));
    ensure(matches!(e, Err(LinalgError::DegenerateAfterScaling(_))), || format!("counterexample gave {e:?}"))?;
    Ok(format!("perfect on {}; R⊕R with J⊕5J raises DegenerateAfterScaling", lines.join(", ")))
}

fn criterion_3d() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let details: Vec<String> = [3, 5, 7, 11]
        .into_iter()
        .map(|ell| cyclic_base_checks(ell, PRECISION, &mut rng))
        .collect::<Result<_, _>>()?;
    Ok(details.join("; "))
}

/// Every recorded inequality holds in every branch of the demo corpus and
/// the random corpus; at least one non-injective branch runs.
fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    for f in [DemoFamily::C3xC5, DemoFamily::Q8, DemoFamily::C11sd5, DemoFamily::Cyclic25] {
        problems.push((SEED, embed_demo(f)?));
    }
    for i in 0..RANDOM_INSTANCES as u64 {
        let seed = SEED * 1000 + i;
        problems.push((seed, random_instance(seed, PRECISION).map_err(|e| e.to_string())?));
    }
    let (mut branches, mut non_injective, mut relations) = (0, 0, 0);
    for (seed, p) in &problems {
        let cert = embed_problem(p, *seed).map_err(|e| format!("{}: {e}", p.name))?;
        for r in &cert.ledger.records {
            branches += 1;
            if r.path == "extension_plus_cyclic" {
                non_injective += 1;
                ensure(!r.checks.is_empty(), || format!("{}: non-injective branch without checks", p.name))?;
            }
            for c in &r.checks {
                relations += 1;
                ensure(c.holds, || format!("{}: {} fails", p.name, c.relation))?;
            }
        }
    }
    ensure(non_injective > 0, || "no non-injective branch executed".into())?;
    Ok(format!(
        "{} problems, {branches} branches, {non_injective} non-injective, {relations} relations hold",
        problems.len()
    ))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let ring = RingSpec::new(5, 2, PRECISION).map_err(|e| e.to_string())?;
    let detail = arithmetic_checks(&ring, ARITHMETIC_SAMPLES, &mut ChaCha8Rng::seed_from_u64(SEED))?;
    // Matrix inversion at the full sample count.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for i in 0..ARITHMETIC_SAMPLES {
        let m = OKMatrix::random_unimodular(&ring, 3, &mut rng);
        let inv = m.inv(&ring).map_err(|e| e.to_string())?;
        ensure(m.mul(&ring, &inv).is_identity(&ring), || format!("inverse wrong at matrix {i}"))?;
    }
    let elapsed = within(t, ARITHMETIC_BUDGET)?;
    Ok(format!("{detail}; {ARITHMETIC_SAMPLES} 3x3 unit-pivot inversions; {elapsed:.2?}"))
}

fn criterion_6() -> Outcome {
    let probe = embed_demo(DemoFamily::Ell3BudgetProbe)?;
    let e = embed_problem(&probe, SEED);
    ensure(e.as_ref().is_err_and(|m| *m == SymplecticError::ForceRequired.to_string()), || format!("ℓ = 3 gave {e:?}"))?;

    let mut tampered = Vec::new();
    let base = embed_problem(&embed_demo(DemoFamily::C3xC5)?, SEED)?;
    let ring = base.ring.clone();
    let bump = |x: OKElem| ring.add(&x, &ring.one());
    let mut c = base.clone();
    let v = bump(*c.images[1].get(0, 0));
    c.images[1].set(0, 0, v);
    tampered.push(("image entry", c));
    let mut c = base.clone();
    let v = bump(*c.gram.get(0, 1));
    c.gram.set(0, 1, v);
    tampered.push(("gram entry", c));
    let mut c = base.clone();
    c.images[1] = OKMatrix::identity(&ring, c.dim);
    tampered.push(("image replaced by I", c));
    for (what, c) in &tampered {
        let failed: Vec<String> = verify_certificate(c).failed().map(|x| x.name.clone()).collect();
        ensure(!failed.is_empty(), || format!("tampered {what} passed"))?;
    }

    // ℓ = 7 has order 6 mod 43; an action of order 7 permutes the seven sextic
    // factors of Φ43 transitively, so the twist of one factor is a different one.
    let ring7 = RingSpec::new(7, 1, 8).map_err(|e| e.to_string())?;
    let s = (2..43u64).find(|&s| (1..=7).fold(1, |acc, _| acc * s % 43) == 1).expect("order-7 unit mod 43");
    let g = build_family(&FamilySpec::Semidirect { n: 43, lk: 7, s }).map_err(|e| e.to_string())?;
    let st = inertia_split(&g, 7).map_err(|e| e.to_string())?;
    let (_, emb) = st.h_group();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let factor = cyclotomic_local_factors(&ring7, 43, &mut rng).map_err(|e| e.to_string())?.remove(0);
    let w = companion(&ring7, &factor);
    let tau = LatticeRep { images: emb.iter().map(|&x| w.pow(&ring7, (x % 43) as u128)).collect() };
    let forms = invariant_forms(&ring7, &[KMatrix::from_integral(w.clone())], Parity::Alternating);
    let f = random_unimodular_combination(&ring7, &forms, &mut rng, 16).map_err(|e| e.to_string())?;
    let r = extend_to_g(&ring7, &st, &tau, &f, 8, &mut rng);
    ensure(matches!(r, Err(SymplecticError::NotIsomorphicTwist { .. })), || format!("twist gave {:?}", r.map(|_| ())))?;

    let d5 = build_family(&FamilySpec::Dihedral { n: 5 }).map_err(|e| e.to_string())?;
    let r = inertia_split(&d5, 5);
    ensure(matches!(r, Err(GroupError::NotInertiaForm(_))), || format!("D5 at ℓ = 5 gave {:?}", r.map(|_| ())))?;
    Ok(format!(
        "ℓ = 3 refused; {} tampered certificates rejected; NotIsomorphicTwist on C43⋊C7 at ℓ = 7; NotInertiaForm on D5 at ℓ = 5",
        tampered.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 extension reproduction", criterion_1),
        ("2 embedding end-to-end", criterion_2),
        ("3a hyperbolic double", criterion_3a),
        ("3b section independence", criterion_3b),
        ("3c form normalization", criterion_3c),
        ("3d cyclic base", criterion_3d),
        ("4 ledger soundness", criterion_4),
        ("5 arithmetic substrate", criterion_5),
        ("6 negative controls", criterion_6),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Same input and seed, same certificate.
fn determinism() -> Outcome {
    let p = embed_demo(DemoFamily::C11sd5)?;
    let a = embed_problem(&p, SEED)?;
    let b = embed_problem(&p, SEED)?;
    ensure(a.images == b.images && a.gram == b.gram, || "certificates differ".into())?;
    Ok("c11sd5 embedded twice with identical output".into())
}
