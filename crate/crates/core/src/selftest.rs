//! Seeded self-test over the arithmetic, the building blocks, the demo
//! corpus and the random corpus.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::FiniteGroup;
use crate::linalg::{has_parity, OKMatrix, Parity};
use crate::padic::RingSpec;
use crate::scenarios::{build_demo, random_instance, Demo, DemoFamily, EmbedProblem};
use crate::symplectic::{
    cyclic_base_embedding, cyclic_embedding, cyclic_group, default_section, embed_inertia_group, extend_to_g,
    hyperbolic_double, section_independence, verify_certificate, EmbedOptions, SymplecticCertificate,
};

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub arithmetic_samples: usize,
    pub corpus_size: usize,
    pub precision: u32,
    /// Corrupt one certificate before verification, to test the harness.
    pub inject_fault: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 0, arithmetic_samples: 1000, corpus_size: 20, precision: 16, inject_fault: false }
    }
}

#[derive(Clone, Debug)]
pub struct SelftestOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random checks of ring inversion, square roots, Teichmüller lifts and
/// matrix inversion at full precision.
pub fn arithmetic_checks(ring: &RingSpec, samples: usize, rng: &mut ChaCha8Rng) -> Check {
    let fq = ring.residue_field();
    let one = ring.one();
    let q = ring.q() as u128;
    for i in 0..samples {
        let x = ring.random(rng);
        if ring.is_unit(&x) {
            let y = ring.inv(&x).map_err(|e| e.to_string())?;
            ensure(ring.mul(&x, &y) == one, || format!("x·x⁻¹ ≠ 1 at sample {i}"))?;
            let sq = ring.mul(&x, &x);
            let r = ring.sqrt(&sq).map_err(|e| e.to_string())?;
            ensure(ring.mul(&r, &r) == sq, || format!("sqrt(x²)² ≠ x² at sample {i}"))?;
        }
        let res = fq.random(rng);
        if !fq.is_zero(&res) {
            let t = ring.teichmuller(&res).map_err(|e| e.to_string())?;
            ensure(ring.pow(&t, q - 1) == one && ring.residue(&t) == res, || format!("bad Teichmüller lift at sample {i}"))?;
        }
    }
    let mats = (samples / 100).max(1);
    for i in 0..mats {
        let n = rng.gen_range(2..=8);
        let m = OKMatrix::random_unimodular(ring, n, rng);
        let inv = m.inv(ring).map_err(|e| e.to_string())?;
        ensure(m.mul(ring, &inv).is_identity(ring), || format!("unimodular inverse wrong at matrix {i}"))?;
    }
    Ok(format!("{samples} scalar samples, {mats} matrices at ℓ = {}, N = {}", ring.ell(), ring.precision()))
}

/// Hyperbolic doubles of random unimodular matrices of size 2 to 8.
pub fn hyperbolic_checks(ring: &RingSpec, samples: usize, rng: &mut ChaCha8Rng) -> Check {
    for i in 0..samples {
        let n = rng.gen_range(2..=8);
        let m = OKMatrix::random_unimodular(ring, n, rng);
        let d = hyperbolic_double(ring, &[m]).map_err(|e| e.to_string())?;
        let g = &d.images[0];
        ensure(g.transpose().mul(ring, &d.gram).mul(ring, g).approx_eq(ring, &d.gram), || format!("form not preserved at sample {i}"))?;
    }
    Ok(format!("{samples} random doubles"))
}

/// `CᵀJC = J`, `Jᵀ = −J`, `det J` a unit and `C^ℓ = I`.
pub fn cyclic_base_checks(ell: u64, precision: u32, rng: &mut ChaCha8Rng) -> Check {
    let ring = RingSpec::new(ell, 1, precision).map_err(|e| e.to_string())?;
    let b = cyclic_base_embedding(&ring, rng).map_err(|e| e.to_string())?;
    let (c, j) = (&b.companion, &b.gram);
    ensure(c.transpose().mul(&ring, j).mul(&ring, c).approx_eq(&ring, j), || "CᵀJC ≠ J".into())?;
    ensure(has_parity(&ring, j, Parity::Alternating), || "J not alternating".into())?;
    ensure(ring.is_unit(&j.det(&ring)), || "det J not a unit".into())?;
    ensure(c.pow(&ring, ell as u128).is_identity(&ring), || "C^ℓ ≠ I".into())?;
    Ok(format!("ℓ = {ell}, dim {}", c.rows()))
}

/// A random member of each left coset, in the order of `default_section`.
pub fn random_section(group: &FiniteGroup, sub: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    default_section(group, sub)
        .into_iter()
        .map(|r| {
            let coset: Vec<u32> = sub.iter().map(|&s| group.mul(r, s)).collect();
            *coset.choose(rng).expect("cosets are nonempty")
        })
        .collect()
}

/// Induction from `C_ℓ × {±1}` to `C_{ℓ²} × {±1}` along two random sections.
pub fn section_checks(ring: &RingSpec, rng: &mut ChaCha8Rng) -> Check {
    let ell = ring.ell();
    let group = cyclic_group(ell * ell).map_err(|e| e.to_string())?;
    let piece = cyclic_embedding(ring, 1, rng).map_err(|e| e.to_string())?;
    let sub: Vec<u32> = (0..2 * ell as u32).map(|i| i % 2 + 2 * (i / 2) * ell as u32).collect();
    let first = random_section(&group, &sub, rng);
    let second = random_section(&group, &sub, rng);
    section_independence(ring, &group, &sub, &piece, &first, &second).map_err(|e| e.to_string())?;
    Ok(format!("sections {first:?} and {second:?}"))
}

pub fn embed_problem(p: &EmbedProblem, seed: u64) -> std::result::Result<SymplecticCertificate, String> {
    let opts = EmbedOptions { seed, ..Default::default() };
    embed_inertia_group(&p.ring, &p.structure, &p.rep, &p.form, &opts).map_err(|e| e.to_string())
}

fn certify(p: &EmbedProblem, seed: u64, expected_dim: Option<usize>, inject_fault: bool) -> Check {
    let mut cert = embed_problem(p, seed)?;
    if inject_fault {
        let ring = &cert.ring;
        let m = &mut cert.images[1];
        let x = ring.add(m.get(0, 0), &ring.one());
        m.set(0, 0, x);
    }
    let report = verify_certificate(&cert);
    if let Some(c) = report.failed().next() {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    ensure(cert.ledger.all_hold(), || "ledger inequality fails".into())?;
    if let Some(d) = expected_dim {
        ensure(cert.dim == d, || format!("dimension {} ≠ {d}", cert.dim))?;
    }
    let paths: Vec<&str> = cert.ledger.records.iter().map(|r| r.path.as_str()).collect();
    Ok(format!("Sp_{} over Z_{}, paths {paths:?}", cert.dim, p.ring.ell()))
}

pub fn demo_check(family: DemoFamily, expected_dim: usize, opts: &SelftestOptions) -> Check {
    match build_demo(family, None, opts.precision, opts.seed).map_err(|e| e.to_string())? {
        Demo::Embed(p) => certify(&p, opts.seed, Some(expected_dim), opts.inject_fault && family == DemoFamily::C3xC5),
        Demo::Extension(_) => Err(format!("{family} is not an embedding demo")),
    }
}

pub fn extension_check(opts: &SelftestOptions) -> Check {
    let Demo::Extension(p) = build_demo(DemoFamily::C41sd5, None, opts.precision, opts.seed).map_err(|e| e.to_string())? else {
        return Err("c41sd5 is not an extension demo".into());
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (images, trace) = extend_to_g(&p.ring, &p.structure, &p.tau, &p.form, 64, &mut rng).map_err(|e| e.to_string())?;
    ensure(images.len() == p.structure.group.order(), || "images do not cover G".into())?;
    Ok(format!("#iota(L) = {}, [E0:K] = {}", trace.iota_order, trace.e0_degree))
}

pub fn corpus_check(opts: &SelftestOptions) -> Check {
    let mut paths = 0;
    for i in 0..opts.corpus_size {
        let seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
        let p = random_instance(seed, opts.precision).map_err(|e| format!("instance {i}: {e}"))?;
        certify(&p, seed, None, false).map_err(|e| format!("{} (instance {i}): {e}", p.name))?;
        paths += 1;
    }
    Ok(format!("{paths} instances certified"))
}

pub fn negative_checks(opts: &SelftestOptions) -> Check {
    let Demo::Embed(p) = build_demo(DemoFamily::Ell3BudgetProbe, None, opts.precision, opts.seed).map_err(|e| e.to_string())? else {
        return Err("probe is not an embedding demo".into());
    };
    ensure(embed_problem(&p, opts.seed).is_err_and(|e| e.contains("--force")), || "ℓ = 3 accepted without force".into())?;
    let Demo::Embed(q) = build_demo(DemoFamily::Q8, None, opts.precision, opts.seed).map_err(|e| e.to_string())? else {
        return Err("q8 is not an embedding demo".into());
    };
    let mut cert = embed_problem(&q, opts.seed)?;
    let ring = cert.ring.clone();
    let x = ring.add(cert.gram.get(0, 1), &ring.one());
    cert.gram.set(0, 1, x);
    ensure(!verify_certificate(&cert).all_passed(), || "tampered certificate passed".into())?;
    Ok("ℓ = 3 refused; tampered certificate rejected".into())
}

/// Run every check; the outcome of each is reported separately.
pub fn run_selftest(opts: &SelftestOptions) -> Vec<SelftestOutcome> {
    let mut out = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let r = f();
        let elapsed = t.elapsed();
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        out.push(SelftestOutcome { name: name.to_string(), passed, detail, elapsed });
    };
    let rng = || ChaCha8Rng::seed_from_u64(opts.seed);
    run("arithmetic", &|| {
        let ring = RingSpec::new(5, 2, opts.precision).map_err(|e| e.to_string())?;
        arithmetic_checks(&ring, opts.arithmetic_samples, &mut rng())
    });
    run("hyperbolic double", &|| {
        let ring = RingSpec::new(5, 1, opts.precision).map_err(|e| e.to_string())?;
        hyperbolic_checks(&ring, 100, &mut rng())
    });
    run("cyclic base", &|| {
        let details: Vec<String> =
            [3, 5, 7, 11].into_iter().map(|ell| cyclic_base_checks(ell, opts.precision, &mut rng())).collect::<std::result::Result<_, _>>()?;
        Ok(details.join("; "))
    });
    run("section independence", &|| {
        let ring = RingSpec::new(5, 1, opts.precision).map_err(|e| e.to_string())?;
        section_checks(&ring, &mut rng())
    });
    for (family, dim) in [(DemoFamily::C3xC5, 6), (DemoFamily::Q8, 2), (DemoFamily::C11sd5, 10), (DemoFamily::Cyclic25, 20)] {
        run(&format!("demo {family}"), &|| demo_check(family, dim, opts));
    }
    run("extension c41sd5", &|| extension_check(opts));
    run("random corpus", &|| corpus_check(opts));
    run("negative controls", &|| negative_checks(opts));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftest_passes() {
        let opts = SelftestOptions { seed: 1, arithmetic_samples: 200, corpus_size: 3, precision: 12, inject_fault: false };
        for o in run_selftest(&opts) {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let opts = SelftestOptions { seed: 1, inject_fault: true, precision: 12, ..Default::default() };
        let r = demo_check(DemoFamily::C3xC5, 6, &opts);
        assert!(r.is_err());
    }
}
