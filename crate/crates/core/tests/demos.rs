use std::time::Instant;

use inertia_core::scenarios::{build_demo, Demo, DemoFamily};
use inertia_core::symplectic::{embed_inertia_group, extend_to_g, verify_certificate, EmbedOptions, SymplecticError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn embed(family: DemoFamily, force: bool) -> Result<usize, SymplecticError> {
    let Demo::Embed(p) = build_demo(family, None, 20, 7).unwrap() else { panic!("not an embed demo") };
    let opts = EmbedOptions { seed: 7, force, ..Default::default() };
    let t = Instant::now();
    let cert = embed_inertia_group(&p.ring, &p.structure, &p.rep, &p.form, &opts);
    eprintln!("{family}: {:?}", t.elapsed());
    let cert = cert?;
    assert!(verify_certificate(&cert).all_passed());
    Ok(cert.dim)
}

#[test]
fn c3xc5() {
    assert_eq!(embed(DemoFamily::C3xC5, false).unwrap(), 6);
}

#[test]
fn q8() {
    assert_eq!(embed(DemoFamily::Q8, false).unwrap(), 2);
}

#[test]
fn c11sd5() {
    assert_eq!(embed(DemoFamily::C11sd5, false).unwrap(), 10);
}

#[test]
fn cyclic25() {
    assert_eq!(embed(DemoFamily::Cyclic25, false).unwrap(), 20);
}

#[test]
fn probe() {
    assert!(matches!(embed(DemoFamily::Ell3BudgetProbe, false), Err(SymplecticError::ForceRequired)));
    let r = embed(DemoFamily::Ell3BudgetProbe, true);
    assert!(matches!(r, Err(SymplecticError::BudgetViolation(_))), "{r:?}");
}

#[test]
fn c41() {
    let Demo::Extension(p) = build_demo(DemoFamily::C41sd5, None, 20, 7).unwrap() else { panic!() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = Instant::now();
    let (images, trace) = extend_to_g(&p.ring, &p.structure, &p.tau, &p.form, 64, &mut rng).unwrap();
    eprintln!("c41: {:?}\n{}", t.elapsed(), trace.summary());
    assert_eq!(images.len(), 205);
}
