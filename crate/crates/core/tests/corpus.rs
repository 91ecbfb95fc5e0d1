use std::collections::BTreeMap;

use inertia_core::scenarios::random_instance;
use inertia_core::selftest::embed_problem;
use inertia_core::symplectic::verify_certificate;

#[test]
fn random_corpus_certifies_across_seeds() {
    let mut paths: BTreeMap<String, usize> = BTreeMap::new();
    for seed in 1..3u64 {
        for i in 0..20u64 {
            let s = seed * 1000 + i;
            let p = random_instance(s, 16).unwrap();
            let cert = embed_problem(&p, s).unwrap_or_else(|e| panic!("{} (seed {s}): {e}", p.name));
            assert!(verify_certificate(&cert).all_passed(), "{} (seed {s})", p.name);
            assert!(cert.ledger.all_hold(), "{} (seed {s}): {:?}", p.name, cert.ledger);
            for r in &cert.ledger.records {
                *paths.entry(r.path.clone()).or_default() += 1;
            }
        }
    }
    eprintln!("{paths:?}");
    assert!(paths.contains_key("extension_plus_cyclic"));
}
