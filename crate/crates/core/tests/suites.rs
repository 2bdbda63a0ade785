use sqdist::verify::{run_suite, SUITES};

#[test]
fn every_suite_passes_on_two_seeds() {
    for seed in [1, 99] {
        for name in SUITES {
            let rep = run_suite(name, seed, None).unwrap();
            assert!(!rep.tallies.is_empty(), "{name}");
            for t in &rep.tallies {
                assert!(t.ok(), "{name} seed={seed}: {t}");
            }
        }
    }
}

#[test]
fn suites_are_deterministic() {
    let a = run_suite("goppa-chain", 5, Some(4)).unwrap();
    let b = run_suite("goppa-chain", 5, Some(4)).unwrap();
    assert_eq!(a.tallies, b.tallies);
}
