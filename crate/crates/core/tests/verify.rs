use rz_lattice::moduli::{Model, ModelParams};
use rz_lattice::verify::{replay, run_suite, Mutant, Session, SuiteOptions, SUITES};

fn model(p: u32, n: usize) -> Model {
    Model::new(ModelParams::new(p, n, 1)).unwrap()
}

fn opts(samples: usize) -> SuiteOptions {
    SuiteOptions { samples, ..SuiteOptions::default() }
}

#[test]
fn every_suite_passes_on_small_models() {
    for (p, n) in [(2u32, 2usize), (3, 2), (2, 3)] {
        let reports = run_suite(model(p, n), "all", opts(20)).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert!(r.passed(), "p={p} n={n} {}: {:?}", r.suite, r.counterexample);
        }
    }
}

#[test]
fn odd_rank_skips_the_heart_suite() {
    let names: Vec<_> = run_suite(model(2, 3), "all", opts(5)).unwrap().into_iter().map(|r| r.suite).collect();
    assert!(!names.iter().any(|s| s == "theorem-B"));
    assert!(run_suite(model(2, 3), "theorem-B", opts(5)).is_err());
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(run_suite(model(2, 2), "nope", opts(5)).is_err());
    assert_eq!(SUITES.len(), 7);
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite(model(3, 2), "all", opts(30)).unwrap();
    let b = run_suite(model(3, 2), "all", opts(30)).unwrap();
    let strip = |v: Vec<_>| -> String {
        let v: Vec<_> = v.into_iter().map(|r: rz_lattice::verify::SuiteReport| r.without_timing()).collect();
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn sign_bug_is_caught_and_does_not_replay() {
    let m = model(2, 2);
    let o = SuiteOptions { mutant: Some(Mutant::SignBug), ..opts(20) };
    let r = &run_suite(m.clone(), "duality", o).unwrap()[0];
    assert!(!r.passed());
    let ce = r.counterexample.as_ref().unwrap();
    assert!(replay(&m, ce).unwrap());
}

#[test]
fn unscaled_beta_is_caught_and_replays() {
    let m = model(2, 4);
    let o = SuiteOptions { mutant: Some(Mutant::UnscaledBeta), k: Some(2), ..opts(5) };
    let r = &run_suite(m.clone(), "beta", o).unwrap()[0];
    assert!(!r.passed());
    assert!(!replay(&m, r.counterexample.as_ref().unwrap()).unwrap());
}

#[test]
fn off_by_one_counts_fail() {
    let o = SuiteOptions { mutant: Some(Mutant::CountOffByOne), ..opts(5) };
    for suite in ["theorem-A", "counts"] {
        let rs = run_suite(model(2, 2), suite, o.clone()).unwrap();
        assert!(rs.iter().any(|r| !r.passed()), "{suite}");
    }
    let rows = Session::new(model(2, 2), o).census().unwrap();
    assert!(rows.iter().any(|r| r.matches == Some(false)));
}

#[test]
fn census_n2_is_a_finite_set() {
    // A zero-dimensional variety: its p + 1 points are already rational over F_{p^2}.
    let rows = Session::new(model(2, 2), SuiteOptions::default()).census().unwrap();
    let counts: Vec<_> = rows.iter().map(|r| (r.j, r.count)).collect();
    assert_eq!(counts, vec![(1, 3), (2, 3)]);
    assert!(rows.iter().all(|r| r.matches == Some(true)));
}
