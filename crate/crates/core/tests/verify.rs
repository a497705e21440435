use std::sync::OnceLock;

use currentproj::currents::fills;
use currentproj::verify::{
    run_verify, sample_filling, sample_non_filling, write_reports, Checker, ExperimentSpec, Workbench,
};

fn bench() -> &'static Workbench {
    static B: OnceLock<Workbench> = OnceLock::new();
    B.get_or_init(|| Workbench::new(2, 6, currentproj::intersection::MAX_RADIUS).unwrap())
}

fn small_spec(seed: u64) -> ExperimentSpec {
    ExperimentSpec { seed, sample_count: 4, ..ExperimentSpec::default() }
}

#[test]
fn spec_defaults_fill_missing_fields() {
    let spec = ExperimentSpec::from_json(r#"{"seed": 3, "optimizer": {"max_iter": 50}}"#).unwrap();
    assert_eq!(spec.seed, 3);
    assert_eq!(spec.genus, 2);
    assert_eq!(spec.sample_count, 50);
    assert_eq!(spec.optimizer.max_iter, 50);
    assert_eq!(spec.optimizer.tol_g, 1e-8);
    assert!(ExperimentSpec::from_json(r#"{"seed": "x"}"#).is_err());
}

#[test]
fn samples_are_what_they_claim() {
    let b = bench();
    for s in sample_filling(b, 12, 5).unwrap() {
        assert!(fills(&b.ix, &s.current).unwrap(), "{}", s.current);
        assert!((3..=6).contains(&s.current.len()));
    }
    for s in sample_non_filling(b, 12, 5).unwrap() {
        assert!(!fills(&b.ix, &s.current).unwrap(), "{}", s.current);
        let classes = s.current.classes();
        for (i, u) in classes.iter().enumerate() {
            for v in &classes[i + 1..] {
                assert_eq!(b.ix.intersection_number(u, v).unwrap(), 0);
            }
        }
    }
}

#[test]
fn same_seed_same_report() {
    let a = run_verify(&small_spec(7), Checker::default()).unwrap();
    let b = run_verify(&small_spec(7), Checker::default()).unwrap();
    assert!(a.passed);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.ratio.to_csv().unwrap(), b.ratio.to_csv().unwrap());
    let c = run_verify(&small_spec(8), Checker::default()).unwrap();
    assert_ne!(serde_json::to_string(&a.samples).unwrap(), serde_json::to_string(&c.samples).unwrap());
}

#[test]
fn empty_run_passes_trivially() {
    let report =
        run_verify(&ExperimentSpec { sample_count: 0, ..ExperimentSpec::default() }, Checker::default()).unwrap();
    assert!(report.passed && report.samples.is_empty());
    assert!(report.suites.iter().all(|s| s.checks == 0));
    assert_eq!((report.c1, report.c2), (None, None));
}

#[test]
fn negated_checker_fails_the_run() {
    let report = run_verify(&small_spec(7), Checker { negated: true }).unwrap();
    assert!(!report.passed);
    assert!(report.suites.iter().all(|s| s.checks > 0 && !s.passed()), "{:?}", report.suites);
}

#[test]
fn reports_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_verify(&small_spec(7), Checker::default()).unwrap();
    let written = write_reports(&report, dir.path()).unwrap();
    assert_eq!(written.len(), 3);
    let csv = std::fs::read_to_string(dir.path().join("ratios.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + report.samples.len());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
}
