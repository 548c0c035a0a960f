use super::*;
use crate::builtins::builtin;
use crate::sampling::{sample_points, SampleConfig};

fn run(name: &str, samples: usize) -> CompareOutcome {
    let spec = builtin(name).unwrap();
    let pts = sample_points(spec.domain(), &SampleConfig::split(samples, 3));
    compare(&Formula::ALL, &spec, &pts, Tolerances::default(), 3).unwrap()
}

fn assert_all_pass(out: &CompareOutcome) {
    for r in &out.results {
        assert!(
            r.pass,
            "{} failed: abs {:e} rel {:e} at {:?}\n closed {:?}\n oracle {:?}",
            r.formula, r.max_abs, r.max_rel, r.worst_point, r.closed_value, r.oracle_value
        );
    }
}

#[test]
fn flat2_closed_forms_match_oracle() {
    let out = run("flat2", 24);
    assert_all_pass(&out);
    assert_eq!(out.skipped.len(), 5);
}

#[test]
fn flat4_closed_forms_match_oracle() {
    assert_all_pass(&run("flat4", 16));
}

#[test]
fn curved4_closed_forms_match_oracle() {
    assert_all_pass(&run("curved4", 8));
}

#[test]
fn affine_alpha_runs_killing_formulas() {
    let out = run("flat2-affine", 16);
    assert!(out.skipped.is_empty());
    assert_eq!(out.results.len(), Formula::ALL.len());
    assert_all_pass(&out);
}

#[test]
fn formula_ids_round_trip() {
    for f in Formula::ALL {
        assert_eq!(Formula::from_id(f.id()).unwrap(), f);
    }
    assert!(matches!(
        Formula::from_id("torsion"),
        Err(crate::Error::UnknownFormula(_))
    ));
    assert_eq!(
        Formula::parse_list("scalar, riemann").unwrap(),
        vec![Formula::Scalar, Formula::Riemann]
    );
}

#[test]
fn reports_do_not_depend_on_formula_selection() {
    let spec = builtin("flat4").unwrap();
    let pts = sample_points(spec.domain(), &SampleConfig::split(6, 1));
    let all = compare(&Formula::ALL, &spec, &pts, Tolerances::default(), 9).unwrap();
    let one = compare(&[Formula::Riemann], &spec, &pts, Tolerances::default(), 9).unwrap();
    let r = all.results.iter().find(|r| r.formula == "riemann").unwrap();
    assert_eq!(r, &one.results[0]);
}

#[test]
fn oracle_bitension_on_flat2_at_x1() {
    let spec = builtin("flat2").unwrap();
    let t = oracle_bitension(&spec, &[1.0, 0.0], Direction::ToDeformed).unwrap();
    assert!(
        (t.components[0] + 0.625).abs() < 1e-12,
        "{:?}",
        t.components
    );
    assert!(t.components[1].abs() < 1e-12);
}
