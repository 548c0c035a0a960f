//! Structural checks on a chart's para-complex Norden data: the hypotheses
//! every closed form in [`crate::berger`] and [`crate::harmonic`] relies on.
//!
//! Checks only report. Each one is the largest residual over the sample
//! points (and over random arguments where the identity is a tensor
//! statement), compared against a single absolute tolerance.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::berger::metric::structure_field_jets;
use crate::chart::{bilinear, mat_vec, Geometry, ManifoldSpec, MetricKind, ALPHA_GUARD};
use crate::error::{Error, Result};
use crate::expr::Jet;
use crate::sampling::random_vector;

/// Default structural tolerance.
pub const STRUCTURE_TOLERANCE: f64 = 1e-9;

/// Random arguments drawn per point for the tensor identities.
pub const TRIALS_PER_POINT: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the check was not applicable.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn measured(name: &str, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            residual: Some(residual),
            tolerance,
            // NaN fails
            pass: residual <= tolerance,
            note: None,
        }
    }

    fn not_applicable(name: &str, tolerance: f64, note: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            residual: None,
            tolerance,
            pass: true,
            note: Some(note.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub spec: String,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Err(ValidationFailed)` unless every check passed.
    pub fn require(&self) -> Result<()> {
        if self.pass() {
            return Ok(());
        }
        Err(Error::ValidationFailed {
            name: self.spec.clone(),
            failed: self.failed().join(", "),
        })
    }
}

/// Structure data evaluated at one point.
struct PointStructure {
    n: usize,
    f: Vec<Jet>,
    v: Vec<Jet>,
    alpha: Jet,
}

impl PointStructure {
    fn new(spec: &ManifoldSpec, p: &[f64]) -> Result<Self> {
        spec.check_point(p)?;
        Ok(PointStructure {
            n: spec.dimension(),
            f: spec.f_jets(p)?,
            v: spec.v_jets(p)?,
            alpha: spec.alpha_jet(p)?,
        })
    }

    fn f_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.f[i * self.n + j].value())
    }

    fn v_value(&self) -> Vec<f64> {
        self.v.iter().map(Jet::value).collect()
    }
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(
        0.0,
        |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

fn fold_max(acc: &mut f64, x: f64) {
    if x.is_nan() || acc.is_nan() {
        *acc = f64::NAN;
    } else {
        *acc = acc.max(x);
    }
}

/// `‖F² − I‖` and `|trace F|`.
pub fn check_para_complex(
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<Vec<CheckResult>> {
    let (mut sq, mut tr) = (0.0, 0.0);
    for p in points {
        let f = PointStructure::new(spec, p)?.f_matrix();
        let n = f.nrows();
        fold_max(
            &mut sq,
            max_abs((&f * &f - DMatrix::identity(n, n)).iter().copied()),
        );
        fold_max(&mut tr, f.trace().abs());
    }
    Ok(vec![
        CheckResult::measured("f-squared", sq, tol),
        CheckResult::measured("trace-f", tr, tol),
    ])
}

/// `‖g F − Fᵀ g‖`.
pub fn check_norden_purity(
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<CheckResult> {
    let mut r = 0.0;
    for p in points {
        let f = PointStructure::new(spec, p)?.f_matrix();
        let g = crate::chart::metric_at(spec, p, MetricKind::Base)?.0;
        fold_max(
            &mut r,
            max_abs((&g * &f - f.transpose() * &g).iter().copied()),
        );
    }
    Ok(CheckResult::measured("norden-purity", r, tol))
}

fn parallel_f_residual(geo: &Geometry, f: &[Jet]) -> f64 {
    let n = geo.dim();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                let mut s = f[i * n + j].d1(k);
                for l in 0..n {
                    s += geo.gamma(i, k, l) * f[l * n + j].value();
                    s -= geo.gamma(l, k, j) * f[i * n + l].value();
                }
                fold_max(&mut r, s.abs());
            }
        }
    }
    r
}

/// `(∇_k F)^i_j` over all index triples.
pub fn check_parallel_f(spec: &ManifoldSpec, points: &[Vec<f64>], tol: f64) -> Result<CheckResult> {
    let mut r = 0.0;
    for p in points {
        let s = PointStructure::new(spec, p)?;
        let geo = Geometry::new(spec, p, MetricKind::Base)?;
        fold_max(&mut r, parallel_f_residual(&geo, &s.f));
    }
    Ok(CheckResult::measured("parallel-f", r, tol))
}

/// `g(V,V) − 1`, `∇V`, `(FV)(α)`, `g(FV,FV) − 1`, `Hess α(X, FV)`, `R(X,Y)V`.
pub fn check_v_and_alpha<R: Rng>(
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: f64,
    rng: &mut R,
) -> Result<Vec<CheckResult>> {
    let mut r = [0.0f64; 6];
    for p in points {
        let s = PointStructure::new(spec, p)?;
        let geo = Geometry::new(spec, p, MetricKind::Base)?;
        let n = s.n;
        let g = geo.metric();
        let v = s.v_value();
        fold_max(&mut r[0], (bilinear(g, &v, &v) - 1.0).abs());
        let nv = geo.covariant_jets(&s.v);
        fold_max(&mut r[1], max_abs(nv.iter().map(Jet::value)));
        let xi: Vec<f64> = structure_field_jets(&s.f, &s.v)
            .iter()
            .map(Jet::value)
            .collect();
        let da: f64 = xi.iter().zip(s.alpha.grad()).map(|(a, b)| a * b).sum();
        fold_max(&mut r[2], da.abs());
        fold_max(&mut r[3], (bilinear(g, &xi, &xi) - 1.0).abs());
        let hess = geo.hessian(&s.alpha);
        let hxi = mat_vec(&hess, &xi);
        let curv = geo.curvature();
        for _ in 0..TRIALS_PER_POINT {
            let x = random_vector(rng, n);
            let y = random_vector(rng, n);
            let hx: f64 = x.iter().zip(&hxi).map(|(a, b)| a * b).sum();
            fold_max(&mut r[4], hx.abs());
            fold_max(&mut r[5], max_abs(curv.apply(&x, &y, &v)));
        }
    }
    let names = [
        "v-unit",
        "parallel-v",
        "fv-alpha",
        "fv-unit",
        "hess-fv",
        "curvature-v",
    ];
    Ok(names
        .iter()
        .zip(r)
        .map(|(name, x)| CheckResult::measured(name, x, tol))
        .collect())
}

/// Pairwise differences among `R(FX,Y)Z`, `R(X,FY)Z`, `R(X,Y)FZ`, `F R(X,Y)Z`.
///
/// Only meaningful when `∇F = 0`; reported as not applicable otherwise.
pub fn check_curvature_purity<R: Rng>(
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: f64,
    rng: &mut R,
) -> Result<CheckResult> {
    const NAME: &str = "curvature-purity";
    if !check_parallel_f(spec, points, tol)?.pass {
        return Ok(CheckResult::not_applicable(NAME, tol, "parallel-f failed"));
    }
    let mut r = 0.0;
    for p in points {
        let f = PointStructure::new(spec, p)?.f_matrix();
        let geo = Geometry::new(spec, p, MetricKind::Base)?;
        let curv = geo.curvature();
        let n = geo.dim();
        for _ in 0..TRIALS_PER_POINT {
            let (x, y, z) = (
                random_vector(rng, n),
                random_vector(rng, n),
                random_vector(rng, n),
            );
            let fx = mat_vec(&f, &x);
            let fy = mat_vec(&f, &y);
            let fz = mat_vec(&f, &z);
            let variants = [
                curv.apply(&fx, &y, &z),
                curv.apply(&x, &fy, &z),
                curv.apply(&x, &y, &fz),
                mat_vec(&f, &curv.apply(&x, &y, &z)),
            ];
            for a in 0..4 {
                for b in a + 1..4 {
                    fold_max(
                        &mut r,
                        max_abs(variants[a].iter().zip(&variants[b]).map(|(u, w)| u - w)),
                    );
                }
            }
        }
    }
    Ok(CheckResult::measured(NAME, r, tol))
}

/// Metric positive definiteness and well-conditioning, and `α > ALPHA_GUARD`,
/// at every sample. Residuals count offending points.
fn check_metric_and_alpha(spec: &ManifoldSpec, points: &[Vec<f64>]) -> Result<Vec<CheckResult>> {
    let (mut bad_metric, mut bad_alpha) = (0usize, 0usize);
    let mut first_metric: Option<String> = None;
    for p in points {
        match Geometry::new(spec, p, MetricKind::Base) {
            Ok(_) => {}
            Err(
                e @ (Error::NotPositiveDefinite { .. }
                | Error::SingularMetric { .. }
                | Error::AsymmetricMetric { .. }),
            ) => {
                bad_metric += 1;
                first_metric.get_or_insert_with(|| e.to_string());
            }
            Err(e) => return Err(e),
        }
        if spec.alpha_jet(p)?.value() <= ALPHA_GUARD {
            bad_alpha += 1;
        }
    }
    let mut metric = CheckResult::measured("metric-positive", bad_metric as f64, 0.0);
    metric.note = first_metric;
    let mut alpha = CheckResult::measured("alpha-positive", bad_alpha as f64, 0.0);
    if bad_alpha > 0 {
        alpha.note = Some(format!("alpha <= {ALPHA_GUARD:e} at {bad_alpha} point(s)"));
    }
    Ok(vec![metric, alpha])
}

/// Every structural check over `points`.
///
/// When the metric itself is unusable at some sample, only the metric and
/// `α` checks are reported; the derivative checks would error out.
pub fn validate<R: Rng>(
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: f64,
    rng: &mut R,
) -> Result<ValidationReport> {
    spec.structure()?;
    let mut checks = check_metric_and_alpha(spec, points)?;
    if checks[0].pass {
        checks.extend(check_para_complex(spec, points, tol)?);
        checks.push(check_norden_purity(spec, points, tol)?);
        checks.push(check_parallel_f(spec, points, tol)?);
        checks.extend(check_v_and_alpha(spec, points, tol, rng)?);
        checks.push(check_curvature_purity(spec, points, tol, rng)?);
    }
    Ok(ValidationReport {
        spec: spec.name().to_string(),
        samples: points.len(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin, builtin_source};
    use crate::chart::ChartSource;
    use crate::sampling::{rng, sample_points, SampleConfig};

    fn pts(spec: &ManifoldSpec, n: usize, seed: u64) -> Vec<Vec<f64>> {
        sample_points(spec.domain(), &SampleConfig::split(n, seed))
    }

    fn flat2_with(edit: impl FnOnce(&mut ChartSource)) -> ManifoldSpec {
        let mut src = builtin_source("flat2").unwrap();
        edit(&mut src);
        ManifoldSpec::compile(&src, None).unwrap()
    }

    fn strings(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn builtins_validate() {
        for name in ["flat2", "flat4", "curved4", "flat2-affine"] {
            let spec = builtin(name).unwrap();
            let report = validate(
                &spec,
                &pts(&spec, 100, 42),
                STRUCTURE_TOLERANCE,
                &mut rng(42),
            )
            .unwrap();
            assert!(report.pass(), "{name}: {:?}", report.checks);
            assert_eq!(report.checks.len(), 13);
            assert!(report.get("curvature-purity").unwrap().residual.is_some());
        }
    }

    #[test]
    fn identity_f_fails_trace_only() {
        let spec = flat2_with(|s| s.f = Some(strings(&[&["1", "0"], &["0", "1"]])));
        let c = check_para_complex(&spec, &pts(&spec, 10, 1), 1e-9).unwrap();
        assert_eq!(c[0].residual, Some(0.0));
        assert_eq!(c[1].residual, Some(2.0));
        assert!(!c[1].pass);
    }

    #[test]
    fn diagonal_f_is_para_complex() {
        let spec = flat2_with(|s| {
            s.f = Some(strings(&[&["1", "0"], &["0", "-1"]]));
            s.v = Some(vec!["0".into(), "1".into()]);
        });
        let c = check_para_complex(&spec, &pts(&spec, 10, 1), 1e-9).unwrap();
        assert!(c.iter().all(|c| c.pass));
    }

    #[test]
    fn antisymmetric_f_is_not_pure() {
        let spec = flat2_with(|s| s.f = Some(strings(&[&["0", "1"], &["-1", "0"]])));
        let c = check_norden_purity(&spec, &pts(&spec, 10, 1), 1e-9).unwrap();
        assert_eq!(c.residual, Some(2.0));
        assert!(!c.pass);
    }

    #[test]
    fn conjugated_diagonal_f_is_pure() {
        // g = SᵀS, F = S⁻¹DS gives gF = SᵀDS, which is symmetric
        let mut r = rng(17);
        for _ in 0..5 {
            let s = DMatrix::from_fn(4, 4, |i, j| {
                (if i == j { 2.0 } else { 0.0 }) + r.gen_range(-0.5..0.5)
            });
            let d =
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, 1.0, -1.0]));
            let g = s.transpose() * &s;
            let f = s.clone().try_inverse().unwrap() * d * &s;
            let mat = |m: &DMatrix<f64>| -> Vec<Vec<String>> {
                (0..4)
                    .map(|i| (0..4).map(|j| format!("{:e}", m[(i, j)])).collect())
                    .collect()
            };
            let mut src = builtin_source("flat4").unwrap();
            src.metric = mat(&g);
            src.f = Some(mat(&f));
            let spec = ManifoldSpec::compile(&src, None).unwrap();
            let p = pts(&spec, 5, 3);
            assert!(check_norden_purity(&spec, &p, 1e-9).unwrap().pass);
            assert!(check_para_complex(&spec, &p, 1e-9)
                .unwrap()
                .iter()
                .all(|c| c.pass));
        }
    }

    #[test]
    fn nonconstant_f_entry_shows_up_in_parallel_check() {
        // F^0_1 = 1 + x/4 on flat g: (∇_x F)^0_1 = 1/4
        let spec = flat2_with(|s| s.f = Some(strings(&[&["0", "1 + x/4"], &["1", "0"]])));
        let c = check_parallel_f(&spec, &pts(&spec, 10, 1), 1e-9).unwrap();
        assert!((c.residual.unwrap() - 0.25).abs() < 1e-15);
        let purity = check_curvature_purity(&spec, &pts(&spec, 10, 1), 1e-9, &mut rng(0)).unwrap();
        assert_eq!(purity.residual, None);
        assert!(purity.pass);
    }

    #[test]
    fn alpha_depending_on_fv_direction_fails() {
        let spec = flat2_with(|s| s.alpha = Some("3 + x + y".into()));
        let c = check_v_and_alpha(&spec, &pts(&spec, 10, 1), 1e-9, &mut rng(0)).unwrap();
        let fv = c.iter().find(|c| c.name == "fv-alpha").unwrap();
        assert!((fv.residual.unwrap() - 1.0).abs() < 1e-15);
        assert!(!fv.pass);
    }

    #[test]
    fn long_v_fails_unit_check() {
        let spec = flat2_with(|s| s.v = Some(vec!["2".into(), "0".into()]));
        let c = check_v_and_alpha(&spec, &pts(&spec, 10, 1), 1e-9, &mut rng(0)).unwrap();
        assert_eq!(c[0].residual, Some(3.0));
        assert!(!c[0].pass);
    }

    #[test]
    fn non_positive_alpha_is_reported() {
        let spec = flat2_with(|s| s.alpha = Some("y^2 - 1".into()));
        let r = validate(&spec, &pts(&spec, 20, 1), 1e-9, &mut rng(0)).unwrap();
        assert!(!r.get("alpha-positive").unwrap().pass);
        assert!(r.require().is_err());
    }

    #[test]
    fn plain_chart_cannot_be_validated() {
        let spec = builtin("line1").unwrap();
        assert!(matches!(
            validate(&spec, &pts(&spec, 4, 0), 1e-9, &mut rng(0)),
            Err(Error::MissingStructure(_))
        ));
    }

    #[test]
    fn validated_identities_hold_off_sample() {
        for name in ["flat4", "curved4"] {
            let spec = builtin(name).unwrap();
            let r = validate(&spec, &pts(&spec, 100, 1), 1e-9, &mut rng(1)).unwrap();
            assert!(r.pass());
            let fresh = pts(&spec, 60, 999);
            let c = check_v_and_alpha(&spec, &fresh, 1e-9, &mut rng(2)).unwrap();
            assert!(c.iter().all(|c| c.pass), "{c:?}");
        }
    }
}
