use super::*;
use crate::builtins::builtin;
use crate::sampling::{rng, sample_points, SampleConfig};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn flat2_base_metric_is_identity() {
    let spec = builtin("flat2").unwrap();
    let (g, ginv, _) = metric_at(&spec, &[0.3, -1.0], MetricKind::Base).unwrap();
    assert_eq!(g, DMatrix::identity(2, 2));
    assert_eq!(ginv, DMatrix::identity(2, 2));
}

#[test]
fn flat2_deformed_metric_at_one() {
    let spec = builtin("flat2").unwrap();
    let geo = Geometry::new(&spec, &[1.0, 0.4], MetricKind::Deformed).unwrap();
    assert_eq!(
        geo.metric(),
        &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0])
    );
    assert!(geo.inverse_defect() <= 1e-12);
    // diag(α, 2α) everywhere
    let geo = Geometry::new(&spec, &[-1.5, 1.9], MetricKind::Deformed).unwrap();
    let a = 1.0 + 1.5f64.powi(2);
    assert!(close(geo.metric()[(0, 0)], a, 1e-15) && close(geo.metric()[(1, 1)], 2.0 * a, 1e-15));
}

#[test]
fn flat2_deformed_christoffels() {
    let spec = builtin("flat2").unwrap();
    let base = christoffel_at(&spec, &[1.0, 0.0], MetricKind::Base).unwrap();
    assert!(base.gamma.iter().all(|&v| v == 0.0));
    let c = christoffel_at(&spec, &[1.0, 0.0], MetricKind::Deformed).unwrap();
    let (x, y) = (0, 1);
    assert!(close(c.get(x, x, x), 0.5, 1e-12));
    assert!(close(c.get(x, y, y), -1.0, 1e-12));
    assert!(close(c.get(y, x, y), 0.5, 1e-12));
    assert!(close(c.get(y, y, x), 0.5, 1e-12));
    for (k, i, j) in [(x, x, y), (x, y, x), (y, x, x), (y, y, y)] {
        assert_eq!(c.get(k, i, j), 0.0);
    }
}

#[test]
fn flat2_deformed_scalar_matches_gaussian_curvature() {
    let spec = builtin("flat2").unwrap();
    let s = riemann_at(&spec, &[2.0, 0.0], MetricKind::Deformed)
        .unwrap()
        .scalar;
    assert!(close(s, 0.048, 1e-12), "{s}");
    let s = riemann_at(&spec, &[1.0, 0.0], MetricKind::Deformed)
        .unwrap()
        .scalar;
    assert!(s.abs() < 1e-12);
    let flat = riemann_at(&spec, &[1.0, 0.0], MetricKind::Base).unwrap();
    assert!(flat.riemann.iter().all(|&v| v == 0.0));
}

#[test]
fn gradient_hessian_laplacian_examples() {
    let spec = builtin("flat2").unwrap();
    let alpha = spec.alpha().unwrap().clone();
    let p = [1.0, 0.5];
    assert_eq!(
        gradient_at(&spec, &p, &alpha, MetricKind::Base).unwrap(),
        vec![2.0, 0.0]
    );
    let gd = gradient_at(&spec, &p, &alpha, MetricKind::Deformed).unwrap();
    assert!(close(gd[0], 1.0, 1e-15) && gd[1] == 0.0);
    let c = spec.parse_field("3.5").unwrap();
    assert_eq!(
        gradient_at(&spec, &p, &c, MetricKind::Deformed).unwrap(),
        vec![0.0, 0.0]
    );

    let h = hessian_at(&spec, &p, &alpha, MetricKind::Base).unwrap();
    assert_eq!(h, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]));
    let affine = spec.parse_field("1 + x").unwrap();
    assert_eq!(
        hessian_at(&spec, &p, &affine, MetricKind::Base)
            .unwrap()
            .amax(),
        0.0
    );

    assert_eq!(
        laplacian_at(&spec, &p, &alpha, MetricKind::Base).unwrap(),
        2.0
    );
    let xy = spec.parse_field("x*y").unwrap();
    assert_eq!(laplacian_at(&spec, &p, &xy, MetricKind::Base).unwrap(), 0.0);

    // deformed Laplacian by hand: diag(α, 2α), Γ from above at x = 1
    // Hess̃_xx = α″ − Γ̃^x_xx α′ = 2 − 1 = 1, Hess̃_yy = −Γ̃^x_yy α′ = 2
    let lap = laplacian_at(&spec, &[1.0, 0.0], &alpha, MetricKind::Deformed).unwrap();
    assert!(close(lap, 1.0 / 2.0 + 2.0 / 4.0, 1e-12), "{lap}");
}

#[test]
fn killing_residuals() {
    let spec = builtin("flat2").unwrap();
    let pts = sample_points(spec.domain(), &SampleConfig::split(20, 1));
    let r = |src: &str| {
        killing_potential_residual(&spec, &spec.parse_field(src).unwrap(), &pts).unwrap()
    };
    assert_eq!(r("1 + x"), 0.0);
    assert_eq!(r("1 + x^2"), 2.0);
    assert_eq!(r("4"), 0.0);
}

#[test]
fn outside_domain_and_bad_metrics() {
    let spec = builtin("flat2").unwrap();
    assert!(matches!(
        metric_at(&spec, &[3.0, 0.0], MetricKind::Base),
        Err(Error::OutsideDomain { .. })
    ));
    let mut src = crate::builtins::builtin_source("flat2").unwrap();
    src.metric = vec![vec!["1".into(), "2".into()], vec!["2".into(), "1".into()]];
    let bad = ManifoldSpec::compile(&src, None).unwrap();
    assert!(matches!(
        metric_at(&bad, &[0.0, 0.0], MetricKind::Base),
        Err(Error::NotPositiveDefinite { .. })
    ));
    src.metric = vec![
        vec!["1".into(), "0".into()],
        vec!["0".into(), "1e-13".into()],
    ];
    let bad = ManifoldSpec::compile(&src, None).unwrap();
    assert!(matches!(
        metric_at(&bad, &[0.0, 0.0], MetricKind::Base),
        Err(Error::SingularMetric { .. })
    ));
    src.metric = vec![vec!["1".into(), "x".into()], vec!["0".into(), "1".into()]];
    let bad = ManifoldSpec::compile(&src, None).unwrap();
    assert!(matches!(
        metric_at(&bad, &[0.5, 0.0], MetricKind::Base),
        Err(Error::AsymmetricMetric { .. })
    ));
}

fn properties_on(name: &str) {
    let spec = builtin(name).unwrap();
    let n = spec.dimension();
    let pts = sample_points(spec.domain(), &SampleConfig::split(100, 3));
    let mut r = rng(11);
    for p in &pts {
        for which in [MetricKind::Base, MetricKind::Deformed] {
            let geo = Geometry::new(&spec, p, which).unwrap();
            assert!(geo.inverse_defect() <= 1e-12);
            assert!(geo.compatibility_residual() <= 1e-9, "{name} {which:?}");
            let c = geo.connection();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(c.get(k, i, j), c.get(k, j, i));
                    }
                }
            }
            let curv = geo.curvature();
            assert!(curv.bianchi_residual() <= 1e-8);
            assert!((curv.ricci_tensor.clone() - curv.ricci_tensor.transpose()).amax() <= 1e-9);
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            assert_eq!(curv.riemann(l, i, j, k), -curv.riemann(l, j, i, k));
                        }
                    }
                }
            }
        }
        // lowered base tensor: antisymmetric in the last pair, pair symmetric
        let geo = Geometry::new(&spec, p, MetricKind::Base).unwrap();
        let curv = geo.curvature();
        let low = |i: usize, j: usize, k: usize, m: usize| -> f64 {
            (0..n)
                .map(|l| curv.riemann(l, i, j, k) * geo.metric()[(l, m)])
                .sum()
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        assert!((low(i, j, k, m) + low(i, j, m, k)).abs() <= 1e-8);
                        assert!((low(i, j, k, m) - low(k, m, i, j)).abs() <= 1e-8);
                    }
                }
            }
        }
        // scalar as a sum over a random orthonormal frame
        let vs: Vec<Vec<f64>> = (0..n)
            .map(|_| crate::sampling::random_vector(&mut r, n))
            .collect();
        let frame = gram_schmidt(geo.metric(), &vs).unwrap();
        let s: f64 = frame
            .iter()
            .map(|e| bilinear(&curv.ricci_tensor, e, e))
            .sum();
        assert!((s - curv.scalar).abs() <= 1e-8);
    }
}

#[test]
fn geometric_identities_flat4() {
    properties_on("flat4");
}

#[test]
fn geometric_identities_curved4() {
    properties_on("curved4");
}

#[test]
fn geometric_identities_flat2() {
    properties_on("flat2");
}

#[test]
fn curved4_has_curvature() {
    let spec = builtin("curved4").unwrap();
    let curv = riemann_at(&spec, &[0.2, 0.1, 0.0, 0.0], MetricKind::Base).unwrap();
    // K = −e^{−2u} u″ for e^{2u}(dx1² + dx2²), scalar = 2K
    let u: f64 = 0.2 / 3.0 + 0.04 / 5.0;
    let want = -2.0 * (-2.0 * u).exp() * 0.4;
    assert!(
        (curv.scalar - want).abs() < 1e-12,
        "{} vs {want}",
        curv.scalar
    );
}
