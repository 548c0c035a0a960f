use super::*;
use crate::builtins::builtin;
use crate::sampling::{rng, sample_points, SampleConfig};

fn ctx(name: &str, p: &[f64]) -> DeformationContext {
    DeformationContext::new(&builtin(name).unwrap(), p).unwrap()
}

fn flat2_gauss(x: f64) -> f64 {
    let (a, da, dda) = (1.0 + x * x, 2.0 * x, 2.0);
    (da * da - a * dda) / (2.0 * a * a * a)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn flat2_connection_hand_values() {
    let c = ctx("flat2", &[1.0, 0.3]);
    let (ex, ey) = ([1.0, 0.0], [0.0, 1.0]);
    let xx = c.connection(&ex, &ex);
    let yy = c.connection(&ey, &ey);
    let xy = c.connection(&ex, &ey);
    assert!((xx[0] - 0.5).abs() < 1e-10);
    assert!((yy[0] + 1.0).abs() < 1e-10);
    assert!((xy[1] - 0.5).abs() < 1e-10);
}

#[test]
fn flat2_deformed_metric_components() {
    let c = ctx("flat2", &[1.0, 0.0]);
    let g = c.deformed_metric_components();
    assert_eq!(g[(0, 0)], 2.0);
    assert_eq!(g[(1, 1)], 4.0);
    assert_eq!(g[(0, 1)], 0.0);
}

#[test]
fn flat2_sectional_is_gaussian_curvature() {
    for i in 0..50 {
        let x = -2.0 + 4.0 * i as f64 / 49.0;
        let c = ctx("flat2", &[x, 0.5]);
        let k = c.sectional(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k - flat2_gauss(x)).abs() < 1e-9, "x = {x}: {k}");
    }
    let k2 = ctx("flat2", &[2.0, 0.0])
        .sectional(&[1.0, 0.0], &[0.0, 1.0])
        .unwrap();
    assert!((k2 - 0.024).abs() < 1e-12);
    let k1 = ctx("flat2", &[1.0, 0.0])
        .sectional(&[1.0, 0.0], &[0.0, 1.0])
        .unwrap();
    assert!(k1.abs() < 1e-12);
}

#[test]
fn flat2_scalar_is_twice_gaussian_curvature() {
    for x in [-1.7, -0.4, 0.0, 1.0, 2.0] {
        let s = ctx("flat2", &[x, 0.0]).scalar();
        assert!((s - 2.0 * flat2_gauss(x)).abs() < 1e-9);
    }
    assert!((ctx("flat2", &[2.0, 0.0]).scalar() - 0.048).abs() < 1e-12);
}

#[test]
fn sectional_rejects_non_orthonormal_pairs() {
    let c = ctx("flat2", &[0.2, 0.0]);
    assert!(matches!(
        c.sectional(&[1.0, 0.0], &[1.0, 1.0]),
        Err(Error::NotOrthonormal { .. })
    ));
}

#[test]
fn sectional_agrees_with_quotient_of_closed_tensor() {
    for name in ["flat4", "curved4"] {
        let spec = builtin(name).unwrap();
        let mut r = rng(5);
        for p in sample_points(spec.domain(), &SampleConfig::split(10, 5)) {
            let c = DeformationContext::new(&spec, &p).unwrap();
            let pair = [random_vector(&mut r, 4), random_vector(&mut r, 4)];
            let on = crate::chart::gram_schmidt(c.base().metric(), &pair).unwrap();
            let k = c.sectional(&on[0], &on[1]).unwrap();
            let q = c.sectional_quotient(&on[0], &on[1]);
            assert!((k - q).abs() < 1e-9 * (1.0 + q.abs()), "{name}: {k} vs {q}");
        }
    }
}

#[test]
fn closed_riemann_symmetries() {
    let spec = builtin("curved4").unwrap();
    let mut r = rng(11);
    for p in sample_points(spec.domain(), &SampleConfig::split(8, 11)) {
        let c = DeformationContext::new(&spec, &p).unwrap();
        let (x, y, z) = (
            random_vector(&mut r, 4),
            random_vector(&mut r, 4),
            random_vector(&mut r, 4),
        );
        let xy = c.riemann(&x, &y, &z);
        let yx = c.riemann(&y, &x, &z);
        assert!(
            xy.iter().zip(&yx).all(|(a, b)| a + b == 0.0),
            "{xy:?} {yx:?}"
        );
        let cyc = lin(&[
            (1.0, &xy),
            (1.0, &c.riemann(&y, &z, &x)),
            (1.0, &c.riemann(&z, &x, &y)),
        ]);
        assert!(cyc.iter().all(|v| v.abs() < 1e-8), "{cyc:?}");
    }
}

#[test]
fn ricci_tensor_lowers_ricci_operator() {
    for name in ["flat2", "flat4", "curved4"] {
        let spec = builtin(name).unwrap();
        let n = spec.dimension();
        let mut r = rng(2);
        for p in sample_points(spec.domain(), &SampleConfig::split(10, 2)) {
            let c = DeformationContext::new(&spec, &p).unwrap();
            let (x, y) = (random_vector(&mut r, n), random_vector(&mut r, n));
            let lhs = c.ricci_tensor(&x, &y);
            let rhs = c.ga(&c.ricci_operator(&x), &y);
            assert!((lhs - rhs).abs() < 1e-9, "{name}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn scalar_is_trace_over_deformed_frame() {
    for name in ["flat2", "flat4", "curved4"] {
        let spec = builtin(name).unwrap();
        for p in sample_points(spec.domain(), &SampleConfig::split(6, 8)) {
            let c = DeformationContext::new(&spec, &p).unwrap();
            let frame = c.deformed_frame().unwrap();
            for (i, e) in frame.iter().enumerate() {
                for (j, f) in frame.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((c.ga(e, f) - want).abs() < 1e-10);
                }
            }
            let trace: f64 = frame.iter().map(|e| c.ricci_tensor(e, e)).sum();
            assert!(
                (trace - c.scalar()).abs() < 1e-9,
                "{name}: {trace} vs {}",
                c.scalar()
            );
        }
    }
}

#[test]
fn killing_suite_on_affine_alpha() {
    let spec = builtin("flat2-affine").unwrap();
    let mut r = rng(1);
    for p in sample_points(spec.domain(), &SampleConfig::split(100, 1)) {
        let c = DeformationContext::new(&spec, &p).unwrap();
        let suite = c.killing_corollary_suite(&mut r, 5).unwrap();
        assert!(suite.max() <= 1e-10, "{suite:?}");
    }
}

#[test]
fn killing_forms_refuse_curved_alpha() {
    let c = ctx("flat2", &[0.5, 0.0]);
    assert!(matches!(
        c.killing_corollary_suite(&mut rng(0), 1),
        Err(Error::NotKilling { .. })
    ));
    assert!(matches!(c.killing_scalar(), Err(Error::NotKilling { .. })));
}

#[test]
fn flat4_nabla_grad_matches_hand_value() {
    // α = 1 + x2², G = (0, 2 x2, 0, 0), |G|² = 4 x2²
    let c = ctx("flat4", &[0.0, 1.0, 0.0, 0.0]);
    let v = c.nabla_grad(&[0.0, 1.0, 0.0, 0.0]);
    assert!(max_diff(&v, &[0.0, 3.0, 0.0, 0.0]) < 1e-12, "{v:?}");
}
