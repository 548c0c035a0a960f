//! Definition-based ground truth. Nothing here reads a closed-form result: the
//! deformed metric is assembled component by component and everything else
//! follows by exact differentiation of those components.

mod compare;

use crate::chart::{
    map_tension, ConnectionCoefficients, CurvatureBundle, Geometry, ManifoldSpec, MetricKind,
};
use crate::error::Result;
use crate::expr::Jet;
use crate::harmonic::TensionValue;
use crate::map::{Direction, MapSpec};

pub use compare::{
    compare, compare_map, CompareOutcome, ComparisonReport, Formula, Skipped, Tolerances,
    VECTORS_PER_POINT,
};

pub fn oracle_connection(
    spec: &ManifoldSpec,
    point: &[f64],
    which: MetricKind,
) -> Result<ConnectionCoefficients> {
    Ok(Geometry::new(spec, point, which)?.connection())
}

/// Curvature of the deformed metric.
pub fn oracle_curvature(spec: &ManifoldSpec, point: &[f64]) -> Result<CurvatureBundle> {
    Ok(Geometry::new(spec, point, MetricKind::Deformed)?.curvature())
}

/// Tension of `map` at `point`, measured in the tagged target metric.
pub fn oracle_tension(map: &MapSpec, point: &[f64]) -> Result<TensionValue> {
    let (src, tgt, phi) = map.geometries(point)?;
    Ok(TensionValue::new(
        map_tension(&src, &tgt, &phi),
        tgt.metric(),
    ))
}

/// `τ^k = g_s^{ij}(Γt^k_{ij} − Γs^k_{ij})` for the identity, as order-2 jets.
pub fn identity_tension_jets(source: &Geometry, target: &Geometry) -> Vec<Jet> {
    let n = source.dim();
    let gi = source.inverse_jets();
    (0..n)
        .map(|k| {
            let mut s = Jet::zero(n).truncated(2);
            for i in 0..n {
                for j in 0..n {
                    let d = target.gamma_jet(k, i, j) - source.gamma_jet(k, i, j);
                    s = &s + &(&gi[i * n + j] * &d);
                }
            }
            s
        })
        .collect()
}

fn identity_geometries(
    spec: &ManifoldSpec,
    point: &[f64],
    direction: Direction,
) -> Result<(Geometry, Geometry)> {
    let base = Geometry::new(spec, point, MetricKind::Base)?;
    let deformed = Geometry::new(spec, point, MetricKind::Deformed)?;
    Ok(match direction {
        Direction::ToDeformed => (base, deformed),
        Direction::FromDeformed => (deformed, base),
    })
}

/// Identity tension, measured in the base metric.
pub fn oracle_identity_tension(
    spec: &ManifoldSpec,
    point: &[f64],
    direction: Direction,
) -> Result<TensionValue> {
    let (src, tgt) = identity_geometries(spec, point, direction)?;
    let tau: Vec<f64> = identity_tension_jets(&src, &tgt)
        .iter()
        .map(Jet::value)
        .collect();
    let base = if direction == Direction::ToDeformed {
        &src
    } else {
        &tgt
    };
    Ok(TensionValue::new(tau, base.metric()))
}

/// Bitension of the identity from source and target geometries at one point.
///
/// `τ₂ = −g^{ij}(∇_i∇_j − ∇_{∇_i ∂_j})τ − g^{jk} R_t(τ, ∂_j)∂_k`, where the
/// pull-back derivatives use the target connection and the correction
/// `∇_{∂_i}∂_j` uses the source connection.
pub fn identity_bitension(source: &Geometry, target: &Geometry) -> Vec<f64> {
    let n = source.dim();
    let tau = identity_tension_jets(source, target);
    let d = target.covariant_jets(&tau); // (D_j τ)^k at j*n+k, order 1
    let gi = source.inverse();
    let curv = target.curvature();
    (0..n)
        .map(|k| {
            let mut lap = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let w = gi[(i, j)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut dd = d[j * n + k].d1(i);
                    for l in 0..n {
                        dd += target.gamma(k, i, l) * d[j * n + l].value();
                        dd -= source.gamma(l, i, j) * d[l * n + k].value();
                    }
                    lap -= w * dd;
                }
            }
            let mut rc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        rc -= curv.riemann(k, i, j, l) * tau[i].value() * gi[(j, l)];
                    }
                }
            }
            lap + rc
        })
        .collect()
}

/// Identity bitension, measured in the base metric.
pub fn oracle_bitension(
    spec: &ManifoldSpec,
    point: &[f64],
    direction: Direction,
) -> Result<TensionValue> {
    let (src, tgt) = identity_geometries(spec, point, direction)?;
    let v = identity_bitension(&src, &tgt);
    let base = if direction == Direction::ToDeformed {
        &src
    } else {
        &tgt
    };
    Ok(TensionValue::new(v, base.metric()))
}

#[cfg(test)]
mod tests;
