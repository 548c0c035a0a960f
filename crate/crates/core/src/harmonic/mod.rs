//! Closed-form tension and bitension fields for the identity between `g` and
//! `g^α`, tension fields of general maps into or out of a deformed chart, and
//! the harmonic / biharmonic classification built on them.

use nalgebra::DMatrix;

use crate::berger::{metric::structure_field_jets, DeformationContext};
use crate::chart::{bilinear, map_tension, mat_vec, Geometry, ManifoldSpec, MetricKind};
use crate::error::Result;
use crate::expr::Jet;
pub use crate::map::{DeformedSide, Direction, MapSpec};

/// A tangent vector at the image point together with its length.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TensionValue {
    pub components: Vec<f64>,
    pub norm: f64,
}

impl TensionValue {
    pub fn new(components: Vec<f64>, metric: &DMatrix<f64>) -> Self {
        let norm = bilinear(metric, &components, &components).max(0.0).sqrt();
        TensionValue { components, norm }
    }
}

fn scaled(c: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| c * x).collect()
}

/// `((1 − 2m)/2α) grad α`, measured in the base metric.
pub fn tension_identity_to_deformed(ctx: &DeformationContext) -> TensionValue {
    let m = ctx.m() as f64;
    let c = (1.0 - 2.0 * m) / (2.0 * ctx.alpha());
    TensionValue::new(scaled(c, ctx.grad()), ctx.base().metric())
}

/// `((m − 1)/α²) grad α`, measured in the base metric.
pub fn tension_identity_from_deformed(ctx: &DeformationContext) -> TensionValue {
    let m = ctx.m() as f64;
    let c = (m - 1.0) / (ctx.alpha() * ctx.alpha());
    TensionValue::new(scaled(c, ctx.grad()), ctx.base().metric())
}

pub fn tension_identity(ctx: &DeformationContext, direction: Direction) -> TensionValue {
    match direction {
        Direction::ToDeformed => tension_identity_to_deformed(ctx),
        Direction::FromDeformed => tension_identity_from_deformed(ctx),
    }
}

fn combine(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = vec![0.0; terms[0].1.len()];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += c * x;
        }
    }
    out
}

/// Bitension of `I: (M, g) → (M, g^α)`.
pub fn bitension_identity_to_deformed(ctx: &DeformationContext) -> TensionValue {
    let (m, a) = (ctx.m() as f64, ctx.alpha());
    let g = ctx.grad();
    let ricci = ctx.base_curvature().ricci(g);
    let bracket = combine(&[
        (1.0, ctx.rough_laplacian_grad()),
        (-1.0, &ricci),
        ((2.0 * m - 1.0) / (2.0 * a), ctx.nabla_grad_grad()),
        (
            -((2.0 * m + 3.0) * ctx.grad_norm2() / (4.0 * a * a) - 2.0 * ctx.laplacian() / a),
            g,
        ),
        (-1.0, ctx.nabla_xi_xi_grad()),
    ]);
    let c = (1.0 - 2.0 * m) / (2.0 * a);
    TensionValue::new(scaled(c, &bracket), ctx.base().metric())
}

/// Bitension of `I: (M, g^α) → (M, g)`.
pub fn bitension_identity_from_deformed(ctx: &DeformationContext) -> TensionValue {
    let (m, a) = (ctx.m() as f64, ctx.alpha());
    let g = ctx.grad();
    let ricci = ctx.base_curvature().ricci(g);
    let bracket = combine(&[
        (1.0, ctx.rough_laplacian_grad()),
        (-1.0, &ricci),
        (-(m - 5.0) / a, ctx.nabla_grad_grad()),
        (
            2.0 * ((m - 4.0) * ctx.grad_norm2() / (a * a) + ctx.laplacian() / a),
            g,
        ),
        (-0.5, ctx.nabla_xi_xi_grad()),
    ]);
    let c = (m - 1.0) / (a * a * a);
    TensionValue::new(scaled(c, &bracket), ctx.base().metric())
}

pub fn bitension_identity(ctx: &DeformationContext, direction: Direction) -> TensionValue {
    match direction {
        Direction::ToDeformed => bitension_identity_to_deformed(ctx),
        Direction::FromDeformed => bitension_identity_from_deformed(ctx),
    }
}

/// Tension of `φ: (M, g) → (N, h^α)` from the undeformed tension, with the
/// conformal factor read on `N`. Measured in `h^α`.
pub fn tension_map_to_deformed(map: &MapSpec, point: &[f64]) -> Result<TensionValue> {
    let phi = map.component_jets(point)?;
    let image = map.image(point)?;
    let src = Geometry::new(map.source(), point, MetricKind::Base)?;
    let tgt = Geometry::new(map.target(), &image, MetricKind::Base)?;
    let ctx = DeformationContext::new(map.target(), &image)?;
    let tau = map_tension(&src, &tgt, &phi);

    let a = ctx.alpha();
    let n = src.dim();
    // ∂_j(α∘φ) = ∂_μα ∂_jφ^μ
    let d_alpha_phi: Vec<f64> = (0..n)
        .map(|j| {
            phi.iter()
                .zip(ctx.alpha_differential())
                .map(|(c, da)| c.d1(j) * da)
                .sum()
        })
        .collect();
    let grad_m = mat_vec(src.inverse(), &d_alpha_phi);
    let push = MapSpec::push_forward(&phi, &grad_m);
    let ha = ctx.deformed_metric_components();
    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = src.inverse()[(i, j)];
            if w != 0.0 {
                let ei: Vec<f64> = phi.iter().map(|c| c.d1(i)).collect();
                let ej: Vec<f64> = phi.iter().map(|c| c.d1(j)).collect();
                trace += w * bilinear(ha, &ei, &ej);
            }
        }
    }
    let out = combine(&[
        (1.0, &tau),
        (1.0 / a, &push),
        (-trace / (2.0 * a * a), ctx.grad()),
    ]);
    Ok(TensionValue::new(out, ha))
}

/// Tension of `φ: (M, g^α) → (N, h)` from the undeformed tension. Measured in `h`.
pub fn tension_map_from_deformed(map: &MapSpec, point: &[f64]) -> Result<TensionValue> {
    let phi = map.component_jets(point)?;
    let image = map.image(point)?;
    let src = Geometry::new(map.source(), point, MetricKind::Base)?;
    let tgt = Geometry::new(map.target(), &image, MetricKind::Base)?;
    let ctx = DeformationContext::new(map.source(), point)?;
    let tau = map_tension(&src, &tgt, &phi);

    let (m, a) = (ctx.m() as f64, ctx.alpha());
    let n = src.dim();
    let xi_jets = structure_field_jets(&map.source().f_jets(point)?, &map.source().v_jets(point)?);
    let xi = ctx.xi();
    // pull-back derivative ∇^φ_ξ dφ(ξ)
    let d_xi = MapSpec::push_forward(&phi, xi);
    let nabla: Vec<f64> = (0..tgt.dim())
        .map(|c| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += xi[i] * (xi_jets[j].d1(i) * phi[c].d1(j) + xi[j] * phi[c].d2(i, j));
                }
            }
            for mu in 0..tgt.dim() {
                for nu in 0..tgt.dim() {
                    s += tgt.gamma(c, mu, nu) * d_xi[mu] * d_xi[nu];
                }
            }
            s
        })
        .collect();
    let push = MapSpec::push_forward(&phi, ctx.grad());
    let out = combine(&[
        (1.0 / a, &tau),
        (-1.0 / (2.0 * a), &nabla),
        ((m - 1.0) / (a * a), &push),
    ]);
    Ok(TensionValue::new(out, tgt.metric()))
}

/// `½ Tr_g |dφ|²` with the metrics the map is tagged with.
pub fn energy_density(map: &MapSpec, point: &[f64]) -> Result<f64> {
    let (src, tgt, phi) = map.geometries(point)?;
    let n = src.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ei: Vec<f64> = phi.iter().map(|c: &Jet| c.d1(i)).collect();
            let ej: Vec<f64> = phi.iter().map(|c: &Jet| c.d1(j)).collect();
            s += src.inverse()[(i, j)] * tgt.inner(&ei, &ej);
        }
    }
    Ok(0.5 * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Harmonic,
    ProperBiharmonic,
    NotBiharmonic,
}

impl Classification {
    pub fn id(self) -> &'static str {
        match self {
            Classification::Harmonic => "harmonic",
            Classification::ProperBiharmonic => "proper-biharmonic",
            Classification::NotBiharmonic => "not-biharmonic",
        }
    }
}

/// Largest norm of a pointwise field over the samples, with where it occurs.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Residual {
    pub max: f64,
    pub worst_point: Vec<f64>,
}

fn residual<F>(spec: &ManifoldSpec, points: &[Vec<f64>], f: F) -> Result<Residual>
where
    F: Fn(&DeformationContext) -> TensionValue,
{
    let mut out = Residual {
        max: 0.0,
        worst_point: points.first().cloned().unwrap_or_default(),
    };
    for p in points {
        let ctx = DeformationContext::new(spec, p)?;
        let v = f(&ctx).norm;
        if v > out.max {
            out = Residual {
                max: v,
                worst_point: p.clone(),
            };
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HarmonicVerdict {
    pub direction: Direction,
    pub harmonic: bool,
    pub tension: Residual,
    pub tolerance: f64,
    pub reason: String,
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn harmonic_reason(
    spec: &ManifoldSpec,
    direction: Direction,
    harmonic: bool,
    r: &Residual,
) -> String {
    if direction == Direction::FromDeformed && spec.half_dimension() == 1 {
        "harmonic (dim M = 2)".to_string()
    } else if harmonic {
        "harmonic (alpha constant)".to_string()
    } else {
        format!(
            "not harmonic (max |tau| = {:.6e} at {})",
            r.max,
            fmt_point(&r.worst_point)
        )
    }
}

/// Harmonicity of the identity map in the given direction over `points`.
pub fn is_harmonic(
    spec: &ManifoldSpec,
    direction: Direction,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<HarmonicVerdict> {
    let tension = residual(spec, points, |c| tension_identity(c, direction))?;
    let harmonic = tension.max <= tolerance;
    Ok(HarmonicVerdict {
        direction,
        harmonic,
        reason: harmonic_reason(spec, direction, harmonic, &tension),
        tension,
        tolerance,
    })
}

/// Harmonicity of a general map from the closed-form tension of its tagged side.
pub fn map_is_harmonic(
    map: &MapSpec,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<(bool, Residual)> {
    let mut r = Residual {
        max: 0.0,
        worst_point: points.first().cloned().unwrap_or_default(),
    };
    for p in points {
        let v = match map.deformed() {
            DeformedSide::Target => tension_map_to_deformed(map, p)?.norm,
            DeformedSide::Source => tension_map_from_deformed(map, p)?.norm,
            DeformedSide::Neither => {
                let (src, tgt, phi) = map.geometries(p)?;
                TensionValue::new(map_tension(&src, &tgt, &phi), tgt.metric()).norm
            }
        };
        if v > r.max {
            r = Residual {
                max: v,
                worst_point: p.clone(),
            };
        }
    }
    Ok((r.max <= tolerance, r))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BiharmonicVerdict {
    pub direction: Direction,
    pub classification: Classification,
    pub tension: Residual,
    pub bitension: Residual,
    pub tolerance: f64,
    pub reason: String,
}

pub fn classify_biharmonic(
    spec: &ManifoldSpec,
    direction: Direction,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<BiharmonicVerdict> {
    let tension = residual(spec, points, |c| tension_identity(c, direction))?;
    let bitension = residual(spec, points, |c| bitension_identity(c, direction))?;
    let (classification, reason) = if tension.max <= tolerance {
        (
            Classification::Harmonic,
            harmonic_reason(spec, direction, true, &tension),
        )
    } else if bitension.max <= tolerance {
        (
            Classification::ProperBiharmonic,
            format!(
                "proper-biharmonic (alpha non-constant, max |tau2| = {:.6e})",
                bitension.max
            ),
        )
    } else {
        (
            Classification::NotBiharmonic,
            format!(
                "not-biharmonic (max |tau2| = {:.6e} at {})",
                bitension.max,
                fmt_point(&bitension.worst_point)
            ),
        )
    };
    Ok(BiharmonicVerdict {
        direction,
        classification,
        tension,
        bitension,
        tolerance,
        reason,
    })
}
