use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{identity_bitension, identity_tension_jets, oracle_tension};
use crate::berger::{DeformationContext, KILLING_TOLERANCE};
use crate::chart::{bilinear, gram_schmidt, CurvatureBundle, Geometry, ManifoldSpec, MetricKind};
use crate::error::{Error, Result};
use crate::expr::Jet;
use crate::harmonic;
use crate::map::{DeformedSide, MapSpec};
use crate::sampling::{random_vector, rng};

/// Random argument vectors (or triples, or pairs) drawn per point.
pub const VECTORS_PER_POINT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    Connection,
    NablaGrad,
    Riemann,
    Sectional,
    RicciOperator,
    RicciTensor,
    Scalar,
    KillingRiemann,
    KillingSectional,
    KillingRicciOperator,
    KillingRicciTensor,
    KillingScalar,
    TensionToDeformed,
    TensionFromDeformed,
    MapTensionToDeformed,
    MapTensionFromDeformed,
    BitensionToDeformed,
    BitensionFromDeformed,
}

impl Formula {
    pub const ALL: [Formula; 18] = [
        Formula::Connection,
        Formula::NablaGrad,
        Formula::Riemann,
        Formula::Sectional,
        Formula::RicciOperator,
        Formula::RicciTensor,
        Formula::Scalar,
        Formula::KillingRiemann,
        Formula::KillingSectional,
        Formula::KillingRicciOperator,
        Formula::KillingRicciTensor,
        Formula::KillingScalar,
        Formula::TensionToDeformed,
        Formula::TensionFromDeformed,
        Formula::MapTensionToDeformed,
        Formula::MapTensionFromDeformed,
        Formula::BitensionToDeformed,
        Formula::BitensionFromDeformed,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Formula::Connection => "connection",
            Formula::NablaGrad => "nabla-grad",
            Formula::Riemann => "riemann",
            Formula::Sectional => "sectional",
            Formula::RicciOperator => "ricci-operator",
            Formula::RicciTensor => "ricci-tensor",
            Formula::Scalar => "scalar",
            Formula::KillingRiemann => "killing-riemann",
            Formula::KillingSectional => "killing-sectional",
            Formula::KillingRicciOperator => "killing-ricci-operator",
            Formula::KillingRicciTensor => "killing-ricci-tensor",
            Formula::KillingScalar => "killing-scalar",
            Formula::TensionToDeformed => "tension-to-deformed",
            Formula::TensionFromDeformed => "tension-from-deformed",
            Formula::MapTensionToDeformed => "map-tension-to-deformed",
            Formula::MapTensionFromDeformed => "map-tension-from-deformed",
            Formula::BitensionToDeformed => "bitension-to-deformed",
            Formula::BitensionFromDeformed => "bitension-from-deformed",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Formula::ALL
            .into_iter()
            .find(|f| f.id() == id)
            .ok_or_else(|| Error::UnknownFormula(id.to_string()))
    }

    /// `"all"` or a comma-separated list of ids.
    pub fn parse_list(spec: &str) -> Result<Vec<Self>> {
        if spec == "all" {
            return Ok(Formula::ALL.to_vec());
        }
        spec.split(',')
            .map(|s| Formula::from_id(s.trim()))
            .collect()
    }

    pub fn is_killing(self) -> bool {
        matches!(
            self,
            Formula::KillingRiemann
                | Formula::KillingSectional
                | Formula::KillingRicciOperator
                | Formula::KillingRicciTensor
                | Formula::KillingScalar
        )
    }

    fn index(self) -> u64 {
        Formula::ALL.iter().position(|&f| f == self).unwrap() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs: 1e-7,
            rel: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub formula: String,
    pub samples: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_abs: f64,
    pub mean_rel: f64,
    pub worst_point: Vec<f64>,
    pub closed_value: Vec<f64>,
    pub oracle_value: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub formula: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareOutcome {
    pub results: Vec<ComparisonReport>,
    pub skipped: Vec<Skipped>,
}

impl CompareOutcome {
    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

struct Accumulator {
    formula: Formula,
    samples: usize,
    max_abs: f64,
    max_rel: f64,
    sum_abs: f64,
    sum_rel: f64,
    worst: f64,
    worst_point: Vec<f64>,
    closed: Vec<f64>,
    oracle: Vec<f64>,
}

impl Accumulator {
    fn new(formula: Formula) -> Self {
        Accumulator {
            formula,
            samples: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            sum_abs: 0.0,
            sum_rel: 0.0,
            worst: -1.0,
            worst_point: Vec::new(),
            closed: Vec::new(),
            oracle: Vec::new(),
        }
    }

    fn add(&mut self, tol: &Tolerances, point: &[f64], closed: Vec<f64>, oracle: Vec<f64>) {
        debug_assert_eq!(closed.len(), oracle.len());
        let (mut pa, mut pr, mut badness) = (0.0f64, 0.0f64, 0.0f64);
        for (c, o) in closed.iter().zip(&oracle) {
            let abs = (c - o).abs();
            let scale = c.abs().max(o.abs());
            let rel = if scale == 0.0 { 0.0 } else { abs / scale };
            // NaN compares false everywhere, so force it to the top
            let b = if abs.is_nan() {
                f64::INFINITY
            } else {
                (abs / tol.abs).min(rel / tol.rel)
            };
            pa = pa.max(abs);
            pr = pr.max(rel);
            badness = badness.max(b);
        }
        self.samples += 1;
        self.max_abs = self.max_abs.max(pa);
        self.max_rel = self.max_rel.max(pr);
        self.sum_abs += pa;
        self.sum_rel += pr;
        if badness > self.worst {
            self.worst = badness;
            self.worst_point = point.to_vec();
            self.closed = closed;
            self.oracle = oracle;
        }
    }

    fn finish(self) -> ComparisonReport {
        let n = self.samples.max(1) as f64;
        ComparisonReport {
            formula: self.formula.id().to_string(),
            samples: self.samples,
            max_abs: self.max_abs,
            max_rel: self.max_rel,
            mean_abs: self.sum_abs / n,
            mean_rel: self.sum_rel / n,
            worst_point: self.worst_point,
            closed_value: self.closed,
            oracle_value: self.oracle,
            pass: self.samples > 0 && self.worst <= 1.0,
        }
    }
}

/// Both sides of every formula at one point, built lazily.
struct PointData<'a> {
    spec: &'a ManifoldSpec,
    point: &'a [f64],
    ctx: DeformationContext,
    deformed: Geometry,
    curvature: Option<CurvatureBundle>,
}

impl<'a> PointData<'a> {
    fn new(spec: &'a ManifoldSpec, point: &'a [f64]) -> Result<Self> {
        Ok(PointData {
            spec,
            point,
            ctx: DeformationContext::new(spec, point)?,
            deformed: Geometry::new(spec, point, MetricKind::Deformed)?,
            curvature: None,
        })
    }

    fn curvature(&mut self) -> &CurvatureBundle {
        if self.curvature.is_none() {
            self.curvature = Some(self.deformed.curvature());
        }
        self.curvature.as_ref().unwrap()
    }

    fn basis(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.ctx.dim()];
        e[i] = 1.0;
        e
    }

    fn evaluate(&mut self, formula: Formula, r: &mut ChaCha8Rng) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.ctx.dim();
        let (mut closed, mut oracle) = (Vec::new(), Vec::new());
        match formula {
            Formula::Connection => {
                let c = self.deformed.connection();
                for i in 0..n {
                    for j in 0..n {
                        closed.extend(self.ctx.connection(&self.basis(i), &self.basis(j)));
                        oracle.extend((0..n).map(|k| c.get(k, i, j)));
                    }
                }
            }
            Formula::NablaGrad => {
                let base = self.ctx.base();
                let g = base.gradient_jets(&self.spec.alpha_jet(self.point)?);
                let d = self.deformed.covariant_jets(&g);
                for i in 0..n {
                    closed.extend(self.ctx.nabla_grad(&self.basis(i)));
                    oracle.extend((0..n).map(|k| d[i * n + k].value()));
                }
            }
            Formula::Riemann | Formula::KillingRiemann => {
                for _ in 0..VECTORS_PER_POINT {
                    let (x, y, z) = (
                        random_vector(r, n),
                        random_vector(r, n),
                        random_vector(r, n),
                    );
                    closed.extend(if formula == Formula::Riemann {
                        self.ctx.riemann(&x, &y, &z)
                    } else {
                        self.ctx.killing_riemann(&x, &y, &z)?
                    });
                    oracle.extend(self.curvature().apply(&x, &y, &z));
                }
            }
            Formula::Sectional | Formula::KillingSectional => {
                for _ in 0..VECTORS_PER_POINT {
                    let pair = [random_vector(r, n), random_vector(r, n)];
                    let Ok(on) = gram_schmidt(self.ctx.base().metric(), &pair) else {
                        continue;
                    };
                    let (x, y) = (&on[0], &on[1]);
                    closed.push(if formula == Formula::Sectional {
                        self.ctx.sectional(x, y)?
                    } else {
                        self.ctx.killing_sectional(x, y)?
                    });
                    let ga = self.deformed.metric().clone();
                    let ryy = self.curvature().apply(x, y, y);
                    let num = bilinear(&ga, &ryy, x);
                    let den =
                        bilinear(&ga, x, x) * bilinear(&ga, y, y) - bilinear(&ga, x, y).powi(2);
                    oracle.push(num / den);
                }
            }
            Formula::RicciOperator | Formula::KillingRicciOperator => {
                for i in 0..n {
                    let e = self.basis(i);
                    closed.extend(if formula == Formula::RicciOperator {
                        self.ctx.ricci_operator(&e)
                    } else {
                        self.ctx.killing_ricci_operator(&e)?
                    });
                    oracle.extend(self.curvature().ricci(&e));
                }
            }
            Formula::RicciTensor | Formula::KillingRicciTensor => {
                for i in 0..n {
                    for j in 0..n {
                        let (x, y) = (self.basis(i), self.basis(j));
                        closed.push(if formula == Formula::RicciTensor {
                            self.ctx.ricci_tensor(&x, &y)
                        } else {
                            self.ctx.killing_ricci_tensor(&x, &y)?
                        });
                        oracle.push(self.curvature().ricci_tensor[(i, j)]);
                    }
                }
            }
            Formula::Scalar | Formula::KillingScalar => {
                closed.push(if formula == Formula::Scalar {
                    self.ctx.scalar()
                } else {
                    self.ctx.killing_scalar()?
                });
                oracle.push(self.curvature().scalar);
            }
            Formula::TensionToDeformed => {
                closed = harmonic::tension_identity_to_deformed(&self.ctx).components;
                let tau = identity_tension_jets(self.ctx.base(), &self.deformed);
                oracle = tau.iter().map(Jet::value).collect();
            }
            Formula::TensionFromDeformed => {
                closed = harmonic::tension_identity_from_deformed(&self.ctx).components;
                let tau = identity_tension_jets(&self.deformed, self.ctx.base());
                oracle = tau.iter().map(Jet::value).collect();
            }
            Formula::MapTensionToDeformed => {
                let map = MapSpec::identity(self.spec, DeformedSide::Target)?;
                closed = harmonic::tension_map_to_deformed(&map, self.point)?.components;
                oracle = oracle_tension(&map, self.point)?.components;
            }
            Formula::MapTensionFromDeformed => {
                let map = MapSpec::identity(self.spec, DeformedSide::Source)?;
                closed = harmonic::tension_map_from_deformed(&map, self.point)?.components;
                oracle = oracle_tension(&map, self.point)?.components;
            }
            Formula::BitensionToDeformed => {
                closed = harmonic::bitension_identity_to_deformed(&self.ctx).components;
                oracle = identity_bitension(self.ctx.base(), &self.deformed);
            }
            Formula::BitensionFromDeformed => {
                closed = harmonic::bitension_identity_from_deformed(&self.ctx).components;
                oracle = identity_bitension(&self.deformed, self.ctx.base());
            }
        }
        Ok((closed, oracle))
    }
}

fn point_rng(seed: u64, point_index: usize, formula: Formula) -> ChaCha8Rng {
    let mut r = rng(seed);
    r.set_stream(((point_index as u64) << 8) | formula.index());
    let _ = r.gen::<u32>();
    r
}

/// Closed form against oracle for each formula over `points`.
///
/// Killing specializations are skipped (and listed) when `α` has a Hessian
/// above [`KILLING_TOLERANCE`] anywhere in `points`. Random arguments are
/// drawn from a stream keyed by `(seed, point index, formula)`, so a formula's
/// report does not depend on which other formulas run alongside it.
pub fn compare(
    formulas: &[Formula],
    spec: &ManifoldSpec,
    points: &[Vec<f64>],
    tol: Tolerances,
    seed: u64,
) -> Result<CompareOutcome> {
    let mut skipped = Vec::new();
    let mut active: Vec<Formula> = formulas.to_vec();
    if formulas.iter().any(|f| f.is_killing()) {
        let mut worst: f64 = 0.0;
        for p in points {
            worst = worst.max(DeformationContext::new(spec, p)?.killing_residual());
        }
        if worst > KILLING_TOLERANCE {
            active.retain(|f| !f.is_killing());
            for f in formulas.iter().filter(|f| f.is_killing()) {
                skipped.push(Skipped {
                    formula: f.id().to_string(),
                    reason: format!(
                        "alpha is not a Killing potential (Hessian residual {worst:e} > {KILLING_TOLERANCE:e})"
                    ),
                });
            }
        }
    }
    let mut acc: Vec<Accumulator> = active.iter().map(|&f| Accumulator::new(f)).collect();
    for (idx, p) in points.iter().enumerate() {
        let mut data = PointData::new(spec, p)?;
        for a in acc.iter_mut() {
            let mut r = point_rng(seed, idx, a.formula);
            let (c, o) = data.evaluate(a.formula, &mut r)?;
            a.add(&tol, p, c, o);
        }
    }
    Ok(CompareOutcome {
        results: acc.into_iter().map(Accumulator::finish).collect(),
        skipped,
    })
}

type MapTensionFn = fn(&MapSpec, &[f64]) -> Result<harmonic::TensionValue>;

/// Closed-form tension of a general map against the definition-based one.
pub fn compare_map(
    map: &MapSpec,
    points: &[Vec<f64>],
    tol: Tolerances,
) -> Result<ComparisonReport> {
    let (formula, closed): (Formula, MapTensionFn) = match map.deformed() {
        DeformedSide::Target => (
            Formula::MapTensionToDeformed,
            harmonic::tension_map_to_deformed,
        ),
        DeformedSide::Source => (
            Formula::MapTensionFromDeformed,
            harmonic::tension_map_from_deformed,
        ),
        DeformedSide::Neither => {
            return Err(Error::Manifest(
                "map tension comparison needs `deformed` set to source or target".into(),
            ))
        }
    };
    let mut acc = Accumulator::new(formula);
    for p in points {
        acc.add(
            &tol,
            p,
            closed(map, p)?.components,
            oracle_tension(map, p)?.components,
        );
    }
    Ok(acc.finish())
}
