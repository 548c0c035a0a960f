//! Riemannian geometry on a coordinate chart, straight from the coordinate
//! definitions: metric jets, Levi-Civita connection, curvature, and the
//! gradient, Hessian and Laplacian of scalar fields.
//!
//! Curvature convention: `R^l_{ijk}` is the `l`-component of `R(∂_i, ∂_j)∂_k`,
//! with `R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`. The Ricci tensor is
//! `Ric_{jk} = R^i_{ijk}` and the Ricci operator is `Ricci(X) = Σ R(X, e_i)e_i`.

mod frame;
mod spec;

use nalgebra::DMatrix;

use crate::berger::metric::deformed_metric_jets;
use crate::error::{Error, Result};
use crate::expr::{Expr, Jet};

pub use frame::{gram_schmidt, orthonormal_frame_ending_with, PIVOT_TOLERANCE};
pub use spec::{ChartSource, ManifoldSpec, ParaStructure};

/// Largest accepted condition number of a metric matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Lower bound for the conformal factor before the deformed metric is formed.
pub const ALPHA_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Base,
    Deformed,
}

/// `Γ^k_{ij}` at a point, stored at `(k * n + i) * n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    pub which: MetricKind,
    pub dim: usize,
    pub gamma: Vec<f64>,
}

impl ConnectionCoefficients {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[(k * self.dim + i) * self.dim + j]
    }

    /// `Γ(X, Y)^k = Γ^k_{ij} X^i Y^j`, i.e. `∇_X Y` for constant-coefficient `Y`.
    pub fn contract(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += self.get(k, i, j) * x[i] * y[j];
                    }
                }
                s
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle {
    pub dim: usize,
    /// `R^l_{ijk}` at `((l * n + i) * n + j) * n + k`.
    pub riemann: Vec<f64>,
    /// Mixed components: `Ricci(X)^l = ricci_operator[(l, i)] X^i`.
    pub ricci_operator: DMatrix<f64>,
    pub ricci_tensor: DMatrix<f64>,
    pub scalar: f64,
}

impl CurvatureBundle {
    pub fn riemann(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim;
        self.riemann[((l * n + i) * n + j) * n + k]
    }

    /// `R(X, Y)Z`.
    pub fn apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|l| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let xy = x[i] * y[j];
                        if xy == 0.0 {
                            continue;
                        }
                        for k in 0..n {
                            s += self.riemann(l, i, j, k) * xy * z[k];
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn ricci(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.ricci_operator, x)
    }

    /// Largest `|R^l_{ijk} + R^l_{jki} + R^l_{kij}|`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s = self.riemann(l, i, j, k)
                            + self.riemann(l, j, k, i)
                            + self.riemann(l, k, i, j);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

pub(crate) fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * x[c]).sum())
        .collect()
}

pub(crate) fn bilinear(m: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            s += x[i] * m[(i, j)] * y[j];
        }
    }
    s
}

/// Inverse of a matrix of jets by Gauss-Jordan elimination with partial
/// pivoting on the values. The caller has already checked the conditioning.
pub(crate) fn invert_jets(a: &[Jet], n: usize) -> Vec<Jet> {
    let dim = a[0].dim();
    let mut m = a.to_vec();
    let mut inv: Vec<Jet> = (0..n * n)
        .map(|k| Jet::constant(dim, if k / n == k % n { 1.0 } else { 0.0 }))
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                m[r * n + col]
                    .value()
                    .abs()
                    .total_cmp(&m[s * n + col].value().abs())
            })
            .expect("non-empty pivot range");
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
                inv.swap(pivot * n + c, col * n + c);
            }
        }
        let p = m[col * n + col].recip();
        for c in 0..n {
            m[col * n + c] = &m[col * n + c] * &p;
            inv[col * n + c] = &inv[col * n + c] * &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col].clone();
            for c in 0..n {
                let dm = &f * &m[col * n + c];
                let di = &f * &inv[col * n + c];
                m[r * n + c] = &m[r * n + c] - &dm;
                inv[r * n + c] = &inv[r * n + c] - &di;
            }
        }
    }
    inv
}

/// Everything definition-based about one metric at one point.
///
/// Metric and inverse jets carry order three; Christoffel jets carry order two,
/// enough for curvature and for one more covariant derivative of a tension.
#[derive(Debug, Clone)]
pub struct Geometry {
    which: MetricKind,
    point: Vec<f64>,
    g: Vec<Jet>,
    ginv: Vec<Jet>,
    gamma: Vec<Jet>,
    g_mat: DMatrix<f64>,
    ginv_mat: DMatrix<f64>,
}

impl Geometry {
    pub fn new(spec: &ManifoldSpec, point: &[f64], which: MetricKind) -> Result<Self> {
        spec.check_point(point)?;
        let jets = match which {
            MetricKind::Base => spec.metric_jets(point)?,
            MetricKind::Deformed => {
                let alpha = spec.alpha_jet(point)?;
                if alpha.value() <= ALPHA_GUARD {
                    return Err(Error::AlphaTooSmall {
                        point: point.to_vec(),
                        value: alpha.value(),
                        guard: ALPHA_GUARD,
                    });
                }
                deformed_metric_jets(
                    &spec.metric_jets(point)?,
                    &spec.f_jets(point)?,
                    &spec.v_jets(point)?,
                    &alpha,
                )
            }
        };
        Self::from_metric_jets(point, which, jets)
    }

    /// Builds the geometry from metric component jets (row-major, order three).
    pub fn from_metric_jets(point: &[f64], which: MetricKind, g: Vec<Jet>) -> Result<Self> {
        let n = point.len();
        assert_eq!(g.len(), n * n, "metric jets must be n x n");
        let g_mat = DMatrix::from_fn(n, n, |i, j| g[i * n + j].value());
        check_metric(&g_mat, point)?;

        let ginv = invert_jets(&g, n);
        let ginv_mat = DMatrix::from_fn(n, n, |i, j| ginv[i * n + j].value());

        // Γ^k_{ij} = ½ g^{kl} (∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
        let dg: Vec<Vec<Jet>> = (0..n)
            .map(|l| g.iter().map(|c| c.partial(l)).collect())
            .collect();
        let dim = point.len();
        let mut first = vec![Jet::zero(dim); n * n * n]; // Γ_{ijl}, lowered
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut s = &dg[i][j * n + l] + &dg[j][i * n + l];
                    s = &s - &dg[l][i * n + j];
                    first[(i * n + j) * n + l] = s.scale(0.5);
                }
            }
        }
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = Jet::zero(dim).truncated(2);
                    for l in 0..n {
                        s = &s + &(&ginv[k * n + l] * &first[(i * n + j) * n + l]);
                    }
                    gamma.push(s);
                }
            }
        }
        Ok(Geometry {
            which,
            point: point.to_vec(),
            g,
            ginv,
            gamma,
            g_mat,
            ginv_mat,
        })
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn which(&self) -> MetricKind {
        self.which
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g_mat
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.ginv_mat
    }

    pub fn metric_jets(&self) -> &[Jet] {
        &self.g
    }

    pub fn inverse_jets(&self) -> &[Jet] {
        &self.ginv
    }

    pub fn gamma_jet(&self, k: usize, i: usize, j: usize) -> &Jet {
        let n = self.dim();
        &self.gamma[(k * n + i) * n + j]
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma_jet(k, i, j).value()
    }

    pub fn connection(&self) -> ConnectionCoefficients {
        ConnectionCoefficients {
            which: self.which,
            dim: self.dim(),
            gamma: self.gamma.iter().map(Jet::value).collect(),
        }
    }

    pub fn curvature(&self) -> CurvatureBundle {
        let n = self.dim();
        let mut riemann = vec![0.0; n * n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = self.gamma_jet(l, j, k).d1(i) - self.gamma_jet(l, i, k).d1(j);
                        for p in 0..n {
                            s += self.gamma(l, i, p) * self.gamma(p, j, k)
                                - self.gamma(l, j, p) * self.gamma(p, i, k);
                        }
                        riemann[((l * n + i) * n + j) * n + k] = s;
                    }
                }
            }
        }
        let r = |l: usize, i: usize, j: usize, k: usize| riemann[((l * n + i) * n + j) * n + k];
        let ricci_tensor = DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| r(i, i, j, k)).sum());
        let ginv = &self.ginv_mat;
        let ricci_operator = DMatrix::from_fn(n, n, |l, i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += r(l, i, j, k) * ginv[(j, k)];
                }
            }
            s
        });
        let scalar = ginv.component_mul(&ricci_tensor).sum();
        CurvatureBundle {
            dim: n,
            riemann,
            ricci_operator,
            ricci_tensor,
            scalar,
        }
    }

    /// `g^{ij} ∂_j f`.
    pub fn gradient(&self, f: &Jet) -> Vec<f64> {
        mat_vec(&self.ginv_mat, f.grad())
    }

    /// `∂_i∂_j f − Γ^k_{ij} ∂_k f`; needs a jet of order two.
    pub fn hessian(&self, f: &Jet) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| {
            f.d2(i, j) - (0..n).map(|k| self.gamma(k, i, j) * f.d1(k)).sum::<f64>()
        })
    }

    pub fn laplacian(&self, f: &Jet) -> f64 {
        self.ginv_mat.component_mul(&self.hessian(f)).sum()
    }

    /// Gradient components `g^{ij} ∂_j f` as jets, one order below `f`.
    pub fn gradient_jets(&self, f: &Jet) -> Vec<Jet> {
        let n = self.dim();
        let df: Vec<Jet> = (0..n).map(|j| f.partial(j)).collect();
        (0..n)
            .map(|i| {
                let mut s = Jet::zero(f.dim());
                for j in 0..n {
                    s = &s + &(&self.ginv[i * n + j] * &df[j]);
                }
                s
            })
            .collect()
    }

    /// `(∇_i v)^k = ∂_i v^k + Γ^k_{ip} v^p` at index `i * n + k`.
    pub fn covariant_jets(&self, v: &[Jet]) -> Vec<Jet> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let mut s = v[k].partial(i);
                for p in 0..n {
                    s = &s + &(self.gamma_jet(k, i, p) * &v[p]);
                }
                out.push(s);
            }
        }
        out
    }

    /// `g(X, Y)`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.g_mat, x, y)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `‖g · g⁻¹ − I‖_max`.
    pub fn inverse_defect(&self) -> f64 {
        let n = self.dim();
        let p = &self.g_mat * &self.ginv_mat - DMatrix::<f64>::identity(n, n);
        p.amax()
    }

    /// Largest `|∂_k g_{ij} − Γ^l_{ki} g_{lj} − Γ^l_{kj} g_{il}|`.
    pub fn compatibility_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = self.g[i * n + j].d1(k);
                    for l in 0..n {
                        s -= self.gamma(l, k, i) * self.g_mat[(l, j)]
                            + self.gamma(l, k, j) * self.g_mat[(i, l)];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
        worst
    }
}

fn check_metric(g: &DMatrix<f64>, point: &[f64]) -> Result<()> {
    let scale = g.amax().max(1.0);
    let asymmetry = (g - g.transpose()).amax();
    if asymmetry > 1e-12 * scale {
        return Err(Error::AsymmetricMetric {
            point: point.to_vec(),
            asymmetry,
        });
    }
    if !g.iter().all(|v| v.is_finite()) || g.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite {
            point: point.to_vec(),
        });
    }
    let eig = g.clone().symmetric_eigen().eigenvalues;
    let condition = eig.max() / eig.min();
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let not_positive = !(eig.min() > 0.0);
    if not_positive || condition > MAX_CONDITION {
        return Err(Error::SingularMetric {
            point: point.to_vec(),
            condition,
        });
    }
    Ok(())
}

fn field_jet(spec: &ManifoldSpec, field: &Expr, point: &[f64]) -> Result<Jet> {
    spec.eval(field, point, 3, "field")
}

/// Metric matrix, its inverse and the component jets.
pub fn metric_at(
    spec: &ManifoldSpec,
    point: &[f64],
    which: MetricKind,
) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<Jet>)> {
    let geo = Geometry::new(spec, point, which)?;
    Ok((geo.g_mat, geo.ginv_mat, geo.g))
}

pub fn christoffel_at(
    spec: &ManifoldSpec,
    point: &[f64],
    which: MetricKind,
) -> Result<ConnectionCoefficients> {
    Ok(Geometry::new(spec, point, which)?.connection())
}

pub fn riemann_at(
    spec: &ManifoldSpec,
    point: &[f64],
    which: MetricKind,
) -> Result<CurvatureBundle> {
    Ok(Geometry::new(spec, point, which)?.curvature())
}

pub fn gradient_at(
    spec: &ManifoldSpec,
    point: &[f64],
    field: &Expr,
    which: MetricKind,
) -> Result<Vec<f64>> {
    let geo = Geometry::new(spec, point, which)?;
    Ok(geo.gradient(&field_jet(spec, field, point)?))
}

pub fn hessian_at(
    spec: &ManifoldSpec,
    point: &[f64],
    field: &Expr,
    which: MetricKind,
) -> Result<DMatrix<f64>> {
    let geo = Geometry::new(spec, point, which)?;
    Ok(geo.hessian(&field_jet(spec, field, point)?))
}

pub fn laplacian_at(
    spec: &ManifoldSpec,
    point: &[f64],
    field: &Expr,
    which: MetricKind,
) -> Result<f64> {
    let geo = Geometry::new(spec, point, which)?;
    Ok(geo.laplacian(&field_jet(spec, field, point)?))
}

/// Largest base-metric Hessian entry of `field` over `points`.
pub fn killing_potential_residual(
    spec: &ManifoldSpec,
    field: &Expr,
    points: &[Vec<f64>],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(hessian_at(spec, p, field, MetricKind::Base)?.amax());
    }
    Ok(worst)
}

/// Definition-based tension `τ^γ = g^{ij}(∂_i∂_jφ^γ − Γ^k_{ij}∂_kφ^γ + Γ'^γ_{μν}∂_iφ^μ∂_jφ^ν)`.
///
/// `source` is the geometry at the source point, `target` at the image point,
/// `phi` the component jets (order at least two) at the source point.
pub fn map_tension(source: &Geometry, target: &Geometry, phi: &[Jet]) -> Vec<f64> {
    let n = source.dim();
    let gi = source.inverse();
    (0..target.dim())
        .map(|c| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let w = gi[(i, j)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut t = phi[c].d2(i, j);
                    for k in 0..n {
                        t -= source.gamma(k, i, j) * phi[c].d1(k);
                    }
                    for mu in 0..target.dim() {
                        for nu in 0..target.dim() {
                            t += target.gamma(c, mu, nu) * phi[mu].d1(i) * phi[nu].d1(j);
                        }
                    }
                    s += w * t;
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests;
