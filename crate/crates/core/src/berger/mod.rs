//! Closed-form geometry of the deformed metric `g^α = α(g + ω⊗ω)`, where
//! `ω = g(·, FV)`.
//!
//! Every formula here is expressed through base-metric data only (the base
//! connection and curvature, `α`, its gradient, Hessian and Laplacian) and is
//! evaluated on constant-coefficient vectors at a point. The module never
//! differentiates the deformed metric; that is the oracle's job.

pub mod metric;

use nalgebra::DMatrix;
use rand::Rng;

use crate::chart::{
    bilinear, mat_vec, orthonormal_frame_ending_with, CurvatureBundle, Geometry, ManifoldSpec,
    MetricKind, ALPHA_GUARD,
};
use crate::error::{Error, Result};
use crate::expr::Jet;
use crate::sampling::random_vector;

/// Hessian bound below which `α` is treated as a Killing potential.
pub const KILLING_TOLERANCE: f64 = 1e-9;

/// Orthonormality slack accepted by the sectional-curvature formulas.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;

fn lin(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let n = terms[0].1.len();
    let mut out = vec![0.0; n];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += c * x;
        }
    }
    out
}

fn antisymmetrize(xy: &[f64], yx: &[f64]) -> Vec<f64> {
    xy.iter().zip(yx).map(|(a, b)| 0.5 * (a - b)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Base-metric data at one point, shared by every closed form.
#[derive(Debug, Clone)]
pub struct DeformationContext {
    m: usize,
    alpha: f64,
    dalpha: Vec<f64>,
    grad: Vec<f64>,
    grad_norm2: f64,
    hess: DMatrix<f64>,
    nabla_grad: DMatrix<f64>,
    lap: f64,
    xi: Vec<f64>,
    omega: Vec<f64>,
    deformed: DMatrix<f64>,
    base: Geometry,
    curvature: CurvatureBundle,
    rough_laplacian_grad: Vec<f64>,
    nabla_grad_grad: Vec<f64>,
    nabla_xi_xi_grad: Vec<f64>,
}

impl DeformationContext {
    pub fn new(spec: &ManifoldSpec, point: &[f64]) -> Result<Self> {
        let base = Geometry::new(spec, point, MetricKind::Base)?;
        let alpha_jet = spec.alpha_jet(point)?;
        let alpha = alpha_jet.value();
        if alpha <= ALPHA_GUARD {
            return Err(Error::AlphaTooSmall {
                point: point.to_vec(),
                value: alpha,
                guard: ALPHA_GUARD,
            });
        }
        let n = base.dim();
        let xi_jets = metric::structure_field_jets(&spec.f_jets(point)?, &spec.v_jets(point)?);
        let xi: Vec<f64> = xi_jets.iter().map(Jet::value).collect();
        let omega = mat_vec(base.metric(), &xi);
        let deformed = DMatrix::from_fn(n, n, |i, j| {
            alpha * (base.metric()[(i, j)] + omega[i] * omega[j])
        });

        let dalpha = alpha_jet.grad().to_vec();
        let grad = base.gradient(&alpha_jet);
        let grad_norm2 = dot(&grad, &dalpha);
        let hess = base.hessian(&alpha_jet);
        let nabla_grad = base.inverse() * &hess;
        let lap = base.laplacian(&alpha_jet);

        // covariant derivatives of G = grad α: order 2 -> 1 -> 0
        let g_jets = base.gradient_jets(&alpha_jet);
        let dg = base.covariant_jets(&g_jets); // (∇_i G)^k at i*n+k
        let second = |i: usize, j: usize, k: usize| -> f64 {
            let mut s = dg[j * n + k].d1(i);
            for p in 0..n {
                s += base.gamma(k, i, p) * dg[j * n + p].value();
                s -= base.gamma(p, i, j) * dg[p * n + k].value();
            }
            s
        };
        let gi = base.inverse();
        let rough_laplacian_grad: Vec<f64> = (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if gi[(i, j)] != 0.0 {
                            s -= gi[(i, j)] * second(i, j, k);
                        }
                    }
                }
                s
            })
            .collect();
        let nabla_grad_grad: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| grad[i] * dg[i * n + k].value()).sum())
            .collect();
        // W = ∇_ξ G as a field, then ∇_ξ W
        let w: Vec<Jet> = (0..n)
            .map(|k| {
                let mut s = Jet::zero(n);
                for i in 0..n {
                    s = &s + &(&xi_jets[i] * &dg[i * n + k]);
                }
                s
            })
            .collect();
        let nabla_xi_xi_grad: Vec<f64> = (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    let mut t = w[k].d1(i);
                    for p in 0..n {
                        t += base.gamma(k, i, p) * w[p].value();
                    }
                    s += xi[i] * t;
                }
                s
            })
            .collect();

        let curvature = base.curvature();
        Ok(DeformationContext {
            m: n / 2,
            alpha,
            dalpha,
            grad,
            grad_norm2,
            hess,
            nabla_grad,
            lap,
            xi,
            omega,
            deformed,
            base,
            curvature,
            rough_laplacian_grad,
            nabla_grad_grad,
            nabla_xi_xi_grad,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn point(&self) -> &[f64] {
        self.base.point()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Partials `∂_i α`.
    pub fn alpha_differential(&self) -> &[f64] {
        &self.dalpha
    }

    /// `grad α` for the base metric.
    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn grad_norm2(&self) -> f64 {
        self.grad_norm2
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hess
    }

    pub fn laplacian(&self) -> f64 {
        self.lap
    }

    /// `ξ = FV`.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// `ω = g(·, FV)`.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn base(&self) -> &Geometry {
        &self.base
    }

    pub fn base_curvature(&self) -> &CurvatureBundle {
        &self.curvature
    }

    /// `Δ grad α = −Tr_g(∇²grad α)`, the rough Laplacian with a minus sign.
    pub fn rough_laplacian_grad(&self) -> &[f64] {
        &self.rough_laplacian_grad
    }

    /// `∇_{grad α} grad α`.
    pub fn nabla_grad_grad(&self) -> &[f64] {
        &self.nabla_grad_grad
    }

    /// `∇_ξ ∇_ξ grad α`, differentiating the field `∇_ξ grad α` once more.
    pub fn nabla_xi_xi_grad(&self) -> &[f64] {
        &self.nabla_xi_xi_grad
    }

    /// `∇_X grad α` (base connection).
    pub fn nabla_x_grad(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.nabla_grad, x)
    }

    /// `X(α)`.
    pub fn x_alpha(&self, x: &[f64]) -> f64 {
        dot(&self.dalpha, x)
    }

    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        self.base.inner(x, y)
    }

    pub fn ga(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.deformed, x, y)
    }

    pub fn hess(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.hess, x, y)
    }

    /// Local Killing test: largest Hessian entry at this point.
    pub fn killing_residual(&self) -> f64 {
        self.hess.amax()
    }

    fn require_killing(&self) -> Result<()> {
        let residual = self.killing_residual();
        if residual > KILLING_TOLERANCE {
            return Err(Error::NotKilling {
                residual,
                tolerance: KILLING_TOLERANCE,
            });
        }
        Ok(())
    }

    fn require_orthonormal(&self, x: &[f64], y: &[f64]) -> Result<()> {
        let defect = (self.g(x, x) - 1.0)
            .abs()
            .max((self.g(y, y) - 1.0).abs())
            .max(self.g(x, y).abs());
        if defect > ORTHONORMAL_TOLERANCE {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(())
    }

    /// `g^α_{ij} = α(g_{ij} + ω_i ω_j)`.
    pub fn deformed_metric_components(&self) -> &DMatrix<f64> {
        &self.deformed
    }

    /// `∇̃_X Y` for constant-coefficient `X`, `Y`.
    pub fn connection(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let base = self.base.connection().contract(x, y);
        self.connection_from(x, y, &base)
    }

    /// `∇̃_X Y` for a vector field `Y` given by component jets.
    pub fn connection_field(&self, x: &[f64], y: &[Jet]) -> Vec<f64> {
        let n = self.dim();
        let yv: Vec<f64> = y.iter().map(Jet::value).collect();
        let gamma = self.base.connection().contract(x, &yv);
        let base: Vec<f64> = (0..n).map(|k| dot(x, y[k].grad()) + gamma[k]).collect();
        self.connection_from(x, &yv, &base)
    }

    fn connection_from(&self, x: &[f64], y: &[f64], nabla_xy: &[f64]) -> Vec<f64> {
        let a = self.alpha;
        lin(&[
            (1.0, nabla_xy),
            (self.x_alpha(x) / (2.0 * a), y),
            (self.x_alpha(y) / (2.0 * a), x),
            (-self.ga(x, y) / (2.0 * a * a), &self.grad),
        ])
    }

    /// `∇̃_X grad α`.
    pub fn nabla_grad(&self, x: &[f64]) -> Vec<f64> {
        lin(&[
            (1.0, &self.nabla_x_grad(x)),
            (self.grad_norm2 / (2.0 * self.alpha), x),
        ])
    }

    /// `R̃(X, Y)Z`, antisymmetrized in `(X, Y)` so the symmetry holds bitwise.
    pub fn riemann(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        antisymmetrize(&self.riemann_raw(x, y, z), &self.riemann_raw(y, x, z))
    }

    fn riemann_raw(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let a = self.alpha;
        let (a2, a3) = (a * a, a * a * a);
        let (xa, ya, za) = (self.x_alpha(x), self.x_alpha(y), self.x_alpha(z));
        let (gyz, gxz) = (self.ga(y, z), self.ga(x, z));
        let cx = 3.0 * ya * za / (4.0 * a2)
            - self.hess(y, z) / (2.0 * a)
            - self.grad_norm2 / (4.0 * a3) * gyz;
        let cy = 3.0 * xa * za / (4.0 * a2)
            - self.hess(x, z) / (2.0 * a)
            - self.grad_norm2 / (4.0 * a3) * gxz;
        let cg = 3.0 * xa / (4.0 * a3) * gyz - 3.0 * ya / (4.0 * a3) * gxz;
        lin(&[
            (1.0, &self.curvature.apply(x, y, z)),
            (-gyz / (2.0 * a2), &self.nabla_x_grad(x)),
            (gxz / (2.0 * a2), &self.nabla_x_grad(y)),
            (cx, x),
            (-cy, y),
            (cg, &self.grad),
        ])
    }

    /// `R̃(X, Y)Z` with the Hessian terms dropped; `α` must be Killing here.
    pub fn killing_riemann(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.require_killing()?;
        Ok(antisymmetrize(
            &self.killing_riemann_raw(x, y, z),
            &self.killing_riemann_raw(y, x, z),
        ))
    }

    fn killing_riemann_raw(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let a = self.alpha;
        let (a2, a3) = (a * a, a * a * a);
        let (xa, ya, za) = (self.x_alpha(x), self.x_alpha(y), self.x_alpha(z));
        let (gyz, gxz) = (self.ga(y, z), self.ga(x, z));
        let cx = 3.0 * ya * za / (4.0 * a2) - self.grad_norm2 / (4.0 * a3) * gyz;
        let cy = 3.0 * xa * za / (4.0 * a2) - self.grad_norm2 / (4.0 * a3) * gxz;
        let cg = 3.0 * xa / (4.0 * a3) * gyz - 3.0 * ya / (4.0 * a3) * gxz;
        lin(&[
            (1.0, &self.curvature.apply(x, y, z)),
            (cx, x),
            (-cy, y),
            (cg, &self.grad),
        ])
    }

    fn base_sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        self.g(&self.curvature.apply(x, y, y), x)
    }

    /// `K̃(X, Y)` for a `g`-orthonormal pair.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.require_orthonormal(x, y)?;
        let a = self.alpha;
        let a2 = a * a;
        let (xa, ya) = (self.x_alpha(x), self.x_alpha(y));
        let (p, q) = (self.g(x, &self.xi), self.g(y, &self.xi));
        let bracket = self.base_sectional(x, y)
            + (3.0 * ya * ya / (4.0 * a2) - self.hess(y, y) / (2.0 * a)) * (1.0 + p * p)
            + (3.0 * xa * xa / (4.0 * a2) - self.hess(x, x) / (2.0 * a)) * (1.0 + q * q)
            - (3.0 * xa * ya / (2.0 * a2) - self.hess(x, y) / a) * p * q;
        Ok(-self.grad_norm2 / (4.0 * a * a2) + bracket / (a * (1.0 + p * p + q * q)))
    }

    pub fn killing_sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.require_killing()?;
        self.require_orthonormal(x, y)?;
        let a = self.alpha;
        let a2 = a * a;
        let (xa, ya) = (self.x_alpha(x), self.x_alpha(y));
        let (p, q) = (self.g(x, &self.xi), self.g(y, &self.xi));
        let bracket = self.base_sectional(x, y)
            + 3.0 * xa * xa / (4.0 * a2) * (1.0 + q * q)
            + 3.0 * ya * ya / (4.0 * a2) * (1.0 + p * p)
            - 3.0 * xa * ya / (2.0 * a2) * p * q;
        Ok(-self.grad_norm2 / (4.0 * a * a2) + bracket / (a * (1.0 + p * p + q * q)))
    }

    /// `g^α(R̃(X,Y)Y, X) / (g^α(X,X) g^α(Y,Y) − g^α(X,Y)²)` from the closed-form tensor.
    pub fn sectional_quotient(&self, x: &[f64], y: &[f64]) -> f64 {
        let num = self.ga(&self.riemann(x, y, y), x);
        num / (self.ga(x, x) * self.ga(y, y) - self.ga(x, y).powi(2))
    }

    fn trace_coefficient(&self) -> f64 {
        let (m, a) = (self.m as f64, self.alpha);
        (m - 2.0) * self.grad_norm2 / (2.0 * a * a * a) + self.lap / (2.0 * a * a)
    }

    /// `R̃icci(X)`.
    pub fn ricci_operator(&self, x: &[f64]) -> Vec<f64> {
        let (m, a) = (self.m as f64, self.alpha);
        lin(&[
            (1.0 / a, &self.curvature.ricci(x)),
            (-(m - 1.0) / (a * a), &self.nabla_x_grad(x)),
            (
                3.0 * (m - 1.0) * self.x_alpha(x) / (2.0 * a * a * a),
                &self.grad,
            ),
            (-self.trace_coefficient(), x),
        ])
    }

    pub fn killing_ricci_operator(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.require_killing()?;
        let (m, a) = (self.m as f64, self.alpha);
        Ok(lin(&[
            (1.0 / a, &self.curvature.ricci(x)),
            (
                3.0 * (m - 1.0) * self.x_alpha(x) / (2.0 * a * a * a),
                &self.grad,
            ),
            (-(m - 2.0) * self.grad_norm2 / (2.0 * a * a * a), x),
        ]))
    }

    /// `R̃ic(X, Y)`.
    pub fn ricci_tensor(&self, x: &[f64], y: &[f64]) -> f64 {
        let (m, a) = (self.m as f64, self.alpha);
        bilinear(&self.curvature.ricci_tensor, x, y) - (m - 1.0) / a * self.hess(x, y)
            + 3.0 * (m - 1.0) / (2.0 * a * a) * self.x_alpha(x) * self.x_alpha(y)
            - self.trace_coefficient() * self.ga(x, y)
    }

    pub fn killing_ricci_tensor(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.require_killing()?;
        let (m, a) = (self.m as f64, self.alpha);
        Ok(bilinear(&self.curvature.ricci_tensor, x, y)
            + 3.0 * (m - 1.0) / (2.0 * a * a) * self.x_alpha(x) * self.x_alpha(y)
            - (m - 2.0) * self.grad_norm2 / (2.0 * a * a * a) * self.ga(x, y))
    }

    /// `σ̃`.
    pub fn scalar(&self) -> f64 {
        let (m, a) = (self.m as f64, self.alpha);
        self.curvature.scalar / a
            - (2.0 * m - 1.0) * self.lap / (a * a)
            - (2.0 * m - 1.0) * (m - 3.0) * self.grad_norm2 / (2.0 * a * a * a)
    }

    pub fn killing_scalar(&self) -> Result<f64> {
        self.require_killing()?;
        let (m, a) = (self.m as f64, self.alpha);
        Ok(self.curvature.scalar / a
            - (2.0 * m - 1.0) * (m - 3.0) * self.grad_norm2 / (2.0 * a * a * a))
    }

    /// The frame `e_i/√α` (`i < 2m`), `FV/√(2α)` built from a `g`-orthonormal
    /// frame that ends with `FV`.
    pub fn deformed_frame(&self) -> Result<Vec<Vec<f64>>> {
        let mut frame = orthonormal_frame_ending_with(self.base.metric(), &self.xi)?;
        let n = frame.len();
        for (i, e) in frame.iter_mut().enumerate() {
            let s = if i + 1 == n {
                (2.0 * self.alpha).sqrt()
            } else {
                self.alpha.sqrt()
            };
            e.iter_mut().for_each(|c| *c /= s);
        }
        Ok(frame)
    }

    /// Reduced (Killing) and full forms side by side on random arguments.
    pub fn killing_corollary_suite<R: Rng>(
        &self,
        rng: &mut R,
        trials: usize,
    ) -> Result<KillingSuite> {
        self.require_killing()?;
        let n = self.dim();
        let mut suite = KillingSuite::default();
        let bump = |slot: &mut f64, a: &[f64], b: &[f64]| {
            for (x, y) in a.iter().zip(b) {
                *slot = slot.max((x - y).abs());
            }
        };
        for _ in 0..trials {
            let (x, y, z) = (
                random_vector(rng, n),
                random_vector(rng, n),
                random_vector(rng, n),
            );
            bump(
                &mut suite.riemann,
                &self.killing_riemann(&x, &y, &z)?,
                &self.riemann(&x, &y, &z),
            );
            bump(
                &mut suite.ricci_operator,
                &self.killing_ricci_operator(&x)?,
                &self.ricci_operator(&x),
            );
            bump(
                &mut suite.ricci_tensor,
                &[self.killing_ricci_tensor(&x, &y)?],
                &[self.ricci_tensor(&x, &y)],
            );
            if let Ok(on) = crate::chart::gram_schmidt(self.base.metric(), &[x, y]) {
                bump(
                    &mut suite.sectional,
                    &[self.killing_sectional(&on[0], &on[1])?],
                    &[self.sectional(&on[0], &on[1])?],
                );
            }
        }
        bump(
            &mut suite.scalar,
            &[self.killing_scalar()?],
            &[self.scalar()],
        );
        Ok(suite)
    }
}

/// Largest difference between each reduced Killing form and its full form.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KillingSuite {
    pub riemann: f64,
    pub sectional: f64,
    pub ricci_operator: f64,
    pub ricci_tensor: f64,
    pub scalar: f64,
}

impl KillingSuite {
    pub fn max(&self) -> f64 {
        self.riemann
            .max(self.sectional)
            .max(self.ricci_operator)
            .max(self.ricci_tensor)
            .max(self.scalar)
    }

    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("riemann", self.riemann),
            ("sectional", self.sectional),
            ("ricci-operator", self.ricci_operator),
            ("ricci-tensor", self.ricci_tensor),
            ("scalar", self.scalar),
        ]
    }
}

#[cfg(test)]
mod tests;
