use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and partial derivatives through order three of a scalar field at a point.
///
/// `order` records how many derivative levels are meaningful; arithmetic on
/// mixed orders truncates to the lower one. Second and third partials are
/// stored densely (`n²` and `n³` entries) and kept symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: u8,
    dim: usize,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
    third: Vec<f64>,
}

pub const MAX_ORDER: u8 = 3;

impl Jet {
    pub fn constant(dim: usize, value: f64) -> Self {
        Jet {
            order: MAX_ORDER,
            dim,
            value,
            grad: vec![0.0; dim],
            hess: vec![0.0; dim * dim],
            third: vec![0.0; dim * dim * dim],
        }
    }

    /// The coordinate function `x_k` evaluated at `x_k = value`.
    pub fn variable(dim: usize, k: usize, value: f64) -> Self {
        let mut j = Jet::constant(dim, value);
        j.grad[k] = 1.0;
        j
    }

    pub fn zero(dim: usize) -> Self {
        Jet::constant(dim, 0.0)
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn d1(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim + j]
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.third[(i * self.dim + j) * self.dim + k]
    }

    /// Drops derivative information above `order`.
    pub fn truncated(mut self, order: u8) -> Self {
        if order < self.order {
            self.order = order;
            self.clear_above(order);
        }
        self
    }

    fn clear_above(&mut self, order: u8) {
        if order < 3 {
            self.third.iter_mut().for_each(|v| *v = 0.0);
        }
        if order < 2 {
            self.hess.iter_mut().for_each(|v| *v = 0.0);
        }
        if order < 1 {
            self.grad.iter_mut().for_each(|v| *v = 0.0);
        }
    }

    /// The jet of `∂f/∂x_k`, one order lower.
    ///
    /// # Panics
    /// If the jet carries no first derivatives.
    pub fn partial(&self, k: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let n = self.dim;
        let mut out = Jet::zero(n);
        out.order = self.order - 1;
        out.value = self.grad[k];
        if out.order >= 1 {
            for i in 0..n {
                out.grad[i] = self.hess[k * n + i];
            }
        }
        if out.order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    out.hess[i * n + j] = self.third[(k * n + i) * n + j];
                }
            }
        }
        out
    }

    /// Directional derivative `Σ_k w_k ∂_k f` for constant weights.
    pub fn directional(&self, w: &[f64]) -> Jet {
        let mut out = Jet::constant(self.dim, 0.0);
        out.order = self.order.saturating_sub(1);
        for (k, &wk) in w.iter().enumerate() {
            if wk != 0.0 {
                out.axpy(wk, &self.partial(k));
            }
        }
        out
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Jet) {
        debug_assert_eq!(self.dim, other.dim);
        self.order = self.order.min(other.order);
        self.value += a * other.value;
        if self.order >= 1 {
            self.grad
                .iter_mut()
                .zip(&other.grad)
                .for_each(|(s, o)| *s += a * o);
        }
        if self.order >= 2 {
            self.hess
                .iter_mut()
                .zip(&other.hess)
                .for_each(|(s, o)| *s += a * o);
        }
        if self.order >= 3 {
            self.third
                .iter_mut()
                .zip(&other.third)
                .for_each(|(s, o)| *s += a * o);
        }
        self.clear_above(self.order);
    }

    pub fn scale(&self, a: f64) -> Jet {
        let mut out = self.clone();
        out.value *= a;
        out.grad.iter_mut().for_each(|v| *v *= a);
        out.hess.iter_mut().for_each(|v| *v *= a);
        out.third.iter_mut().for_each(|v| *v *= a);
        out
    }

    pub fn add_scalar(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.value += c;
        out
    }

    /// Copies each sorted-index entry onto its permutations, so symmetry holds bitwise.
    fn mirror(&mut self) {
        let n = self.dim;
        if self.order >= 2 {
            for i in 0..n {
                for j in 0..i {
                    self.hess[i * n + j] = self.hess[j * n + i];
                }
            }
        }
        if self.order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = [i, j, k];
                        s.sort_unstable();
                        self.third[(i * n + j) * n + k] = self.third[(s[0] * n + s[1]) * n + s[2]];
                    }
                }
            }
        }
    }

    /// Leibniz rule for the product of two jets.
    pub fn mul_jet(&self, other: &Jet) -> Jet {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let order = self.order.min(other.order);
        let (f, g) = (self, other);
        let mut out = Jet::zero(n);
        out.order = order;
        out.value = f.value * g.value;
        if order >= 1 {
            for i in 0..n {
                out.grad[i] = f.grad[i] * g.value + f.value * g.grad[i];
            }
        }
        if order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let ij = i * n + j;
                    out.hess[ij] = f.hess[ij] * g.value
                        + f.grad[i] * g.grad[j]
                        + f.grad[j] * g.grad[i]
                        + f.value * g.hess[ij];
                }
            }
        }
        if order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ijk = (i * n + j) * n + k;
                        let (ij, ik, jk) = (i * n + j, i * n + k, j * n + k);
                        out.third[ijk] = f.third[ijk] * g.value
                            + f.hess[ij] * g.grad[k]
                            + f.hess[ik] * g.grad[j]
                            + f.hess[jk] * g.grad[i]
                            + f.grad[i] * g.hess[jk]
                            + f.grad[j] * g.hess[ik]
                            + f.grad[k] * g.hess[ij]
                            + f.value * g.third[ijk];
                    }
                }
            }
        }
        out.mirror();
        out
    }

    /// `h ∘ f` given `h(u), h'(u), h''(u), h'''(u)` at `u = f.value()`.
    pub fn compose(&self, h: [f64; 4]) -> Jet {
        let n = self.dim;
        let f = self;
        let mut out = Jet::zero(n);
        out.order = f.order;
        out.value = h[0];
        if f.order >= 1 {
            for i in 0..n {
                out.grad[i] = h[1] * f.grad[i];
            }
        }
        if f.order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let ij = i * n + j;
                    out.hess[ij] = h[2] * f.grad[i] * f.grad[j] + h[1] * f.hess[ij];
                }
            }
        }
        if f.order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ijk = (i * n + j) * n + k;
                        let (ij, ik, jk) = (i * n + j, i * n + k, j * n + k);
                        out.third[ijk] = h[3] * f.grad[i] * f.grad[j] * f.grad[k]
                            + h[2]
                                * (f.hess[ij] * f.grad[k]
                                    + f.hess[ik] * f.grad[j]
                                    + f.hess[jk] * f.grad[i])
                            + h[1] * f.third[ijk];
                    }
                }
            }
        }
        out.mirror();
        out
    }

    /// `1/f`; the caller guarantees a nonzero value.
    pub fn recip(&self) -> Jet {
        let u = self.value;
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
            && self.third.iter().all(|v| v.is_finite())
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.mul_jet(&rhs.recip())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
