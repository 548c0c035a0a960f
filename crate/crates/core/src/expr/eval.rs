use super::print::print_node;
use super::{BinOp, Expr, ExprError, Func, Jet, Node};

/// Value and all partials through order three at `point`.
pub fn eval_jet3(expr: &Expr, point: &[f64]) -> Result<Jet, ExprError> {
    eval_jet(expr, point, 3)
}

/// Value and partials through `order` (at most three).
pub fn eval_jet(expr: &Expr, point: &[f64], order: u8) -> Result<Jet, ExprError> {
    check_point(expr, point)?;
    let ctx = Ctx {
        coords: expr.coordinates(),
        point,
        order: order.min(3),
    };
    ctx.jet(expr.root())
}

/// Plain value, with the same domain rules as the jet evaluator.
pub fn eval_value(expr: &Expr, point: &[f64]) -> Result<f64, ExprError> {
    check_point(expr, point)?;
    let ctx = Ctx {
        coords: expr.coordinates(),
        point,
        order: 0,
    };
    ctx.value(expr.root())
}

fn check_point(expr: &Expr, point: &[f64]) -> Result<(), ExprError> {
    if point.len() != expr.dimension() {
        return Err(ExprError::PointDimension {
            expected: expr.dimension(),
            got: point.len(),
        });
    }
    Ok(())
}

struct Ctx<'a> {
    coords: &'a [String],
    point: &'a [f64],
    order: u8,
}

/// Derivatives `[h, h', h'', h''']` of `u^c`. Terms whose falling-factorial
/// coefficient vanishes are zeroed explicitly so `0^c` stays finite.
fn power_derivatives(u: f64, c: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    let mut coeff = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if coeff != 0.0 {
            let e = c - k as f64;
            *slot = coeff
                * if c.fract() == 0.0 && e.abs() < 2.0_f64.powi(31) {
                    u.powi(e as i32)
                } else {
                    u.powf(e)
                };
        }
        coeff *= c - k as f64;
    }
    out
}

fn func_derivatives(func: Func, u: f64) -> [f64; 4] {
    match func {
        Func::Sin => {
            let (s, c) = u.sin_cos();
            [s, c, -s, -c]
        }
        Func::Cos => {
            let (s, c) = u.sin_cos();
            [c, -s, -c, s]
        }
        Func::Tan => {
            let t = u.tan();
            let sec2 = 1.0 + t * t;
            [t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)]
        }
        Func::Sinh => [u.sinh(), u.cosh(), u.sinh(), u.cosh()],
        Func::Cosh => [u.cosh(), u.sinh(), u.cosh(), u.sinh()],
        Func::Tanh => {
            let t = u.tanh();
            let s = 1.0 - t * t;
            [t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)]
        }
        Func::Exp => {
            let e = u.exp();
            [e; 4]
        }
        Func::Log => {
            let r = 1.0 / u;
            [u.ln(), r, -r * r, 2.0 * r * r * r]
        }
        Func::Sqrt => {
            let s = u.sqrt();
            [s, 0.5 / s, -0.25 / (s * s * s), 0.375 / (s * s * s * s * s)]
        }
    }
}

impl Ctx<'_> {
    fn dim(&self) -> usize {
        self.point.len()
    }

    fn domain(&self, node: &Node, message: impl Into<String>) -> ExprError {
        ExprError::Domain {
            subexpression: print_node(node, self.coords),
            message: message.into(),
        }
    }

    fn check_argument(&self, func: Func, node: &Node, u: f64) -> Result<(), ExprError> {
        match func {
            Func::Log if u <= 0.0 => {
                Err(self.domain(node, format!("log of non-positive value {u}")))
            }
            // the derivative of sqrt is unbounded at zero
            Func::Sqrt if u <= 0.0 => {
                Err(self.domain(node, format!("sqrt needs a positive argument, got {u}")))
            }
            _ => Ok(()),
        }
    }

    fn check_pow(&self, node: &Node, base: f64, exponent: Option<f64>) -> Result<(), ExprError> {
        match exponent {
            Some(c) if c.fract() == 0.0 => {
                if base == 0.0 && c < 0.0 {
                    Err(self.domain(node, "zero raised to a negative power"))
                } else {
                    Ok(())
                }
            }
            _ if base > 0.0 => Ok(()),
            _ => Err(self.domain(
                node,
                format!("non-integer or variable exponent needs a positive base, got {base}"),
            )),
        }
    }

    fn finite(&self, node: &Node, j: Jet) -> Result<Jet, ExprError> {
        if j.is_finite() {
            Ok(j)
        } else {
            Err(self.domain(node, "non-finite result"))
        }
    }

    fn jet(&self, node: &Node) -> Result<Jet, ExprError> {
        let n = self.dim();
        let j = match node {
            Node::Number(v) => Jet::constant(n, *v).truncated(self.order),
            Node::Constant(c) => Jet::constant(n, c.value()).truncated(self.order),
            Node::Var(k) => Jet::variable(n, *k, self.point[*k]).truncated(self.order),
            Node::Neg(a) => -self.jet(a)?,
            Node::Call(f, a) => {
                let inner = self.jet(a)?;
                self.check_argument(*f, node, inner.value())?;
                inner.compose(func_derivatives(*f, inner.value()))
            }
            Node::Binary(op, a, b) => {
                let lhs = self.jet(a)?;
                match op {
                    BinOp::Add => lhs + self.jet(b)?,
                    BinOp::Sub => lhs - self.jet(b)?,
                    BinOp::Mul => lhs * self.jet(b)?,
                    BinOp::Div => {
                        let rhs = self.jet(b)?;
                        if rhs.value() == 0.0 {
                            return Err(self.domain(node, "division by zero"));
                        }
                        lhs / rhs
                    }
                    BinOp::Pow => {
                        if b.is_constant() {
                            let c = self.value(b)?;
                            self.check_pow(node, lhs.value(), Some(c))?;
                            lhs.compose(power_derivatives(lhs.value(), c))
                        } else {
                            // x^y = exp(y log x)
                            self.check_pow(node, lhs.value(), None)?;
                            let log = lhs.compose(func_derivatives(Func::Log, lhs.value()));
                            let prod = self.jet(b)? * log;
                            let v = prod.value();
                            prod.compose(func_derivatives(Func::Exp, v))
                        }
                    }
                }
            }
        };
        self.finite(node, j)
    }

    fn value(&self, node: &Node) -> Result<f64, ExprError> {
        let v = match node {
            Node::Number(v) => *v,
            Node::Constant(c) => c.value(),
            Node::Var(k) => self.point[*k],
            Node::Neg(a) => -self.value(a)?,
            Node::Call(f, a) => {
                let u = self.value(a)?;
                self.check_argument(*f, node, u)?;
                func_derivatives(*f, u)[0]
            }
            Node::Binary(op, a, b) => {
                let x = self.value(a)?;
                let y = self.value(b)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(self.domain(node, "division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        let constant = b.is_constant().then_some(y);
                        self.check_pow(node, x, constant)?;
                        power_derivatives(x, y)[0]
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain(node, "non-finite result"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn jet(src: &str, coords: &[&str], p: &[f64]) -> Jet {
        eval_jet3(&parse_expression(src, coords).unwrap(), p).unwrap()
    }

    #[test]
    fn cubic_monomial() {
        let j = jet("x^3", &["x"], &[2.0]);
        assert_eq!(
            (j.value(), j.d1(0), j.d2(0, 0), j.d3(0, 0, 0)),
            (8.0, 12.0, 12.0, 6.0)
        );
    }

    #[test]
    fn exp_times_coordinate() {
        let j = jet("exp(x1)*x2", &["x1", "x2"], &[0.0, 3.0]);
        assert_eq!(j.value(), 3.0);
        assert_eq!(j.grad(), &[3.0, 1.0]);
        assert_eq!(j.d2(0, 1), 1.0);
    }

    #[test]
    fn shifted_quadratic() {
        let j = jet("1 + x^2", &["x"], &[1.0]);
        assert_eq!(
            (j.value(), j.d1(0), j.d2(0, 0), j.d3(0, 0, 0)),
            (2.0, 2.0, 2.0, 0.0)
        );
    }

    #[test]
    fn sine_vanishes_at_integer() {
        let e = parse_expression("-sin(pi*y)/2", &["x", "y"]).unwrap();
        assert!(eval_value(&e, &[0.3, 1.0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn integer_power_of_negative_base() {
        let j = jet("x^2", &["x"], &[-3.0]);
        assert_eq!((j.value(), j.d1(0), j.d2(0, 0)), (9.0, -6.0, 2.0));
        let j = jet("x^2", &["x"], &[0.0]);
        assert_eq!(
            (j.value(), j.d1(0), j.d2(0, 0), j.d3(0, 0, 0)),
            (0.0, 0.0, 2.0, 0.0)
        );
    }

    #[test]
    fn general_power_matches_exp_log() {
        let a = jet("x^y", &["x", "y"], &[1.7, 0.4]);
        let b = jet("exp(y*log(x))", &["x", "y"], &[1.7, 0.4]);
        assert!((a.value() - b.value()).abs() < 1e-15);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert!((a.d3(i, j, k) - b.d3(i, j, k)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn domain_violations_name_the_subexpression() {
        let e = parse_expression("1 + log(x - 2)", &["x"]).unwrap();
        match eval_jet3(&e, &[1.0]).unwrap_err() {
            ExprError::Domain { subexpression, .. } => assert_eq!(subexpression, "log((x - 2))"),
            other => panic!("{other:?}"),
        }
        let e = parse_expression("sqrt(x)", &["x"]).unwrap();
        assert!(matches!(
            eval_jet3(&e, &[-1.0]),
            Err(ExprError::Domain { .. })
        ));
        let e = parse_expression("x^0.5", &["x"]).unwrap();
        assert!(matches!(
            eval_value(&e, &[-1.0]),
            Err(ExprError::Domain { .. })
        ));
        let e = parse_expression("x^y", &["x", "y"]).unwrap();
        assert!(matches!(
            eval_jet3(&e, &[-1.0, 2.0]),
            Err(ExprError::Domain { .. })
        ));
        let e = parse_expression("1/x", &["x"]).unwrap();
        assert!(matches!(
            eval_value(&e, &[0.0]),
            Err(ExprError::Domain { .. })
        ));
        let e = parse_expression("x^-1", &["x"]).unwrap();
        assert!(matches!(
            eval_jet3(&e, &[0.0]),
            Err(ExprError::Domain { .. })
        ));
    }

    #[test]
    fn wrong_point_length() {
        let e = parse_expression("x", &["x", "y"]).unwrap();
        assert_eq!(
            eval_value(&e, &[1.0]).unwrap_err(),
            ExprError::PointDimension {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn hyperbolic_and_tangent_third_derivatives() {
        // compare against closed forms at a point
        let t = jet("tan(x)", &["x"], &[0.3]);
        let sec2 = 1.0 / 0.3f64.cos().powi(2);
        let tn = 0.3f64.tan();
        assert!((t.d3(0, 0, 0) - (2.0 * sec2 * sec2 + 4.0 * tn * tn * sec2)).abs() < 1e-12);
        let th = jet("tanh(x)", &["x"], &[0.3]);
        let s = 1.0 - 0.3f64.tanh().powi(2);
        let tt = 0.3f64.tanh();
        assert!((th.d3(0, 0, 0) - (-2.0 * s * s + 4.0 * tt * tt * s)).abs() < 1e-12);
    }
}
