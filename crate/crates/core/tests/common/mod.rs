//! Shared generators for the integration tests.

#![allow(dead_code)]

use berger_conformal::expr::{eval_jet, eval_value, Expr};
use rand::Rng;

pub const COORDS: [&str; 3] = ["x", "y", "z"];

/// A random well-conditioned expression in `x`, `y`, `z` as source text.
///
/// Arguments of `exp`, `log`, `sqrt`, powers, products and denominators are
/// wrapped so that values and derivatives stay moderate on `[-1, 1]^3`.
pub fn random_expression<R: Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..4) {
            0 => format!("{}", rng.gen_range(1..6)),
            1 => format!("{:.2}", rng.gen_range(0.1..3.0)),
            _ => COORDS[rng.gen_range(0..3)].to_string(),
        };
    }
    let a = random_expression(rng, depth - 1);
    match rng.gen_range(0..13) {
        0 => format!("{a} + {}", random_expression(rng, depth - 1)),
        1 => format!("{a} - ({})", random_expression(rng, depth - 1)),
        2 => format!("({a}) * sin({})", random_expression(rng, depth - 1)),
        3 => format!("({a}) / (2 + ({})^2)", random_expression(rng, depth - 1)),
        4 => format!("-({a})"),
        5 => format!("sin({a})"),
        6 => format!("cos({a})"),
        7 => format!("tanh({a})"),
        8 => format!("exp(sin({a}))"),
        9 => format!("sqrt(1 + ({a})^2)"),
        10 => format!("log(2 + ({a})^2)"),
        11 => format!(
            "(tanh({a}) + {})^{}",
            rng.gen_range(1..4),
            rng.gen_range(2..4)
        ),
        _ => format!("sinh(cos({a})) * pi - e"),
    }
}

pub fn random_point<R: Rng>(rng: &mut R) -> [f64; 3] {
    [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ]
}

fn shifted(p: &[f64; 3], k: usize, h: f64) -> [f64; 3] {
    let mut q = *p;
    q[k] += h;
    q
}

/// Largest mismatch between jet derivatives (orders one and two) and central
/// differences, relative to `max(|derivative|, 1)`.
///
/// First derivatives difference the value; second derivatives difference the
/// jet's own first derivatives, so rounding stays at the `1e-11` level.
pub fn finite_difference_mismatch(e: &Expr, p: &[f64; 3], h: f64) -> f64 {
    let j = eval_jet(e, p, 2).expect("jet");
    let mut worst: f64 = 0.0;
    let err = |exact: f64, approx: f64| (exact - approx).abs() / exact.abs().max(1.0);
    for k in 0..3 {
        let fp = eval_value(e, &shifted(p, k, h)).expect("value");
        let fm = eval_value(e, &shifted(p, k, -h)).expect("value");
        worst = worst.max(err(j.d1(k), (fp - fm) / (2.0 * h)));
        let gp = eval_jet(e, &shifted(p, k, h), 1).expect("jet");
        let gm = eval_jet(e, &shifted(p, k, -h), 1).expect("jet");
        for i in 0..3 {
            worst = worst.max(err(j.d2(i, k), (gp.d1(i) - gm.d1(i)) / (2.0 * h)));
        }
    }
    worst
}
