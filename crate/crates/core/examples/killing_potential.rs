//! With an affine conformal factor the Hessian terms drop out; the reduced
//! formulas agree with the full ones. A quadratic factor is refused.

use berger_conformal::berger::DeformationContext;
use berger_conformal::builtins::builtin;
use berger_conformal::sampling::{rng, sample_points, SampleConfig};

fn main() -> berger_conformal::Result<()> {
    let spec = builtin("flat2-affine").expect("built-in");
    let mut r = rng(1);
    let mut worst = [0.0f64; 5];
    for p in sample_points(spec.domain(), &SampleConfig::split(100, 1)) {
        let suite = DeformationContext::new(&spec, &p)?.killing_corollary_suite(&mut r, 5)?;
        for (w, (_, v)) in worst.iter_mut().zip(suite.entries()) {
            *w = w.max(v);
        }
    }
    let names = [
        "riemann",
        "sectional",
        "ricci-operator",
        "ricci-tensor",
        "scalar",
    ];
    for (n, w) in names.iter().zip(worst) {
        println!("{n:<16} max |reduced - full| = {w:.2e}");
    }

    let ctx = DeformationContext::new(&builtin("flat2").expect("built-in"), &[0.5, 0.0])?;
    match ctx.killing_scalar() {
        Ok(v) => println!("unexpected: {v}"),
        Err(e) => println!("alpha = 1 + x^2: {e}"),
    }
    Ok(())
}
