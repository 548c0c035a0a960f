//! Closed-form curvature of the deformed metric on the flat plane, where the
//! deformation is conformal to a flat metric and everything is explicit.

use berger_conformal::berger::DeformationContext;
use berger_conformal::builtins::builtin;

fn main() -> berger_conformal::Result<()> {
    let spec = builtin("flat2").expect("built-in");
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "x", "sectional", "analytic", "scalar"
    );
    for i in 0..=8 {
        let x = -2.0 + 0.5 * i as f64;
        let ctx = DeformationContext::new(&spec, &[x, 0.0])?;
        let k = ctx.sectional(&[1.0, 0.0], &[0.0, 1.0])?;
        let (a, da, dda) = (1.0 + x * x, 2.0 * x, 2.0);
        let analytic = (da * da - a * dda) / (2.0 * a * a * a);
        println!("{x:>6.2} {k:>12.6} {analytic:>12.6} {:>12.6}", ctx.scalar());
    }

    let ctx = DeformationContext::new(&spec, &[1.0, 0.0])?;
    let (ex, ey) = ([1.0, 0.0], [0.0, 1.0]);
    println!("connection at x = 1:");
    println!("  nabla_x x = {:?}", ctx.connection(&ex, &ex));
    println!("  nabla_y y = {:?}", ctx.connection(&ey, &ey));
    println!("  nabla_x y = {:?}", ctx.connection(&ex, &ey));
    println!("  Ricci(d_x) = {:?}", ctx.ricci_operator(&ex));

    let spec4 = builtin("flat4").expect("built-in");
    let ctx = DeformationContext::new(&spec4, &[0.1, 0.8, -0.3, 0.5])?;
    println!("flat4 scalar {:.9}, frame:", ctx.scalar());
    for e in ctx.deformed_frame()? {
        println!("  {e:.6?}");
    }
    Ok(())
}
