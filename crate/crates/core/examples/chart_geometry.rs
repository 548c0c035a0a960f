//! Metric, Christoffel symbols, curvature and the Laplacian of a field on a
//! built-in chart, for both the base metric and its deformation.

use berger_conformal::builtins::builtin;
use berger_conformal::chart::{Geometry, MetricKind};

fn main() -> berger_conformal::Result<()> {
    let spec = builtin("curved4").expect("built-in");
    let p = [0.3, -0.2, 0.5, 0.1];
    for which in [MetricKind::Base, MetricKind::Deformed] {
        let geo = Geometry::new(&spec, &p, which)?;
        let curv = geo.curvature();
        println!("{which:?} metric at {p:?}");
        println!("  g          {:.6}", geo.metric());
        println!("  Gamma^0_00 {:.9}", geo.gamma(0, 0, 0));
        println!("  R^0_101    {:.9}", curv.riemann(0, 1, 0, 1));
        println!("  scalar     {:.9}", curv.scalar);
        println!(
            "  inverse defect {:.2e}, compatibility {:.2e}, Bianchi {:.2e}",
            geo.inverse_defect(),
            geo.compatibility_residual(),
            curv.bianchi_residual()
        );

        let f = spec.parse_field("x1^2 + sin(x2)*x4")?;
        let jet = berger_conformal::expr::eval_jet3(&f, &p).expect("field evaluates");
        println!("  grad f     {:?}", geo.gradient(&jet));
        println!("  lap f      {:.9}", geo.laplacian(&jet));
    }
    Ok(())
}
