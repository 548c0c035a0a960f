//! Tension of maps into and out of a deformed chart: the closed form built
//! from the undeformed tension against direct evaluation.

use berger_conformal::builtins::builtin;
use berger_conformal::harmonic::{
    energy_density, tension_map_from_deformed, tension_map_to_deformed,
};
use berger_conformal::map::{DeformedSide, MapSpec};
use berger_conformal::oracle::oracle_tension;

fn main() -> berger_conformal::Result<()> {
    let curve = MapSpec::new(
        builtin("line1").expect("built-in"),
        builtin("flat2").expect("built-in"),
        &["t/2 + t^3/5", "sin(2*t)"],
        DeformedSide::Target,
    )?;
    for t in [-0.8, 0.0, 0.6] {
        let closed = tension_map_to_deformed(&curve, &[t])?;
        let oracle = oracle_tension(&curve, &[t])?;
        println!(
            "curve t = {t:>4}: closed {:.9?} oracle {:.9?} energy {:.6}",
            closed.components,
            oracle.components,
            energy_density(&curve, &[t])?
        );
    }

    let proj = MapSpec::new(
        builtin("curved4").expect("built-in"),
        builtin("flat2").expect("built-in"),
        &["x1*x2 + x3/2", "sin(x4) - x1^2/3"],
        DeformedSide::Source,
    )?;
    let p = [0.2, -0.5, 0.7, 0.1];
    let closed = tension_map_from_deformed(&proj, &p)?;
    let oracle = oracle_tension(&proj, &p)?;
    println!("curved4 -> flat2: closed {:.9?}", closed.components);
    println!("                  oracle {:.9?}", oracle.components);
    Ok(())
}
