//! Tension of the identity between g and g^alpha in both directions, and the
//! harmonic classification it implies.

use berger_conformal::berger::DeformationContext;
use berger_conformal::builtins::builtin;
use berger_conformal::harmonic::{is_harmonic, tension_identity, Direction};
use berger_conformal::oracle::oracle_identity_tension;
use berger_conformal::sampling::{sample_points, SampleConfig};

fn main() -> berger_conformal::Result<()> {
    let dirs = [Direction::ToDeformed, Direction::FromDeformed];
    let flat4 = builtin("flat4").expect("built-in");
    let p = [0.0, 1.0, 0.0, 0.0];
    let ctx = DeformationContext::new(&flat4, &p)?;
    for dir in dirs {
        let closed = tension_identity(&ctx, dir);
        let oracle = oracle_identity_tension(&flat4, &p, dir)?;
        println!(
            "flat4 {:<14} closed {:?}  oracle {:?}",
            dir.id(),
            closed.components,
            oracle.components
        );
    }

    let flat2 = builtin("flat2").expect("built-in");
    let points = sample_points(flat2.domain(), &SampleConfig::default());
    for (label, spec) in [
        ("alpha = 1 + x^2", flat2.clone()),
        ("alpha = 3", flat2.with_alpha("3")?),
    ] {
        for dir in dirs {
            let v = is_harmonic(&spec, dir, &points, 1e-9)?;
            println!("flat2 {label:<16} {:<14} {}", dir.id(), v.reason);
        }
    }
    Ok(())
}
