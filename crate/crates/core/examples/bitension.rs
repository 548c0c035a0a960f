//! Bitension of the identity, closed form next to the definition-based value,
//! and the biharmonic classification.

use berger_conformal::berger::DeformationContext;
use berger_conformal::builtins::builtin;
use berger_conformal::harmonic::{bitension_identity, classify_biharmonic, Direction};
use berger_conformal::oracle::oracle_bitension;
use berger_conformal::sampling::{sample_points, SampleConfig};

fn main() -> berger_conformal::Result<()> {
    for (name, p) in [
        ("flat2", vec![1.0, 0.0]),
        ("flat4", vec![0.3, 1.0, -0.2, 0.4]),
        ("curved4", vec![0.5, 0.2, 0.0, -0.3]),
    ] {
        let spec = builtin(name).expect("built-in");
        let ctx = DeformationContext::new(&spec, &p)?;
        for dir in [Direction::ToDeformed, Direction::FromDeformed] {
            let closed = bitension_identity(&ctx, dir);
            let oracle = oracle_bitension(&spec, &p, dir)?;
            println!(
                "{name:<8} {:<14} closed {:.9?}",
                dir.id(),
                closed.components
            );
            println!("{:<23} oracle {:.9?}", "", oracle.components);
        }
    }

    let flat4 = builtin("flat4").expect("built-in");
    let points = sample_points(flat4.domain(), &SampleConfig::split(50, 3));
    for dir in [Direction::ToDeformed, Direction::FromDeformed] {
        let v = classify_biharmonic(&flat4, dir, &points, 1e-9)?;
        println!("flat4 {}: {}", dir.id(), v.reason);
    }
    Ok(())
}
