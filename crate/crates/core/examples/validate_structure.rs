//! Structural checks on the built-in charts and on a chart whose conformal
//! factor varies along FV.

use berger_conformal::builtins::{builtin, builtin_source};
use berger_conformal::chart::ManifoldSpec;
use berger_conformal::para_norden::{validate, STRUCTURE_TOLERANCE};
use berger_conformal::sampling::{rng, sample_points, SampleConfig};

fn show(spec: &ManifoldSpec) -> berger_conformal::Result<()> {
    let points = sample_points(spec.domain(), &SampleConfig::default());
    let report = validate(spec, &points, STRUCTURE_TOLERANCE, &mut rng(42))?;
    println!(
        "{} ({} points): {}",
        spec.name(),
        report.samples,
        if report.pass() { "pass" } else { "FAIL" }
    );
    for c in &report.checks {
        let r = c.residual.map_or("n/a".into(), |r| format!("{r:.2e}"));
        println!("  {:<18} {r:>9} {}", c.name, if c.pass { "" } else { "<-" });
    }
    Ok(())
}

fn main() -> berger_conformal::Result<()> {
    for name in ["flat2", "flat4", "curved4"] {
        show(&builtin(name).expect("built-in"))?;
    }
    let mut src = builtin_source("flat2").expect("built-in");
    src.name = "flat2-tilted-alpha".into();
    src.alpha = Some("2 + x + y".into());
    show(&ManifoldSpec::compile(&src, None)?)
}
