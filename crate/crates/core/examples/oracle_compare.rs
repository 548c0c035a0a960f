//! A full comparison campaign: every closed form against the oracle over
//! sampled points, with the per-formula worst case.

use berger_conformal::builtins::builtin;
use berger_conformal::oracle::{compare, Formula, Tolerances};
use berger_conformal::sampling::{sample_points, SampleConfig};

fn main() -> berger_conformal::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "curved4".into());
    let spec = builtin(&name).expect("unknown built-in chart");
    let points = sample_points(spec.domain(), &SampleConfig::split(40, 5));
    let out = compare(&Formula::ALL, &spec, &points, Tolerances::default(), 5)?;
    for r in &out.results {
        println!(
            "{:<26} {:>3} samples  max_abs {:.2e}  max_rel {:.2e}  mean_abs {:.2e}  {}",
            r.formula,
            r.samples,
            r.max_abs,
            r.max_rel,
            r.mean_abs,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    for s in &out.skipped {
        println!("{:<26} skipped", s.formula);
    }
    println!(
        "{}",
        if out.pass() {
            "all agree"
        } else {
            "disagreement"
        }
    );
    Ok(())
}
