//! The `berger` command line: argument parsing, dispatch and report rendering.
//!
//! [`run`] does everything except touching the process, so tests can drive
//! it directly and compare output bytes.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::berger::DeformationContext;
use crate::chart::ManifoldSpec;
use crate::error::{Error, Result};
use crate::harmonic::{classify_biharmonic, is_harmonic, Classification, Direction};
use crate::manifest::{load_manifold, load_map};
use crate::oracle::{compare, compare_map, CompareOutcome, ComparisonReport, Formula, Tolerances};
use crate::para_norden::{validate, ValidationReport, STRUCTURE_TOLERANCE};
use crate::sampling::{rng, sample_points, SampleConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "berger",
    version,
    about = "Closed-form geometry of Berger-type deformed metrics, checked against exact differentiation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Number of sample points (half Halton, half uniform)
    #[arg(long, default_value_t = SampleConfig::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = SampleConfig::DEFAULT_SEED)]
    seed: u64,
}

impl Sampling {
    fn points(&self, spec: &ManifoldSpec) -> Vec<Vec<f64>> {
        sample_points(spec.domain(), &SampleConfig::split(self.samples, self.seed))
    }
}

#[derive(Debug, Args)]
struct Gate {
    /// Run even if the chart fails structural validation (the report is marked)
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every structural check on a chart
    Validate {
        manifest: String,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = STRUCTURE_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Closed forms and oracle values side by side at one point
    Report {
        manifest: String,
        /// Comma-separated coordinates
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        point: Vec<f64>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        gate: Gate,
    },
    /// Closed forms against the oracle over sampled points
    Compare {
        manifest: String,
        /// A formula id, a comma-separated list, or `all`
        #[arg(long, default_value = "all")]
        formula: String,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = Tolerances::default().abs)]
        abs: f64,
        #[arg(long, default_value_t = Tolerances::default().rel)]
        rel: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        gate: Gate,
    },
    /// Harmonicity of the identity between g and its deformation
    Harmonic {
        manifest: String,
        #[arg(long)]
        direction: Direction,
        #[arg(long, default_value_t = STRUCTURE_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        gate: Gate,
    },
    /// Harmonic, proper-biharmonic or not-biharmonic classification of the identity
    Biharmonic {
        manifest: String,
        #[arg(long)]
        direction: Direction,
        #[arg(long, default_value_t = STRUCTURE_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        gate: Gate,
    },
    /// Closed-form tension of a map against the oracle
    MapTension {
        map_manifest: String,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = Tolerances::default().abs)]
        abs: f64,
        #[arg(long, default_value_t = Tolerances::default().rel)]
        rel: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        gate: Gate,
    },
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::err(EXIT_INPUT, text)
            } else {
                Outcome::out(EXIT_PASS, text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e @ Error::ValidationFailed { .. }) => Outcome::err(EXIT_FAIL, format!("error: {e}\n")),
        Err(e) => Outcome::err(EXIT_INPUT, format!("error: {e}\n")),
    }
}

fn exit_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.9e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Result of the structural gate in front of every theorem-level command.
struct Watermark {
    forced: bool,
    failures: Vec<String>,
}

impl Watermark {
    fn check(spec: &ManifoldSpec, sampling: &Sampling, gate: &Gate) -> Result<Self> {
        let report = validate(
            spec,
            &sampling.points(spec),
            STRUCTURE_TOLERANCE,
            &mut rng(sampling.seed),
        )?;
        if !gate.force {
            report.require()?;
        }
        Ok(Watermark {
            forced: gate.force,
            failures: report.failed().iter().map(|s| s.to_string()).collect(),
        })
    }

    fn none() -> Self {
        Watermark {
            forced: false,
            failures: Vec::new(),
        }
    }

    fn text(&self) -> String {
        if !self.forced {
            String::new()
        } else if self.failures.is_empty() {
            "[forced] structural validation passed\n".to_string()
        } else {
            format!(
                "[forced] structural validation FAILED ({}); results are outside the hypotheses\n",
                self.failures.join(", ")
            )
        }
    }

    fn envelope(&self, spec: &str, command: &str, results: Value) -> Value {
        let mut v = json!({
            "spec": spec,
            "command": command,
            "forced": self.forced,
            "results": results,
        });
        if self.forced {
            v["validation_failures"] = json!(self.failures);
        }
        v
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate {
            manifest,
            sampling,
            tol,
            json,
        } => {
            let spec = load_manifold(&manifest)?;
            let report = validate(&spec, &sampling.points(&spec), tol, &mut rng(sampling.seed))?;
            let text = if json {
                json_text(&validate_json(&report))
            } else {
                validate_text(&report, tol)
            };
            Ok(Outcome::out(exit_code(report.pass()), text))
        }
        Command::Report {
            manifest,
            point,
            json,
            sampling,
            gate,
        } => {
            let spec = load_manifold(&manifest)?;
            let mark = Watermark::check(&spec, &sampling, &gate)?;
            report(&spec, &point, sampling.seed, json, &mark)
        }
        Command::Compare {
            manifest,
            formula,
            sampling,
            abs,
            rel,
            json,
            gate,
        } => {
            let formulas = Formula::parse_list(&formula)?;
            let spec = load_manifold(&manifest)?;
            let mark = Watermark::check(&spec, &sampling, &gate)?;
            let tol = Tolerances { abs, rel };
            let out = compare(
                &formulas,
                &spec,
                &sampling.points(&spec),
                tol,
                sampling.seed,
            )?;
            let text = if json {
                let mut v = mark.envelope(spec.name(), "compare", json!(out.results));
                v["skipped"] = json!(out.skipped);
                json_text(&v)
            } else {
                let mut s = mark.text();
                let _ = writeln!(
                    s,
                    "compare {} ({} samples, seed {}, abs {:e}, rel {:e})",
                    spec.name(),
                    sampling.samples,
                    sampling.seed,
                    abs,
                    rel
                );
                s.push_str(&compare_text(&out));
                s
            };
            Ok(Outcome::out(exit_code(out.pass()), text))
        }
        Command::Harmonic {
            manifest,
            direction,
            tol,
            sampling,
            json,
            gate,
        } => {
            let spec = load_manifold(&manifest)?;
            let mark = Watermark::check(&spec, &sampling, &gate)?;
            let v = is_harmonic(&spec, direction, &sampling.points(&spec), tol)?;
            let text = if json {
                let entry = json!({
                    "formula": format!("tension-{}", direction.id()),
                    "max_abs": v.tension.max,
                    "max_rel": Value::Null,
                    "worst_point": v.tension.worst_point,
                    "pass": v.harmonic,
                    "classification": if v.harmonic { "harmonic" } else { "not-harmonic" },
                    "reason": v.reason,
                    "tolerance": tol,
                });
                json_text(&mark.envelope(spec.name(), "harmonic", json!([entry])))
            } else {
                format!(
                    "{}{} {}: {}\n",
                    mark.text(),
                    spec.name(),
                    direction.id(),
                    v.reason
                )
            };
            Ok(Outcome::out(EXIT_PASS, text))
        }
        Command::Biharmonic {
            manifest,
            direction,
            tol,
            sampling,
            json,
            gate,
        } => {
            let spec = load_manifold(&manifest)?;
            let mark = Watermark::check(&spec, &sampling, &gate)?;
            let v = classify_biharmonic(&spec, direction, &sampling.points(&spec), tol)?;
            let text = if json {
                let entry = json!({
                    "formula": format!("bitension-{}", direction.id()),
                    "max_abs": v.bitension.max,
                    "max_rel": Value::Null,
                    "worst_point": v.bitension.worst_point,
                    "pass": v.classification != Classification::NotBiharmonic,
                    "classification": v.classification.id(),
                    "reason": v.reason,
                    "tension_max": v.tension.max,
                    "tolerance": tol,
                });
                json_text(&mark.envelope(spec.name(), "biharmonic", json!([entry])))
            } else {
                format!(
                    "{}{} {}: {}\n",
                    mark.text(),
                    spec.name(),
                    direction.id(),
                    v.reason
                )
            };
            Ok(Outcome::out(EXIT_PASS, text))
        }
        Command::MapTension {
            map_manifest,
            sampling,
            abs,
            rel,
            json,
            gate,
        } => {
            let map = load_map(&map_manifest)?;
            let deformed = match map.deformed() {
                crate::map::DeformedSide::Source => map.source(),
                crate::map::DeformedSide::Target => map.target(),
                crate::map::DeformedSide::Neither => {
                    return Err(Error::Manifest(
                        "map-tension needs `deformed` set to source or target".into(),
                    ))
                }
            };
            let mark = Watermark::check(deformed, &sampling, &gate)?;
            let points = sampling.points(map.source());
            let report = compare_map(&map, &points, Tolerances { abs, rel })?;
            let name = format!("{} -> {}", map.source().name(), map.target().name());
            let text = if json {
                json_text(&mark.envelope(&name, "map-tension", json!([report])))
            } else {
                let mut s = mark.text();
                let _ = writeln!(
                    s,
                    "map-tension {name} ({} samples, seed {})",
                    sampling.samples, sampling.seed
                );
                s.push_str(&report_line(&report));
                let _ = writeln!(s, "{}", verdict(report.pass));
                s
            };
            Ok(Outcome::out(exit_code(report.pass), text))
        }
    }
}

fn validate_json(report: &ValidationReport) -> Value {
    let results: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut e = json!({
                "formula": c.name,
                "max_abs": c.residual,
                "max_rel": Value::Null,
                "worst_point": [],
                "pass": c.pass,
                "tolerance": c.tolerance,
            });
            if let Some(n) = &c.note {
                e["note"] = json!(n);
            }
            e
        })
        .collect();
    Watermark::none().envelope(&report.spec, "validate", json!(results))
}

fn validate_text(report: &ValidationReport, tol: f64) -> String {
    let mut s = format!(
        "validate {} ({} samples, tol {tol:e})\n",
        report.spec, report.samples
    );
    for c in &report.checks {
        let residual = match c.residual {
            Some(r) => format!("{r:.3e}"),
            None => "n/a".to_string(),
        };
        let _ = write!(
            s,
            "  {:<18} {:>11}  {}",
            c.name,
            residual,
            if c.pass { "pass" } else { "FAIL" }
        );
        if let Some(n) = &c.note {
            let _ = write!(s, "  ({n})");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{}", verdict(report.pass()));
    s
}

fn report_line(r: &ComparisonReport) -> String {
    let mut s = format!(
        "  {:<26} max_abs {:.3e}  max_rel {:.3e}  {}\n",
        r.formula,
        r.max_abs,
        r.max_rel,
        if r.pass { "pass" } else { "FAIL" }
    );
    if !r.pass {
        let _ = writeln!(s, "    worst at {}", fmt_point(&r.worst_point));
        let _ = writeln!(s, "    closed {}", fmt_vec(&r.closed_value));
        let _ = writeln!(s, "    oracle {}", fmt_vec(&r.oracle_value));
    }
    s
}

fn compare_text(out: &CompareOutcome) -> String {
    let mut s = String::new();
    for r in &out.results {
        s.push_str(&report_line(r));
    }
    for k in &out.skipped {
        let _ = writeln!(s, "  {:<26} skipped: {}", k.formula, k.reason);
    }
    let _ = writeln!(s, "{}", verdict(out.pass()));
    s
}

fn report(
    spec: &ManifoldSpec,
    point: &[f64],
    seed: u64,
    json: bool,
    mark: &Watermark,
) -> Result<Outcome> {
    spec.check_point(point)?;
    let ctx = DeformationContext::new(spec, point)?;
    let out = compare(
        &Formula::ALL,
        spec,
        &[point.to_vec()],
        Tolerances::default(),
        seed,
    )?;
    let n = ctx.dim();
    let rows = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)]).collect())
            .collect()
    };
    let text = if json {
        let mut v = mark.envelope(spec.name(), "report", json!(out.results));
        v["skipped"] = json!(out.skipped);
        v["point"] = json!(point);
        v["quantities"] = json!({
            "alpha": ctx.alpha(),
            "grad_alpha": ctx.grad(),
            "grad_alpha_norm2": ctx.grad_norm2(),
            "laplacian_alpha": ctx.laplacian(),
            "killing_residual": ctx.killing_residual(),
            "metric": rows(ctx.base().metric()),
            "deformed_metric": rows(ctx.deformed_metric_components()),
        });
        json_text(&v)
    } else {
        let mut s = mark.text();
        let _ = writeln!(s, "report {} at {}", spec.name(), fmt_point(point));
        let _ = writeln!(s, "  alpha            {:.9e}", ctx.alpha());
        let _ = writeln!(s, "  grad alpha       {}", fmt_vec(ctx.grad()));
        let _ = writeln!(s, "  |grad alpha|^2   {:.9e}", ctx.grad_norm2());
        let _ = writeln!(s, "  laplacian alpha  {:.9e}", ctx.laplacian());
        for (name, m) in [
            ("g", ctx.base().metric()),
            ("g^alpha", ctx.deformed_metric_components()),
        ] {
            for (i, row) in rows(m).iter().enumerate() {
                let label = if i == 0 { name } else { "" };
                let _ = writeln!(s, "  {label:<16} {}", fmt_vec(row));
            }
        }
        for r in &out.results {
            let _ = writeln!(
                s,
                "  {} ({})",
                r.formula,
                if r.pass { "agree" } else { "DISAGREE" }
            );
            let _ = writeln!(s, "    closed {}", fmt_vec(&r.closed_value));
            let _ = writeln!(s, "    oracle {}", fmt_vec(&r.oracle_value));
        }
        for k in &out.skipped {
            let _ = writeln!(s, "  {} skipped: {}", k.formula, k.reason);
        }
        let _ = writeln!(s, "{}", verdict(out.pass()));
        s
    };
    Ok(Outcome::out(exit_code(out.pass()), text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("berger").chain(args.iter().copied()))
    }

    #[test]
    fn validate_builtin_passes() {
        let o = run_args(&["validate", "flat2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.ends_with("PASS\n"));
    }

    #[test]
    fn harmonic_from_deformed_in_dimension_two() {
        let o = run_args(&["harmonic", "flat2", "--direction", "from-deformed"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("harmonic (dim M = 2)"), "{}", o.stdout);
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let o = run_args(&["compare", "flat2", "--bogus"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("Usage"), "{}", o.stderr);
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_INPUT);
    }

    #[test]
    fn unknown_formula_and_direction_are_input_errors() {
        assert_eq!(
            run_args(&["compare", "flat2", "--formula", "torsion"]).code,
            EXIT_INPUT
        );
        assert_eq!(
            run_args(&["harmonic", "flat2", "--direction", "sideways"]).code,
            EXIT_INPUT
        );
    }

    #[test]
    fn report_accepts_negative_coordinates() {
        let o = run_args(&["report", "flat2", "--point", "-1,0.5", "--samples", "20"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("scalar (agree)"));
        let o = run_args(&["report", "flat2", "--point", "5,0", "--samples", "20"]);
        assert_eq!(o.code, EXIT_INPUT);
    }

    #[test]
    fn json_envelope_fields() {
        let o = run_args(&[
            "compare",
            "flat2",
            "--formula",
            "scalar,riemann",
            "--samples",
            "10",
            "--json",
        ]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["spec"], "flat2");
        assert_eq!(v["command"], "compare");
        assert_eq!(v["forced"], false);
        let results = v["results"].as_array().unwrap();
        assert_eq!(results.len(), 2);
        for r in results {
            for key in ["formula", "max_abs", "max_rel", "worst_point", "pass"] {
                assert!(r.get(key).is_some(), "missing {key}");
            }
        }
    }

    #[test]
    fn help_exits_cleanly() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, 0);
        for cmd in [
            "validate",
            "report",
            "compare",
            "harmonic",
            "biharmonic",
            "map-tension",
        ] {
            assert!(o.stdout.contains(cmd), "{cmd}");
        }
    }
}
