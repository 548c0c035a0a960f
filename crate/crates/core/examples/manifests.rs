//! Round trip between compiled charts and JSON manifests, and a map manifest
//! that refers to a chart file next to it.

use berger_conformal::builtins::builtin;
use berger_conformal::manifest::{load_manifold, load_map, ManifoldManifest};

fn main() -> berger_conformal::Result<()> {
    let m = ManifoldManifest::from(&builtin("flat4").expect("built-in"));
    println!("{}", m.to_json());

    let dir = std::env::temp_dir().join("berger-manifest-example");
    std::fs::create_dir_all(&dir)?;
    let chart = dir.join("plane.json");
    let mut plane = ManifoldManifest::from(&builtin("flat2").expect("built-in"));
    plane.name = Some("plane".into());
    plane.alpha = Some("2 + cos(x)".into());
    std::fs::write(&chart, plane.to_json())?;
    std::fs::write(
        dir.join("segment.json"),
        r#"{"source": "line1", "target": "plane.json", "components": ["t", "t^2"], "deformed": "target"}"#,
    )?;

    let spec = load_manifold(chart.to_str().expect("utf-8 path"))?;
    println!("loaded {} (dimension {})", spec.name(), spec.dimension());
    let map = load_map(dir.join("segment.json").to_str().expect("utf-8 path"))?;
    println!(
        "map {} -> {}, deformed {:?}",
        map.source().name(),
        map.target().name(),
        map.deformed()
    );
    Ok(())
}
