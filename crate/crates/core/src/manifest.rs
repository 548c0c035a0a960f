//! JSON manifests for charts and maps.
//!
//! A chart argument is either a built-in name or a path to a manifold
//! manifest. Map manifests name their source and target the same way; paths
//! inside a map manifest resolve relative to the manifest's own directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::builtins::builtin;
use crate::chart::{ChartSource, ManifoldSpec};
use crate::error::{Error, Result};
use crate::map::{DeformedSide, MapSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub coordinates: Vec<String>,
    pub metric: Vec<Vec<String>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<String>>>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub domain: Vec<[f64; 2]>,
}

impl ManifoldManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Compiles every expression. `fallback_name` is used when the manifest
    /// has no `name`.
    pub fn compile(&self, fallback_name: &str) -> Result<ManifoldSpec> {
        let source = ChartSource {
            name: self
                .name
                .clone()
                .unwrap_or_else(|| fallback_name.to_string()),
            coordinates: self.coordinates.clone(),
            metric: self.metric.clone(),
            f: self.f.clone(),
            v: self.v.clone(),
            alpha: self.alpha.clone(),
            domain: self.domain.iter().map(|[lo, hi]| (*lo, *hi)).collect(),
        };
        ManifoldSpec::compile(&source, self.dimension)
    }
}

impl From<&ManifoldSpec> for ManifoldManifest {
    fn from(spec: &ManifoldSpec) -> Self {
        let s = spec.to_source();
        ManifoldManifest {
            name: Some(s.name),
            dimension: Some(s.coordinates.len()),
            coordinates: s.coordinates,
            metric: s.metric,
            f: s.f,
            v: s.v,
            alpha: s.alpha,
            domain: s.domain.iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapManifest {
    pub source: String,
    pub target: String,
    pub components: Vec<String>,
    pub deformed: DeformedSide,
}

impl MapManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves `source` and `target` (built-ins first, then paths relative
    /// to `base_dir`) and compiles the components.
    pub fn compile(&self, base_dir: &Path) -> Result<MapSpec> {
        let source = load_manifold_from(&self.source, base_dir)?;
        let target = load_manifold_from(&self.target, base_dir)?;
        MapSpec::new(source, target, &self.components, self.deformed)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Manifest(format!("cannot read {}: {e}", path.display())))
}

fn resolve(arg: &str, base_dir: &Path) -> PathBuf {
    let p = Path::new(arg);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}

fn load_manifold_from(arg: &str, base_dir: &Path) -> Result<ManifoldSpec> {
    if let Some(spec) = builtin(arg) {
        return Ok(spec);
    }
    let path = resolve(arg, base_dir);
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    ManifoldManifest::from_json(&read(&path)?)?.compile(&stem)
}

/// A built-in chart by name, or a manifold manifest at `arg`.
pub fn load_manifold(arg: &str) -> Result<ManifoldSpec> {
    load_manifold_from(arg, Path::new("."))
}

/// A map manifest at `path`.
pub fn load_map(path: &str) -> Result<MapSpec> {
    let path = Path::new(path);
    let base = path.parent().unwrap_or(Path::new("."));
    MapManifest::from_json(&read(path)?)?.compile(base)
}
