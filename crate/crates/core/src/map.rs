//! Smooth maps between charts, given as target coordinates in terms of source
//! coordinates.

use crate::chart::{Geometry, ManifoldSpec, MetricKind};
use crate::error::{Error, Result};
use crate::expr::{Expr, Jet};

/// Which side of a map carries the deformed metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeformedSide {
    Source,
    Target,
    #[serde(rename = "none")]
    Neither,
}

/// Direction of the identity map between `(M, g)` and `(M, g^α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Direction {
    /// `I: (M, g) → (M, g^α)`
    #[serde(rename = "to-deformed")]
    ToDeformed,
    /// `I: (M, g^α) → (M, g)`
    #[serde(rename = "from-deformed")]
    FromDeformed,
}

impl Direction {
    pub fn id(self) -> &'static str {
        match self {
            Direction::ToDeformed => "to-deformed",
            Direction::FromDeformed => "from-deformed",
        }
    }

    pub fn side(self) -> DeformedSide {
        match self {
            Direction::ToDeformed => DeformedSide::Target,
            Direction::FromDeformed => DeformedSide::Source,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "to-deformed" => Ok(Direction::ToDeformed),
            "from-deformed" => Ok(Direction::FromDeformed),
            other => Err(Error::Manifest(format!(
                "unknown direction `{other}` (expected to-deformed or from-deformed)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MapSpec {
    source: ManifoldSpec,
    target: ManifoldSpec,
    components: Vec<Expr>,
    deformed: DeformedSide,
}

impl MapSpec {
    pub fn new<S: AsRef<str>>(
        source: ManifoldSpec,
        target: ManifoldSpec,
        components: &[S],
        deformed: DeformedSide,
    ) -> Result<Self> {
        if components.len() != target.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} components, target `{}` has dimension {}",
                components.len(),
                target.name(),
                target.dimension()
            )));
        }
        let components = components
            .iter()
            .enumerate()
            .map(|(i, s)| {
                crate::expr::parse_expression(s.as_ref(), source.coordinates())
                    .map_err(|e| Error::expr(format!("components[{i}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        let needs = match deformed {
            DeformedSide::Source => Some(&source),
            DeformedSide::Target => Some(&target),
            DeformedSide::Neither => None,
        };
        if let Some(spec) = needs {
            spec.structure()?;
        }
        Ok(MapSpec {
            source,
            target,
            components,
            deformed,
        })
    }

    /// The identity of `spec`, with the deformed metric on `side`.
    pub fn identity(spec: &ManifoldSpec, side: DeformedSide) -> Result<Self> {
        MapSpec::new(spec.clone(), spec.clone(), spec.coordinates(), side)
    }

    pub fn source(&self) -> &ManifoldSpec {
        &self.source
    }

    pub fn target(&self) -> &ManifoldSpec {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn deformed(&self) -> DeformedSide {
        self.deformed
    }

    pub fn source_kind(&self) -> MetricKind {
        match self.deformed {
            DeformedSide::Source => MetricKind::Deformed,
            _ => MetricKind::Base,
        }
    }

    pub fn target_kind(&self) -> MetricKind {
        match self.deformed {
            DeformedSide::Target => MetricKind::Deformed,
            _ => MetricKind::Base,
        }
    }

    /// Component jets of the map at a source point.
    pub fn component_jets(&self, point: &[f64]) -> Result<Vec<Jet>> {
        self.source.check_point(point)?;
        self.components
            .iter()
            .enumerate()
            .map(|(i, e)| self.source.eval(e, point, 3, &format!("components[{i}]")))
            .collect()
    }

    /// `φ(p)`, required to lie in the target domain.
    pub fn image(&self, point: &[f64]) -> Result<Vec<f64>> {
        let image: Vec<f64> = self.component_jets(point)?.iter().map(Jet::value).collect();
        if !self.target.contains(&image) {
            return Err(Error::ImageOutsideDomain {
                point: point.to_vec(),
                image,
            });
        }
        Ok(image)
    }

    /// Source geometry at `point` and target geometry at its image, with the
    /// metrics this map is tagged with.
    pub fn geometries(&self, point: &[f64]) -> Result<(Geometry, Geometry, Vec<Jet>)> {
        let phi = self.component_jets(point)?;
        let image = self.image(point)?;
        let src = Geometry::new(&self.source, point, self.source_kind())?;
        let tgt = Geometry::new(&self.target, &image, self.target_kind())?;
        Ok((src, tgt, phi))
    }

    /// `dφ(v)^γ = ∂_i φ^γ v^i`.
    pub fn push_forward(phi: &[Jet], v: &[f64]) -> Vec<f64> {
        phi.iter()
            .map(|c| c.grad().iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}
