use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{self, eval_jet, Expr, Jet, RESERVED_NAMES};

/// The structure tensor `F^i_j`, the unit parallel field `V^i` and the
/// conformal factor `α` of a para-Kähler-Norden chart.
#[derive(Debug, Clone)]
pub struct ParaStructure {
    /// Row-major, `f[i * n + j]` is `F^i_j` (row = output index).
    pub f: Vec<Expr>,
    pub v: Vec<Expr>,
    pub alpha: Expr,
}

/// A coordinate chart with its metric and (optionally) a para-Norden structure.
///
/// Immutable after construction. Charts without a structure can only serve as
/// the plain side of a map.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    name: String,
    coordinates: Arc<[String]>,
    metric: Vec<Expr>,
    structure: Option<ParaStructure>,
    domain: Vec<(f64, f64)>,
}

/// Text form of a chart, as it appears in a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSource {
    pub name: String,
    pub coordinates: Vec<String>,
    pub metric: Vec<Vec<String>>,
    pub f: Option<Vec<Vec<String>>>,
    pub v: Option<Vec<String>>,
    pub alpha: Option<String>,
    pub domain: Vec<(f64, f64)>,
}

fn compile(src: &str, coords: &Arc<[String]>, location: String) -> Result<Expr> {
    expr::parse_with(src, coords.clone()).map_err(|e| Error::expr(location, e))
}

fn square<'a>(rows: &'a [Vec<String>], n: usize, what: &str) -> Result<Vec<&'a str>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::DimensionMismatch(format!(
            "{what} must be {n}x{n}, got {} rows with lengths {shape:?}",
            rows.len()
        )));
    }
    Ok(rows.iter().flatten().map(String::as_str).collect())
}

impl ManifoldSpec {
    pub fn compile(src: &ChartSource, declared_dimension: Option<usize>) -> Result<Self> {
        let n = src.coordinates.len();
        if let Some(d) = declared_dimension {
            if d != n {
                return Err(Error::DimensionMismatch(format!(
                    "declared dimension {d} but {n} coordinates"
                )));
            }
        }
        if n == 0 {
            return Err(Error::InvalidChart("no coordinates".into()));
        }
        for (i, c) in src.coordinates.iter().enumerate() {
            let valid = c
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !valid {
                return Err(Error::InvalidChart(format!(
                    "`{c}` is not a valid coordinate name"
                )));
            }
            if RESERVED_NAMES.contains(&c.as_str()) {
                return Err(Error::InvalidChart(format!(
                    "coordinate `{c}` collides with a built-in name"
                )));
            }
            if src.coordinates[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        let coords: Arc<[String]> = src.coordinates.iter().cloned().collect();

        let metric = square(&src.metric, n, "metric")?
            .into_iter()
            .enumerate()
            .map(|(k, s)| compile(s, &coords, format!("metric[{}][{}]", k / n, k % n)))
            .collect::<Result<Vec<_>>>()?;

        let structure = match (&src.f, &src.v, &src.alpha) {
            (None, None, None) => None,
            (Some(f), Some(v), Some(alpha)) => {
                if !n.is_multiple_of(2) {
                    return Err(Error::OddDimension(n));
                }
                let f = square(f, n, "F")?
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| compile(s, &coords, format!("F[{}][{}]", k / n, k % n)))
                    .collect::<Result<Vec<_>>>()?;
                if v.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "V must have {n} components, got {}",
                        v.len()
                    )));
                }
                let v = v
                    .iter()
                    .enumerate()
                    .map(|(i, s)| compile(s, &coords, format!("V[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let alpha = compile(alpha, &coords, "alpha".into())?;
                Some(ParaStructure { f, v, alpha })
            }
            _ => {
                return Err(Error::InvalidChart(
                    "F, V and alpha must be given together".into(),
                ))
            }
        };

        if src.domain.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "domain must have {n} intervals, got {}",
                src.domain.len()
            )));
        }
        for (i, &(lo, hi)) in src.domain.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidChart(format!(
                    "domain interval {i} [{lo}, {hi}] is empty or unbounded"
                )));
            }
        }

        Ok(ManifoldSpec {
            name: src.name.clone(),
            coordinates: coords,
            metric,
            structure,
            domain: src.domain.clone(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    /// Half the dimension, `m` in `dim = 2m`.
    pub fn half_dimension(&self) -> usize {
        self.dimension() / 2
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        &self.metric[i * self.dimension() + j]
    }

    pub fn structure(&self) -> Result<&ParaStructure> {
        self.structure
            .as_ref()
            .ok_or_else(|| Error::MissingStructure(self.name.clone()))
    }

    pub fn has_structure(&self) -> bool {
        self.structure.is_some()
    }

    pub fn alpha(&self) -> Result<&Expr> {
        Ok(&self.structure()?.alpha)
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dimension()
            && point
                .iter()
                .zip(&self.domain)
                .all(|(x, &(lo, hi))| *x >= lo && *x <= hi)
    }

    pub fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, chart has {}",
                point.len(),
                self.dimension()
            )));
        }
        if !self.contains(point) {
            return Err(Error::OutsideDomain {
                point: point.to_vec(),
            });
        }
        Ok(())
    }

    /// Parses a scalar field against this chart's coordinates.
    pub fn parse_field(&self, src: &str) -> Result<Expr> {
        compile(src, &self.coordinates, "field".into())
    }

    /// Same chart with a different conformal factor.
    pub fn with_alpha(&self, alpha: &str) -> Result<Self> {
        let mut out = self.clone();
        let s = self.structure()?;
        let alpha = compile(alpha, &self.coordinates, "alpha".into())?;
        out.structure = Some(ParaStructure { alpha, ..s.clone() });
        Ok(out)
    }

    pub fn with_domain(&self, domain: Vec<(f64, f64)>) -> Result<Self> {
        if domain.len() != self.dimension() {
            return Err(Error::DimensionMismatch("domain length".into()));
        }
        Ok(ManifoldSpec {
            domain,
            ..self.clone()
        })
    }

    pub fn with_name(&self, name: &str) -> Self {
        ManifoldSpec {
            name: name.to_string(),
            ..self.clone()
        }
    }

    pub(crate) fn eval(&self, e: &Expr, point: &[f64], order: u8, what: &str) -> Result<Jet> {
        eval_jet(e, point, order).map_err(|err| Error::expr(what.to_string(), err))
    }

    /// Metric component jets `g_ij`, row-major.
    pub fn metric_jets(&self, point: &[f64]) -> Result<Vec<Jet>> {
        let n = self.dimension();
        self.metric
            .iter()
            .enumerate()
            .map(|(k, e)| self.eval(e, point, 3, &format!("metric[{}][{}]", k / n, k % n)))
            .collect()
    }

    pub fn f_jets(&self, point: &[f64]) -> Result<Vec<Jet>> {
        let n = self.dimension();
        self.structure()?
            .f
            .iter()
            .enumerate()
            .map(|(k, e)| self.eval(e, point, 3, &format!("F[{}][{}]", k / n, k % n)))
            .collect()
    }

    pub fn v_jets(&self, point: &[f64]) -> Result<Vec<Jet>> {
        self.structure()?
            .v
            .iter()
            .enumerate()
            .map(|(i, e)| self.eval(e, point, 3, &format!("V[{i}]")))
            .collect()
    }

    pub fn alpha_jet(&self, point: &[f64]) -> Result<Jet> {
        self.eval(self.alpha()?, point, 3, "alpha")
    }

    /// Text form of this chart (canonical expression strings).
    pub fn to_source(&self) -> ChartSource {
        let n = self.dimension();
        let mat = |v: &[Expr]| -> Vec<Vec<String>> {
            (0..n)
                .map(|i| (0..n).map(|j| v[i * n + j].to_string()).collect())
                .collect()
        };
        ChartSource {
            name: self.name.clone(),
            coordinates: self.coordinates.to_vec(),
            metric: mat(&self.metric),
            f: self.structure.as_ref().map(|s| mat(&s.f)),
            v: self
                .structure
                .as_ref()
                .map(|s| s.v.iter().map(Expr::to_string).collect()),
            alpha: self.structure.as_ref().map(|s| s.alpha.to_string()),
            domain: self.domain.clone(),
        }
    }
}
