use crate::expr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{location}: {source}")]
    Expression {
        location: String,
        #[source]
        source: ExprError,
    },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {0} is odd; a para-complex structure needs an even dimension")]
    OddDimension(usize),
    #[error("chart `{0}` carries no para-Norden structure (F, V, alpha)")]
    MissingStructure(String),
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("metric is not symmetric at {point:?} (asymmetry {asymmetry:e})")]
    AsymmetricMetric { point: Vec<f64>, asymmetry: f64 },
    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },
    #[error("metric is singular at {point:?} (condition number {condition:e})")]
    SingularMetric { point: Vec<f64>, condition: f64 },
    #[error("conformal factor {value:e} at {point:?} is below the guard {guard:e}")]
    AlphaTooSmall {
        point: Vec<f64>,
        value: f64,
        guard: f64,
    },
    #[error("conformal factor is not a Killing potential (Hessian residual {residual:e} > {tolerance:e})")]
    NotKilling { residual: f64, tolerance: f64 },
    #[error("vectors are not orthonormal for the base metric (defect {defect:e})")]
    NotOrthonormal { defect: f64 },
    #[error("vectors are nearly dependent (residual norm {residual:e})")]
    DependentVectors { residual: f64 },
    #[error("map image {image:?} of {point:?} lies outside the target domain")]
    ImageOutsideDomain { point: Vec<f64>, image: Vec<f64> },
    #[error("unknown formula `{0}`")]
    UnknownFormula(String),
    #[error("chart `{name}` failed structural validation ({failed}); use --force to override")]
    ValidationFailed { name: String, failed: String },
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn expr(location: impl Into<String>, source: ExprError) -> Self {
        Error::Expression {
            location: location.into(),
            source,
        }
    }
}
