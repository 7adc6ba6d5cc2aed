use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A single violated parameter constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A field is outside its admissible domain (or not finite).
    Range {
        field: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// `alpha + beta < 3 t` fails.
    Viability { alpha_plus_beta: f64, three_t: f64 },
    /// `3 t >= (1 + sqrt 2)(alpha + beta)` fails.
    NoLoss { three_t: f64, bound: f64 },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::Range { .. } => "RangeViolated",
            Violation::Viability { .. } => "ViabilityViolated",
            Violation::NoLoss { .. } => "NoLossViolated",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range {
                field,
                value,
                requirement,
            } => write!(f, "{field} = {value} violates {requirement}"),
            Violation::Viability {
                alpha_plus_beta,
                three_t,
            } => write!(
                f,
                "viability requires alpha + beta < 3t, got {alpha_plus_beta} >= {three_t}"
            ),
            Violation::NoLoss { three_t, bound } => write!(
                f,
                "no-loss requires 3t >= (1 + sqrt 2)(alpha + beta), got {three_t} < {bound}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("viability violated: {0}")]
    ViabilityViolated(String),

    #[error("best-response iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("no positive joint bargaining surplus (surplus = {surplus})")]
    NoSurplus { surplus: f64 },

    #[error("degenerate game: {0}")]
    Degenerate(String),

    #[error("degenerate denominator in {threshold}")]
    DegenerateDenominator { threshold: &'static str },

    #[error("classification mismatch: analytic {analytic}, enumerated {enumerated}")]
    ClassificationMismatch { analytic: String, enumerated: String },

    #[error("lambda = 0 is excluded for the one-integration game when r = 0")]
    LambdaZeroExcluded,

    #[error("unknown equilibrium label {label:?} for {structure}")]
    UnknownLabel { label: String, structure: String },

    #[error("{label} is not an equilibrium at these parameters")]
    LabelNotEquilibrium { label: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("requires r = 0, got r = {0}")]
    RequiresZeroAdRevenue(f64),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams(v) => {
                // Range problems first, they usually explain the rest.
                if v.iter().any(|x| matches!(x, Violation::Range { .. })) {
                    "RangeViolated"
                } else if v.iter().any(|x| matches!(x, Violation::Viability { .. })) {
                    "ViabilityViolated"
                } else {
                    "NoLossViolated"
                }
            }
            Error::ViabilityViolated(_) => "ViabilityViolated",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NoSurplus { .. } => "NoSurplus",
            Error::Degenerate(_) => "Degenerate",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::ClassificationMismatch { .. } => "ClassificationMismatch",
            Error::LambdaZeroExcluded => "LambdaZeroExcluded",
            Error::UnknownLabel { .. } => "UnknownLabel",
            Error::LabelNotEquilibrium { .. } => "LabelNotEquilibrium",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::RequiresZeroAdRevenue(_) => "RequiresZeroAdRevenue",
            Error::InvalidGame(_) => "InvalidGame",
            Error::Config(_) => "ConfigError",
            Error::VerificationFailed(_) => "VerificationFailed",
        }
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::InvalidParams(v) => v,
            _ => &[],
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
