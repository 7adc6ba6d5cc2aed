//! Primitive parameters and the strategy vocabularies shared by every game.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// Primitive parameters of the market.
///
/// Serializes as a flat object with keys `v, alpha, beta, t, r, lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Gross utility of basic content.
    pub v: f64,
    /// Increment from the first premium package.
    pub alpha: f64,
    /// Increment from the second premium package.
    pub beta: f64,
    /// Transport cost (horizontal differentiation).
    pub t: f64,
    /// Upstream advertising revenue per subscriber reached.
    pub r: f64,
    /// Upstream bargaining weight.
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(v: f64, alpha: f64, beta: f64, t: f64, r: f64, lambda: f64) -> Self {
        ModelParams {
            v,
            alpha,
            beta,
            t,
            r,
            lambda,
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        ModelParams { lambda, ..self }
    }

    pub fn with_r(self, r: f64) -> Self {
        ModelParams { r, ..self }
    }

    /// `alpha + beta`, the value of carrying both premium packages.
    pub fn premium_sum(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Check every invariant and return the parameters unchanged, or the full
    /// list of violated constraints.
    pub fn validate(self, strict_no_loss: bool) -> Result<Self> {
        let violations = self.violations(strict_no_loss);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    pub fn violations(&self, strict_no_loss: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut range = |field: &'static str, value: f64, ok: bool, requirement: &'static str| {
            if !ok {
                out.push(Violation::Range {
                    field,
                    value,
                    requirement,
                });
            }
        };
        range("v", self.v, self.v.is_finite(), "finite");
        range(
            "alpha",
            self.alpha,
            self.alpha.is_finite() && self.alpha >= 0.0,
            "alpha >= 0",
        );
        range(
            "beta",
            self.beta,
            self.beta.is_finite() && self.beta >= 0.0,
            "beta >= 0",
        );
        range("t", self.t, self.t.is_finite() && self.t > 0.0, "t > 0");
        range("r", self.r, self.r.is_finite() && self.r >= 0.0, "r >= 0");
        range(
            "lambda",
            self.lambda,
            (0.0..=1.0).contains(&self.lambda),
            "0 <= lambda <= 1",
        );
        if out.is_empty() {
            let sum = self.premium_sum();
            let three_t = 3.0 * self.t;
            if sum >= three_t {
                out.push(Violation::Viability {
                    alpha_plus_beta: sum,
                    three_t,
                });
            }
            if strict_no_loss {
                let bound = (1.0 + std::f64::consts::SQRT_2) * sum;
                if three_t < bound {
                    out.push(Violation::NoLoss { three_t, bound });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations(false).is_empty()
    }

    /// Look up a field by its serialized name.
    pub fn get(&self, field: &str) -> Option<f64> {
        Some(match field {
            "v" => self.v,
            "alpha" => self.alpha,
            "beta" => self.beta,
            "t" => self.t,
            "r" => self.r,
            "lambda" => self.lambda,
            _ => return None,
        })
    }

    /// Replace a field by its serialized name.
    pub fn set(&mut self, field: &str, value: f64) -> bool {
        let slot = match field {
            "v" => &mut self.v,
            "alpha" => &mut self.alpha,
            "beta" => &mut self.beta,
            "t" => &mut self.t,
            "r" => &mut self.r,
            "lambda" => &mut self.lambda,
            _ => return false,
        };
        *slot = value;
        true
    }

    pub const FIELDS: [&'static str; 6] = ["v", "alpha", "beta", "t", "r", "lambda"];
}

/// Strategy of an independent content provider facing two independent platforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy3 {
    /// Exclusive to platform 1.
    E1,
    /// Exclusive to platform 2.
    E2,
    /// Supply both platforms.
    N,
}

impl Strategy3 {
    pub const ALL: [Strategy3; 3] = [Strategy3::E1, Strategy3::E2, Strategy3::N];

    pub fn label(self) -> &'static str {
        match self {
            Strategy3::E1 => "E1",
            Strategy3::E2 => "E2",
            Strategy3::N => "N",
        }
    }
}

/// Strategy of an integrated firm: keep its content exclusive, or supply the rival.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy2 {
    E,
    N,
}

impl Strategy2 {
    pub const ALL: [Strategy2; 2] = [Strategy2::E, Strategy2::N];

    pub fn label(self) -> &'static str {
        match self {
            Strategy2::E => "E",
            Strategy2::N => "N",
        }
    }
}

/// Strategy of the independent content provider when its rival is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyB3 {
    /// Exclusive to the independent platform.
    E2,
    /// Exclusive to the integrated firm.
    EA1,
    /// Supply both.
    N,
}

impl StrategyB3 {
    pub const ALL: [StrategyB3; 3] = [StrategyB3::E2, StrategyB3::EA1, StrategyB3::N];

    pub fn label(self) -> &'static str {
        match self {
            StrategyB3::E2 => "E2",
            StrategyB3::EA1 => "EA1",
            StrategyB3::N => "N",
        }
    }
}

macro_rules! label_impls {
    ($ty:ty) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                let key = s.trim().replace('_', "");
                <$ty>::ALL
                    .into_iter()
                    .find(|x| x.label().eq_ignore_ascii_case(&key))
                    .ok_or_else(|| format!("unknown strategy {s:?}"))
            }
        }
    };
}

label_impls!(Strategy3);
label_impls!(Strategy2);
label_impls!(StrategyB3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerticalStructure {
    Separation,
    OneIntegration,
    TwoIntegrations,
}

impl fmt::Display for VerticalStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerticalStructure::Separation => "separation",
            VerticalStructure::OneIntegration => "one-integration",
            VerticalStructure::TwoIntegrations => "two-integrations",
        })
    }
}
