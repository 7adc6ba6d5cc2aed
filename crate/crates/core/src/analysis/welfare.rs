//! Consumer surplus and social welfare without advertising revenue.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hotelling::{downstream_equilibrium, Carriers, ContentAllocation};
use crate::model::{ModelParams, VerticalStructure};
use crate::separation::require_valid;

/// Allocation classes with distinct welfare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WelfareClass {
    /// Both packages on one platform.
    BothOnOne,
    /// One platform carries one package, the other carries both.
    OneAndBoth,
}

impl WelfareClass {
    pub fn allocation(self) -> ContentAllocation {
        match self {
            WelfareClass::BothOnOne => ContentAllocation::new(Carriers::ONLY_1, Carriers::ONLY_1),
            WelfareClass::OneAndBoth => ContentAllocation::new(Carriers::BOTH, Carriers::ONLY_2),
        }
    }
}

fn normalize(label: &str) -> String {
    label
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | ',' | '_' | ' '))
        .collect::<String>()
        .to_ascii_uppercase()
}

/// Welfare class of an equilibrium label of the given structure.
pub fn classify_label(structure: VerticalStructure, label: &str) -> Result<WelfareClass> {
    let key = normalize(label);
    let class = match (structure, key.as_str()) {
        (VerticalStructure::Separation, "ESES") => Some(WelfareClass::BothOnOne),
        (VerticalStructure::OneIntegration, "EEA1") => Some(WelfareClass::BothOnOne),
        (VerticalStructure::OneIntegration, "NE2" | "NEA1") => Some(WelfareClass::OneAndBoth),
        (VerticalStructure::TwoIntegrations, "NE" | "EN") => Some(WelfareClass::OneAndBoth),
        _ => None,
    };
    class.ok_or_else(|| Error::UnknownLabel {
        label: label.to_string(),
        structure: structure.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareReport {
    pub consumer_surplus: f64,
    pub social_welfare: f64,
    pub structure: VerticalStructure,
    pub equilibrium_label: String,
}

pub fn closed_form(params: &ModelParams, class: WelfareClass) -> (f64, f64) {
    let ModelParams {
        v,
        alpha: a,
        beta: b,
        t,
        ..
    } = *params;
    let s = a + b;
    match class {
        WelfareClass::BothOnOne => (
            (s * s + 18.0 * s * t + 9.0 * t * (4.0 * v - 5.0 * t)) / (36.0 * t),
            (5.0 * s * s + 18.0 * s * t + 9.0 * t * (4.0 * v - t)) / (36.0 * t),
        ),
        WelfareClass::OneAndBoth => (
            (b * b + 18.0 * (2.0 * a + b) * t + 9.0 * t * (4.0 * v - 5.0 * t)) / (36.0 * t),
            (5.0 * b * b + 18.0 * (2.0 * a + b) * t + 9.0 * t * (4.0 * v - t)) / (36.0 * t),
        ),
    }
}

pub fn welfare(
    params: &ModelParams,
    structure: VerticalStructure,
    label: &str,
) -> Result<WelfareReport> {
    require_valid(params)?;
    if params.r != 0.0 {
        return Err(Error::RequiresZeroAdRevenue(params.r));
    }
    let class = classify_label(structure, label)?;
    let (cs, sw) = closed_form(params, class);
    Ok(WelfareReport {
        consumer_surplus: cs,
        social_welfare: sw,
        structure,
        equilibrium_label: label.to_string(),
    })
}

/// Consumer surplus and welfare by trapezoid integration of each consumer's
/// best net utility over `points` nodes.
pub fn numeric_welfare(
    params: &ModelParams,
    alloc: &ContentAllocation,
    points: usize,
) -> Result<(f64, f64)> {
    let out = downstream_equilibrium(params, alloc)?;
    let t = params.t;
    let surplus = |x: f64| (out.v1 - t * x - out.p1).max(out.v2 - t * (1.0 - x) - out.p2);
    let n = points.max(2) - 1;
    let h = 1.0 / n as f64;
    let mut cs = 0.5 * (surplus(0.0) + surplus(1.0));
    for k in 1..n {
        cs += surplus(k as f64 * h);
    }
    cs *= h;
    Ok((cs, cs + out.gross_profit1 + out.gross_profit2))
}

/// `cS` and `sW` of one-and-both minus both-on-one.
pub fn differences(params: &ModelParams) -> (f64, f64) {
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        ..
    } = *params;
    (
        a * (18.0 * t - a - 2.0 * b) / (36.0 * t),
        a * (18.0 * t - 5.0 * a - 10.0 * b) / (36.0 * t),
    )
}
