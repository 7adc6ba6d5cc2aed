//! Parameter sweeps over one or two axes.
//!
//! Rows come out in grid order (first axis outermost) whatever the thread
//! schedule. A point that fails records its error in the `error` column and
//! leaves the other quantity cells empty.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::merger::{self, OneViLabel, TwoViLabel};
use crate::analysis::welfare::{closed_form, differences, WelfareClass};
use crate::error::{Error, Result};
use crate::game::DEFAULT_TOL;
use crate::model::ModelParams;
use crate::one_vi::{self, classify_one_vi_general};
use crate::separation::{classify_region, thresholds};
use crate::two_vi::{classify_two_vi, exclusivity_threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Region,
    Threshold,
    Welfare,
    Merger,
}

impl Quantity {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Region => &[
                "separation_region",
                "two_vi_region",
                "one_vi_equilibria",
                "one_vi_profiles",
            ],
            Quantity::Threshold => &[
                "lambda_tilde",
                "lambda_hat",
                "lambda_bar",
                "hat_condition",
                "bar_condition",
                "two_vi_threshold",
                "one_vi_condition",
            ],
            Quantity::Welfare => &[
                "cs_both_on_one",
                "sw_both_on_one",
                "cs_one_and_both",
                "sw_one_and_both",
                "cs_difference",
                "sw_difference",
            ],
            Quantity::Merger => &[
                "a1_threshold",
                "a1_incentive",
                "counter_incentive_en",
                "counter_incentive_ne",
                "a1_first_en",
                "a1_first_ne",
                "b2_first_en",
                "b2_first_ne",
            ],
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "region" => Ok(Quantity::Region),
            "threshold" | "thresholds" => Ok(Quantity::Threshold),
            "welfare" => Ok(Quantity::Welfare),
            "merger" => Ok(Quantity::Merger),
            _ => Err(Error::Config(format!("unknown sweep quantity {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub field: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// Values `start, start + step, ...` up to `stop`, computed as
    /// `start + k * step` so that the end point is hit without drift.
    pub fn range(field: &str, start: f64, stop: f64, step: f64) -> Result<Axis> {
        if !ModelParams::FIELDS.contains(&field) {
            return Err(Error::Config(format!("unknown parameter {field:?}")));
        }
        if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
            return Err(Error::Config(format!(
                "bad range {start}:{stop}:{step} for {field}"
            )));
        }
        let n = ((stop - start) / step).round() as usize + 1;
        let values = (0..n)
            .map(|k| if k + 1 == n { stop } else { start + k as f64 * step })
            .collect();
        Ok(Axis {
            field: field.to_string(),
            values,
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `field:start:stop:step`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("expected field:start:stop:step, got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        Axis::range(parts[0].trim(), num(parts[1])?, num(parts[2])?, num(parts[3])?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x:.16e}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn grid_points(base: &ModelParams, axes: &[Axis]) -> Vec<ModelParams> {
    let mut points = vec![*base];
    for axis in axes {
        points = points
            .iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&x| {
                    let mut q = *p;
                    q.set(&axis.field, x);
                    q
                })
            })
            .collect();
    }
    points
}

fn profiles(list: &[(String, String)]) -> String {
    let mut v: Vec<String> = list.iter().map(|(r, c)| format!("({r},{c})")).collect();
    v.sort();
    v.join(" ")
}

fn region_cells(p: &ModelParams) -> Result<Vec<Cell>> {
    let sep = classify_region(p, DEFAULT_TOL)?;
    let two = classify_two_vi(p, DEFAULT_TOL)?;
    let one = classify_one_vi_general(p, DEFAULT_TOL)?;
    Ok(vec![
        sep.region.label().to_string().into(),
        two.region.to_string().into(),
        profiles(&one.equilibria).into(),
        one.equilibria.len().to_string().into(),
    ])
}

/// Thresholds above 1 are reported as 1: either way there is no switch
/// inside the unit interval.
fn threshold_cells(p: &ModelParams) -> Result<Vec<Cell>> {
    let th = thresholds(p)?;
    Ok(vec![
        th.lambda_tilde.into(),
        th.lambda_hat.min(1.0).into(),
        th.lambda_bar.min(1.0).into(),
        th.hat_condition.into(),
        th.bar_condition.into(),
        exclusivity_threshold(p).into(),
        one_vi::exclusivity_condition(p).into(),
    ])
}

fn welfare_cells(p: &ModelParams) -> Result<Vec<Cell>> {
    crate::separation::require_valid(p)?;
    if p.r != 0.0 {
        return Err(Error::RequiresZeroAdRevenue(p.r));
    }
    let (cs1, sw1) = closed_form(p, WelfareClass::BothOnOne);
    let (cs2, sw2) = closed_form(p, WelfareClass::OneAndBoth);
    let (dcs, dsw) = differences(p);
    Ok([cs1, sw1, cs2, sw2, dcs, dsw].map(Cell::from).to_vec())
}

fn merger_cells(p: &ModelParams) -> Result<Vec<Cell>> {
    if p.r != 0.0 {
        return Err(Error::RequiresZeroAdRevenue(p.r));
    }
    let a1 = merger::merger_a1(p, OneViLabel::NE2)?;
    let counter_en = merger::counter_merger_b2(p, OneViLabel::NE2, TwoViLabel::EN)?;
    let counter_ne = merger::counter_merger_b2(p, OneViLabel::NE2, TwoViLabel::NE)?;
    let first_en = merger::a1_first_sequence(p, OneViLabel::NE2, TwoViLabel::EN)?;
    let first_ne = merger::a1_first_sequence(p, OneViLabel::NE2, TwoViLabel::NE)?;
    let b2 = |label| match merger::merger_b2_first(p, label) {
        Ok(s) => Ok(Cell::Text(s.outcome.to_string())),
        Err(Error::HypothesisViolated(_)) => Ok(Cell::Empty),
        Err(e) => Err(e),
    };
    Ok(vec![
        merger::a1_threshold(p).into(),
        a1.incentive.into(),
        counter_en.incentive.into(),
        counter_ne.incentive.into(),
        first_en.outcome.to_string().into(),
        first_ne.outcome.to_string().into(),
        b2(TwoViLabel::EN)?,
        b2(TwoViLabel::NE)?,
    ])
}

/// Evaluate `quantity` at every point of the grid spanned by `axes` around
/// `base`. One or two axes.
pub fn sweep(base: &ModelParams, axes: &[Axis], quantity: Quantity) -> Result<Table> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Config(format!(
            "a sweep takes one or two axes, got {}",
            axes.len()
        )));
    }
    let quantity_columns = quantity.columns();
    let mut columns: Vec<String> = axes.iter().map(|a| a.field.clone()).collect();
    columns.extend(quantity_columns.iter().map(|c| c.to_string()));
    columns.push("error".into());

    let rows = grid_points(base, axes)
        .into_par_iter()
        .map(|p| {
            let mut row: Vec<Cell> = axes
                .iter()
                .map(|a| Cell::Num(p.get(&a.field).expect("known field")))
                .collect();
            let result = match quantity {
                Quantity::Region => region_cells(&p),
                Quantity::Threshold => threshold_cells(&p),
                Quantity::Welfare => welfare_cells(&p),
                Quantity::Merger => merger_cells(&p),
            };
            match result {
                Ok(cells) => {
                    row.extend(cells);
                    row.push(Cell::Empty);
                }
                Err(e) => {
                    row.extend(quantity_columns.iter().map(|_| Cell::Empty));
                    row.push(Cell::Text(format!("{}: {e}", e.code())));
                }
            }
            row
        })
        .collect();
    Ok(Table { columns, rows })
}
