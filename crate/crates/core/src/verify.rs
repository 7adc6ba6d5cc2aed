//! Randomized self-check: closed forms against oracles and first-principles
//! rebuilds, analytic labels against enumeration.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bargain::{nash_fee, oracle_nash_fee, BargainInputs, DEFAULT_FEE_STEP};
use crate::contracting::{settle, Ownership};
use crate::error::Result;
use crate::game::{mixed_2x2, mixed_deviation_gap, DEFAULT_TOL};
use crate::hotelling::{downstream_equilibrium, oracle_price_equilibrium, ContentAllocation, OracleConfig};
use crate::model::ModelParams;
use crate::sampling::{draws, stream};
use crate::separation::{self, classify_region, collapsed_game, mixed_probability_closed_form};
use crate::{one_vi, two_vi};

pub const HOTELLING_TOL: f64 = 2e-4;
pub const FEE_TOL: f64 = 2e-5;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Streams at or above this index are used for bargaining instances, so they
/// never collide with parameter draws.
const BARGAIN_STREAM: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    /// Each case yields its error, or `None` if it could not be evaluated.
    fn from_errors(name: &'static str, tolerance: f64, errors: Vec<Option<f64>>) -> Check {
        let mut c = Check {
            name,
            cases: errors.len(),
            passed: 0,
            failed: 0,
            max_error: 0.0,
            tolerance,
        };
        for e in errors {
            match e {
                Some(e) if e <= tolerance => {
                    c.passed += 1;
                    c.max_error = c.max_error.max(e);
                }
                Some(e) => {
                    c.failed += 1;
                    c.max_error = c.max_error.max(e);
                }
                None => c.failed += 1,
            }
        }
        c
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub draws: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn par_errors<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<f64> + Sync) -> Vec<Option<f64>> {
    items.par_iter().map(|x| f(x).ok()).collect()
}

fn max_diff<const N: usize>(a: [f64; N], b: [f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn hotelling_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    let cases: Vec<(ModelParams, ContentAllocation)> = params
        .iter()
        .flat_map(|p| ContentAllocation::all().map(move |a| (*p, a)))
        .collect();
    let config = OracleConfig::default();
    par_errors(&cases, |(p, alloc)| {
        let exact = downstream_equilibrium(p, alloc)?;
        let oracle = oracle_price_equilibrium(p, alloc, &config)?;
        Ok(exact.max_abs_diff(&oracle))
    })
}

/// Random bargaining instance with positive joint surplus and an interior
/// weight.
pub fn bargain_instance<R: Rng>(rng: &mut R) -> BargainInputs {
    loop {
        let gu = rng.gen_range(-1.0..2.0);
        let gd = rng.gen_range(-1.0..2.0);
        if gu + gd > 0.01 {
            let n_u = rng.gen_range(0.0..1.0);
            let n_d = rng.gen_range(0.0..1.0);
            let lambda = rng.gen_range(0.01..0.99);
            return BargainInputs::new(n_u + gu, n_d + gd, n_u, n_d, lambda);
        }
    }
}

pub fn bargain_instances(seed: u64, n: usize) -> Vec<BargainInputs> {
    (0..n as u64)
        .map(|i| bargain_instance(&mut stream(seed, BARGAIN_STREAM + i)))
        .collect()
}

pub fn fee_errors(instances: &[BargainInputs]) -> Vec<Option<f64>> {
    par_errors(instances, |inp| {
        Ok((nash_fee(inp) - oracle_nash_fee(inp, DEFAULT_FEE_STEP)?).abs())
    })
}

pub fn separation_reconstruction_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    par_errors(params, |p| {
        Ok(max_diff(
            separation::separation_payoffs(p)?.as_array(),
            separation::reconstruct_payoffs(p)?.as_array(),
        ))
    })
}

pub fn two_vi_reconstruction_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    let arr = |x: two_vi::TwoViPayoffs| [x.pi_ee, x.pi_n_of_ne, x.pi_e_of_ne, x.pi_nn];
    par_errors(params, |p| {
        Ok(max_diff(
            arr(two_vi::two_vi_payoffs(p)?),
            arr(two_vi::reconstruct_payoffs(p)?),
        ))
    })
}

pub fn one_vi_reconstruction_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    par_errors(params, |p| {
        let mut err: f64 = 0.0;
        for c in one_vi::one_vi_cells(p)? {
            let r = one_vi::reconstruct_cell(p, c.a1, c.b)?;
            err = err.max(max_diff([c.pi_a1, c.pi_b, c.pi_2], [r.pi_a1, r.pi_b, r.pi_2]));
        }
        Ok(err)
    })
}

/// Closed-form cell payoffs sum to platform gross profit plus advertising
/// revenue of the content carried.
pub fn one_vi_accounting_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    par_errors(params, |p| {
        let mut err: f64 = 0.0;
        for c in one_vi::one_vi_cells(p)? {
            let s = settle(p, Ownership::A1, one_vi::allocation(c.a1, c.b))?;
            err = err.max((c.pi_a1 + c.pi_b + c.pi_2 - s.industry_total(p)).abs());
        }
        Ok(err)
    })
}

/// Zero when the classifier's analytic label agrees with enumeration.
pub fn separation_classification_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    par_errors(params, |p| classify_region(p, DEFAULT_TOL).map(|_| 0.0))
}

pub fn two_vi_classification_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    par_errors(params, |p| two_vi::classify_two_vi(p, DEFAULT_TOL).map(|_| 0.0))
}

pub fn one_vi_classification_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    let r0: Vec<ModelParams> = params.iter().map(|p| p.with_r(0.0)).collect();
    par_errors(&r0, |p| one_vi::classify_one_vi_r0(p, DEFAULT_TOL).map(|_| 0.0))
}

/// For draws whose collapsed game has a fully mixed equilibrium: distance of
/// the solved probability from the closed form, and the deviation gap.
pub fn mixed_errors(params: &[ModelParams]) -> Vec<Option<f64>> {
    params
        .par_iter()
        .filter_map(|p| {
            let game = collapsed_game(p).ok()?;
            let m = mixed_2x2(&game, DEFAULT_TOL).ok()??;
            let err = (m.row_first - mixed_probability_closed_form(p))
                .abs()
                .max((m.col_first - m.row_first).abs())
                .max(mixed_deviation_gap(&game, &m));
            Some(Some(err))
        })
        .collect()
}

pub fn run(seed: u64, n: usize) -> VerifyReport {
    let params = draws(seed, n);
    let checks = vec![
        Check::from_errors("hotelling_oracle", HOTELLING_TOL, hotelling_errors(&params)),
        Check::from_errors("nash_fee_oracle", FEE_TOL, fee_errors(&bargain_instances(seed, n))),
        Check::from_errors(
            "separation_reconstruction",
            RECONSTRUCTION_TOL,
            separation_reconstruction_errors(&params),
        ),
        Check::from_errors(
            "two_vi_reconstruction",
            RECONSTRUCTION_TOL,
            two_vi_reconstruction_errors(&params),
        ),
        Check::from_errors(
            "one_vi_reconstruction",
            RECONSTRUCTION_TOL,
            one_vi_reconstruction_errors(&params),
        ),
        Check::from_errors(
            "one_vi_accounting",
            RECONSTRUCTION_TOL,
            one_vi_accounting_errors(&params),
        ),
        Check::from_errors(
            "separation_classification",
            0.0,
            separation_classification_errors(&params),
        ),
        Check::from_errors(
            "two_vi_classification",
            0.0,
            two_vi_classification_errors(&params),
        ),
        Check::from_errors(
            "one_vi_classification",
            0.0,
            one_vi_classification_errors(&params),
        ),
        Check::from_errors("mixed_equilibrium", RECONSTRUCTION_TOL, mixed_errors(&params)),
    ];
    let passed = checks.iter().all(Check::ok);
    VerifyReport {
        seed,
        draws: n,
        checks,
        passed,
    }
}
