//! Generalized Nash bargaining over a lump-sum fee.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Payoffs of one bilateral negotiation, excluding the fee itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BargainInputs {
    pub b_u: f64,
    pub b_d: f64,
    pub n_u: f64,
    pub n_d: f64,
    pub lambda: f64,
}

impl BargainInputs {
    pub fn new(b_u: f64, b_d: f64, n_u: f64, n_d: f64, lambda: f64) -> Self {
        BargainInputs {
            b_u,
            b_d,
            n_u,
            n_d,
            lambda,
        }
    }

    /// Inputs from the two gains directly (disagreement payoffs set to zero).
    pub fn from_gains(upstream_gain: f64, downstream_gain: f64, lambda: f64) -> Self {
        BargainInputs::new(upstream_gain, downstream_gain, 0.0, 0.0, lambda)
    }

    pub fn upstream_gain(&self) -> f64 {
        self.b_u - self.n_u
    }

    pub fn downstream_gain(&self) -> f64 {
        self.b_d - self.n_d
    }

    pub fn joint_surplus(&self) -> f64 {
        self.upstream_gain() + self.downstream_gain()
    }

    pub fn gains_exist(&self) -> bool {
        self.joint_surplus() >= 0.0
    }
}

/// Fee paid by the downstream party: `lambda (b_D - n_D) - (1 - lambda)(b_U - n_U)`.
pub fn nash_fee(inp: &BargainInputs) -> f64 {
    inp.lambda * inp.downstream_gain() - (1.0 - inp.lambda) * inp.upstream_gain()
}

pub const DEFAULT_FEE_STEP: f64 = 1e-5;

/// Maximizes `(gU + l)^lambda (gD - l)^(1 - lambda)` over a fee grid on
/// `[-gU, gD]`. The product is concave in `l` on that interval, so a ternary
/// search over grid indices finds the grid maximum.
pub fn oracle_nash_fee(inp: &BargainInputs, grid_step: f64) -> Result<f64> {
    let surplus = inp.joint_surplus();
    if !(surplus > 0.0) {
        return Err(Error::NoSurplus { surplus });
    }
    if !(grid_step > 0.0) {
        return Err(Error::Degenerate(format!(
            "grid_step must be positive, got {grid_step}"
        )));
    }
    let gu = inp.upstream_gain();
    let gd = inp.downstream_gain();
    let lambda = inp.lambda;
    let n = (surplus / grid_step).ceil() as usize;
    let fee_at = |k: usize| {
        if k >= n {
            gd
        } else {
            -gu + k as f64 * grid_step
        }
    };
    let product = |k: usize| {
        let l = fee_at(k);
        let up = (gu + l).max(0.0);
        let down = (gd - l).max(0.0);
        up.powf(lambda) * down.powf(1.0 - lambda)
    };
    let (mut lo, mut hi) = (0usize, n);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if product(m1) < product(m2) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    let best = (lo..=hi)
        .max_by(|a, b| product(*a).total_cmp(&product(*b)))
        .unwrap_or(lo);
    Ok(fee_at(best))
}
