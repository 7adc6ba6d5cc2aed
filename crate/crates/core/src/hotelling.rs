//! Downstream subscriber competition on the Hotelling line.
//!
//! Platform 1 sits at the left end of the unit interval, platform 2 at the
//! right end. Every consumer subscribes to exactly one platform. Prices,
//! shares and gross profits follow the interior equilibrium of the
//! price-setting game; [`oracle_price_equilibrium`] recomputes the same
//! equilibrium by iterated best response on a price grid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Platform {
    One,
    Two,
}

impl Platform {
    pub const ALL: [Platform; 2] = [Platform::One, Platform::Two];

    pub fn other(self) -> Platform {
        match self {
            Platform::One => Platform::Two,
            Platform::Two => Platform::One,
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Platform::One => "1",
            Platform::Two => "2",
        })
    }
}

/// Owner of a premium content package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Upstream {
    A,
    B,
}

impl Upstream {
    pub const ALL: [Upstream; 2] = [Upstream::A, Upstream::B];
}

/// Number of premium packages a platform carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PremiumCount {
    Zero,
    One,
    Two,
}

impl PremiumCount {
    pub fn from_count(n: usize) -> Option<PremiumCount> {
        match n {
            0 => Some(PremiumCount::Zero),
            1 => Some(PremiumCount::One),
            2 => Some(PremiumCount::Two),
            _ => None,
        }
    }
}

/// The set of platforms carrying one content package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Carriers {
    pub one: bool,
    pub two: bool,
}

impl Carriers {
    pub const NONE: Carriers = Carriers {
        one: false,
        two: false,
    };
    pub const ONLY_1: Carriers = Carriers {
        one: true,
        two: false,
    };
    pub const ONLY_2: Carriers = Carriers {
        one: false,
        two: true,
    };
    pub const BOTH: Carriers = Carriers {
        one: true,
        two: true,
    };
    pub const ALL: [Carriers; 4] = [
        Carriers::NONE,
        Carriers::ONLY_1,
        Carriers::ONLY_2,
        Carriers::BOTH,
    ];

    pub fn only(platform: Platform) -> Carriers {
        match platform {
            Platform::One => Carriers::ONLY_1,
            Platform::Two => Carriers::ONLY_2,
        }
    }

    pub fn contains(self, platform: Platform) -> bool {
        match platform {
            Platform::One => self.one,
            Platform::Two => self.two,
        }
    }

    pub fn without(self, platform: Platform) -> Carriers {
        match platform {
            Platform::One => Carriers { one: false, ..self },
            Platform::Two => Carriers { two: false, ..self },
        }
    }

    pub fn platforms(self) -> impl Iterator<Item = Platform> {
        Platform::ALL.into_iter().filter(move |p| self.contains(*p))
    }

    /// Mirror image: platform 1 and platform 2 swap roles.
    pub fn swapped(self) -> Carriers {
        Carriers {
            one: self.two,
            two: self.one,
        }
    }
}

impl fmt::Display for Carriers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.one, self.two) {
            (false, false) => f.write_str("none"),
            (true, false) => f.write_str("1"),
            (false, true) => f.write_str("2"),
            (true, true) => f.write_str("12"),
        }
    }
}

impl FromStr for Carriers {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") || s.is_empty() || s == "{}" {
            return Ok(Carriers::NONE);
        }
        let mut c = Carriers::NONE;
        for ch in s.chars() {
            match ch {
                '1' => c.one = true,
                '2' => c.two = true,
                ',' | ' ' | '{' | '}' => {}
                _ => return Err(format!("cannot parse carrier set {s:?}")),
            }
        }
        Ok(c)
    }
}

/// Which platforms carry each provider's premium content.
///
/// Per-platform premium counts are derived from the carrier sets, so they can
/// never disagree with them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContentAllocation {
    pub carrier_of_a: Carriers,
    pub carrier_of_b: Carriers,
}

impl ContentAllocation {
    pub fn new(carrier_of_a: Carriers, carrier_of_b: Carriers) -> Self {
        ContentAllocation {
            carrier_of_a,
            carrier_of_b,
        }
    }

    /// All sixteen allocations.
    pub fn all() -> impl Iterator<Item = ContentAllocation> {
        Carriers::ALL
            .into_iter()
            .flat_map(|a| Carriers::ALL.into_iter().map(move |b| ContentAllocation::new(a, b)))
    }

    pub fn carriers(&self, firm: Upstream) -> Carriers {
        match firm {
            Upstream::A => self.carrier_of_a,
            Upstream::B => self.carrier_of_b,
        }
    }

    pub fn with_carriers(mut self, firm: Upstream, carriers: Carriers) -> Self {
        match firm {
            Upstream::A => self.carrier_of_a = carriers,
            Upstream::B => self.carrier_of_b = carriers,
        }
        self
    }

    pub fn premia(&self, platform: Platform) -> PremiumCount {
        let n = Upstream::ALL
            .iter()
            .filter(|u| self.carriers(**u).contains(platform))
            .count();
        PremiumCount::from_count(n).expect("at most two upstream firms")
    }

    pub fn platform1_premia(&self) -> PremiumCount {
        self.premia(Platform::One)
    }

    pub fn platform2_premia(&self) -> PremiumCount {
        self.premia(Platform::Two)
    }

    pub fn swapped(&self) -> ContentAllocation {
        ContentAllocation::new(self.carrier_of_a.swapped(), self.carrier_of_b.swapped())
    }
}

/// Equilibrium of the subscriber market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DownstreamOutcome {
    pub v1: f64,
    pub v2: f64,
    pub p1: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
    pub gross_profit1: f64,
    pub gross_profit2: f64,
}

impl DownstreamOutcome {
    pub fn price(&self, platform: Platform) -> f64 {
        match platform {
            Platform::One => self.p1,
            Platform::Two => self.p2,
        }
    }

    pub fn share(&self, platform: Platform) -> f64 {
        match platform {
            Platform::One => self.q1,
            Platform::Two => self.q2,
        }
    }

    pub fn gross_profit(&self, platform: Platform) -> f64 {
        match platform {
            Platform::One => self.gross_profit1,
            Platform::Two => self.gross_profit2,
        }
    }

    /// Largest elementwise gap in prices, shares and gross profits.
    pub fn max_abs_diff(&self, other: &DownstreamOutcome) -> f64 {
        [
            (self.p1, other.p1),
            (self.p2, other.p2),
            (self.q1, other.q1),
            (self.q2, other.q2),
            (self.gross_profit1, other.gross_profit1),
            (self.gross_profit2, other.gross_profit2),
        ]
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
    }
}

pub fn gross_utility(params: &ModelParams, premia: PremiumCount) -> f64 {
    match premia {
        PremiumCount::Zero => params.v,
        PremiumCount::One => params.v + params.alpha,
        PremiumCount::Two => params.v + params.alpha + params.beta,
    }
}

/// Closed-form subscriber-market equilibrium for a content allocation.
pub fn downstream_equilibrium(
    params: &ModelParams,
    alloc: &ContentAllocation,
) -> Result<DownstreamOutcome> {
    let t = params.t;
    let v1 = gross_utility(params, alloc.platform1_premia());
    let v2 = gross_utility(params, alloc.platform2_premia());
    let gap = v1 - v2;
    let p1 = t + gap / 3.0;
    let p2 = t - gap / 3.0;
    let q1 = 0.5 + gap / (6.0 * t);
    let q2 = 1.0 - q1;
    if !(q1 > 0.0 && q1 < 1.0) {
        return Err(Error::ViabilityViolated(format!(
            "utility gap {gap} leaves platform 1 with share {q1}"
        )));
    }
    Ok(DownstreamOutcome {
        v1,
        v2,
        p1,
        p2,
        q1,
        q2,
        gross_profit1: p1 * q1,
        gross_profit2: p2 * q2,
    })
}

/// Mass of consumers reached by a provider's premium content.
pub fn ad_reach(alloc: &ContentAllocation, outcome: &DownstreamOutcome, firm: Upstream) -> f64 {
    let carriers = alloc.carriers(firm);
    match (carriers.one, carriers.two) {
        (true, true) => 1.0,
        (true, false) => outcome.q1,
        (false, true) => outcome.q2,
        (false, false) => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub grid_step: f64,
    pub max_iters: usize,
    pub damping: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_step: 1e-4,
            max_iters: 10_000,
            damping: 0.5,
        }
    }
}

/// Price equilibrium by damped iterated best response on a price grid.
///
/// The marginal consumer is `x = 1/2 + (v1 - v2 - p1 + p2) / 2t`, clamped to
/// `[0, 1]`. Each best response maximizes `p * demand` over the grid
/// `{0, step, 2 step, ...}` up to `max(v + alpha + beta, t + alpha + beta)`.
/// Own profit is unimodal in own price (linear while the demand is capped at
/// one, concave quadratic inside, zero once demand vanishes), so the grid
/// maximum is found by ternary search over grid indices.
pub fn oracle_price_equilibrium(
    params: &ModelParams,
    alloc: &ContentAllocation,
    config: &OracleConfig,
) -> Result<DownstreamOutcome> {
    if !(config.grid_step > 0.0) {
        return Err(Error::Degenerate(format!(
            "grid_step must be positive, got {}",
            config.grid_step
        )));
    }
    let t = params.t;
    let v1 = gross_utility(params, alloc.platform1_premia());
    let v2 = gross_utility(params, alloc.platform2_premia());
    let upper = (params.v + params.alpha + params.beta).max(t + params.alpha + params.beta);
    let grid = PriceGrid::new(upper, config.grid_step);

    let demand1 = |p1: f64, p2: f64| (0.5 + (v1 - v2 - p1 + p2) / (2.0 * t)).clamp(0.0, 1.0);
    let best_response_1 = |p2: f64| grid.argmax(|p1| p1 * demand1(p1, p2));
    let best_response_2 = |p1: f64| grid.argmax(|p2| p2 * (1.0 - demand1(p1, p2)));

    let tol = config.grid_step * 1e-3;
    let mut p = [0.5 * upper, 0.5 * upper];
    for _ in 0..config.max_iters {
        let br = [best_response_1(p[1]), best_response_2(p[0])];
        let next = [
            p[0] + config.damping * (br[0] - p[0]),
            p[1] + config.damping * (br[1] - p[1]),
        ];
        let change = (next[0] - p[0]).abs().max((next[1] - p[1]).abs());
        p = next;
        if change < tol {
            let p = [best_response_1(p[1]), best_response_2(p[0])];
            let q1 = demand1(p[0], p[1]);
            let q2 = 1.0 - q1;
            return Ok(DownstreamOutcome {
                v1,
                v2,
                p1: p[0],
                p2: p[1],
                q1,
                q2,
                gross_profit1: p[0] * q1,
                gross_profit2: p[1] * q2,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: config.max_iters,
    })
}

struct PriceGrid {
    step: f64,
    last: usize,
}

impl PriceGrid {
    fn new(upper: f64, step: f64) -> Self {
        PriceGrid {
            step,
            last: (upper / step).floor() as usize,
        }
    }

    fn at(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    fn argmax(&self, f: impl Fn(f64) -> f64) -> f64 {
        let value = |k: usize| f(self.at(k));
        let (mut lo, mut hi) = (0usize, self.last);
        while hi - lo > 2 {
            let m1 = lo + (hi - lo) / 3;
            let m2 = hi - (hi - lo) / 3;
            if value(m1) < value(m2) {
                lo = m1 + 1;
            } else {
                hi = m2;
            }
        }
        // near-ties go to the lower price
        let mut best = lo;
        let mut best_value = value(lo);
        for k in lo + 1..=hi {
            let v = value(k);
            if v > best_value + 1e-12 * best_value.abs().max(1.0) {
                best = k;
                best_value = v;
            }
        }
        self.at(best)
    }
}
