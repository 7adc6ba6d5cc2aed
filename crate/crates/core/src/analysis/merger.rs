//! Merger and counter-merger incentives.
//!
//! Every comparison is profit arithmetic on equilibrium cells computed by
//! the structure modules. The caller names the expected equilibrium whenever
//! a structure has several.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{pure_nash, DEFAULT_TOL};
use crate::model::{ModelParams, Strategy2, Strategy3, StrategyB3};
use crate::one_vi::{self, OneViCell};
use crate::separation::cell_profits;
use crate::two_vi::{self, TwoViPayoffs};

/// Expected equilibrium with A1 integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OneViLabel {
    #[serde(rename = "(N,E2)")]
    NE2,
    #[serde(rename = "(E,EA1)")]
    EEA1,
    #[serde(rename = "(N,EA1)")]
    NEA1,
}

impl OneViLabel {
    pub fn profile(self) -> (Strategy2, StrategyB3) {
        match self {
            OneViLabel::NE2 => (Strategy2::N, StrategyB3::E2),
            OneViLabel::EEA1 => (Strategy2::E, StrategyB3::EA1),
            OneViLabel::NEA1 => (Strategy2::N, StrategyB3::EA1),
        }
    }
}

/// Expected equilibrium with A1 and B2 integrated (row A1, column B2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TwoViLabel {
    #[serde(rename = "(N,E)")]
    NE,
    #[serde(rename = "(E,N)")]
    EN,
}

impl TwoViLabel {
    pub fn profile(self) -> (Strategy2, Strategy2) {
        match self {
            TwoViLabel::NE => (Strategy2::N, Strategy2::E),
            TwoViLabel::EN => (Strategy2::E, Strategy2::N),
        }
    }

    /// Payoffs of (A1, B2).
    pub fn payoffs(self, p: &TwoViPayoffs) -> (f64, f64) {
        let (a, b) = self.profile();
        (p.payoff(a, b), p.payoff(b, a))
    }
}

fn key(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, '(' | ')' | ',' | '_' | ' '))
        .collect::<String>()
        .to_ascii_uppercase()
}

impl FromStr for OneViLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match key(s).as_str() {
            "NE2" => Ok(OneViLabel::NE2),
            "EEA1" => Ok(OneViLabel::EEA1),
            "NEA1" => Ok(OneViLabel::NEA1),
            _ => Err(format!("unknown one-integration label {s:?}")),
        }
    }
}

impl FromStr for TwoViLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match key(s).as_str() {
            "NE" => Ok(TwoViLabel::NE),
            "EN" => Ok(TwoViLabel::EN),
            _ => Err(format!("unknown two-integration label {s:?}")),
        }
    }
}

impl fmt::Display for OneViLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.profile();
        write!(f, "({a},{b})")
    }
}

impl fmt::Display for TwoViLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.profile();
        write!(f, "({a},{b})")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergerReport {
    pub pre_profits: Vec<(String, f64)>,
    pub post_profit_merged: f64,
    /// Post-merger profit strictly above the pre-merger sum (beyond tolerance).
    pub incentive: bool,
    pub tie: bool,
    pub threshold: Option<f64>,
    /// Set when advertising revenue is positive; there is no benchmark then.
    pub experimental: bool,
}

impl MergerReport {
    fn new(pre: Vec<(String, f64)>, post: f64, threshold: Option<f64>, r: f64) -> Self {
        let gain = post - pre.iter().map(|(_, x)| x).sum::<f64>();
        MergerReport {
            pre_profits: pre,
            post_profit_merged: post,
            incentive: gain > DEFAULT_TOL,
            tie: gain.abs() <= DEFAULT_TOL,
            threshold,
            experimental: r != 0.0,
        }
    }

    pub fn pre_sum(&self) -> f64 {
        self.pre_profits.iter().map(|(_, x)| x).sum()
    }
}

fn one_vi_equilibrium(params: &ModelParams, label: OneViLabel) -> Result<OneViCell> {
    let cells = one_vi::one_vi_cells(params)?;
    let report = pure_nash(&one_vi::game_from_cells(&cells)?, DEFAULT_TOL);
    let (a, b) = label.profile();
    if !report.contains(a.label(), b.label()) {
        return Err(Error::LabelNotEquilibrium {
            label: label.to_string(),
        });
    }
    Ok(cells.into_iter().find(|c| c.a1 == a && c.b == b).expect("six cells"))
}

fn two_vi_equilibrium(params: &ModelParams, label: TwoViLabel) -> Result<TwoViPayoffs> {
    let report = pure_nash(&two_vi::two_vi_game(params)?, DEFAULT_TOL);
    let (a, b) = label.profile();
    if !report.contains(a.label(), b.label()) {
        return Err(Error::LabelNotEquilibrium {
            label: label.to_string(),
        });
    }
    two_vi::two_vi_payoffs(params)
}

/// Bargaining weight above which A and 1 gain from merging when (N,E2)
/// follows.
pub fn a1_threshold(params: &ModelParams) -> f64 {
    let s = params.premium_sum();
    let k = s * (6.0 * params.t + s);
    let den = k + 2.0 * params.beta * params.beta;
    if den == 0.0 {
        1.0
    } else {
        k / den
    }
}

/// Joint profit of A and 1 with both exclusives on platform 1.
fn separation_pre_a1(params: &ModelParams) -> Result<Vec<(String, f64)>> {
    let c = cell_profits(params, Strategy3::E1, Strategy3::E1)?;
    Ok(vec![("A".into(), c.pi_a), ("1".into(), c.pi_1)])
}

/// Merger of A and platform 1 out of separation.
pub fn merger_a1(params: &ModelParams, expected: OneViLabel) -> Result<MergerReport> {
    let cell = one_vi_equilibrium(params, expected)?;
    let threshold = (expected == OneViLabel::NE2 && params.r == 0.0).then(|| a1_threshold(params));
    Ok(MergerReport::new(
        separation_pre_a1(params)?,
        cell.pi_a1,
        threshold,
        params.r,
    ))
}

/// Gain of the A1 merger at (N,E2) as a function of the bargaining weight.
pub fn a1_gain(params: &ModelParams, lambda: f64) -> Result<f64> {
    let p = params.with_lambda(lambda);
    let pre: f64 = separation_pre_a1(&p)?.iter().map(|(_, x)| x).sum();
    Ok(one_vi::cell(&p, Strategy2::N, StrategyB3::E2)?.pi_a1 - pre)
}

/// Root of [`a1_gain`] in `(0, 1]` by bisection, if the gain changes sign.
pub fn a1_threshold_bisection(params: &ModelParams, tol: f64) -> Result<Option<f64>> {
    let (mut lo, mut hi) = (f64::EPSILON, 1.0);
    if a1_gain(params, lo)? >= 0.0 || a1_gain(params, hi)? <= 0.0 {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if a1_gain(params, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Counter-merger of B and platform 2 after A1 has integrated.
pub fn counter_merger_b2(
    params: &ModelParams,
    one_vi_label: OneViLabel,
    two_vi_label: TwoViLabel,
) -> Result<MergerReport> {
    let cell = one_vi_equilibrium(params, one_vi_label)?;
    let (_, b2) = two_vi_label.payoffs(&two_vi_equilibrium(params, two_vi_label)?);
    Ok(MergerReport::new(
        vec![("B".into(), cell.pi_b), ("2".into(), cell.pi_2)],
        b2,
        None,
        params.r,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarketOutcome {
    NoMerger,
    OneIntegration,
    TwoIntegrations,
}

impl fmt::Display for MarketOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarketOutcome::NoMerger => "no-merger",
            MarketOutcome::OneIntegration => "one-integration",
            MarketOutcome::TwoIntegrations => "two-integrations",
        })
    }
}

/// A first merger that anticipates the counter-merger it would trigger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub first_pre: f64,
    /// First movers' profit if they merge and nobody follows.
    pub first_alone: f64,
    pub second_pre: f64,
    pub second_post: f64,
    pub counter_merges: bool,
    /// First movers' profit once the second step is resolved.
    pub first_final: f64,
    pub merges: bool,
    pub outcome: MarketOutcome,
}

fn sequence(first_pre: f64, first_alone: f64, second_pre: f64, second_post: f64, first_two: f64) -> SequenceReport {
    let counter_merges = second_post - second_pre > DEFAULT_TOL;
    let first_final = if counter_merges { first_two } else { first_alone };
    let merges = first_final - first_pre > DEFAULT_TOL;
    let outcome = match (merges, counter_merges) {
        (false, _) => MarketOutcome::NoMerger,
        (true, false) => MarketOutcome::OneIntegration,
        (true, true) => MarketOutcome::TwoIntegrations,
    };
    SequenceReport {
        first_pre,
        first_alone,
        second_pre,
        second_post,
        counter_merges,
        first_final,
        merges,
        outcome,
    }
}

/// A and 1 move first; B and 2 may follow.
pub fn a1_first_sequence(
    params: &ModelParams,
    one_vi_label: OneViLabel,
    two_vi_label: TwoViLabel,
) -> Result<SequenceReport> {
    let pre: f64 = separation_pre_a1(params)?.iter().map(|(_, x)| x).sum();
    let cell = one_vi_equilibrium(params, one_vi_label)?;
    let (a1, b2) = two_vi_label.payoffs(&two_vi_equilibrium(params, two_vi_label)?);
    Ok(sequence(pre, cell.pi_a1, cell.pi_b + cell.pi_2, b2, a1))
}

/// B and 2 (the platform without premium content) move first; A and 1 may
/// follow. Content values depend only on how many titles a platform carries,
/// so with B2 integrated the game is the A1 game with the providers and the
/// platforms relabelled. The expected equilibrium is the mirror of (E,EA1).
pub fn merger_b2_first(params: &ModelParams, two_vi_label: TwoViLabel) -> Result<SequenceReport> {
    if params.r != 0.0 {
        return Err(Error::RequiresZeroAdRevenue(params.r));
    }
    let d = one_vi::exclusivity_condition(params);
    if d <= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "alpha^2 + 2 alpha beta - beta^2 - 6t(alpha - beta) = {d} is not positive"
        )));
    }
    let sep = cell_profits(params, Strategy3::E1, Strategy3::E1)?;
    let pre = sep.pi_b + sep.pi_2;
    let mirror = one_vi_equilibrium(params, OneViLabel::EEA1)?;
    let (a1, b2) = two_vi_label.payoffs(&two_vi_equilibrium(params, two_vi_label)?);
    Ok(sequence(pre, mirror.pi_a1, mirror.pi_b + mirror.pi_2, a1, b2))
}

/// Observed frequencies of the qualitative merger claims on a set of draws.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MergerFractions {
    pub draws: usize,
    /// Draws where merging A and 1 pays at (N,E2) if nobody follows.
    pub a1_incentive: usize,
    /// Among those: B and 2 counter-merge when (E,N) is expected.
    pub en_counter: usize,
    /// Among those: A and 1 refrain once the (E,N) counter-merger is anticipated.
    pub en_a1_deterred: usize,
    /// Among all draws: B and 2 do not counter-merge when (N,E) is expected.
    pub ne_no_counter: usize,
    /// Among `a1_incentive` draws: A and 1 still merge when (N,E) is expected.
    pub ne_a1_still: usize,
    /// Draws satisfying the exclusivity condition (B2-first sequences).
    pub b2_first_draws: usize,
    pub b2_first_high_lambda: usize,
    pub b2_first_high_lambda_no_merger: usize,
    pub b2_first_low_lambda: usize,
    pub b2_first_low_lambda_two_vi: usize,
}

impl MergerFractions {
    pub fn ratio(num: usize, den: usize) -> f64 {
        if den == 0 {
            f64::NAN
        } else {
            num as f64 / den as f64
        }
    }
}

/// Tally the merger claims over draws without advertising revenue.
/// `high` and `low` delimit strong and weak upstream bargaining power.
pub fn merger_fractions(draws: &[ModelParams], high: f64, low: f64) -> Result<MergerFractions> {
    let mut f = MergerFractions::default();
    for p in draws {
        f.draws += 1;
        let en = a1_first_sequence(p, OneViLabel::NE2, TwoViLabel::EN)?;
        let ne = a1_first_sequence(p, OneViLabel::NE2, TwoViLabel::NE)?;
        if !ne.counter_merges {
            f.ne_no_counter += 1;
        }
        if en.first_alone - en.first_pre > DEFAULT_TOL {
            f.a1_incentive += 1;
            f.en_counter += en.counter_merges as usize;
            f.en_a1_deterred += (!en.merges) as usize;
            f.ne_a1_still += ne.merges as usize;
        }
        if one_vi::exclusivity_condition(p) > 0.0 {
            f.b2_first_draws += 1;
            for label in [TwoViLabel::NE, TwoViLabel::EN] {
                let s = merger_b2_first(p, label)?;
                if p.lambda >= high {
                    f.b2_first_high_lambda += 1;
                    f.b2_first_high_lambda_no_merger +=
                        (s.outcome == MarketOutcome::NoMerger) as usize;
                }
                if p.lambda <= low {
                    f.b2_first_low_lambda += 1;
                    f.b2_first_low_lambda_two_vi +=
                        (s.outcome == MarketOutcome::TwoIntegrations) as usize;
                }
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracting::{settle, Firm, Ownership};
    use crate::hotelling::ContentAllocation;

    fn p(alpha: f64, beta: f64, t: f64, lambda: f64) -> ModelParams {
        ModelParams::new(10.0, alpha, beta, t, 0.0, lambda)
    }

    #[test]
    fn labels_parse() {
        assert_eq!("(N,E_2)".parse::<OneViLabel>(), Ok(OneViLabel::NE2));
        assert_eq!("N_EA1".parse::<OneViLabel>(), Ok(OneViLabel::NEA1));
        assert_eq!("(E,N)".parse::<TwoViLabel>(), Ok(TwoViLabel::EN));
        assert!("(N,N)".parse::<TwoViLabel>().is_err());
    }

    #[test]
    fn a1_threshold_example() {
        let params = p(1.0, 1.0, 1.0, 0.5);
        assert!((a1_threshold(&params) - 8.0 / 9.0).abs() < 1e-15);
        assert!(merger_a1(&p(1.0, 1.0, 1.0, 0.95), OneViLabel::NE2).unwrap().incentive);
        let r = merger_a1(&params, OneViLabel::NE2).unwrap();
        assert!(!r.incentive && !r.tie);
        assert_eq!(r.threshold, Some(a1_threshold(&params)));
    }

    #[test]
    fn a1_threshold_from_profits() {
        let params = p(1.0, 1.0, 1.0, 0.5);
        let root = a1_threshold_bisection(&params, 1e-13).unwrap().unwrap();
        assert!((root - 8.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn supplying_integrated_firm_gains() {
        let r = merger_a1(&p(1.0, 0.1, 1.0, 0.3), OneViLabel::NEA1).unwrap();
        assert!(r.incentive);
        let err = merger_a1(&p(1.0, 1.0, 1.0, 0.3), OneViLabel::NEA1).unwrap_err();
        assert_eq!(err.code(), "LabelNotEquilibrium");
    }

    #[test]
    fn counter_merger_depends_on_role() {
        // B2 supplies its content in (E,N): gains iff lambda > 1/2
        let hi = counter_merger_b2(&p(1.0, 1.0, 1.0, 0.95), OneViLabel::NE2, TwoViLabel::EN).unwrap();
        assert!(hi.incentive);
        let lo = counter_merger_b2(&p(1.0, 1.0, 1.0, 0.3), OneViLabel::NE2, TwoViLabel::EN).unwrap();
        assert!(!lo.incentive);
        // B2 keeps exclusivity in (N,E): same profit as before
        let ne = counter_merger_b2(&p(1.0, 1.0, 1.0, 0.95), OneViLabel::NE2, TwoViLabel::NE).unwrap();
        assert!(ne.tie && !ne.incentive);
    }

    #[test]
    fn worthless_second_premium_counter_merger() {
        let r = counter_merger_b2(&p(1.0, 0.0, 1.0, 0.6), OneViLabel::NE2, TwoViLabel::EN).unwrap();
        assert!((r.pre_sum() - 0.5).abs() < 1e-12);
        assert!((r.post_profit_merged - 0.5).abs() < 1e-12);
        assert!(r.tie);
    }

    #[test]
    fn no_merger_at_equal_power() {
        let params = p(1.0, 1.0, 1.0, 0.5);
        for label in [TwoViLabel::NE, TwoViLabel::EN] {
            let s = a1_first_sequence(&params, OneViLabel::NE2, label).unwrap();
            assert_eq!(s.outcome, MarketOutcome::NoMerger);
        }
    }

    #[test]
    fn b2_first_examples() {
        for label in [TwoViLabel::NE, TwoViLabel::EN] {
            let s = merger_b2_first(&p(1.0, 1.0, 1.0, 0.9), label).unwrap();
            assert_eq!(s.outcome, MarketOutcome::NoMerger);
            let s = merger_b2_first(&p(1.0, 1.0, 1.0, 0.05), label).unwrap();
            assert_eq!(s.outcome, MarketOutcome::TwoIntegrations);
        }
        let err = merger_b2_first(&p(1.0, 0.1, 1.0, 0.5), TwoViLabel::NE).unwrap_err();
        assert_eq!(err.code(), "HypothesisViolated");
    }

    #[test]
    fn mirrored_integration_matches_engine() {
        let params = p(0.9, 0.4, 1.0, 0.4);
        for cell in one_vi::one_vi_cells(&params).unwrap() {
            let alloc = one_vi::allocation(cell.a1, cell.b).swapped();
            let relabelled = ContentAllocation::new(alloc.carrier_of_b, alloc.carrier_of_a);
            let s = settle(&params, Ownership::B2, relabelled).unwrap();
            assert!((s.payoff(Firm::B) - cell.pi_a1).abs() < 1e-12);
            assert!((s.payoff(Firm::A) - cell.pi_b).abs() < 1e-12);
            assert!((s.payoff(Firm::P1) - cell.pi_2).abs() < 1e-12);
        }
    }

    #[test]
    fn experimental_flag_with_ads() {
        let params = ModelParams::new(10.0, 1.0, 1.0, 1.0, 0.2, 0.9);
        let r = merger_a1(&params, OneViLabel::NE2).unwrap();
        assert!(r.experimental);
        assert_eq!(r.threshold, None);
    }
}
