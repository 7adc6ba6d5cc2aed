//! Content provision when no firm is vertically integrated.
//!
//! Two independent providers A and B each choose E1, E2 or N. Payoffs of the
//! 3x3 game come from five closed forms; the same numbers are rebuilt from
//! the contracting engine in tests and in the verification suite.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::contracting::{settle, Firm, Ownership};
use crate::error::{Error, Result};
use crate::game::{
    dominant_strategy, mixed_2x2, pure_nash, EquilibriumReport, NormalFormGame, Player,
};
use crate::hotelling::{Carriers, ContentAllocation, Platform, Upstream};
use crate::model::{ModelParams, Strategy3};

pub fn carriers(s: Strategy3) -> Carriers {
    match s {
        Strategy3::E1 => Carriers::ONLY_1,
        Strategy3::E2 => Carriers::ONLY_2,
        Strategy3::N => Carriers::BOTH,
    }
}

pub fn allocation(a: Strategy3, b: Strategy3) -> ContentAllocation {
    ContentAllocation::new(carriers(a), carriers(b))
}

pub(crate) fn require_valid(params: &ModelParams) -> Result<()> {
    params.validate(false).map(|_| ())
}

/// Provider A's payoff in the five distinct situations of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationPayoffs {
    /// Both exclusive to the same platform.
    pub pi_e_same: f64,
    /// Exclusive to different platforms.
    pub pi_e_other: f64,
    /// Non-exclusive against an exclusive rival.
    pub pi_n_vs_e: f64,
    /// Exclusive against a non-exclusive rival.
    pub pi_e_vs_n: f64,
    /// Both non-exclusive.
    pub pi_n_vs_n: f64,
}

impl SeparationPayoffs {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.pi_e_same,
            self.pi_e_other,
            self.pi_n_vs_e,
            self.pi_e_vs_n,
            self.pi_n_vs_n,
        ]
    }

    /// Row payoff of the profile `(own, rival)`.
    pub fn payoff(&self, own: Strategy3, rival: Strategy3) -> f64 {
        use Strategy3::*;
        match (own, rival) {
            (N, N) => self.pi_n_vs_n,
            (N, _) => self.pi_n_vs_e,
            (_, N) => self.pi_e_vs_n,
            (x, y) if x == y => self.pi_e_same,
            _ => self.pi_e_other,
        }
    }
}

pub fn separation_payoffs(params: &ModelParams) -> Result<SeparationPayoffs> {
    require_valid(params)?;
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        r,
        lambda: l,
        ..
    } = *params;
    let s = a + b;
    Ok(SeparationPayoffs {
        pi_e_same: l * s * (6.0 * t + 3.0 * r + s) / (18.0 * t) + r / 2.0,
        pi_e_other: l * s * (6.0 * t - 3.0 * r - s) / (18.0 * t) + (0.5 + s / (6.0 * t)) * r,
        pi_n_vs_e: l * (6.0 * s * t + b * b - a * a - 2.0 * a * b + 3.0 * (6.0 * t - s) * r)
            / (18.0 * t)
            + s * r / (6.0 * t),
        pi_e_vs_n: l * 2.0 * b / 3.0 + (0.5 + b / (6.0 * t)) * r,
        pi_n_vs_n: l * (2.0 * b / 3.0 - b * b / (9.0 * t) + (1.0 - b / (3.0 * t)) * r)
            + b * r / (3.0 * t),
    })
}

/// Same five payoffs, each obtained by settling all contracts of the
/// corresponding allocation from scratch.
pub fn reconstruct_payoffs(params: &ModelParams) -> Result<SeparationPayoffs> {
    use Strategy3::*;
    let pi_a = |a, b| -> Result<f64> {
        Ok(settle(params, Ownership::SEPARATION, allocation(a, b))?.payoff(Firm::A))
    };
    Ok(SeparationPayoffs {
        pi_e_same: pi_a(E1, E1)?,
        pi_e_other: pi_a(E1, E2)?,
        pi_n_vs_e: pi_a(N, E1)?,
        pi_e_vs_n: pi_a(E1, N)?,
        pi_n_vs_n: pi_a(N, N)?,
    })
}

/// The six distinct bargaining situations a provider can face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeparationContext {
    /// Exclusive, rival exclusive to the same platform.
    ExclusiveSame,
    /// Exclusive, rival exclusive to the other platform.
    ExclusiveOther,
    /// Non-exclusive, negotiating with the platform the rival is exclusive to.
    NonExclusiveRivalPlatform,
    /// Non-exclusive, negotiating with the platform lacking the rival's content.
    NonExclusiveOtherPlatform,
    /// Exclusive, rival non-exclusive.
    ExclusiveVsNonExclusive,
    /// Both non-exclusive.
    BothNonExclusive,
}

/// Representative case of each context: A's and B's strategies and the
/// platform A is negotiating with.
pub const CONTEXTS: [(SeparationContext, Strategy3, Strategy3, Platform); 6] = [
    (SeparationContext::ExclusiveSame, Strategy3::E1, Strategy3::E1, Platform::One),
    (SeparationContext::ExclusiveOther, Strategy3::E1, Strategy3::E2, Platform::One),
    (SeparationContext::NonExclusiveRivalPlatform, Strategy3::N, Strategy3::E1, Platform::One),
    (SeparationContext::NonExclusiveOtherPlatform, Strategy3::N, Strategy3::E1, Platform::Two),
    (SeparationContext::ExclusiveVsNonExclusive, Strategy3::E1, Strategy3::N, Platform::One),
    (SeparationContext::BothNonExclusive, Strategy3::N, Strategy3::N, Platform::One),
];

impl SeparationContext {
    /// Context of a provider playing `own` against `rival`, negotiating at
    /// `platform` (which must carry its content).
    pub fn of(own: Strategy3, rival: Strategy3, platform: Platform) -> SeparationContext {
        use SeparationContext::*;
        let rival_here = carriers(rival).contains(platform);
        match (own, rival) {
            (Strategy3::N, Strategy3::N) => BothNonExclusive,
            (Strategy3::N, _) if rival_here => NonExclusiveRivalPlatform,
            (Strategy3::N, _) => NonExclusiveOtherPlatform,
            (_, Strategy3::N) => ExclusiveVsNonExclusive,
            _ if rival_here => ExclusiveSame,
            _ => ExclusiveOther,
        }
    }

    /// Closed-form fee of this context.
    pub fn fee(self, params: &ModelParams) -> f64 {
        use SeparationContext::*;
        let ModelParams {
            alpha: a,
            beta: b,
            t,
            r,
            lambda: l,
            ..
        } = *params;
        let s = a + b;
        match self {
            ExclusiveSame => l * (s / 3.0 + s * s / (18.0 * t)) - (1.0 - l) * s * r / (6.0 * t),
            ExclusiveOther => l * (s / 3.0 - s * s / (18.0 * t)) + (1.0 - l) * s * r / (6.0 * t),
            NonExclusiveRivalPlatform => l * (b / 3.0 + b * b / (18.0 * t)) - (1.0 - l) * r / 2.0,
            NonExclusiveOtherPlatform => {
                l * (a / 3.0 - (a * a + 2.0 * a * b) / (18.0 * t))
                    - (1.0 - l) * (0.5 - s / (6.0 * t)) * r
            }
            ExclusiveVsNonExclusive => l * 2.0 * b / 3.0,
            BothNonExclusive => {
                l * (b / 3.0 - b * b / (18.0 * t)) - (1.0 - l) * (0.5 - b / (6.0 * t)) * r
            }
        }
    }
}

/// Net profits of all four firms at one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellProfits {
    pub pi_a: f64,
    pub pi_b: f64,
    pub pi_1: f64,
    pub pi_2: f64,
}

/// Profits at `(a, b)` from the closed-form fees of each context.
pub fn cell_profits(params: &ModelParams, a: Strategy3, b: Strategy3) -> Result<CellProfits> {
    require_valid(params)?;
    let alloc = allocation(a, b);
    let out = crate::hotelling::downstream_equilibrium(params, &alloc)?;
    let mut up = [0.0; 2];
    let mut down = [out.gross_profit1, out.gross_profit2];
    for (k, (own, rival, firm)) in [(a, b, Upstream::A), (b, a, Upstream::B)].into_iter().enumerate() {
        up[k] = params.r * crate::hotelling::ad_reach(&alloc, &out, firm);
        for d in carriers(own).platforms() {
            let fee = SeparationContext::of(own, rival, d).fee(params);
            up[k] += fee;
            down[d as usize] -= fee;
        }
    }
    Ok(CellProfits {
        pi_a: up[0],
        pi_b: up[1],
        pi_1: down[0],
        pi_2: down[1],
    })
}

/// The 3x3 game at `r = 0`, `lambda = 1`, entries written out directly.
pub fn preliminary_matrix(params: &ModelParams) -> Result<NormalFormGame> {
    require_valid(&params.with_r(0.0).with_lambda(1.0))?;
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        ..
    } = *params;
    let s = a + b;
    let same = s * (6.0 * t + s) / (18.0 * t);
    let other = s * (6.0 * t - s) / (18.0 * t);
    let n_vs_e = (6.0 * s * t + b * b - a * a - 2.0 * a * b) / (18.0 * t);
    let e_vs_n = 2.0 * b / 3.0;
    let nn = 2.0 * b / 3.0 - b * b / (9.0 * t);
    use Strategy3::*;
    NormalFormGame::from_fn(&Strategy3::ALL, &Strategy3::ALL, |i, j| {
        match (Strategy3::ALL[i], Strategy3::ALL[j]) {
            (E1, E1) | (E2, E2) => [same, same],
            (E1, E2) | (E2, E1) => [other, other],
            (N, N) => [nn, nn],
            (N, _) => [n_vs_e, e_vs_n],
            (_, N) => [e_vs_n, n_vs_e],
        }
    })
}

/// The symmetric 3x3 game for general parameters.
pub fn assemble_general_game(params: &ModelParams) -> Result<NormalFormGame> {
    let p = separation_payoffs(params)?;
    NormalFormGame::from_fn(&Strategy3::ALL, &Strategy3::ALL, |i, j| {
        let (x, y) = (Strategy3::ALL[i], Strategy3::ALL[j]);
        [p.payoff(x, y), p.payoff(y, x)]
    })
}

/// The game restricted to {E(s), N}: both exclusives go to the same platform.
pub fn collapsed_game(params: &ModelParams) -> Result<NormalFormGame> {
    let p = separation_payoffs(params)?;
    NormalFormGame::from_fn(&["E", "N"], &["E", "N"], |i, j| match (i, j) {
        (0, 0) => [p.pi_e_same, p.pi_e_same],
        (0, 1) => [p.pi_e_vs_n, p.pi_n_vs_e],
        (1, 0) => [p.pi_n_vs_e, p.pi_e_vs_n],
        _ => [p.pi_n_vs_n, p.pi_n_vs_n],
    })
}

/// A provider choosing relative to its rival's platform: exclusive to the
/// same platform, to the other platform, or non-exclusive. The rival's
/// choice is only E or N.
pub fn relative_response_game(params: &ModelParams) -> Result<NormalFormGame> {
    let p = separation_payoffs(params)?;
    NormalFormGame::from_fn(&["E(s)", "E(o)", "N"], &["E", "N"], |i, j| match (i, j) {
        (0, 0) => [p.pi_e_same, p.pi_e_same],
        (1, 0) => [p.pi_e_other, p.pi_e_other],
        (2, 0) => [p.pi_n_vs_e, p.pi_e_vs_n],
        (2, 1) => [p.pi_n_vs_n, p.pi_n_vs_n],
        _ => [p.pi_e_vs_n, p.pi_n_vs_e],
    })
}

/// Weakly dominant relative strategy, ties broken in listed order
/// (an indifferent provider chooses E(s)).
pub fn relative_dominant_strategy(params: &ModelParams, tol: f64) -> Result<Option<String>> {
    Ok(dominant_strategy(
        &relative_response_game(params)?,
        Player::Row,
        tol,
        true,
    ))
}

/// Probability of E in the symmetric mixed equilibrium of the collapsed game.
pub fn mixed_probability_closed_form(params: &ModelParams) -> f64 {
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        r,
        lambda: l,
        ..
    } = *params;
    let c = 3.0 * r * (3.0 * t - b);
    (2.0 * (b * b - c) * l + c)
        / ((2.0 * b * b - 2.0 * a * a - 4.0 * a * b - 6.0 * r * a) * l + 3.0 * r * a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub lambda_tilde: f64,
    pub lambda_hat: f64,
    pub lambda_bar: f64,
    /// `alpha (alpha + 2 beta) - 3 r (3t - alpha - beta)`.
    pub hat_condition: f64,
    /// `beta^2 - 3 r (3t - beta)`.
    pub bar_condition: f64,
}

impl Thresholds {
    pub fn hat_is_convention(&self) -> bool {
        self.hat_condition >= 0.0
    }

    pub fn bar_is_convention(&self) -> bool {
        self.bar_condition >= 0.0
    }

    /// Whether the hat condition holds whenever the bar condition does.
    pub fn gate_holds(&self) -> bool {
        self.bar_condition < 0.0 || self.hat_condition >= 0.0
    }
}

pub fn thresholds(params: &ModelParams) -> Result<Thresholds> {
    require_valid(params)?;
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        r,
        ..
    } = *params;
    let s = a + b;
    let tilde_den = 2.0 * s + 6.0 * r;
    let lambda_tilde = if tilde_den == 0.0 {
        0.0
    } else {
        3.0 * r / tilde_den
    };
    let hat_condition = a * (a + 2.0 * b) - 3.0 * r * (3.0 * t - s);
    let bar_condition = b * b - 3.0 * r * (3.0 * t - b);
    let interior = |cond: f64, num: f64, den: f64, name| {
        if cond >= 0.0 {
            Ok(1.0)
        } else if den == 0.0 {
            Err(Error::DegenerateDenominator { threshold: name })
        } else {
            Ok(num / den)
        }
    };
    let hat_num = 3.0 * r * (3.0 * t - s);
    let bar_num = 3.0 * r * (3.0 * t - b);
    Ok(Thresholds {
        lambda_tilde,
        lambda_hat: interior(
            hat_condition,
            hat_num,
            2.0 * hat_num - 2.0 * a * (a + 2.0 * b),
            "lambda_hat",
        )?,
        lambda_bar: interior(bar_condition, bar_num, 2.0 * bar_num - 2.0 * b * b, "lambda_bar")?,
        hat_condition,
        bar_condition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegionLabel {
    #[serde(rename = "Eo_Eo")]
    EoEo,
    #[serde(rename = "Es_Es")]
    EsEs,
    #[serde(rename = "Es_Es_or_N_N")]
    EsEsOrNN,
    #[serde(rename = "N_N")]
    NN,
    #[serde(rename = "Asym_E_N")]
    AsymEN,
    Boundary,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 6] = [
        RegionLabel::EoEo,
        RegionLabel::EsEs,
        RegionLabel::EsEsOrNN,
        RegionLabel::NN,
        RegionLabel::AsymEN,
        RegionLabel::Boundary,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RegionLabel::EoEo => "Eo_Eo",
            RegionLabel::EsEs => "Es_Es",
            RegionLabel::EsEsOrNN => "Es_Es_or_N_N",
            RegionLabel::NN => "N_N",
            RegionLabel::AsymEN => "Asym_E_N",
            RegionLabel::Boundary => "Boundary",
        }
    }

    /// Pure equilibria of the 3x3 game that the label stands for.
    pub fn expected_profiles(self) -> Vec<String> {
        let set: &[&str] = match self {
            RegionLabel::EoEo => &["(E1,E2)", "(E2,E1)"],
            RegionLabel::EsEs => &["(E1,E1)", "(E2,E2)"],
            RegionLabel::EsEsOrNN => &["(E1,E1)", "(E2,E2)", "(N,N)"],
            RegionLabel::NN => &["(N,N)"],
            RegionLabel::AsymEN => &["(E1,N)", "(E2,N)", "(N,E1)", "(N,E2)"],
            RegionLabel::Boundary => &[],
        };
        let mut v: Vec<String> = set.iter().map(|s| s.to_string()).collect();
        v.sort();
        v
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RegionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RegionLabel::ALL
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown region {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationClassification {
    pub params: ModelParams,
    pub thresholds: Thresholds,
    pub region: RegionLabel,
    pub pure_equilibria: Vec<(String, String)>,
    pub ties: Vec<(String, String)>,
    /// Probability of E in the symmetric mixed equilibrium of the collapsed
    /// game, when one exists.
    pub mixed: Option<f64>,
}

/// Region implied by the threshold comparisons alone (no tie handling).
///
/// The best reply to an exclusive rival switches from E(o) to E(s) at
/// `lambda_tilde` and from E(s) to N at `lambda_hat`; the best reply to a
/// non-exclusive rival switches from E to N at `lambda_bar`. Nothing here
/// assumes an order between `lambda_bar` and `lambda_hat`. A threshold set
/// to its convention value never switches, not even at `lambda = 1`.
pub fn analytic_region(th: &Thresholds, lambda: f64) -> RegionLabel {
    let n_vs_n = !th.bar_is_convention() && lambda >= th.lambda_bar;
    if lambda < th.lambda_tilde {
        RegionLabel::EoEo
    } else if th.hat_is_convention() || lambda < th.lambda_hat {
        if n_vs_n {
            RegionLabel::EsEsOrNN
        } else {
            RegionLabel::EsEs
        }
    } else if n_vs_n {
        RegionLabel::NN
    } else {
        RegionLabel::AsymEN
    }
}

fn on_boundary(params: &ModelParams, th: &Thresholds, p: &SeparationPayoffs, tol: f64) -> bool {
    let l = params.lambda;
    let mut near = (l - th.lambda_tilde).abs() <= tol;
    if !th.hat_is_convention() {
        near |= (l - th.lambda_hat).abs() <= tol;
    }
    if !th.bar_is_convention() {
        near |= (l - th.lambda_bar).abs() <= tol;
    }
    // best reply to an exclusive rival
    let mut vs_e = [p.pi_e_same, p.pi_e_other, p.pi_n_vs_e];
    vs_e.sort_by(|x, y| y.total_cmp(x));
    near |= vs_e[0] - vs_e[1] <= tol;
    // best reply to a non-exclusive rival
    near |= (p.pi_e_vs_n - p.pi_n_vs_n).abs() <= tol;
    near
}

pub fn classify_region(params: &ModelParams, tol: f64) -> Result<SeparationClassification> {
    let th = thresholds(params)?;
    let payoffs = separation_payoffs(params)?;
    let report: EquilibriumReport = pure_nash(&assemble_general_game(params)?, tol);
    let region = if on_boundary(params, &th, &payoffs, tol) {
        RegionLabel::Boundary
    } else {
        let analytic = analytic_region(&th, params.lambda);
        let enumerated = report.profile_set();
        if analytic.expected_profiles() != enumerated {
            return Err(Error::ClassificationMismatch {
                analytic: analytic.to_string(),
                enumerated: enumerated.join(" "),
            });
        }
        analytic
    };
    let mixed = match mixed_2x2(&collapsed_game(params)?, tol) {
        Ok(m) => m.map(|m| m.row_first),
        Err(_) => None,
    };
    Ok(SeparationClassification {
        params: *params,
        thresholds: th,
        region,
        pure_equilibria: report.pure_equilibria,
        ties: report.ties,
        mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::DEFAULT_TOL;

    fn p(alpha: f64, beta: f64, t: f64, r: f64, lambda: f64) -> ModelParams {
        ModelParams::new(10.0, alpha, beta, t, r, lambda)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn preliminary_values() {
        let g = preliminary_matrix(&p(1.0, 1.0, 1.0, 0.3, 0.2)).unwrap();
        assert!(close(g.cell("E1", "E1").unwrap()[0], 8.0 / 9.0, 1e-15));
        assert!(close(g.cell("N", "N").unwrap()[1], 5.0 / 9.0, 1e-15));
        let diff = g.cell("E1", "E1").unwrap()[0] - g.cell("N", "E1").unwrap()[0];
        assert!(close(diff, 1.0 / 3.0, 1e-15));
        let eq = pure_nash(&g, DEFAULT_TOL);
        assert_eq!(eq.profile_set(), vec!["(E1,E1)", "(E2,E2)"]);
    }

    #[test]
    fn perfect_substitutes_get_nothing_against_n() {
        let g = preliminary_matrix(&p(1.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(g.cell("E1", "N").unwrap()[0], 0.0);
    }

    #[test]
    fn payoffs_at_full_power_without_ads() {
        let pay = separation_payoffs(&p(1.0, 1.0, 1.0, 0.0, 1.0)).unwrap();
        let want = [8.0 / 9.0, 4.0 / 9.0, 5.0 / 9.0, 2.0 / 3.0, 5.0 / 9.0];
        for (x, y) in pay.as_array().iter().zip(want) {
            assert!(close(*x, y, 1e-14));
        }
    }

    #[test]
    fn zero_power_leaves_ad_revenue() {
        let pay = separation_payoffs(&p(0.7, 0.4, 1.2, 0.9, 0.0)).unwrap();
        assert!(close(pay.pi_e_same, 0.45, 1e-15));
    }

    #[test]
    fn same_platform_with_ads() {
        let pay = separation_payoffs(&p(1.0, 1.0, 1.0, 1.0, 0.5)).unwrap();
        assert!(close(pay.pi_e_same, 11.0 / 18.0 + 0.5, 1e-15));
    }

    #[test]
    fn general_game_reduces_to_preliminary() {
        let params = p(0.8, 1.1, 1.3, 0.0, 1.0);
        let a = assemble_general_game(&params).unwrap();
        let b = preliminary_matrix(&params).unwrap();
        for (x, y) in a.payoffs.iter().flatten().zip(b.payoffs.iter().flatten()) {
            assert!(close(x[0], y[0], 1e-12) && close(x[1], y[1], 1e-12));
        }
    }

    #[test]
    fn nn_vanishes_without_second_premium_or_ads() {
        let g = assemble_general_game(&p(1.0, 0.0, 1.0, 0.0, 0.6)).unwrap();
        assert_eq!(g.cell("N", "N").unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn contexts_match_engine() {
        let params = p(0.9, 0.6, 1.1, 0.7, 0.35);
        for (ctx, a, b, d) in CONTEXTS {
            assert_eq!(SeparationContext::of(a, b, d), ctx);
            let s = settle(&params, Ownership::SEPARATION, allocation(a, b)).unwrap();
            let fee = s.fee(Upstream::A, d).unwrap();
            assert!(close(fee, ctx.fee(&params), 1e-12), "{ctx:?}");
        }
    }

    #[test]
    fn cell_profits_match_engine() {
        let params = p(0.5, 1.2, 1.0, 0.4, 0.8);
        for a in Strategy3::ALL {
            for b in Strategy3::ALL {
                let c = cell_profits(&params, a, b).unwrap();
                let s = settle(&params, Ownership::SEPARATION, allocation(a, b)).unwrap();
                assert!(close(c.pi_a, s.payoff(Firm::A), 1e-12));
                assert!(close(c.pi_b, s.payoff(Firm::B), 1e-12));
                assert!(close(c.pi_1, s.payoff(Firm::P1), 1e-12));
                assert!(close(c.pi_2, s.payoff(Firm::P2), 1e-12));
            }
        }
    }

    #[test]
    fn thresholds_without_ads() {
        let th = thresholds(&p(1.0, 1.0, 1.0, 0.0, 0.5)).unwrap();
        assert_eq!((th.lambda_tilde, th.lambda_hat, th.lambda_bar), (0.0, 1.0, 1.0));
        let th = thresholds(&p(0.0, 0.0, 1.0, 0.0, 0.5)).unwrap();
        assert_eq!(th.lambda_tilde, 0.0);
    }

    #[test]
    fn lambda_tilde_is_the_crossover() {
        let th = thresholds(&p(1.0, 1.0, 1.0, 1.0, 0.5)).unwrap();
        assert!(close(th.lambda_tilde, 0.3, 1e-15));
        let gap = |l: f64| {
            let pay = separation_payoffs(&p(1.0, 1.0, 1.0, 1.0, l)).unwrap();
            pay.pi_e_same - pay.pi_e_other
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(close(lo, 0.3, 1e-12));
    }

    #[test]
    fn bar_convention_precedes_formula() {
        let th = thresholds(&p(0.5, 1.0, 1.0, 0.01, 0.5)).unwrap();
        assert!(th.bar_condition > 0.0);
        assert_eq!(th.lambda_bar, 1.0);
    }

    #[test]
    fn classify_examples() {
        let c = classify_region(&p(1.0, 1.0, 1.0, 0.0, 0.5), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, RegionLabel::EsEs);
        let c = classify_region(&p(1.0, 1.0, 1.0, 1.0, 0.1), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, RegionLabel::EoEo);
        let c = classify_region(&p(1.0, 1.0, 1.0, 1.0, 0.3), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, RegionLabel::Boundary);
    }

    #[test]
    fn asymmetric_region_exists() {
        let params = p(0.1, 2.0, 1.0, 0.5, 0.9);
        let th = thresholds(&params).unwrap();
        assert!(!th.gate_holds());
        assert!(th.lambda_hat < 0.9);
        let c = classify_region(&params, DEFAULT_TOL).unwrap();
        assert_eq!(c.region, RegionLabel::AsymEN);
    }

    #[test]
    fn case_three_mixing_matches_closed_form() {
        // alpha = beta = t = 1, r = 0.5: lambda_bar = 0.75, lambda_hat = 1
        let params = p(1.0, 1.0, 1.0, 0.5, 0.9);
        let c = classify_region(&params, DEFAULT_TOL).unwrap();
        assert_eq!(c.region, RegionLabel::EsEsOrNN);
        let m = c.mixed.unwrap();
        assert!(close(m, mixed_probability_closed_form(&params), 1e-9));
    }

    #[test]
    fn relative_dominance_without_ads() {
        for l in [0.0, 0.3, 1.0] {
            let d = relative_dominant_strategy(&p(0.6, 0.9, 1.0, 0.0, l), DEFAULT_TOL).unwrap();
            assert_eq!(d.as_deref(), Some("E(s)"));
        }
    }

    #[test]
    fn region_labels_round_trip() {
        for r in RegionLabel::ALL {
            assert_eq!(r.label().parse::<RegionLabel>(), Ok(r));
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.label()));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn valid() -> impl Strategy<Value = ModelParams> {
            (0.5f64..2.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..2.0, 0.0f64..=1.0).prop_map(
                |(t, fa, fb, r, l)| ModelParams::new(10.0, fa * 1.45 * t, fb * 1.45 * t, t, r, l),
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn closed_forms_match_reconstruction(params in valid()) {
                let a = separation_payoffs(&params).unwrap().as_array();
                let b = reconstruct_payoffs(&params).unwrap().as_array();
                for (x, y) in a.iter().zip(b) {
                    prop_assert!((x - y).abs() <= 1e-9);
                }
            }

            #[test]
            fn matrix_is_symmetric(params in valid()) {
                let g = assemble_general_game(&params).unwrap();
                for i in 0..3 {
                    for j in 0..3 {
                        prop_assert_eq!(g.row_payoff(i, j), g.col_payoff(j, i));
                    }
                }
            }

            #[test]
            fn threshold_order(params in valid()) {
                let th = thresholds(&params).unwrap();
                if params.r > 0.0 && params.premium_sum() > 0.0 {
                    prop_assert!(th.lambda_tilde < 0.5);
                }
                if !th.hat_is_convention() {
                    prop_assert!(th.lambda_hat >= 0.5 - 1e-12);
                }
                if !th.bar_is_convention() {
                    prop_assert!(th.lambda_bar >= 0.5 - 1e-12);
                }
                if !th.hat_is_convention() && !th.bar_is_convention() {
                    // the order of the two upper thresholds is decided by
                    // (3t - beta) alpha (alpha + 2 beta) against (3t - alpha - beta) beta^2
                    let (a, b, t) = (params.alpha, params.beta, params.t);
                    let lhs = (3.0 * t - b) * a * (a + 2.0 * b);
                    let rhs = (3.0 * t - a - b) * b * b;
                    if (lhs - rhs).abs() > 1e-9 {
                        prop_assert_eq!(th.lambda_bar < th.lambda_hat, lhs > rhs);
                    }
                }
            }

            #[test]
            fn classification_never_mismatches(params in valid()) {
                prop_assert!(classify_region(&params, DEFAULT_TOL).is_ok());
            }

            #[test]
            fn classification_at_full_upstream_power(params in valid()) {
                prop_assert!(classify_region(&params.with_lambda(1.0), DEFAULT_TOL).is_ok());
            }
        }
    }
}
