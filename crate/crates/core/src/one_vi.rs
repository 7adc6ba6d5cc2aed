//! One integrated firm A1 facing the independent provider B and the
//! independent platform 2.

use std::fmt;

use serde::Serialize;

use crate::contracting::{settle, Firm, Ownership};
use crate::error::{Error, Result};
use crate::game::{pure_nash, EquilibriumReport, NormalFormGame};
use crate::hotelling::{downstream_equilibrium, Carriers, ContentAllocation};
use crate::model::{ModelParams, Strategy2, StrategyB3};
use crate::separation::require_valid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fee {
    pub payer: Firm,
    pub payee: Firm,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneViCell {
    pub a1: Strategy2,
    pub b: StrategyB3,
    pub pi_a1: f64,
    pub pi_b: f64,
    pub pi_2: f64,
    pub fees: Vec<Fee>,
}

impl OneViCell {
    pub fn profile(&self) -> String {
        format!("({},{})", self.a1, self.b)
    }
}

pub fn allocation(a1: Strategy2, b: StrategyB3) -> ContentAllocation {
    let a = match a1 {
        Strategy2::E => Carriers::ONLY_1,
        Strategy2::N => Carriers::BOTH,
    };
    let b = match b {
        StrategyB3::E2 => Carriers::ONLY_2,
        StrategyB3::EA1 => Carriers::ONLY_1,
        StrategyB3::N => Carriers::BOTH,
    };
    ContentAllocation::new(a, b)
}

fn check_lambda(params: &ModelParams) -> Result<()> {
    require_valid(params)?;
    if params.r == 0.0 && params.lambda == 0.0 {
        return Err(Error::LambdaZeroExcluded);
    }
    Ok(())
}

/// One cell from the closed forms.
pub fn cell(params: &ModelParams, a1: Strategy2, b: StrategyB3) -> Result<OneViCell> {
    check_lambda(params)?;
    let ModelParams {
        alpha: a,
        beta: bb,
        t,
        r,
        lambda: l,
        ..
    } = *params;
    let s = a + bb;
    let sq = |x: f64| x * x;
    let both = sq(t + s / 3.0) / (2.0 * t);
    let lead_b = sq(t + bb / 3.0) / (2.0 * t);
    let gross2 = downstream_equilibrium(params, &allocation(a1, b))?.gross_profit2;
    let fee = |payer, payee, amount| Fee {
        payer,
        payee,
        amount,
    };
    use StrategyB3::*;
    let (pi_a1, pi_b, fees) = match (a1, b) {
        (Strategy2::E, E2) => (
            t / 2.0 + r / 2.0,
            l * s * (6.0 * t - 3.0 * r - s) / (18.0 * t) + (0.5 + s / (6.0 * t)) * r,
            vec![fee(
                Firm::P2,
                Firm::B,
                l * (s / 3.0 - s * s / (18.0 * t)) + (1.0 - l) * s * r / (6.0 * t),
            )],
        ),
        (Strategy2::E, EA1) => (
            both + (0.5 + s / (3.0 * t)) * r - l * s * (6.0 * t + 6.0 * r + s) / (18.0 * t),
            l * s * (6.0 * t + 6.0 * r + s) / (18.0 * t) + r / 2.0,
            vec![fee(
                Firm::A,
                Firm::B,
                l * (s / 3.0 + s * s / (18.0 * t) + s * r / (6.0 * t))
                    - (1.0 - l) * s * r / (6.0 * t),
            )],
        ),
        (Strategy2::E, N) => (
            lead_b + (1.0 + bb / (6.0 * t)) * r
                - l * (bb / 3.0 + bb * bb / (18.0 * t) + (0.5 + bb / (6.0 * t)) * r),
            s * r / (6.0 * t)
                + l * (s / 3.0 + (bb * bb - a * a - 2.0 * a * bb) / (18.0 * t)
                    + (1.0 - a / (6.0 * t)) * r),
            vec![
                fee(
                    Firm::A,
                    Firm::B,
                    l * (bb / 3.0 + bb * bb / (18.0 * t) + bb * r / (6.0 * t))
                        - (1.0 - l) * r / 2.0,
                ),
                fee(
                    Firm::P2,
                    Firm::B,
                    l * (a / 3.0 - (a * a + 2.0 * a * bb) / (18.0 * t))
                        - (1.0 - l) * (0.5 - s / (6.0 * t)) * r,
                ),
            ],
        ),
        (Strategy2::N, E2) => (
            t / 2.0 + r / 2.0 + l * (bb * bb / (9.0 * t) + r / 2.0),
            l * 2.0 * bb / 3.0 + (0.5 + bb / (6.0 * t)) * r,
            vec![
                fee(
                    Firm::P2,
                    Firm::A,
                    l * (bb / 3.0 + bb * bb / (18.0 * t))
                        - (1.0 - l) * (-bb / 3.0 + bb * bb / (18.0 * t) + r / 2.0),
                ),
                fee(Firm::P2, Firm::B, l * 2.0 * bb / 3.0),
            ],
        ),
        (Strategy2::N, EA1) => (
            both + (0.5 + s / (6.0 * t)) * r
                - l * (a * (a + 2.0 * bb) / (9.0 * t) + 2.0 * bb / 3.0
                    - (0.5 - s / (6.0 * t)) * r),
            l * 2.0 * bb / 3.0 + (0.5 + bb / (6.0 * t)) * r,
            vec![
                fee(
                    Firm::P2,
                    Firm::A,
                    l * (a / 3.0 - (a * a + 2.0 * a * bb) / (18.0 * t))
                        - (1.0 - l)
                            * (-a / 3.0 - (a * a + 2.0 * a * bb) / (18.0 * t)
                                + (0.5 - s / (6.0 * t)) * r),
                ),
                fee(Firm::A, Firm::B, l * 2.0 * bb / 3.0),
            ],
        ),
        (Strategy2::N, N) => {
            let nn = l * (bb / 3.0 - bb * bb / (18.0 * t)) - (1.0 - l) * (0.5 - bb / (6.0 * t)) * r;
            (
                lead_b + r - l * (bb / 3.0 + bb * bb / (18.0 * t)),
                r + 2.0 * (nn),
                vec![
                    fee(
                        Firm::P2,
                        Firm::A,
                        l * (bb / 3.0 - bb * bb / (18.0 * t))
                            - (1.0 - l)
                                * (-bb / 3.0 - bb * bb / (18.0 * t)
                                    + (0.5 - bb / (6.0 * t)) * r),
                    ),
                    fee(Firm::A, Firm::B, nn),
                    fee(Firm::P2, Firm::B, nn),
                ],
            )
        }
    };
    let paid_by_2: f64 = fees
        .iter()
        .filter(|f| f.payer == Firm::P2)
        .map(|f| f.amount)
        .sum();
    Ok(OneViCell {
        a1,
        b,
        pi_a1,
        pi_b,
        pi_2: gross2 - paid_by_2,
        fees,
    })
}

/// One cell rebuilt by settling its contracts.
pub fn reconstruct_cell(params: &ModelParams, a1: Strategy2, b: StrategyB3) -> Result<OneViCell> {
    check_lambda(params)?;
    let s = settle(params, Ownership::A1, allocation(a1, b))?;
    Ok(OneViCell {
        a1,
        b,
        pi_a1: s.payoff(Firm::A),
        pi_b: s.payoff(Firm::B),
        pi_2: s.payoff(Firm::P2),
        fees: s
            .contracts
            .iter()
            .map(|c| Fee {
                payer: c.payer,
                payee: c.payee,
                amount: c.fee,
            })
            .collect(),
    })
}

/// All six cells, rows E then N, columns E2, EA1, N.
pub fn one_vi_cells(params: &ModelParams) -> Result<Vec<OneViCell>> {
    let mut cells = Vec::with_capacity(6);
    for a1 in Strategy2::ALL {
        for b in StrategyB3::ALL {
            cells.push(cell(params, a1, b)?);
        }
    }
    Ok(cells)
}

pub fn game_from_cells(cells: &[OneViCell]) -> Result<NormalFormGame> {
    NormalFormGame::from_fn(&Strategy2::ALL, &StrategyB3::ALL, |i, j| {
        let c = &cells[i * 3 + j];
        [c.pi_a1, c.pi_b]
    })
}

pub fn one_vi_game(params: &ModelParams) -> Result<NormalFormGame> {
    game_from_cells(&one_vi_cells(params)?)
}

/// The game without advertising revenue, entries written out directly.
pub fn printed_r0_matrix(params: &ModelParams) -> Result<NormalFormGame> {
    let params = params.with_r(0.0);
    check_lambda(&params)?;
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        lambda: l,
        ..
    } = params;
    let s = a + b;
    let both = (t + s / 3.0).powi(2) / (2.0 * t);
    let lead_b = (t + b / 3.0).powi(2) / (2.0 * t);
    let k = s * (6.0 * t + s) / (18.0 * t);
    let rows = [
        [
            [t / 2.0, l * s * (6.0 * t - s) / (18.0 * t)],
            [both - l * k, l * k],
            [
                lead_b - l * (b / 3.0 + b * b / (18.0 * t)),
                l * (s / 3.0 + (b * b - a * a - 2.0 * a * b) / (18.0 * t)),
            ],
        ],
        [
            [t / 2.0 + l * b * b / (9.0 * t), l * 2.0 * b / 3.0],
            [
                both - l * (a * (a + 2.0 * b) / (9.0 * t) + 2.0 * b / 3.0),
                l * 2.0 * b / 3.0,
            ],
            [
                lead_b - l * (b / 3.0 + b * b / (18.0 * t)),
                2.0 * l * (b / 3.0 - b * b / (18.0 * t)),
            ],
        ],
    ];
    NormalFormGame::from_fn(&Strategy2::ALL, &StrategyB3::ALL, |i, j| rows[i][j])
}

/// `alpha^2 + 2 alpha beta - beta^2 - 6t (alpha - beta)`; positive when A1
/// prefers exclusivity against B's exclusive offer.
pub fn exclusivity_condition(params: &ModelParams) -> f64 {
    let ModelParams {
        alpha: a,
        beta: b,
        t,
        ..
    } = *params;
    a * a + 2.0 * a * b - b * b - 6.0 * t * (a - b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OneViRegion {
    /// (N,E2) and (E,EA1).
    #[serde(rename = "N_E2+E_EA1")]
    IntegratedExclusive,
    /// (N,E2) and (N,EA1).
    #[serde(rename = "N_E2+N_EA1")]
    IntegratedSupplies,
    Boundary,
}

impl OneViRegion {
    pub fn expected_profiles(self) -> Vec<String> {
        match self {
            OneViRegion::IntegratedExclusive => vec!["(E,EA1)".into(), "(N,E2)".into()],
            OneViRegion::IntegratedSupplies => vec!["(N,E2)".into(), "(N,EA1)".into()],
            OneViRegion::Boundary => vec![],
        }
    }
}

impl fmt::Display for OneViRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OneViRegion::IntegratedExclusive => "N_E2+E_EA1",
            OneViRegion::IntegratedSupplies => "N_E2+N_EA1",
            OneViRegion::Boundary => "Boundary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneViClassification {
    pub params: ModelParams,
    /// Sign condition, present only without advertising revenue.
    pub condition: Option<f64>,
    pub region: Option<OneViRegion>,
    pub equilibria: Vec<(String, String)>,
    pub ties: Vec<(String, String)>,
    pub cells: Vec<OneViCell>,
}

fn relevant_gaps(cells: &[OneViCell]) -> [f64; 4] {
    let c = |i: usize, j: usize| &cells[i * 3 + j];
    [
        // A1 against EA1: E versus N
        c(0, 1).pi_a1 - c(1, 1).pi_a1,
        // A1 against E2: N versus E
        c(1, 0).pi_a1 - c(0, 0).pi_a1,
        // B against E: EA1 versus the alternatives
        c(0, 1).pi_b - c(0, 0).pi_b.max(c(0, 2).pi_b),
        // B against N: exclusive versus N
        c(1, 0).pi_b.min(c(1, 1).pi_b) - c(1, 2).pi_b,
    ]
}

/// Classification without advertising revenue.
pub fn classify_one_vi_r0(params: &ModelParams, tol: f64) -> Result<OneViClassification> {
    if params.r != 0.0 {
        return Err(Error::RequiresZeroAdRevenue(params.r));
    }
    let cells = one_vi_cells(params)?;
    let report = pure_nash(&game_from_cells(&cells)?, tol);
    let d = exclusivity_condition(params);
    let boundary = d == 0.0 || relevant_gaps(&cells).iter().any(|g| g.abs() <= tol);
    let region = if boundary {
        OneViRegion::Boundary
    } else {
        let region = if d > 0.0 {
            OneViRegion::IntegratedExclusive
        } else {
            OneViRegion::IntegratedSupplies
        };
        let enumerated = report.profile_set();
        if enumerated != region.expected_profiles() {
            return Err(Error::ClassificationMismatch {
                analytic: region.to_string(),
                enumerated: enumerated.join(" "),
            });
        }
        region
    };
    Ok(OneViClassification {
        params: *params,
        condition: Some(d),
        region: Some(region),
        equilibria: report.pure_equilibria,
        ties: report.ties,
        cells,
    })
}

/// Enumeration of the general game; no analytic label is attached unless
/// advertising revenue is zero.
pub fn classify_one_vi_general(params: &ModelParams, tol: f64) -> Result<OneViClassification> {
    if params.r == 0.0 {
        return classify_one_vi_r0(params, tol);
    }
    let cells = one_vi_cells(params)?;
    let report: EquilibriumReport = pure_nash(&game_from_cells(&cells)?, tol);
    Ok(OneViClassification {
        params: *params,
        condition: None,
        region: None,
        equilibria: report.pure_equilibria,
        ties: report.ties,
        cells,
    })
}
