//! Two integrated firms, A1 and B2, each deciding whether to supply its
//! content to the rival platform.

use std::fmt;

use serde::Serialize;

use crate::contracting::{settle, Firm, Ownership, Settlement};
use crate::error::{Error, Result};
use crate::game::{pure_nash, EquilibriumReport, NormalFormGame};
use crate::hotelling::{Carriers, ContentAllocation};
use crate::model::{ModelParams, Strategy2};
use crate::separation::require_valid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoViPayoffs {
    pub pi_ee: f64,
    /// Payoff of the firm supplying its rival when the rival keeps exclusivity.
    pub pi_n_of_ne: f64,
    /// Payoff of the firm keeping exclusivity when the rival supplies it.
    pub pi_e_of_ne: f64,
    pub pi_nn: f64,
}

impl TwoViPayoffs {
    pub fn payoff(&self, own: Strategy2, rival: Strategy2) -> f64 {
        match (own, rival) {
            (Strategy2::E, Strategy2::E) => self.pi_ee,
            (Strategy2::N, Strategy2::E) => self.pi_n_of_ne,
            (Strategy2::E, Strategy2::N) => self.pi_e_of_ne,
            (Strategy2::N, Strategy2::N) => self.pi_nn,
        }
    }
}

pub fn two_vi_payoffs(params: &ModelParams) -> Result<TwoViPayoffs> {
    require_valid(params)?;
    let ModelParams {
        beta: b,
        t,
        r,
        lambda: l,
        ..
    } = *params;
    let k = b * b / (9.0 * t) + b * r / (6.0 * t) + r / 2.0;
    Ok(TwoViPayoffs {
        pi_ee: t / 2.0 + r / 2.0,
        pi_n_of_ne: t / 2.0 + r / 2.0 + l * k,
        pi_e_of_ne: t / 2.0 + b * b / (9.0 * t) + (1.0 + b / (6.0 * t)) * r - l * k,
        pi_nn: t / 2.0 + r,
    })
}

/// Fee paid by the exclusive firm's platform for the rival's content when
/// only one of them supplies the other.
pub fn fee_n_of_ne(params: &ModelParams) -> f64 {
    let ModelParams {
        beta: b,
        t,
        r,
        lambda: l,
        ..
    } = *params;
    l * (b / 3.0 + b * b / (18.0 * t) + b * r / (6.0 * t))
        - (1.0 - l) * (-b / 3.0 + b * b / (18.0 * t) + r / 2.0)
}

pub fn allocation(a1: Strategy2, b2: Strategy2) -> ContentAllocation {
    let a = match a1 {
        Strategy2::E => Carriers::ONLY_1,
        Strategy2::N => Carriers::BOTH,
    };
    let b = match b2 {
        Strategy2::E => Carriers::ONLY_2,
        Strategy2::N => Carriers::BOTH,
    };
    ContentAllocation::new(a, b)
}

pub fn settle_cell(params: &ModelParams, a1: Strategy2, b2: Strategy2) -> Result<Settlement> {
    settle(params, Ownership::A1_B2, allocation(a1, b2))
}

/// Payoffs rebuilt by settling each profile's contracts.
pub fn reconstruct_payoffs(params: &ModelParams) -> Result<TwoViPayoffs> {
    use Strategy2::*;
    let a1 = |x, y| -> Result<f64> { Ok(settle_cell(params, x, y)?.payoff(Firm::A)) };
    Ok(TwoViPayoffs {
        pi_ee: a1(E, E)?,
        pi_n_of_ne: a1(N, E)?,
        pi_e_of_ne: a1(E, N)?,
        pi_nn: a1(N, N)?,
    })
}

pub fn two_vi_game(params: &ModelParams) -> Result<NormalFormGame> {
    let p = two_vi_payoffs(params)?;
    NormalFormGame::from_fn(&Strategy2::ALL, &Strategy2::ALL, |i, j| {
        let (x, y) = (Strategy2::ALL[i], Strategy2::ALL[j]);
        [p.payoff(x, y), p.payoff(y, x)]
    })
}

/// `lambda` below this value supports the asymmetric equilibria.
pub fn exclusivity_threshold(params: &ModelParams) -> f64 {
    let ModelParams { beta: b, t, r, .. } = *params;
    let num = 2.0 * b * b + 3.0 * b * r;
    let den = num + 9.0 * r * t;
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TwoViRegion {
    /// One firm supplies its rival, the other keeps exclusivity.
    #[serde(rename = "N_E")]
    OneSupplies,
    #[serde(rename = "N_N")]
    BothSupply,
    Boundary,
}

impl fmt::Display for TwoViRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoViRegion::OneSupplies => "N_E",
            TwoViRegion::BothSupply => "N_N",
            TwoViRegion::Boundary => "Boundary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoViClassification {
    pub params: ModelParams,
    pub threshold: f64,
    pub region: TwoViRegion,
    pub equilibria: Vec<(String, String)>,
    pub dominant: Option<String>,
    /// At `lambda = 0` the profile (E,E) is an equilibrium as well.
    pub lambda_zero_extra: bool,
    pub alpha_independent: bool,
}

pub fn classify_two_vi(params: &ModelParams, tol: f64) -> Result<TwoViClassification> {
    let p = two_vi_payoffs(params)?;
    let threshold = exclusivity_threshold(params);
    let report: EquilibriumReport = pure_nash(&two_vi_game(params)?, tol);
    let lambda_zero_extra = report.contains("E", "E");
    let boundary =
        (params.lambda - threshold).abs() <= tol || (p.pi_nn - p.pi_e_of_ne).abs() <= tol;
    let region = if boundary {
        TwoViRegion::Boundary
    } else {
        let (region, mut expected) = if params.lambda < threshold {
            (TwoViRegion::OneSupplies, vec!["(E,N)", "(N,E)"])
        } else {
            (TwoViRegion::BothSupply, vec!["(N,N)"])
        };
        if p.pi_n_of_ne - p.pi_ee <= tol {
            expected.push("(E,E)");
            expected.sort();
        }
        let enumerated = report.profile_set();
        if enumerated != expected {
            return Err(Error::ClassificationMismatch {
                analytic: region.to_string(),
                enumerated: enumerated.join(" "),
            });
        }
        region
    };
    Ok(TwoViClassification {
        params: *params,
        threshold,
        region,
        equilibria: report.pure_equilibria,
        dominant: report.dominant_row,
        lambda_zero_extra,
        alpha_independent: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::DEFAULT_TOL;
    use crate::hotelling::{Platform, Upstream};

    fn p(alpha: f64, beta: f64, t: f64, r: f64, lambda: f64) -> ModelParams {
        ModelParams::new(10.0, alpha, beta, t, r, lambda)
    }

    #[test]
    fn supplier_payoff_example() {
        let pay = two_vi_payoffs(&p(1.0, 1.0, 1.0, 1.0, 0.5)).unwrap();
        let expected = 1.0 + 0.5 * (1.0 / 9.0 + 1.0 / 6.0 + 0.5);
        assert!((pay.pi_n_of_ne - expected).abs() < 1e-15);
        assert!((pay.pi_n_of_ne - 1.388_888_888_888_889).abs() < 1e-12);
    }

    #[test]
    fn no_ads_makes_ee_and_nn_equal() {
        let pay = two_vi_payoffs(&p(0.5, 1.0, 1.0, 0.0, 0.7)).unwrap();
        assert_eq!(pay.pi_ee, pay.pi_nn);
        assert_eq!(pay.pi_ee, 0.5);
    }

    #[test]
    fn worthless_second_premium() {
        let pay = two_vi_payoffs(&p(0.5, 0.0, 1.0, 0.6, 0.4)).unwrap();
        assert!((pay.pi_n_of_ne - (0.5 + 0.3 + 0.4 * 0.3)).abs() < 1e-15);
        assert!((pay.pi_e_of_ne - (0.5 + 0.6 - 0.4 * 0.3)).abs() < 1e-15);
    }

    #[test]
    fn threshold_example() {
        assert!((exclusivity_threshold(&p(1.0, 1.0, 1.0, 1.0, 0.5)) - 5.0 / 14.0).abs() < 1e-15);
        assert_eq!(exclusivity_threshold(&p(1.0, 1.0, 1.0, 0.0, 0.5)), 1.0);
    }

    #[test]
    fn classification_examples() {
        let c = classify_two_vi(&p(1.0, 1.0, 1.0, 1.0, 0.2), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, TwoViRegion::OneSupplies);
        let c = classify_two_vi(&p(1.0, 1.0, 1.0, 1.0, 0.5), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, TwoViRegion::BothSupply);
        assert_eq!(c.dominant.as_deref(), Some("N"));
        assert_eq!(c.equilibria, vec![("N".to_string(), "N".to_string())]);
        let c = classify_two_vi(&p(1.0, 1.0, 1.0, 0.0, 0.6), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, TwoViRegion::OneSupplies);
    }

    #[test]
    fn lambda_zero_adds_exclusive_pair() {
        let c = classify_two_vi(&p(1.0, 1.0, 1.0, 1.0, 0.0), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, TwoViRegion::OneSupplies);
        assert!(c.lambda_zero_extra);
        assert_eq!(c.equilibria.len(), 3);
    }

    #[test]
    fn full_power_without_ads_is_a_boundary() {
        let c = classify_two_vi(&p(1.0, 1.0, 1.0, 0.0, 1.0), DEFAULT_TOL).unwrap();
        assert_eq!(c.region, TwoViRegion::Boundary);
    }

    #[test]
    fn fees_cancel_when_both_supply() {
        let s = settle_cell(&p(0.4, 0.9, 1.0, 0.8, 0.3), Strategy2::N, Strategy2::N).unwrap();
        let a = s.fee(Upstream::A, Platform::Two).unwrap();
        let b = s.fee(Upstream::B, Platform::One).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn one_sided_fee_matches_engine() {
        let params = p(0.4, 0.9, 1.0, 0.8, 0.3);
        let s = settle_cell(&params, Strategy2::N, Strategy2::E).unwrap();
        let fee = s.fee(Upstream::A, Platform::Two).unwrap();
        assert!((fee - fee_n_of_ne(&params)).abs() < 1e-12);
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
                let a = two_vi_payoffs(&params).unwrap();
                let b = reconstruct_payoffs(&params).unwrap();
                for (x, y) in [
                    (a.pi_ee, b.pi_ee),
                    (a.pi_n_of_ne, b.pi_n_of_ne),
                    (a.pi_e_of_ne, b.pi_e_of_ne),
                    (a.pi_nn, b.pi_nn),
                ] {
                    prop_assert!((x - y).abs() <= 1e-9);
                }
            }

            #[test]
            fn alpha_does_not_matter(params in valid(), f in 0.0f64..1.0) {
                let other = ModelParams { alpha: f * (3.0 * params.t - params.beta), ..params };
                prop_assert_eq!(two_vi_game(&params).unwrap(), two_vi_game(&other).unwrap());
            }

            #[test]
            fn mirror_cells(params in valid()) {
                let g = two_vi_game(&params).unwrap();
                let en = g.cell("E", "N").unwrap();
                let ne = g.cell("N", "E").unwrap();
                prop_assert_eq!(en, [ne[1], ne[0]]);
            }

            #[test]
            fn classification_never_mismatches(params in valid()) {
                prop_assert!(classify_two_vi(&params, DEFAULT_TOL).is_ok());
            }
        }
    }
}
