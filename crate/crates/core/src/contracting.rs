//! First-principles settlement of all content contracts for a given allocation.
//!
//! Every pair (content package, carrying platform) with distinct owners signs a
//! lump-sum contract. Each fee is the Nash bargaining solution given all other
//! contracts. The disagreement outcome of a negotiation drops the package from
//! the platform; when that platform was its only carrier the package is
//! offered to the rival platform instead (threat of replacement).
//!
//! Closed-form payoffs elsewhere in the crate are checked against this engine.

use serde::Serialize;

use crate::bargain::{nash_fee, BargainInputs};
use crate::error::Result;
use crate::hotelling::{
    ad_reach, downstream_equilibrium, Carriers, ContentAllocation, DownstreamOutcome, Platform,
    Upstream,
};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Firm {
    A,
    B,
    P1,
    P2,
}

impl Firm {
    pub fn upstream(u: Upstream) -> Firm {
        match u {
            Upstream::A => Firm::A,
            Upstream::B => Firm::B,
        }
    }

    pub fn platform(d: Platform) -> Firm {
        match d {
            Platform::One => Firm::P1,
            Platform::Two => Firm::P2,
        }
    }
}

/// Vertical ownership links. An integrated pair acts as one entity, named by
/// its upstream member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Ownership {
    pub a_owns: Option<Platform>,
    pub b_owns: Option<Platform>,
}

impl Ownership {
    pub const SEPARATION: Ownership = Ownership {
        a_owns: None,
        b_owns: None,
    };
    /// A integrated with platform 1.
    pub const A1: Ownership = Ownership {
        a_owns: Some(Platform::One),
        b_owns: None,
    };
    /// B integrated with platform 2.
    pub const B2: Ownership = Ownership {
        a_owns: None,
        b_owns: Some(Platform::Two),
    };
    pub const A1_B2: Ownership = Ownership {
        a_owns: Some(Platform::One),
        b_owns: Some(Platform::Two),
    };

    /// The entity controlling `firm`.
    pub fn owner(&self, firm: Firm) -> Firm {
        let platform_owner = |d: Platform| {
            if self.a_owns == Some(d) {
                Firm::A
            } else if self.b_owns == Some(d) {
                Firm::B
            } else {
                Firm::platform(d)
            }
        };
        match firm {
            Firm::A | Firm::B => firm,
            Firm::P1 => platform_owner(Platform::One),
            Firm::P2 => platform_owner(Platform::Two),
        }
    }

    /// Entities present under this ownership, in firm order.
    pub fn entities(&self) -> Vec<Firm> {
        [Firm::A, Firm::B, Firm::P1, Firm::P2]
            .into_iter()
            .filter(|f| self.owner(*f) == *f)
            .collect()
    }
}

/// Outcome if the negotiation over `content` at `platform` fails.
pub fn disagreement(
    alloc: &ContentAllocation,
    content: Upstream,
    platform: Platform,
) -> ContentAllocation {
    let carriers = alloc.carriers(content);
    let fallback = if carriers == Carriers::only(platform) {
        Carriers::only(platform.other())
    } else {
        carriers.without(platform)
    };
    alloc.with_carriers(content, fallback)
}

/// Fee-free payoff of an entity: gross subscription profit of its platforms
/// plus advertising revenue of its content.
pub fn base_payoff(
    params: &ModelParams,
    ownership: &Ownership,
    alloc: &ContentAllocation,
    outcome: &DownstreamOutcome,
    entity: Firm,
) -> f64 {
    let platforms: f64 = Platform::ALL
        .iter()
        .filter(|d| ownership.owner(Firm::platform(**d)) == entity)
        .map(|d| outcome.gross_profit(*d))
        .sum();
    let ads: f64 = Upstream::ALL
        .iter()
        .filter(|u| ownership.owner(Firm::upstream(**u)) == entity)
        .map(|u| ad_reach(alloc, outcome, *u))
        .sum();
    platforms + params.r * ads
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contract {
    pub content: Upstream,
    pub platform: Platform,
    /// Entity receiving the fee (the content owner).
    pub payee: Firm,
    /// Entity paying the fee (the platform owner).
    pub payer: Firm,
    pub upstream_gain: f64,
    pub downstream_gain: f64,
    pub fee: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settlement {
    pub ownership: Ownership,
    pub alloc: ContentAllocation,
    pub outcome: DownstreamOutcome,
    pub contracts: Vec<Contract>,
    base: Vec<(Firm, f64)>,
}

impl Settlement {
    /// Net payoff of the entity controlling `firm`.
    pub fn payoff(&self, firm: Firm) -> f64 {
        let entity = self.ownership.owner(firm);
        let base = self
            .base
            .iter()
            .find(|(f, _)| *f == entity)
            .map(|(_, b)| *b)
            .unwrap_or(0.0);
        let received: f64 = self
            .contracts
            .iter()
            .filter(|c| c.payee == entity)
            .map(|c| c.fee)
            .sum();
        let paid: f64 = self
            .contracts
            .iter()
            .filter(|c| c.payer == entity)
            .map(|c| c.fee)
            .sum();
        base + received - paid
    }

    pub fn fee(&self, content: Upstream, platform: Platform) -> Option<f64> {
        self.contracts
            .iter()
            .find(|c| c.content == content && c.platform == platform)
            .map(|c| c.fee)
    }

    /// Subscription revenue plus advertising revenue of both packages.
    pub fn industry_total(&self, params: &ModelParams) -> f64 {
        self.outcome.gross_profit1
            + self.outcome.gross_profit2
            + params.r
                * (ad_reach(&self.alloc, &self.outcome, Upstream::A)
                    + ad_reach(&self.alloc, &self.outcome, Upstream::B))
    }
}

/// Settle every contract of `alloc` under `ownership`.
pub fn settle(
    params: &ModelParams,
    ownership: Ownership,
    alloc: ContentAllocation,
) -> Result<Settlement> {
    let outcome = downstream_equilibrium(params, &alloc)?;
    let mut contracts = Vec::new();
    for content in Upstream::ALL {
        for platform in alloc.carriers(content).platforms() {
            let payee = ownership.owner(Firm::upstream(content));
            let payer = ownership.owner(Firm::platform(platform));
            if payee == payer {
                continue;
            }
            let fallback = disagreement(&alloc, content, platform);
            let fallback_outcome = downstream_equilibrium(params, &fallback)?;
            let inputs = BargainInputs::new(
                base_payoff(params, &ownership, &alloc, &outcome, payee),
                base_payoff(params, &ownership, &alloc, &outcome, payer),
                base_payoff(params, &ownership, &fallback, &fallback_outcome, payee),
                base_payoff(params, &ownership, &fallback, &fallback_outcome, payer),
                params.lambda,
            );
            contracts.push(Contract {
                content,
                platform,
                payee,
                payer,
                upstream_gain: inputs.upstream_gain(),
                downstream_gain: inputs.downstream_gain(),
                fee: nash_fee(&inputs),
            });
        }
    }
    let base = ownership
        .entities()
        .into_iter()
        .map(|e| (e, base_payoff(params, &ownership, &alloc, &outcome, e)))
        .collect();
    Ok(Settlement {
        ownership,
        alloc,
        outcome,
        contracts,
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: f64, lambda: f64) -> ModelParams {
        ModelParams::new(10.0, 1.0, 1.0, 1.0, r, lambda)
    }

    #[test]
    fn exclusive_threat_is_replacement() {
        let alloc = ContentAllocation::new(Carriers::ONLY_1, Carriers::ONLY_2);
        let d = disagreement(&alloc, Upstream::A, Platform::One);
        assert_eq!(d.carrier_of_a, Carriers::ONLY_2);
        assert_eq!(d.carrier_of_b, Carriers::ONLY_2);
    }

    #[test]
    fn nonexclusive_threat_is_withdrawal() {
        let alloc = ContentAllocation::new(Carriers::BOTH, Carriers::ONLY_2);
        let d = disagreement(&alloc, Upstream::A, Platform::Two);
        assert_eq!(d.carrier_of_a, Carriers::ONLY_1);
    }

    #[test]
    fn ownership_entities() {
        assert_eq!(Ownership::SEPARATION.entities().len(), 4);
        assert_eq!(Ownership::A1.entities(), vec![Firm::A, Firm::B, Firm::P2]);
        assert_eq!(Ownership::A1_B2.entities(), vec![Firm::A, Firm::B]);
        assert_eq!(Ownership::B2.owner(Firm::P2), Firm::B);
    }

    #[test]
    fn both_exclusive_to_one_platform_at_full_power() {
        // both packages on platform 1, r = 0, lambda = 1: each provider takes
        // the platform's full gain s/3 + s^2/18t = 2/3 + 4/18
        let s = settle(
            &params(0.0, 1.0),
            Ownership::SEPARATION,
            ContentAllocation::new(Carriers::ONLY_1, Carriers::ONLY_1),
        )
        .unwrap();
        assert_eq!(s.contracts.len(), 2);
        let expected = 2.0 / 3.0 + 4.0 / 18.0;
        assert!((s.payoff(Firm::A) - expected).abs() < 1e-12);
        assert!((s.payoff(Firm::B) - expected).abs() < 1e-12);
        assert!((s.payoff(Firm::P1) - (25.0 / 18.0 - 2.0 * expected)).abs() < 1e-12);
    }

    #[test]
    fn integrated_own_content_signs_no_contract() {
        let s = settle(
            &params(0.5, 0.5),
            Ownership::A1,
            ContentAllocation::new(Carriers::ONLY_1, Carriers::ONLY_2),
        )
        .unwrap();
        assert_eq!(s.contracts.len(), 1);
        assert_eq!(s.contracts[0].payer, Firm::P2);
        assert_eq!(s.fee(Upstream::A, Platform::One), None);
    }

    #[test]
    fn payoffs_sum_to_industry_total() {
        for ownership in [
            Ownership::SEPARATION,
            Ownership::A1,
            Ownership::B2,
            Ownership::A1_B2,
        ] {
            for alloc in ContentAllocation::all() {
                let p = params(0.7, 0.3);
                let s = settle(&p, ownership, alloc).unwrap();
                let total: f64 = ownership.entities().iter().map(|e| s.payoff(*e)).sum();
                assert!((total - s.industry_total(&p)).abs() < 1e-12);
            }
        }
    }
}
