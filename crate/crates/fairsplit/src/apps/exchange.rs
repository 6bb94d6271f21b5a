//! Barter economies where actions are consumption claims.
//!
//! Each trader owns an endowment of goods and chooses one bundle from a
//! finite menu of claims; claiming the endowment itself is the reference
//! action. A claims profile is *feasible* when the claims can be met from
//! the pooled endowments, good by good. Feasible profiles generate the sum
//! of the traders' valuation gains over sitting on their endowments;
//! infeasible profiles stay in the strategy space but generate nothing.
//! Equilibria of the induced game are reported with the infeasible ones
//! filtered out (and listed separately, since nothing can be allocated
//! there).

use crate::economy::{Economy, Profile};
use crate::equilibrium::{build_game, pure_nash};
use crate::error::{Error, Result};
use crate::scheme::PayScheme;
use crate::EPSILON;

/// What the market does with unclaimed goods.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeMode {
    /// Claims redistribute a fixed stock of goods.
    PureExchange,
    /// Unclaimed goods can be left on the table (free disposal), e.g. when
    /// claims are backed by production commitments.
    TransferableProduction,
}

/// One trader: an endowment, a menu of claims, and a valuation per claim.
#[derive(Clone, Debug)]
pub struct ExchangeAgent {
    name: String,
    endowment: Vec<f64>,
    bundles: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl ExchangeAgent {
    /// A trader with explicitly tabulated bundle valuations.
    pub fn new(
        name: impl Into<String>,
        endowment: Vec<f64>,
        bundles: Vec<Vec<f64>>,
        values: Vec<f64>,
    ) -> Self {
        Self {
            name: name.into(),
            endowment,
            bundles,
            values,
        }
    }

    /// A trader whose valuation is evaluated on each bundle in the menu.
    pub fn with_valuation(
        name: impl Into<String>,
        endowment: Vec<f64>,
        bundles: Vec<Vec<f64>>,
        value: impl Fn(&[f64]) -> f64,
    ) -> Self {
        let values = bundles.iter().map(|b| value(b)).collect();
        Self::new(name, endowment, bundles, values)
    }

    /// The trader's name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The trader's endowment, one amount per good.
    pub fn endowment(&self) -> &[f64] {
        &self.endowment
    }

    /// The menu of claimable bundles.
    pub fn bundles(&self) -> &[Vec<f64>] {
        &self.bundles
    }

    /// The valuation of each bundle in menu order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A complete exchange setup: the number of goods, the disposal mode, and
/// the traders.
#[derive(Clone, Debug)]
pub struct ExchangeSpec {
    goods: usize,
    mode: ExchangeMode,
    agents: Vec<ExchangeAgent>,
}

impl ExchangeSpec {
    /// Bundles together a market description (validated on build).
    pub fn new(goods: usize, mode: ExchangeMode, agents: Vec<ExchangeAgent>) -> Self {
        Self { goods, mode, agents }
    }

    /// Number of goods.
    pub fn goods(&self) -> usize {
        self.goods
    }

    /// The disposal mode.
    pub fn mode(&self) -> ExchangeMode {
        self.mode
    }

    /// The traders.
    pub fn agents(&self) -> &[ExchangeAgent] {
        &self.agents
    }
}

/// An exchange spec compiled to an economy plus per-profile feasibility.
#[derive(Clone, Debug)]
pub struct ExchangeEconomy {
    spec: ExchangeSpec,
    economy: Economy,
    feasible: Vec<bool>,
}

impl ExchangeEconomy {
    /// The validated market description.
    pub fn spec(&self) -> &ExchangeSpec {
        &self.spec
    }

    /// The induced economy: actions are claims, surplus is the total
    /// valuation gain (zero on infeasible profiles).
    pub fn economy(&self) -> &Economy {
        &self.economy
    }

    /// Per-profile feasibility flags, indexed like the surplus table.
    pub fn feasible(&self) -> &[bool] {
        &self.feasible
    }

    /// Whether one claims profile can be met from the pooled endowments.
    pub fn is_feasible(&self, profile: &Profile) -> Result<bool> {
        Ok(self.feasible[self.economy.index(profile)?])
    }
}

/// Renders a bundle as an action label: plain amount for one good,
/// a parenthesized tuple otherwise.
fn bundle_label(bundle: &[f64]) -> String {
    let fmt = |x: f64| {
        if (x - x.round()).abs() < 1e-9 {
            format!("{}", x.round() as i64)
        } else {
            format!("{x}")
        }
    };
    if bundle.len() == 1 {
        fmt(bundle[0])
    } else {
        let inner: Vec<String> = bundle.iter().map(|&x| fmt(x)).collect();
        format!("({})", inner.join(","))
    }
}

/// Validates an exchange spec and compiles it into an economy.
///
/// Every trader's endowment must appear in their own menu (that claim is the
/// reference action), amounts must be non-negative and finite, and every
/// bundle must list one amount per good.
pub fn build_exchange_economy(spec: ExchangeSpec) -> Result<ExchangeEconomy> {
    if spec.goods == 0 {
        return Err(Error::ExchangeSpec(
            "an exchange needs at least one good".into(),
        ));
    }
    if spec.agents.is_empty() {
        return Err(Error::NoAgents);
    }

    let mut reference = Vec::with_capacity(spec.agents.len());
    for (i, agent) in spec.agents.iter().enumerate() {
        if agent.endowment.len() != spec.goods {
            return Err(Error::ExchangeSpec(format!(
                "trader {i} lists {} endowment amounts but the market has {} goods",
                agent.endowment.len(),
                spec.goods
            )));
        }
        if let Some(&bad) = agent
            .endowment
            .iter()
            .find(|x| !x.is_finite() || **x < 0.0)
        {
            return Err(Error::ExchangeSpec(format!(
                "trader {i} has a negative or non-finite endowment amount ({bad})"
            )));
        }
        if agent.bundles.is_empty() {
            return Err(Error::ExchangeSpec(format!(
                "trader {i} has an empty claim menu"
            )));
        }
        for (j, bundle) in agent.bundles.iter().enumerate() {
            if bundle.len() != spec.goods {
                return Err(Error::ExchangeSpec(format!(
                    "trader {i}, claim {j}: {} amounts for {} goods",
                    bundle.len(),
                    spec.goods
                )));
            }
            if let Some(&bad) = bundle.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::ExchangeSpec(format!(
                    "trader {i}, claim {j}: negative or non-finite amount ({bad})"
                )));
            }
        }
        if agent.values.len() != agent.bundles.len() {
            return Err(Error::ExchangeSpec(format!(
                "trader {i} values {} claims but lists {}",
                agent.values.len(),
                agent.bundles.len()
            )));
        }
        if let Some(&bad) = agent.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::ExchangeSpec(format!(
                "trader {i} has a non-finite valuation ({bad})"
            )));
        }
        let own = agent.bundles.iter().position(|b| {
            b.iter()
                .zip(&agent.endowment)
                .all(|(x, w)| (x - w).abs() <= EPSILON)
        });
        match own {
            Some(j) => reference.push(j),
            None => {
                return Err(Error::ExchangeSpec(format!(
                    "trader {i}'s endowment must appear in their own claim menu"
                )))
            }
        }
    }

    let names: Vec<String> = spec.agents.iter().map(|a| a.name.clone()).collect();
    let actions: Vec<Vec<String>> = spec
        .agents
        .iter()
        .map(|a| a.bundles.iter().map(|b| bundle_label(b)).collect())
        .collect();

    let mut supply = vec![0.0; spec.goods];
    for agent in &spec.agents {
        for (g, w) in agent.endowment.iter().enumerate() {
            supply[g] += w;
        }
    }

    let feasible_at = |x: &Profile| -> bool {
        let mut demand = vec![0.0; spec.goods];
        for (i, &choice) in x.coords().iter().enumerate() {
            for (g, amount) in spec.agents[i].bundles[choice].iter().enumerate() {
                demand[g] += amount;
            }
        }
        demand
            .iter()
            .zip(&supply)
            .all(|(d, s)| *d <= s + EPSILON)
    };
    let baseline: Vec<f64> = spec
        .agents
        .iter()
        .zip(&reference)
        .map(|(agent, &own)| agent.values[own])
        .collect();
    let gain_at = |x: &Profile| -> f64 {
        x.coords()
            .iter()
            .enumerate()
            .map(|(i, &choice)| spec.agents[i].values[choice] - baseline[i])
            .sum()
    };

    let economy = Economy::from_fn(names, actions, reference, |x| {
        if feasible_at(x) {
            gain_at(x)
        } else {
            0.0
        }
    })?;
    let feasible: Vec<bool> = economy.profiles().map(|x| feasible_at(&x)).collect();

    Ok(ExchangeEconomy {
        spec,
        economy,
        feasible,
    })
}

/// Equilibrium analysis of an exchange economy under one pay scheme.
#[derive(Clone, Debug)]
pub struct ExchangeReport {
    /// Feasible equilibria, in profile-index order.
    pub equilibria: Vec<Profile>,
    /// Pay rows for the feasible equilibria, in the same order.
    pub payoffs: Vec<Vec<f64>>,
    /// Index (into `equilibria`) of the highest-surplus feasible
    /// equilibrium; ties resolve to the earliest.
    pub best: Option<usize>,
    /// Equilibria of the induced game whose claims cannot actually be met.
    pub infeasible_equilibria: Vec<Profile>,
}

/// Solves the induced claims game and filters equilibria by feasibility.
pub fn solve_exchange(market: &ExchangeEconomy, scheme: &PayScheme) -> Result<ExchangeReport> {
    let game = build_game(market.economy(), scheme, None)?;
    let mut equilibria = Vec::new();
    let mut payoffs = Vec::new();
    let mut infeasible = Vec::new();
    for x in pure_nash(&game) {
        let idx = market.economy().index(&x)?;
        if market.feasible[idx] {
            payoffs.push(game.pay(idx).to_vec());
            equilibria.push(x);
        } else {
            infeasible.push(x);
        }
    }
    let best = equilibria
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            let fa = market.economy().surplus(a).expect("equilibria are valid profiles");
            let fb = market.economy().surplus(b).expect("equilibria are valid profiles");
            fa.partial_cmp(&fb)
                .expect("surplus values are finite")
                .then(b.cmp(a))
        })
        .map(|(i, _)| i);
    Ok(ExchangeReport {
        equilibria,
        payoffs,
        best,
        infeasible_equilibria: infeasible,
    })
}
