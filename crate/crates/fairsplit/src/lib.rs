//! Fair division of jointly produced surplus, and the strategic games it induces.
//!
//! This crate models finite production economies: each agent picks one action
//! from a finite menu, a tabulated surplus function `f` maps every action
//! profile to a joint output, and a pay scheme splits that output back to the
//! agents. Because each agent's pay depends on everyone's actions, every pay
//! scheme turns the economy into a strategic-form game; the crate constructs
//! those games and analyzes them exactly.
//!
//! # Core abstractions
//!
//! - [`Economy`] — agents, finite action sets, a reference ("do nothing")
//!   profile, and a dense surplus table ([`economy`]).
//! - [`PayScheme`] — how realized surplus is split: the weighted marginal-
//!   contribution scheme (a multivariate Shapley value), its egalitarian
//!   `α`-mix with equal split, a shifted-reference variant, and arbitrary
//!   custom tables ([`scheme`]).
//! - [`Game`] — the induced strategic game, with optional per-action costs;
//!   pure equilibria, exact potentials, best-response dynamics, deviation
//!   cycles, Pareto analysis, and fairness audits ([`equilibrium`]).
//! - Technology shape tests and their equilibrium consequences
//!   ([`monotonicity`]), redistribution analysis over the egalitarian mixing
//!   weight ([`justice`]), and applied builders for teamwork bonuses, network
//!   formation under contagion costs, co-authorship splits, and exchange
//!   economies ([`apps`]).
//! - A [`catalog`] of small fully-worked economies used by the test-suite and
//!   the bundled command-line corpus.
//!
//! # Numerics
//!
//! All values are `f64`. Comparisons anywhere in the crate use the single
//! tolerance [`EPSILON`]: strict improvements must clear it, ties are anything
//! within it. Weighted-sum coefficients use exact factorials up to 20 agents
//! and log-space evaluation beyond. Results are deterministic: every
//! enumeration follows profile-index order and every tie-break picks the
//! lowest index.

pub mod apps;
pub mod catalog;
pub mod economy;
pub mod equilibrium;
mod error;
pub mod justice;
pub mod monotonicity;
pub mod scheme;

pub use economy::{ActiveSet, Economy, Profile};
pub use equilibrium::{
    best_response_dynamics, build_game, cycle_excess_sum, exact_potential, find_deviation_cycle,
    pareto_analysis, pure_nash, solve, DeviationCycle, EquilibriumReport, Game, SweepOrder,
};
pub use error::{Error, Result};
pub use scheme::{DividendTable, PayScheme, PayTable};

/// Global comparison tolerance: payoff gains must exceed it to count as strict
/// improvements, and two values within it are treated as tied.
pub const EPSILON: f64 = 1e-9;

/// Default budget for weighted-sum term counts when tabulating a pay scheme
/// over a full action space; game construction refuses beyond it.
pub const DEFAULT_TERM_BUDGET: f64 = 1e8;
