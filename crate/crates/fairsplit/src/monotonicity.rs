//! Monotone structure of the surplus function and its equilibrium consequences.
//!
//! A surplus function is *monotone* when agents' actions can be ranked so that
//! moving any agent up the ranking never hurts (weak) or strictly helps
//! (strict) total output. Marginal-pay games over monotone surpluses have
//! strong guarantees: a weakly monotone surplus admits a Pareto-efficient
//! equilibrium, and a strictly monotone one has a *unique* equilibrium, which
//! maximizes the surplus.
//!
//! Monotonicity is defined existentially (does *some* suitable order exist?),
//! which has no obvious decision procedure. This module implements the two
//! decidable sufficient criteria that drive the guarantees above:
//!
//! - **weak** — some surplus maximizer `x̄` is made of weakly dominant
//!   actions: `f(x_{−i}, x̄_i) ≥ f(x_{−i}, a)` for every agent `i`, context
//!   `x_{−i}`, and action `a`.
//! - **strict** — every pair of actions of every agent is strictly ordered
//!   the same way in every context, *and* the surplus never repeats a value
//!   (a tie anywhere blocks a strictly increasing total order).
//!
//! A `false` verdict therefore means "criterion not met", not a proof of
//! non-monotonicity; [`MonotonicityVerdict::method`] says so explicitly.

use crate::economy::{Economy, Profile};
use crate::equilibrium::{build_game, pareto_analysis, pure_nash};
use crate::error::Result;
use crate::scheme::PayScheme;
use crate::EPSILON;

/// Outcome of the monotonicity criteria on one economy.
#[derive(Clone, Debug)]
pub struct MonotonicityVerdict {
    /// The weak criterion fired.
    pub weak: bool,
    /// A surplus maximizer made of weakly dominant actions, when `weak`.
    pub witness: Option<Profile>,
    /// The strict criterion fired (implies `weak`).
    pub strict: bool,
    /// When `strict`: per-agent action indices sorted from least to most
    /// productive (the per-agent total orders).
    pub orders: Option<Vec<Vec<usize>>>,
    /// Which decidable criterion fired, or a note that none did.
    pub method: &'static str,
}

const METHOD_STRICT: &str =
    "uniform strict action dominance in every context plus an injective surplus";
const METHOD_WEAK: &str = "surplus maximizer composed of weakly dominant actions";
const METHOD_NONE: &str =
    "criterion not met (not a proof of non-monotonicity; the check is sufficient only)";

/// True when `action` is weakly dominant for `agent`: switching to it never
/// lowers the surplus, in any context.
fn weakly_dominant(economy: &Economy, agent: usize, action: usize) -> bool {
    let stride = economy.stride(agent);
    let k = economy.n_actions(agent);
    for index in 0..economy.n_profiles() {
        let coord = index / stride % k;
        let switched =
            (index as isize + (action as isize - coord as isize) * stride as isize) as usize;
        if economy.surplus_at(switched) < economy.surplus_at(index) - EPSILON {
            return false;
        }
    }
    true
}

fn weak_witness(economy: &Economy) -> Option<Profile> {
    'candidates: for index in economy.maximizers() {
        let x = economy.profile(index);
        for agent in 0..economy.n_agents() {
            if !weakly_dominant(economy, agent, x[agent]) {
                continue 'candidates;
            }
        }
        return Some(x);
    }
    None
}

/// Per-agent total orders from uniform pairwise strict dominance, or `None`
/// when some pair is tied or context-dependent.
fn strict_orders(economy: &Economy) -> Option<Vec<Vec<usize>>> {
    // A repeated surplus value anywhere blocks a strictly increasing total
    // order on profiles, even between profiles no single deviation connects.
    let mut values: Vec<f64> = economy.surplus_table().to_vec();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite surplus"));
    if values.windows(2).any(|w| (w[1] - w[0]).abs() <= EPSILON) {
        return None;
    }

    let mut orders = Vec::with_capacity(economy.n_agents());
    for agent in 0..economy.n_agents() {
        let stride = economy.stride(agent);
        let k = economy.n_actions(agent);
        // dominates[a][b]: f(ctx, a) > f(ctx, b) in every context.
        let mut wins = vec![vec![true; k]; k];
        for index in 0..economy.n_profiles() {
            let coord = index / stride % k;
            if coord != 0 {
                continue; // visit each context once, via its coord-0 profile
            }
            let at = |a: usize| economy.surplus_at(index + a * stride);
            for a in 0..k {
                for b in 0..k {
                    if a != b && at(a) <= at(b) + EPSILON {
                        wins[a][b] = false;
                    }
                }
            }
        }
        // Every pair must be decided one way; then sorting by win-count gives
        // the total order (a strict tournament that is transitive has
        // distinct win-counts 0..k-1).
        for a in 0..k {
            for b in a + 1..k {
                if !wins[a][b] && !wins[b][a] {
                    return None;
                }
            }
        }
        let mut actions: Vec<usize> = (0..k).collect();
        actions.sort_by_key(|&a| wins[a].iter().filter(|&&w| w).count());
        orders.push(actions);
    }
    Some(orders)
}

fn analyze(economy: &Economy) -> MonotonicityVerdict {
    let orders = strict_orders(economy);
    let witness = weak_witness(economy);
    let strict = orders.is_some();
    let weak = witness.is_some();
    debug_assert!(!strict || weak, "strict dominance yields a dominant maximizer");
    MonotonicityVerdict {
        weak,
        witness,
        strict,
        orders,
        method: if strict {
            METHOD_STRICT
        } else if weak {
            METHOD_WEAK
        } else {
            METHOD_NONE
        },
    }
}

/// Runs the weak-monotonicity criterion (the verdict carries the strict
/// analysis too, since it is computed the same way).
pub fn check_weak_monotonicity(economy: &Economy) -> MonotonicityVerdict {
    analyze(economy)
}

/// Runs the strict-monotonicity criterion (the verdict carries the weak
/// analysis too).
pub fn check_strict_monotonicity(economy: &Economy) -> MonotonicityVerdict {
    analyze(economy)
}

/// What the monotonicity guarantees promise on one economy, checked by replay.
#[derive(Clone, Debug)]
pub struct ConsequenceReport {
    /// The criteria verdict the claims are conditioned on.
    pub verdict: MonotonicityVerdict,
    /// Pure equilibria of the marginal-pay game.
    pub equilibria: Vec<Profile>,
    /// When weak: did some equilibrium turn out Pareto-efficient?
    pub weak_consequence: Option<bool>,
    /// When strict: is the equilibrium unique and surplus-maximizing?
    pub strict_consequence: Option<bool>,
    /// No promised consequence failed (vacuously true when no criterion fired).
    pub passed: bool,
}

/// Solves the marginal-pay game and replays the guarantees the monotonicity
/// verdict entitles us to: a Pareto-efficient equilibrium under the weak
/// criterion; a unique, surplus-maximizing equilibrium under the strict one.
///
/// A failed consequence on a verdict-positive economy indicates an
/// implementation bug, which is exactly why this report exists.
pub fn consequence_report(economy: &Economy) -> Result<ConsequenceReport> {
    let verdict = analyze(economy);
    let game = build_game(economy, &PayScheme::Shapley, None)?;
    let equilibria = pure_nash(&game);
    let weak_consequence = verdict.weak.then(|| {
        let pareto = pareto_analysis(&game);
        equilibria
            .iter()
            .any(|x| pareto.efficient[economy.index_unchecked(x)])
    });
    let strict_consequence = verdict.strict.then(|| {
        equilibria.len() == 1
            && economy.index_unchecked(&equilibria[0]) == economy.argmax_surplus()
    });
    let passed = weak_consequence.unwrap_or(true) && strict_consequence.unwrap_or(true);
    Ok(ConsequenceReport {
        verdict,
        equilibria,
        weak_consequence,
        strict_consequence,
        passed,
    })
}
