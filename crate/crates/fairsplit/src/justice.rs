//! Redistribution analysis: blended pay, efficiency thresholds, and
//! reference-point optimization.
//!
//! The blended scheme `ES^α = α·marginal pay + (1−α)·equal split` models a
//! flat tax at rate `1−α` whose proceeds are split equally. This module
//! answers the policy questions that scheme raises:
//!
//! - [`alpha_sweep`] — how the equilibrium set, its efficiency, and the worst
//!   equilibrium payoff move as `α` varies (equilibria exist at *every* `α`).
//! - [`efficiency_threshold`] — the largest grid `α` below which an efficient
//!   equilibrium is always available: how much redistribution the economy
//!   tolerates before efficiency may be lost.
//! - [`check_nonnegativity`] — with a non-negative surplus, no agent is ever
//!   paid a negative amount at equilibrium (deviating to the reference action
//!   already guarantees a non-negative share).
//! - [`optimal_reference`] — re-anchoring the economy at a surplus maximizer
//!   `o'` and paying with the re-anchored blend makes `o'` itself a
//!   Pareto-efficient equilibrium with equal payoffs `f(o')/n`; the returned
//!   certificate re-proves this numerically and via the analytic deviation
//!   bound.

use rayon::prelude::*;

use crate::economy::{Economy, Profile};
use crate::equilibrium::{build_game, pareto_analysis, pure_nash, Game};
use crate::error::{Error, Result};
use crate::scheme::PayScheme;
use crate::EPSILON;

/// The equilibrium picture at one blend weight.
#[derive(Clone, Debug)]
pub struct AlphaSweepRow {
    /// Marginal-pay share (tax rate is `1 − alpha`).
    pub alpha: f64,
    /// Pure equilibria of the blended game, in profile-index order.
    pub equilibria: Vec<Profile>,
    /// Whether some equilibrium is Pareto-efficient within the full game.
    pub any_efficient: bool,
    /// Smallest payoff component over all equilibria (NaN when none — which
    /// the existence guarantee rules out).
    pub min_equilibrium_payoff: f64,
}

fn sweep_row(economy: &Economy, alpha: f64) -> Result<AlphaSweepRow> {
    let game = build_game(economy, &PayScheme::Egalitarian { alpha }, None)?;
    Ok(row_from_game(economy, alpha, &game))
}

fn row_from_game(economy: &Economy, alpha: f64, game: &Game) -> AlphaSweepRow {
    let equilibria = pure_nash(game);
    let pareto = pareto_analysis(game);
    let any_efficient = equilibria
        .iter()
        .any(|x| pareto.efficient[economy.index_unchecked(x)]);
    let min_equilibrium_payoff = equilibria
        .iter()
        .flat_map(|x| game.utilities(economy.index_unchecked(x)).iter().copied())
        .fold(f64::NAN, f64::min);
    AlphaSweepRow {
        alpha,
        equilibria,
        any_efficient,
        min_equilibrium_payoff,
    }
}

/// Solves the blended game at each grid value of `α`.
pub fn alpha_sweep(economy: &Economy, grid: &[f64]) -> Result<Vec<AlphaSweepRow>> {
    if grid.is_empty() {
        return Err(Error::BadGrid);
    }
    if grid.len() >= 8 {
        grid.par_iter()
            .map(|&alpha| sweep_row(economy, alpha))
            .collect()
    } else {
        grid.iter().map(|&alpha| sweep_row(economy, alpha)).collect()
    }
}

/// Result of scanning for the redistribution level where efficiency may break.
#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyThreshold {
    /// Largest grid `α` such that every grid point up to it (inclusive)
    /// admits a Pareto-efficient equilibrium.
    pub threshold: f64,
    /// The true breakpoint lies in this interval: `(threshold, next grid
    /// point)`, collapsing to `(1, 1)` when every grid point passes.
    pub bracket: (f64, f64),
}

/// Scans `α = 0, resolution, 2·resolution, …, 1` in order and returns the
/// longest all-passing prefix's endpoint, where "passing" means some
/// Pareto-efficient equilibrium exists at that `α`.
///
/// `α = 0` always passes — splitting equally makes every surplus maximizer an
/// efficient equilibrium — so the threshold is well-defined; a grid answer can
/// overshoot the true breakpoint by less than one step, hence the bracket.
pub fn efficiency_threshold(economy: &Economy, resolution: f64) -> Result<EfficiencyThreshold> {
    if !(resolution > 0.0) || resolution < 1e-6 {
        return Err(Error::BadGrid);
    }
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let alpha = k as f64 * resolution;
        if alpha >= 1.0 - 1e-12 {
            grid.push(1.0);
            break;
        }
        grid.push(alpha);
        k += 1;
    }
    let rows = alpha_sweep(economy, &grid)?;
    let mut threshold = None;
    let mut next = 1.0;
    for row in &rows {
        if row.any_efficient {
            threshold = Some(row.alpha);
        } else {
            next = row.alpha;
            break;
        }
    }
    let threshold = threshold.unwrap_or(0.0);
    Ok(EfficiencyThreshold {
        threshold,
        bracket: if threshold >= 1.0 {
            (1.0, 1.0)
        } else {
            (threshold, next)
        },
    })
}

/// Outcome of the non-negative-payoff guarantee check.
#[derive(Clone, Debug)]
pub struct NonnegativityReport {
    /// Every payoff component at every equilibrium is ≥ −ε.
    pub holds: bool,
    /// A violating (equilibrium, agent, payoff) triple, if any.
    pub violation: Option<(Profile, usize, f64)>,
}

/// Checks that, over a non-negative surplus, the blended scheme never pays a
/// negative amount at any equilibrium.
///
/// Refuses economies with negative surplus anywhere, naming the first
/// offending profile — the guarantee is simply false without that hypothesis.
pub fn check_nonnegativity(economy: &Economy, alpha: f64) -> Result<NonnegativityReport> {
    if let Some(index) = economy
        .surplus_table()
        .iter()
        .position(|&v| v < -EPSILON)
    {
        return Err(Error::NegativeSurplus {
            index,
            value: economy.surplus_table()[index],
        });
    }
    let game = build_game(economy, &PayScheme::Egalitarian { alpha }, None)?;
    let mut violation = None;
    'outer: for x in pure_nash(&game) {
        let pays = game.utilities(economy.index_unchecked(&x));
        for (agent, &pay) in pays.iter().enumerate() {
            if pay < -EPSILON {
                violation = Some((x.clone(), agent, pay));
                break 'outer;
            }
        }
    }
    Ok(NonnegativityReport {
        holds: violation.is_none(),
        violation,
    })
}

/// Numeric and analytic evidence that the shifted reference is an optimal
/// equilibrium.
#[derive(Clone, Debug)]
pub struct ShiftCertificate {
    /// The new reference survives the brute-force equilibrium check.
    pub is_equilibrium: bool,
    /// Worst-case utility advantage of staying put: `min` over unilateral
    /// deviations of `u_i(o') − u_i(deviation)` (≥ −ε at an equilibrium).
    pub deviation_margin: f64,
    /// The closed-form deviation bound
    /// `α·(f(y) − M) + (1−α)·f(y)/n + α·M/n ≤ M/n` holds for every
    /// unilateral deviation `y` from the maximum `M`.
    pub analytic_bound_ok: bool,
    /// The new reference is Pareto-efficient in the shifted game.
    pub efficient: bool,
    /// All of the above hold.
    pub passed: bool,
}

/// A re-anchoring of the economy at a surplus maximizer, with its certificate.
#[derive(Clone, Debug)]
pub struct ReferenceShift {
    /// The new reference profile `o'` (a surplus maximizer).
    pub reference: Profile,
    /// The economy re-anchored at `o'`.
    pub reanchored: Economy,
    /// Payoffs at `o'` under the re-anchored blend: `f(o')/n` each.
    pub payoffs: Vec<f64>,
    /// Replayed evidence that `o'` is an optimal equilibrium.
    pub certificate: ShiftCertificate,
}

/// Moves the reference to a surplus maximizer `o'` and certifies that, under
/// the re-anchored blended scheme, `o'` is a Pareto-efficient pure equilibrium
/// paying every agent `f(o')/n`.
///
/// The current reference is kept when it already attains the maximum;
/// otherwise the lowest-index maximizer is chosen. Refuses when the maximum
/// surplus is not strictly positive — the re-anchored scheme needs a positive
/// surplus to take as its baseline.
pub fn optimal_reference(economy: &Economy, alpha: f64) -> Result<ReferenceShift> {
    let max_index = economy.argmax_surplus();
    let max = economy.surplus_at(max_index);
    if max <= EPSILON {
        return Err(Error::NoPositiveSurplus { max });
    }
    let reference = if economy.reference_surplus() >= max - EPSILON {
        economy.reference().clone()
    } else {
        economy.profile(max_index)
    };
    let reanchored = economy.with_reference(&reference)?;
    let game = build_game(&reanchored, &PayScheme::Shifted { alpha }, None)?;
    let n = economy.n_agents();
    let o_index = reanchored.index_unchecked(&reference);
    let payoffs = game.utilities(o_index).to_vec();

    // Numeric side: brute-force equilibrium membership and the worst margin.
    let here = game.utilities(o_index);
    let mut deviation_margin = f64::INFINITY;
    for agent in 0..n {
        let stride = reanchored.stride(agent);
        let coord = reference[agent];
        let base = o_index - coord * stride;
        for action in 0..reanchored.n_actions(agent) {
            if action != coord {
                let margin = here[agent] - game.utility(base + action * stride, agent);
                deviation_margin = deviation_margin.min(margin);
            }
        }
    }
    let is_equilibrium = pure_nash(&game).contains(&reference);

    // Analytic side: every unilateral deviation y obeys
    //   u_i(y) = α(f(y) − M) + α M/n + (1−α) f(y)/n ≤ M/n = u_i(o').
    let mut analytic_bound_ok = true;
    for agent in 0..n {
        let stride = reanchored.stride(agent);
        let coord = reference[agent];
        let base = o_index - coord * stride;
        for action in 0..reanchored.n_actions(agent) {
            if action != coord {
                let f_y = reanchored.surplus_at(base + action * stride);
                let lhs = alpha * (f_y - max) + (1.0 - alpha) * f_y / n as f64
                    + alpha * max / n as f64;
                if lhs > max / n as f64 + EPSILON {
                    analytic_bound_ok = false;
                }
            }
        }
    }

    let efficient = pareto_analysis(&game).efficient[o_index];
    let passed =
        is_equilibrium && analytic_bound_ok && efficient && deviation_margin >= -EPSILON;
    Ok(ReferenceShift {
        reference,
        reanchored,
        payoffs,
        certificate: ShiftCertificate {
            is_equilibrium,
            deviation_margin,
            analytic_bound_ok,
            efficient,
            passed,
        },
    })
}
