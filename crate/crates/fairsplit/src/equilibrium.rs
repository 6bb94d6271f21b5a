//! Strategic games induced by pay schemes, and their exact analysis.
//!
//! Any pay scheme turns an economy into a strategic-form game: each agent's
//! utility at a profile is their pay minus an optional action cost. This module
//! builds those games ([`build_game`]) and analyzes them:
//!
//! - [`pure_nash`] — exhaustive pure-equilibrium enumeration.
//! - [`exact_potential`] — for scheme-generated games, a function `Φ` whose
//!   change under any unilateral move equals the mover's utility change. Its
//!   existence is what guarantees these games always have pure equilibria; its
//!   maximizers are equilibria, and best-response paths cannot cycle.
//! - [`best_response_dynamics`] — deterministic sweeps with a step watchdog.
//! - [`find_deviation_cycle`] / [`cycle_excess_sum`] — cycles in the strict-
//!   improvement digraph, and the around-the-loop gain total that is provably
//!   zero in weighted-marginal-pay games (and nonzero exactly where unfair
//!   schemes lose their equilibria).
//! - [`pareto_analysis`], [`solve`] — domination structure and a bundled report.
//! - [`audit_fairness`] — diagnostics that catch how a custom pay table breaks
//!   the fair-division axioms (efficiency, idle pay, marginality, symmetry).
//!
//! All comparisons are `EPSILON`-strict: a deviation counts only when it gains
//! more than the tolerance, and enumeration order makes every result
//! deterministic.

use rayon::prelude::*;

use crate::economy::{Economy, Profile};
use crate::error::{Error, Result};
use crate::scheme::{PayScheme, PayTable};
use crate::{DEFAULT_TERM_BUDGET, EPSILON};

/// Work at or above this many payoff entries is spread across threads.
const PARALLEL_THRESHOLD: usize = 1 << 15;

/// Default length cap for deviation-cycle searches.
pub const DEFAULT_CYCLE_CAP: usize = 8;

/// A finite strategic-form game induced by a pay scheme over an economy,
/// with optional per-action costs.
#[derive(Clone, Debug)]
pub struct Game {
    economy: Economy,
    scheme: PayScheme,
    costs: Option<Vec<Vec<f64>>>,
    /// Gross scheme pay, flat: entry `idx * n + agent`.
    pay: Vec<f64>,
    /// Net utilities (pay minus action cost), same layout.
    utility: Vec<f64>,
}

impl Game {
    /// The underlying economy.
    pub fn economy(&self) -> &Economy {
        &self.economy
    }

    /// The pay scheme the game was built from.
    pub fn scheme(&self) -> &PayScheme {
        &self.scheme
    }

    /// Optional per-action costs, one row per agent.
    pub fn costs(&self) -> Option<&[Vec<f64>]> {
        self.costs.as_deref()
    }

    /// Number of agents.
    pub fn n_agents(&self) -> usize {
        self.economy.n_agents()
    }

    /// Size of the action space.
    pub fn n_profiles(&self) -> usize {
        self.economy.n_profiles()
    }

    /// Gross scheme pay at a profile index.
    pub fn pay(&self, index: usize) -> &[f64] {
        let n = self.n_agents();
        &self.pay[index * n..(index + 1) * n]
    }

    /// Net utilities at a profile index.
    pub fn utilities(&self, index: usize) -> &[f64] {
        let n = self.n_agents();
        &self.utility[index * n..(index + 1) * n]
    }

    /// One agent's net utility at a profile index.
    #[inline]
    pub fn utility(&self, index: usize, agent: usize) -> f64 {
        self.utility[index * self.n_agents() + agent]
    }

    /// Net utilities at a profile (validated).
    pub fn utilities_at(&self, x: &Profile) -> Result<Vec<f64>> {
        Ok(self.utilities(self.economy.index(x)?).to_vec())
    }
}

fn validate_costs(economy: &Economy, costs: &[Vec<f64>]) -> Result<()> {
    if costs.len() != economy.n_agents() {
        return Err(Error::CostTableLength {
            found: costs.len(),
            expected: economy.n_agents(),
        });
    }
    for (agent, row) in costs.iter().enumerate() {
        if row.len() != economy.n_actions(agent) {
            return Err(Error::CostRowLength {
                agent,
                found: row.len(),
                expected: economy.n_actions(agent),
            });
        }
        if let Some(action) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCost { agent, action });
        }
        if let Some(action) = row.iter().position(|&v| v < 0.0) {
            return Err(Error::NegativeCost {
                agent,
                action,
                value: row[action],
            });
        }
        let at_reference = row[economy.reference()[agent]];
        if at_reference.abs() > EPSILON {
            return Err(Error::ReferenceCostNonzero {
                agent,
                found: at_reference,
            });
        }
    }
    Ok(())
}

/// Builds the strategic game induced by a scheme, under the default term budget.
///
/// Tabulating a weighted-marginal scheme costs `Σ_x |active(x)|·2^{|active(x)|−1}`
/// terms; construction refuses economies whose estimate exceeds the budget
/// rather than starting an unbounded computation.
pub fn build_game(
    economy: &Economy,
    scheme: &PayScheme,
    costs: Option<&[Vec<f64>]>,
) -> Result<Game> {
    build_game_with_budget(economy, scheme, costs, DEFAULT_TERM_BUDGET)
}

/// [`build_game`] with an explicit term budget.
pub fn build_game_with_budget(
    economy: &Economy,
    scheme: &PayScheme,
    costs: Option<&[Vec<f64>]>,
    budget: f64,
) -> Result<Game> {
    if let Some(costs) = costs {
        validate_costs(economy, costs)?;
    }
    if !matches!(scheme, PayScheme::Custom(_)) {
        let required = economy.shapley_term_count();
        if required > budget {
            return Err(Error::SizeLimit {
                required,
                cap: budget,
            });
        }
    }
    let n = economy.n_agents();
    let rows: Vec<Vec<f64>> = if economy.n_profiles() * n >= PARALLEL_THRESHOLD {
        (0..economy.n_profiles())
            .into_par_iter()
            .map(|idx| economy.scheme_pay(scheme, &economy.profile(idx)))
            .collect::<Result<_>>()?
    } else {
        (0..economy.n_profiles())
            .map(|idx| economy.scheme_pay(scheme, &economy.profile(idx)))
            .collect::<Result<_>>()?
    };
    let mut pay = Vec::with_capacity(economy.n_profiles() * n);
    for row in rows {
        pay.extend(row);
    }
    let utility = match costs {
        None => pay.clone(),
        Some(costs) => {
            let mut utility = pay.clone();
            for idx in 0..economy.n_profiles() {
                let x = economy.profile(idx);
                for agent in 0..n {
                    utility[idx * n + agent] -= costs[agent][x[agent]];
                }
            }
            utility
        }
    };
    Ok(Game {
        economy: economy.clone(),
        scheme: scheme.clone(),
        costs: costs.map(<[Vec<f64>]>::to_vec),
        pay,
        utility,
    })
}

/// True when no agent can gain more than the tolerance by a unilateral move.
fn is_nash(game: &Game, index: usize) -> bool {
    let economy = &game.economy;
    let current = game.utilities(index);
    for agent in 0..economy.n_agents() {
        let stride = economy.stride(agent);
        let k = economy.n_actions(agent);
        let coord = index / stride % k;
        let base = index - coord * stride;
        for action in 0..k {
            if action != coord && game.utility(base + action * stride, agent) > current[agent] + EPSILON
            {
                return false;
            }
        }
    }
    true
}

/// Enumerates every pure-strategy Nash equilibrium, in profile-index order.
pub fn pure_nash(game: &Game) -> Vec<Profile> {
    let indices: Vec<usize> = if game.n_profiles() * game.n_agents() >= PARALLEL_THRESHOLD {
        (0..game.n_profiles())
            .into_par_iter()
            .filter(|&idx| is_nash(game, idx))
            .collect()
    } else {
        (0..game.n_profiles()).filter(|&idx| is_nash(game, idx)).collect()
    };
    indices.into_iter().map(|idx| game.economy.profile(idx)).collect()
}

fn mix_weight(scheme: &PayScheme) -> Result<f64> {
    match scheme {
        PayScheme::Shapley => Ok(1.0),
        PayScheme::Egalitarian { alpha } | PayScheme::Shifted { alpha } => Ok(*alpha),
        PayScheme::Custom(_) => Err(Error::NotSchemeGenerated),
    }
}

/// The exact potential of a scheme-generated game, tabulated densely:
///
/// ```text
/// Φ(x) = α · Σ_{y ∈ Δ(x), y ≠ o} c_y / |active(y)|  +  (1−α) · f(x)/n  −  Σ_i cost_i(x_i)
/// ```
///
/// where `c_y` are the surplus interaction coefficients and `α` is the
/// scheme's marginal-pay share (1 for the pure weighted scheme). For every
/// unilateral move the potential changes by exactly the mover's utility
/// change, hence: maximizers are equilibria, best-response paths terminate,
/// and the strict-improvement digraph is acyclic. Custom-table games have no
/// such guarantee and are refused.
pub fn exact_potential(game: &Game) -> Result<Vec<f64>> {
    let alpha = mix_weight(&game.scheme)?;
    let economy = &game.economy;
    let n = economy.n_agents() as f64;
    let coeffs = economy.mobius_coefficients();
    let reference_index = economy.index_unchecked(economy.reference());
    let phi = |idx: usize| -> f64 {
        let x = economy.profile(idx);
        let lattice = economy.lattice(&x);
        let mut dividend_share = 0.0;
        for mask in 1..(1u64 << lattice.dim()) {
            let y = lattice.index(mask);
            debug_assert_ne!(y, reference_index);
            dividend_share += coeffs[y] / mask.count_ones() as f64;
        }
        let mut value = alpha * dividend_share + (1.0 - alpha) * economy.surplus_at(idx) / n;
        if let Some(costs) = &game.costs {
            for (agent, row) in costs.iter().enumerate() {
                value -= row[x[agent]];
            }
        }
        value
    };
    Ok(if economy.n_profiles() >= PARALLEL_THRESHOLD {
        (0..economy.n_profiles()).into_par_iter().map(phi).collect()
    } else {
        (0..economy.n_profiles()).map(phi).collect()
    })
}

/// How far a candidate potential is from being exact: the largest discrepancy
/// between a mover's utility change and the potential change, over every
/// unilateral edge of the game.
pub struct PotentialCheck {
    /// Largest `|Δu − ΔΦ|` found.
    pub max_gap: f64,
    /// Number of directed unilateral edges checked.
    pub edges: usize,
}

/// Verifies the defining identity of an exact potential on every unilateral edge.
pub fn verify_potential(game: &Game, potential: &[f64]) -> PotentialCheck {
    let economy = &game.economy;
    let mut max_gap: f64 = 0.0;
    let mut edges = 0usize;
    for index in 0..economy.n_profiles() {
        for agent in 0..economy.n_agents() {
            let stride = economy.stride(agent);
            let k = economy.n_actions(agent);
            let coord = index / stride % k;
            let base = index - coord * stride;
            for action in coord + 1..k {
                let other = base + action * stride;
                let du = game.utility(other, agent) - game.utility(index, agent);
                let dphi = potential[other] - potential[index];
                max_gap = max_gap.max((du - dphi).abs());
                edges += 2; // both directions have the same gap magnitude
            }
        }
    }
    PotentialCheck { max_gap, edges }
}

/// Agent iteration order for best-response sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepOrder {
    /// Agents 0, 1, …, n−1, repeatedly.
    RoundRobin,
    /// A custom rotation; must mention every agent at least once.
    Sequence(Vec<usize>),
}

/// A terminating best-response run: the switches taken and the fixed point.
#[derive(Clone, Debug)]
pub struct Dynamics {
    /// Every actual switch, as (agent, profile after the switch).
    pub steps: Vec<(usize, Profile)>,
    /// The profile at which a full sweep found no profitable switch.
    pub fixed_point: Profile,
}

/// Runs deterministic best-response dynamics from `start`.
///
/// Each visited agent switches only for a gain above the tolerance, to the
/// lowest-index action among the near-maximal responses. A full pass with no
/// switch is convergence, and the fixed point is then a pure equilibrium. A
/// watchdog errs out after `profiles × agents × max actions` switches — which
/// an exact potential makes unreachable, but custom tables can cycle.
pub fn best_response_dynamics(
    game: &Game,
    start: &Profile,
    order: &SweepOrder,
) -> Result<Dynamics> {
    let economy = &game.economy;
    economy.check_profile(start)?;
    let rotation: Vec<usize> = match order {
        SweepOrder::RoundRobin => (0..economy.n_agents()).collect(),
        SweepOrder::Sequence(seq) => {
            let mut seen = vec![false; economy.n_agents()];
            for &agent in seq {
                if agent >= economy.n_agents() {
                    return Err(Error::Invariant(format!(
                        "sweep order mentions agent {agent}, but the game has {} agents",
                        economy.n_agents()
                    )));
                }
                seen[agent] = true;
            }
            if seq.is_empty() || seen.iter().any(|&s| !s) {
                return Err(Error::Invariant(
                    "sweep order must mention every agent at least once".to_string(),
                ));
            }
            seq.clone()
        }
    };
    let max_actions = (0..economy.n_agents())
        .map(|i| economy.n_actions(i))
        .max()
        .unwrap_or(1);
    let cap = economy.n_profiles() * economy.n_agents() * max_actions;

    let mut index = economy.index_unchecked(start);
    let mut steps = Vec::new();
    let mut quiet = 0usize; // consecutive rotation entries with no switch
    let mut cursor = 0usize;
    while quiet < rotation.len() {
        let agent = rotation[cursor % rotation.len()];
        cursor += 1;
        let stride = economy.stride(agent);
        let k = economy.n_actions(agent);
        let coord = index / stride % k;
        let base = index - coord * stride;
        let current = game.utility(index, agent);
        let best = (0..k)
            .map(|a| game.utility(base + a * stride, agent))
            .fold(f64::NEG_INFINITY, f64::max);
        if best > current + EPSILON {
            let target = (0..k)
                .find(|&a| game.utility(base + a * stride, agent) >= best - EPSILON)
                .expect("a maximizer exists");
            index = base + target * stride;
            steps.push((agent, economy.profile(index)));
            quiet = 0;
            if steps.len() > cap {
                return Err(Error::NonConvergent { cap });
            }
        } else {
            quiet += 1;
        }
    }
    Ok(Dynamics {
        steps,
        fixed_point: economy.profile(index),
    })
}

/// A directed cycle in the strict-improvement digraph, with its excess sum.
#[derive(Clone, Debug)]
pub struct DeviationCycle {
    /// The distinct profiles along the cycle, in deviation order.
    pub profiles: Vec<Profile>,
    /// `deviators[l]` moves between `profiles[l]` and the next profile (wrapping).
    pub deviators: Vec<usize>,
    /// Around-the-loop total of the deviators' utility gains.
    pub excess_sum: f64,
}

/// Improvement moves out of a profile, in (agent, action) order.
fn improvement_neighbors(game: &Game, index: usize) -> Vec<(usize, usize)> {
    let economy = &game.economy;
    let mut out = Vec::new();
    for agent in 0..economy.n_agents() {
        let stride = economy.stride(agent);
        let k = economy.n_actions(agent);
        let coord = index / stride % k;
        let base = index - coord * stride;
        let current = game.utility(index, agent);
        for action in 0..k {
            let other = base + action * stride;
            if action != coord && game.utility(other, agent) > current + EPSILON {
                out.push((agent, other));
            }
        }
    }
    out
}

/// Searches the strict-improvement digraph for a directed cycle of length at
/// most `max_len` ([`DEFAULT_CYCLE_CAP`] by default).
///
/// Returns `None` when the digraph is acyclic — always the case for
/// scheme-generated games, whose exact potential strictly increases along
/// every improvement edge — or when depth-first search only uncovered cycles
/// longer than the cap. The returned cycle is rotated to start at its
/// lowest-index profile.
pub fn find_deviation_cycle(game: &Game, max_len: usize) -> Option<DeviationCycle> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n_profiles = game.n_profiles();
    let mut color = vec![WHITE; n_profiles];
    // Best candidate: (length, profiles, deviators).
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;

    for start in 0..n_profiles {
        if color[start] != WHITE {
            continue;
        }
        // Iterative DFS; the stack holds (node, arriving agent, neighbor cursor).
        let mut path: Vec<(usize, usize, Vec<(usize, usize)>, usize)> = Vec::new();
        color[start] = GRAY;
        path.push((start, usize::MAX, improvement_neighbors(game, start), 0));
        while let Some(frame) = path.last_mut() {
            if frame.3 < frame.2.len() {
                let (agent, next) = frame.2[frame.3];
                frame.3 += 1;
                match color[next] {
                    WHITE => {
                        color[next] = GRAY;
                        path.push((next, agent, improvement_neighbors(game, next), 0));
                    }
                    GRAY => {
                        // Back edge: the cycle is the path suffix from `next`.
                        let from = path.iter().position(|f| f.0 == next).expect("on path");
                        let nodes: Vec<usize> = path[from..].iter().map(|f| f.0).collect();
                        let mut deviators: Vec<usize> =
                            path[from + 1..].iter().map(|f| f.1).collect();
                        deviators.push(agent); // the closing edge back to `next`
                        let len = nodes.len();
                        let better = match &best {
                            None => true,
                            Some((blen, bnodes, _)) => {
                                len < *blen || (len == *blen && nodes < *bnodes)
                            }
                        };
                        if better {
                            best = Some((len, nodes, deviators));
                        }
                    }
                    _ => {}
                }
            } else {
                color[frame.0] = BLACK;
                path.pop();
            }
        }
    }

    let (len, nodes, deviators) = best?;
    if len > max_len || len < 2 {
        return None;
    }
    // Rotate so the cycle starts at its lowest profile index.
    let pivot = nodes
        .iter()
        .enumerate()
        .min_by_key(|&(_, &idx)| idx)
        .map(|(pos, _)| pos)
        .expect("non-empty cycle");
    let rotated_nodes: Vec<usize> = (0..len).map(|k| nodes[(pivot + k) % len]).collect();
    let rotated_deviators: Vec<usize> = (0..len).map(|k| deviators[(pivot + k) % len]).collect();
    let profiles: Vec<Profile> = rotated_nodes
        .iter()
        .map(|&idx| game.economy.profile(idx))
        .collect();
    let excess_sum = cycle_excess_sum(game, &profiles, &rotated_deviators)
        .expect("search produced a well-formed cycle");
    Some(DeviationCycle {
        profiles,
        deviators: rotated_deviators,
        excess_sum,
    })
}

/// The around-the-loop total of deviators' utility changes for a closed chain
/// of unilateral moves: step `l` moves only agent `deviators[l]`'s coordinate,
/// from `profiles[l]` to `profiles[l+1]` (wrapping at the end).
///
/// In weighted-marginal-pay games this total is zero for *every* such loop —
/// the structural fact behind guaranteed equilibrium existence — while unfair
/// tables can make it positive, which is exactly when improvement can chase
/// its own tail.
pub fn cycle_excess_sum(game: &Game, profiles: &[Profile], deviators: &[usize]) -> Result<f64> {
    if profiles.len() < 2 {
        return Err(Error::CycleTooShort {
            found: profiles.len(),
        });
    }
    if deviators.len() != profiles.len() {
        return Err(Error::Invariant(format!(
            "a closed chain needs one deviator per step: got {} profiles but {} deviators",
            profiles.len(),
            deviators.len()
        )));
    }
    let economy = &game.economy;
    for x in profiles {
        economy.check_profile(x)?;
    }
    let mut total = 0.0;
    for step in 0..profiles.len() {
        let here = &profiles[step];
        let next = &profiles[(step + 1) % profiles.len()];
        let agent = deviators[step];
        if agent >= economy.n_agents() {
            return Err(Error::CycleStepInvalid { step });
        }
        for i in 0..economy.n_agents() {
            if i != agent && here[i] != next[i] {
                return Err(Error::CycleStepInvalid { step });
            }
        }
        let here_idx = economy.index_unchecked(here);
        let next_idx = economy.index_unchecked(next);
        total += game.utility(next_idx, agent) - game.utility(here_idx, agent);
    }
    Ok(total)
}

/// Full-space domination structure.
pub struct ParetoAnalysis {
    /// `efficient[idx]` — no profile weakly improves every agent and strictly
    /// improves one.
    pub efficient: Vec<bool>,
    /// For each dominated profile, the lowest-index dominating profile.
    pub dominator: Vec<Option<usize>>,
}

fn dominates(game: &Game, winner: usize, loser: usize) -> bool {
    let w = game.utilities(winner);
    let l = game.utilities(loser);
    let mut strict = false;
    for (a, b) in w.iter().zip(l) {
        if *a < *b - EPSILON {
            return false;
        }
        if *a > *b + EPSILON {
            strict = true;
        }
    }
    strict
}

/// Classifies every profile as Pareto-efficient or dominated (with a witness).
pub fn pareto_analysis(game: &Game) -> ParetoAnalysis {
    let n_profiles = game.n_profiles();
    let find = |idx: usize| (0..n_profiles).find(|&other| dominates(game, other, idx));
    let dominator: Vec<Option<usize>> =
        if n_profiles * n_profiles * game.n_agents() >= PARALLEL_THRESHOLD * 64 {
            (0..n_profiles).into_par_iter().map(find).collect()
        } else {
            (0..n_profiles).map(find).collect()
        };
    ParetoAnalysis {
        efficient: dominator.iter().map(Option::is_none).collect(),
        dominator,
    }
}

/// Bundled equilibrium analysis of one game.
pub struct EquilibriumReport {
    /// Pure equilibria in profile-index order.
    pub equilibria: Vec<Profile>,
    /// Parallel to `equilibria`: Pareto-efficient within the whole game?
    pub pareto_efficient: Vec<bool>,
    /// Parallel to `equilibria`: a dominating profile when inefficient.
    pub pareto_dominators: Vec<Option<Profile>>,
    /// Dense exact potential, for scheme-generated games.
    pub potential: Option<Vec<f64>>,
}

/// Computes equilibria, their efficiency status, and (when the scheme admits
/// one) the exact potential.
pub fn solve(game: &Game) -> EquilibriumReport {
    let equilibria = pure_nash(game);
    let pareto = pareto_analysis(game);
    let economy = game.economy();
    let mut pareto_efficient = Vec::with_capacity(equilibria.len());
    let mut pareto_dominators = Vec::with_capacity(equilibria.len());
    for x in &equilibria {
        let idx = economy.index_unchecked(x);
        pareto_efficient.push(pareto.efficient[idx]);
        pareto_dominators.push(pareto.dominator[idx].map(|d| economy.profile(d)));
    }
    EquilibriumReport {
        equilibria,
        pareto_efficient,
        pareto_dominators,
        potential: exact_potential(game).ok(),
    }
}

/// One fairness-audit finding.
#[derive(Clone, Debug)]
pub struct Violation {
    /// Where the violation shows.
    pub profile: Profile,
    /// The agent concerned, when one is.
    pub agent: Option<usize>,
    /// Human-readable description.
    pub detail: String,
    /// Numeric size of the violation.
    pub gap: f64,
}

/// Diagnostics from checking a pay table against the fair-division axioms.
///
/// The verdict is pointwise: `fair` holds exactly when the table coincides
/// with the weighted marginal-contribution table within tolerance, which is
/// the unique scheme satisfying the axioms. The probe lists explain *which*
/// principle a deviating table breaks; they are sound (a marginal-pay table
/// never trips them), though a table can be unfair without tripping any.
pub struct FairnessAudit {
    /// The table equals the weighted marginal-contribution table pointwise.
    pub fair: bool,
    /// Largest entrywise gap between the table and marginal pay.
    pub max_gap: f64,
    /// Rows whose pay does not sum to the surplus.
    pub efficiency: Vec<Violation>,
    /// Agents paid despite playing their reference action.
    pub idle_pay: Vec<Violation>,
    /// Productivity-ordered action pairs paid in the wrong order, equal-
    /// productivity pairs paid unequally, or non-negative marginal vectors
    /// paid negatively.
    pub marginality: Vec<Violation>,
    /// Interchangeable agents paid asymmetrically.
    pub symmetry: Vec<Violation>,
}

/// Audits a pay table against the fair-division axioms.
///
/// Needs zero surplus at the reference profile (the axioms characterize the
/// marginal scheme in that normalization) and works within the default term
/// budget.
pub fn audit_fairness(economy: &Economy, table: &PayTable) -> Result<FairnessAudit> {
    if table.rows().len() != economy.n_profiles() {
        return Err(Error::PayTableLength {
            found: table.rows().len(),
            expected: economy.n_profiles(),
        });
    }
    let required = economy.shapley_term_count();
    if required > DEFAULT_TERM_BUDGET {
        return Err(Error::SizeLimit {
            required,
            cap: DEFAULT_TERM_BUDGET,
        });
    }
    let reference_table = PayTable::tabulate(economy, &PayScheme::Shapley)?;
    let max_gap = (0..economy.n_profiles())
        .flat_map(|idx| {
            table
                .row(idx)
                .iter()
                .zip(reference_table.row(idx))
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0f64, f64::max);
    let mut efficiency = Vec::new();
    let mut idle_pay = Vec::new();
    let mut marginality = Vec::new();
    let mut symmetry = Vec::new();

    // Local efficiency: pays sum to the surplus, profile by profile.
    for idx in 0..economy.n_profiles() {
        let sum: f64 = table.row(idx).iter().sum();
        let f = economy.surplus_at(idx);
        if (sum - f).abs() > EPSILON {
            efficiency.push(Violation {
                profile: economy.profile(idx),
                agent: None,
                detail: format!("pay sums to {sum} but the surplus is {f}"),
                gap: (sum - f).abs(),
            });
        }
    }

    // Idle pay: an agent at the reference action contributes nothing and is
    // owed nothing under marginal pay.
    for idx in 0..economy.n_profiles() {
        let x = economy.profile(idx);
        for agent in 0..economy.n_agents() {
            let p = table.row(idx)[agent];
            if x[agent] == economy.reference()[agent] && p.abs() > EPSILON {
                idle_pay.push(Violation {
                    profile: x.clone(),
                    agent: Some(agent),
                    detail: format!("paid {p} while playing the reference action"),
                    gap: p.abs(),
                });
            }
        }
    }

    // Marginality probes: compare an agent's actions in a fixed context.
    for agent in 0..economy.n_agents() {
        let o_i = economy.reference()[agent];
        let stride = economy.stride(agent);
        let k = economy.n_actions(agent);
        for base_idx in 0..economy.n_profiles() {
            let base = economy.profile(base_idx);
            if base[agent] != o_i {
                continue;
            }
            // Marginal-contribution vector of each action over the common
            // sub-lattice Δ_o^agent, plus its pay at the full profile.
            let subs = economy.sub_profiles(&base);
            let mc = |action: usize| -> Vec<f64> {
                subs.iter()
                    .map(|sub| {
                        let joined = sub.with(agent, action);
                        economy.surplus_at(economy.index_unchecked(&joined))
                            - economy.surplus_at(economy.index_unchecked(sub))
                    })
                    .collect()
            };
            let full_pay = |action: usize| -> f64 {
                let idx =
                    (base_idx as isize + (action as isize - o_i as isize) * stride as isize) as usize;
                table.row(idx)[agent]
            };
            let actions: Vec<usize> = (0..k).filter(|&a| a != o_i).collect();
            for (pos, &a) in actions.iter().enumerate() {
                let mc_a = mc(a);
                let pay_a = full_pay(a);
                // Non-negative marginal vector must not be paid negatively.
                if mc_a.iter().all(|&v| v >= -EPSILON) && pay_a < -EPSILON {
                    marginality.push(Violation {
                        profile: base.with(agent, a),
                        agent: Some(agent),
                        detail: format!(
                            "never reduces the surplus in this context, yet is paid {pay_a}"
                        ),
                        gap: -pay_a,
                    });
                }
                for &b in &actions[pos + 1..] {
                    let mc_b = mc(b);
                    let pay_b = full_pay(b);
                    let a_ge_b = mc_a.iter().zip(&mc_b).all(|(x, y)| x >= &(y - EPSILON));
                    let b_ge_a = mc_b.iter().zip(&mc_a).all(|(x, y)| x >= &(y - EPSILON));
                    if a_ge_b && b_ge_a && (pay_a - pay_b).abs() > EPSILON {
                        marginality.push(Violation {
                            profile: base.with(agent, a),
                            agent: Some(agent),
                            detail: format!(
                                "actions with identical marginal contributions paid {pay_a} vs {pay_b}"
                            ),
                            gap: (pay_a - pay_b).abs(),
                        });
                    } else if a_ge_b && !b_ge_a && pay_a < pay_b - EPSILON {
                        marginality.push(Violation {
                            profile: base.with(agent, a),
                            agent: Some(agent),
                            detail: format!(
                                "dominates a sibling action everywhere yet is paid {pay_a} vs {pay_b}"
                            ),
                            gap: pay_b - pay_a,
                        });
                    } else if b_ge_a && !a_ge_b && pay_b < pay_a - EPSILON {
                        marginality.push(Violation {
                            profile: base.with(agent, b),
                            agent: Some(agent),
                            detail: format!(
                                "dominates a sibling action everywhere yet is paid {pay_b} vs {pay_a}"
                            ),
                            gap: pay_a - pay_b,
                        });
                    }
                }
            }
        }
    }

    // Symmetry: agents whose coordinates can be swapped without changing the
    // surplus anywhere must be paid mirror-image amounts.
    for i in 0..economy.n_agents() {
        for j in i + 1..economy.n_agents() {
            if economy.n_actions(i) != economy.n_actions(j)
                || economy.reference()[i] != economy.reference()[j]
            {
                continue;
            }
            let swap = |x: &Profile| -> Profile {
                let mut coords = x.coords().to_vec();
                coords.swap(i, j);
                Profile::new(coords)
            };
            let invariant = (0..economy.n_profiles()).all(|idx| {
                let x = economy.profile(idx);
                let swapped = economy.index_unchecked(&swap(&x));
                (economy.surplus_at(idx) - economy.surplus_at(swapped)).abs() <= EPSILON
            });
            if !invariant {
                continue;
            }
            for idx in 0..economy.n_profiles() {
                let x = economy.profile(idx);
                let swapped = economy.index_unchecked(&swap(&x));
                let here = table.row(idx)[i];
                let there = table.row(swapped)[j];
                if (here - there).abs() > EPSILON {
                    symmetry.push(Violation {
                        profile: x,
                        agent: Some(i),
                        detail: format!(
                            "interchangeable agents paid {here} here vs {there} in the mirrored profile"
                        ),
                        gap: (here - there).abs(),
                    });
                }
            }
        }
    }

    Ok(FairnessAudit {
        fair: max_gap <= EPSILON,
        max_gap,
        efficiency,
        idle_pay,
        marginality,
        symmetry,
    })
}
