//! Finite production economies over tabulated surplus functions.
//!
//! An [`Economy`] is a finite set of agents, one finite action set per agent, a
//! distinguished *reference* action per agent (standing for "contribute
//! nothing"), and a surplus function `f` tabulated densely over the whole
//! action space. Everything else in the crate — pay schemes, induced games,
//! equilibrium analysis — reads surplus values through this type.
//!
//! # Core abstractions
//!
//! - [`Profile`] — one action index per agent, the points of the action space.
//! - [`ActiveSet`] — the agents deviating from their reference action at a profile.
//! - The *sub-profile lattice* `Δ(x)` of a profile `x`: every profile obtained by
//!   resetting some active coordinates of `x` back to the reference. Pay schemes
//!   are weighted sums over this lattice, so its enumeration lives here.
//!
//! Profiles are interchangeably addressed by value ([`Profile`]) or by their
//! mixed-radix index (agent 0 is the most significant digit, the last agent the
//! fastest-moving one). Indices order profiles lexicographically, and every
//! "lowest index wins" tie-break in the crate refers to this order.

use std::collections::BTreeMap;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::EPSILON;

/// One action index per agent; a point of the action space.
///
/// Coordinates are indices into each agent's action-label list, not labels.
/// The derived ordering is lexicographic, which matches mixed-radix index order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile(Vec<usize>);

impl Profile {
    /// Wraps raw coordinates as a profile.
    pub fn new(coords: Vec<usize>) -> Self {
        Profile(coords)
    }

    /// The coordinates, one per agent.
    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// Number of coordinates (agents).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the zero-agent profile (never produced by a valid economy).
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A copy of this profile with one coordinate replaced.
    pub fn with(&self, agent: usize, action: usize) -> Profile {
        let mut coords = self.0.clone();
        coords[agent] = action;
        Profile(coords)
    }
}

impl From<Vec<usize>> for Profile {
    fn from(coords: Vec<usize>) -> Self {
        Profile(coords)
    }
}

impl Index<usize> for Profile {
    type Output = usize;
    fn index(&self, agent: usize) -> &usize {
        &self.0[agent]
    }
}

/// The set of agents playing a non-reference action at some profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSet {
    members: Vec<usize>,
}

impl ActiveSet {
    /// Member agent indices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of active agents.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when no agent is active (the profile is the reference).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, agent: usize) -> bool {
        self.members.binary_search(&agent).is_ok()
    }
}

/// Sub-profile lattices are enumerated by bitmask over the active set, so the
/// number of active agents in any profile handed to a lattice operation must
/// stay below this bound. The term-budget check in game construction keeps
/// realistic inputs far below it.
pub const MAX_ACTIVE_AGENTS: usize = 62;

/// Fast enumeration support for the sub-profile lattice `Δ(x)`.
///
/// `base` is the index of the profile with every active coordinate reset to the
/// reference; setting bit `k` adds `delta[k]`, re-activating agent `active[k]`.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    pub base: usize,
    pub active: Vec<usize>,
    pub delta: Vec<isize>,
}

impl Lattice {
    /// Profile index selected by a bitmask over the active agents.
    #[inline]
    pub fn index(&self, mask: u64) -> usize {
        let mut idx = self.base as isize;
        let mut m = mask;
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            idx += self.delta[k];
            m &= m - 1;
        }
        idx as usize
    }

    /// Number of active agents (lattice dimension).
    #[inline]
    pub fn dim(&self) -> usize {
        self.active.len()
    }
}

/// A finite production economy: agents, action sets, a reference profile, and a
/// dense surplus table.
///
/// The surplus at the reference profile is *not* forced to zero at construction
/// time — shifted-reference analyses legitimately re-anchor an economy at a
/// profile with positive surplus. Operations that require the zero
/// normalization check it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct Economy {
    agents: Vec<String>,
    actions: Vec<Vec<String>>,
    reference: Profile,
    surplus: Vec<f64>,
    strides: Vec<usize>,
}

impl Economy {
    /// Builds an economy from names, per-agent action labels, the reference
    /// coordinates, and a dense surplus table in mixed-radix index order.
    pub fn new(
        agents: Vec<String>,
        actions: Vec<Vec<String>>,
        reference: Vec<usize>,
        surplus: Vec<f64>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::NoAgents);
        }
        if actions.len() != agents.len() {
            return Err(Error::ProfileLength {
                found: actions.len(),
                expected: agents.len(),
            });
        }
        for (i, name) in agents.iter().enumerate() {
            if name.is_empty() || agents[..i].contains(name) {
                return Err(Error::BadAgentName { name: name.clone() });
            }
        }
        for (i, labels) in actions.iter().enumerate() {
            if labels.is_empty() {
                return Err(Error::EmptyActionSet { agent: i });
            }
            for (j, label) in labels.iter().enumerate() {
                if label.is_empty() || labels[..j].contains(label) {
                    return Err(Error::BadActionLabel {
                        agent: i,
                        label: label.clone(),
                    });
                }
            }
        }
        if reference.len() != agents.len() {
            return Err(Error::ProfileLength {
                found: reference.len(),
                expected: agents.len(),
            });
        }
        for (i, &coord) in reference.iter().enumerate() {
            if coord >= actions[i].len() {
                return Err(Error::ActionOutOfRange {
                    agent: i,
                    coordinate: coord,
                    actions: actions[i].len(),
                });
            }
        }
        let n_profiles: usize = actions.iter().map(Vec::len).product();
        if surplus.len() != n_profiles {
            return Err(Error::SurplusLength {
                found: surplus.len(),
                expected: n_profiles,
            });
        }
        if let Some(bad) = surplus.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSurplus {
                index: bad,
                value: surplus[bad],
            });
        }
        let mut strides = vec![1usize; agents.len()];
        for i in (0..agents.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * actions[i + 1].len();
        }
        Ok(Economy {
            agents,
            actions,
            reference: Profile::new(reference),
            surplus,
            strides,
        })
    }

    /// Builds an economy by evaluating `f` at every profile in index order.
    pub fn from_fn(
        agents: Vec<String>,
        actions: Vec<Vec<String>>,
        reference: Vec<usize>,
        mut f: impl FnMut(&Profile) -> f64,
    ) -> Result<Self> {
        // Build with a zero table first to reuse the shape validation, then fill.
        let n_profiles: usize = actions.iter().map(Vec::len).product();
        let mut economy = Economy::new(agents, actions, reference, vec![0.0; n_profiles])?;
        for idx in 0..n_profiles {
            let value = f(&economy.profile(idx));
            if !value.is_finite() {
                return Err(Error::NonFiniteSurplus { index: idx, value });
            }
            economy.surplus[idx] = value;
        }
        Ok(economy)
    }

    /// Test-friendly constructor with generated names: agents "1", "2", … and
    /// action labels "x0", "x1", … per agent. Reference defaults to coordinate 0.
    pub fn unlabeled(sizes: &[usize], surplus: Vec<f64>) -> Result<Self> {
        let agents = (1..=sizes.len()).map(|i| i.to_string()).collect();
        let actions = sizes
            .iter()
            .map(|&k| (0..k).map(|j| format!("x{j}")).collect())
            .collect();
        Economy::new(agents, actions, vec![0; sizes.len()], surplus)
    }

    /// Number of agents.
    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    /// Agent names in agent order.
    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    /// Action labels of one agent.
    pub fn action_labels(&self, agent: usize) -> &[String] {
        &self.actions[agent]
    }

    /// Number of actions available to one agent.
    pub fn n_actions(&self, agent: usize) -> usize {
        self.actions[agent].len()
    }

    /// Size of the full action space.
    pub fn n_profiles(&self) -> usize {
        self.surplus.len()
    }

    /// The reference profile.
    pub fn reference(&self) -> &Profile {
        &self.reference
    }

    /// Surplus at the reference profile.
    pub fn reference_surplus(&self) -> f64 {
        self.surplus[self.index_unchecked(&self.reference)]
    }

    /// A copy of this economy re-anchored at a different reference profile.
    ///
    /// Agents, actions, and the surplus table are untouched; only which
    /// profile counts as "everyone idle" changes, which redefines active sets
    /// and therefore every marginal-pay quantity.
    pub fn with_reference(&self, reference: &Profile) -> Result<Economy> {
        self.check_profile(reference)?;
        let mut out = self.clone();
        out.reference = reference.clone();
        Ok(out)
    }

    /// Index of the agent with the given name.
    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::BadAgentName {
                name: name.to_string(),
            })
    }

    /// Index of one agent's action with the given label.
    pub fn action_index(&self, agent: usize, label: &str) -> Result<usize> {
        self.actions[agent]
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::BadActionLabel {
                agent,
                label: label.to_string(),
            })
    }

    /// Builds a profile from one action label per agent, in agent order.
    pub fn profile_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Profile> {
        if labels.len() != self.agents.len() {
            return Err(Error::ProfileLength {
                found: labels.len(),
                expected: self.agents.len(),
            });
        }
        let coords = labels
            .iter()
            .enumerate()
            .map(|(agent, label)| self.action_index(agent, label.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile::new(coords))
    }

    /// The dense surplus table in index order.
    pub fn surplus_table(&self) -> &[f64] {
        &self.surplus
    }

    /// Surplus by profile index. Panics if the index is out of range.
    #[inline]
    pub fn surplus_at(&self, index: usize) -> f64 {
        self.surplus[index]
    }

    /// Surplus at a profile, after validating it.
    pub fn surplus(&self, x: &Profile) -> Result<f64> {
        Ok(self.surplus[self.index(x)?])
    }

    /// Validates that a profile has the right shape for this economy.
    pub fn check_profile(&self, x: &Profile) -> Result<()> {
        if x.len() != self.agents.len() {
            return Err(Error::ProfileLength {
                found: x.len(),
                expected: self.agents.len(),
            });
        }
        for (i, &coord) in x.coords().iter().enumerate() {
            if coord >= self.actions[i].len() {
                return Err(Error::ActionOutOfRange {
                    agent: i,
                    coordinate: coord,
                    actions: self.actions[i].len(),
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix index of a profile, after validating it.
    pub fn index(&self, x: &Profile) -> Result<usize> {
        self.check_profile(x)?;
        Ok(self.index_unchecked(x))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, x: &Profile) -> usize {
        x.coords()
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum()
    }

    /// The profile at a mixed-radix index. Panics if the index is out of range.
    pub fn profile(&self, index: usize) -> Profile {
        assert!(
            index < self.n_profiles(),
            "profile index {index} out of range ({} profiles)",
            self.n_profiles()
        );
        let mut coords = vec![0usize; self.agents.len()];
        let mut rest = index;
        for (i, &stride) in self.strides.iter().enumerate() {
            coords[i] = rest / stride;
            rest %= stride;
        }
        Profile::new(coords)
    }

    /// Iterates the whole action space in index order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.n_profiles()).map(|idx| self.profile(idx))
    }

    /// Per-agent index strides of the mixed-radix numbering.
    #[inline]
    pub(crate) fn stride(&self, agent: usize) -> usize {
        self.strides[agent]
    }

    /// Renders a profile with its action labels, e.g. `(a2,b3)`.
    pub fn render_profile(&self, x: &Profile) -> String {
        let labels: Vec<&str> = x
            .coords()
            .iter()
            .enumerate()
            .map(|(i, &c)| self.actions[i][c].as_str())
            .collect();
        format!("({})", labels.join(","))
    }

    /// The agents playing a non-reference action at `x`.
    ///
    /// Panics if the profile is malformed; validate with [`Economy::check_profile`]
    /// first when handling untrusted input.
    pub fn active_set(&self, x: &Profile) -> ActiveSet {
        self.check_profile(x).expect("malformed profile");
        let members = x
            .coords()
            .iter()
            .enumerate()
            .filter(|&(i, &c)| c != self.reference[i])
            .map(|(i, _)| i)
            .collect();
        ActiveSet { members }
    }

    /// Lattice enumeration data for `Δ(x)`.
    pub(crate) fn lattice(&self, x: &Profile) -> Lattice {
        let active: Vec<usize> = x
            .coords()
            .iter()
            .enumerate()
            .filter(|&(i, &c)| c != self.reference[i])
            .map(|(i, _)| i)
            .collect();
        assert!(
            active.len() <= MAX_ACTIVE_AGENTS,
            "sub-profile lattice too large: {} active agents",
            active.len()
        );
        let mut base = self.index_unchecked(x) as isize;
        let mut delta = Vec::with_capacity(active.len());
        for &i in &active {
            let step = (x[i] as isize - self.reference[i] as isize) * self.strides[i] as isize;
            base -= step;
            delta.push(step);
        }
        Lattice {
            base: base as usize,
            active,
            delta,
        }
    }

    /// The sub-profile lattice `Δ(x)`: every profile obtained from `x` by
    /// resetting a subset of its active coordinates to the reference. Returned
    /// in ascending index order; the size is `2^{active agents}`.
    pub fn sub_profiles(&self, x: &Profile) -> Vec<Profile> {
        self.check_profile(x).expect("malformed profile");
        let lattice = self.lattice(x);
        let mut indices: Vec<usize> = (0..(1u64 << lattice.dim()))
            .map(|mask| lattice.index(mask))
            .collect();
        indices.sort_unstable();
        indices.into_iter().map(|idx| self.profile(idx)).collect()
    }

    /// The sub-profiles of `x` at which agent `i` plays the reference action:
    /// the summation domain `Δ_o^i(x)` of the weighted-sum pay schemes.
    pub fn sub_profiles_excluding(&self, agent: usize, x: &Profile) -> Vec<Profile> {
        self.check_profile(x).expect("malformed profile");
        assert!(agent < self.n_agents(), "agent {agent} out of range");
        let mut reset = x.clone();
        reset.0[agent] = self.reference[agent];
        self.sub_profiles(&reset)
    }

    /// Marginal contribution of agent `i` when joining the coalition of `sub`:
    /// `f(sub with i restored to x_i) − f(sub)`.
    ///
    /// `sub` must lie in `Δ_o^i(x)` (a sub-profile of `x` with agent `i` at the
    /// reference action).
    pub fn marginal_contribution(&self, agent: usize, sub: &Profile, x: &Profile) -> Result<f64> {
        self.check_profile(sub)?;
        self.check_profile(x)?;
        if agent >= self.n_agents() {
            return Err(Error::ActionOutOfRange {
                agent,
                coordinate: 0,
                actions: 0,
            });
        }
        for i in 0..self.n_agents() {
            let in_lattice = sub[i] == x[i] || sub[i] == self.reference[i];
            let excluded = i != agent || sub[i] == self.reference[i];
            if !(in_lattice && excluded) {
                return Err(Error::Invariant(format!(
                    "profile {} is not a sub-profile of {} excluding agent {}",
                    self.render_profile(sub),
                    self.render_profile(x),
                    self.agents[agent],
                )));
            }
        }
        let joined = sub.with(agent, x[agent]);
        Ok(self.surplus[self.index_unchecked(&joined)] - self.surplus[self.index_unchecked(sub)])
    }

    /// True when agent `i` never moves the surplus: for every profile with `i`
    /// at the reference action, switching `i` to any action leaves `f` unchanged
    /// (within the crate tolerance). Such an agent's weighted-sum pay is zero at
    /// every profile.
    pub fn is_unproductive(&self, agent: usize) -> bool {
        assert!(agent < self.n_agents(), "agent {agent} out of range");
        let o_i = self.reference[agent];
        let stride = self.strides[agent];
        for idx in 0..self.n_profiles() {
            let coord = idx / stride % self.actions[agent].len();
            if coord != o_i {
                continue;
            }
            let base = self.surplus[idx];
            for a in 0..self.actions[agent].len() {
                let alt_idx = (idx as isize + (a as isize - o_i as isize) * stride as isize) as usize;
                if (self.surplus[alt_idx] - base).abs() > EPSILON {
                    return false;
                }
            }
        }
        true
    }

    /// Relabels the restriction of the surplus to `Δ(x)` by an agent
    /// permutation: the returned map sends each relabeled sub-profile to the
    /// surplus of its pre-image. The permutation must be a bijection on agents
    /// that maps the active set of `x` onto itself (inactive agents have no
    /// activity to relabel).
    ///
    /// A fair pay scheme is indifferent to such relabelings: agent `π(i)` earns
    /// from the relabeled restriction exactly what agent `i` earned from the
    /// original.
    pub fn permute_surplus(
        &self,
        x: &Profile,
        perm: &[usize],
    ) -> Result<BTreeMap<Profile, f64>> {
        self.check_profile(x)?;
        let n = self.n_agents();
        if perm.len() != n {
            return Err(Error::BadPermutation);
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::BadPermutation);
            }
            seen[p] = true;
        }
        let active = self.active_set(x);
        for &i in active.members() {
            if !active.contains(perm[i]) {
                return Err(Error::BadPermutation);
            }
        }
        let lattice = self.lattice(x);
        let mut out = BTreeMap::new();
        for mask in 0..(1u64 << lattice.dim()) {
            let source = self.profile(lattice.index(mask));
            // Build the image: agent perm[k] is active in the image iff k is
            // active in the source.
            let mut image = self.reference.clone();
            for (pos, &agent) in lattice.active.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    let target = perm[agent];
                    image.0[target] = x[target];
                }
            }
            out.insert(image, self.surplus[self.index_unchecked(&source)]);
        }
        Ok(out)
    }

    /// Estimated number of weighted-sum terms needed to tabulate a pay scheme
    /// over the whole action space: `Σ_x |active(x)| · 2^{|active(x)|−1}`.
    ///
    /// Computed in closed form by counting profiles per active-set size (a
    /// polynomial product over agents), so it is cheap even when the action
    /// space itself is far too large to enumerate.
    pub fn shapley_term_count(&self) -> f64 {
        // coeffs[k] = number of profiles with exactly k active agents.
        let mut coeffs = vec![1.0f64];
        for labels in &self.actions {
            let extra = (labels.len() - 1) as f64;
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k] += c;
                next[k + 1] += c * extra;
            }
            coeffs = next;
        }
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64 * 2f64.powi(k as i32 - 1))
            .sum()
    }

    /// Index of the surplus-maximizing profile; ties break to the lowest index.
    pub fn argmax_surplus(&self) -> usize {
        let mut best = 0usize;
        for idx in 1..self.n_profiles() {
            if self.surplus[idx] > self.surplus[best] + EPSILON {
                best = idx;
            }
        }
        best
    }

    /// Indices of every profile whose surplus is within tolerance of the maximum.
    pub fn maximizers(&self) -> Vec<usize> {
        let max = self.surplus[self.argmax_surplus()];
        (0..self.n_profiles())
            .filter(|&idx| self.surplus[idx] >= max - EPSILON)
            .collect()
    }
}
