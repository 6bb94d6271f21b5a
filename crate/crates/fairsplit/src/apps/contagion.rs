//! Link-formation economies where connectivity raises output but spreads
//! contagion.
//!
//! A [`Network`] on `n` agents is a set of undirected links. Its surplus is
//!
//! ```text
//! f(g) = v(ℓ(g)) − λ · c̃(g)
//! ```
//!
//! where `ℓ(g)` counts links, `v` is a link-value curve (√ℓ by default),
//! and `c̃(g) = P(g) − 1/n` is the collective contagion premium: `P(g)` is
//! the probability that an infection seeded at a uniformly random agent
//! reaches a second, independently drawn agent, which works out to
//! `Σ_j s_j² / n²` over the component sizes `s_j`.
//!
//! Pay is the marginal split over agent subsets, with the network restricted
//! to each subset (links survive only if both endpoints are present). The
//! stability notion is *pairwise-Nash*: no agent can gain by severing any
//! subset of their own links, and no absent link exists that one endpoint
//! strictly wants while the other endpoint would not strictly lose.
//!
//! Enumeration over all networks is exhaustive (2^(n(n−1)/2) masks), so the
//! agent count is capped at [`MAX_NETWORK_AGENTS`].

use crate::error::{Error, Result};
use crate::scheme::join_weight;
use crate::EPSILON;

/// Exhaustive network enumeration is limited to this many agents
/// (15 possible links, 32 768 networks).
pub const MAX_NETWORK_AGENTS: usize = 6;

/// An undirected network on a fixed agent set, stored as a link bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Network {
    n: usize,
    mask: u32,
}

/// Bit position of the link {a, b} (a < b) in row-major pair order.
fn link_bit(n: usize, a: usize, b: usize) -> u32 {
    debug_assert!(a < b && b < n);
    (a * n - a * (a + 1) / 2 + (b - a - 1)) as u32
}

/// Validates an agent count for exhaustive network work.
fn check_agent_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoAgents);
    }
    if n > MAX_NETWORK_AGENTS {
        return Err(Error::TooManyNetworkAgents {
            requested: n,
            max: MAX_NETWORK_AGENTS,
        });
    }
    Ok(())
}

impl Network {
    /// The network with no links.
    pub fn empty(n: usize) -> Result<Self> {
        check_agent_count(n)?;
        Ok(Self { n, mask: 0 })
    }

    /// The network with every link present.
    pub fn complete(n: usize) -> Result<Self> {
        let empty = Self::empty(n)?;
        let m = n * (n - 1) / 2;
        Ok(Self {
            mask: if m == 0 { 0 } else { (1u32 << m) - 1 },
            ..empty
        })
    }

    /// Builds a network from a list of links. Duplicates and either endpoint
    /// order are fine; each link must join two distinct agents below `n`.
    pub fn from_links(n: usize, links: &[(usize, usize)]) -> Result<Self> {
        let mut net = Self::empty(n)?;
        for &(a, b) in links {
            net = net.with_link(a, b)?;
        }
        Ok(net)
    }

    fn validate_pair(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        if a == b || a >= self.n || b >= self.n {
            return Err(Error::BadLink { a, b, n: self.n });
        }
        Ok((a.min(b), a.max(b)))
    }

    /// Number of agents.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of links present.
    pub fn link_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// The links present, as ordered pairs `(a, b)` with `a < b`, ascending.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.link_count());
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.mask & (1 << link_bit(self.n, a, b)) != 0 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether the link {a, b} is present.
    pub fn has_link(&self, a: usize, b: usize) -> Result<bool> {
        let (a, b) = self.validate_pair(a, b)?;
        Ok(self.mask & (1 << link_bit(self.n, a, b)) != 0)
    }

    /// A copy with the link {a, b} added (no-op if already present).
    pub fn with_link(&self, a: usize, b: usize) -> Result<Self> {
        let (a, b) = self.validate_pair(a, b)?;
        Ok(Self {
            n: self.n,
            mask: self.mask | (1 << link_bit(self.n, a, b)),
        })
    }

    /// A copy with the link {a, b} removed (no-op if absent).
    pub fn without_link(&self, a: usize, b: usize) -> Result<Self> {
        let (a, b) = self.validate_pair(a, b)?;
        Ok(Self {
            n: self.n,
            mask: self.mask & !(1 << link_bit(self.n, a, b)),
        })
    }

    /// The restriction to a subset of agents: links survive only when both
    /// endpoints are members. The agent set itself is unchanged.
    pub fn restricted(&self, members: &[usize]) -> Result<Self> {
        let mut member_mask = 0u32;
        for &i in members {
            if i >= self.n {
                return Err(Error::BadLink { a: i, b: i, n: self.n });
            }
            member_mask |= 1 << i;
        }
        let mut mask = 0u32;
        for (a, b) in self.links() {
            if member_mask & (1 << a) != 0 && member_mask & (1 << b) != 0 {
                mask |= 1 << link_bit(self.n, a, b);
            }
        }
        Ok(Self { n: self.n, mask })
    }

    /// A copy with agents renamed by `perm` (`perm[old] = new`), which must
    /// be a bijection on `0..n`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::BadPermutation);
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::BadPermutation);
            }
            seen[p] = true;
        }
        let mut out = Self::empty(self.n)?;
        for (a, b) in self.links() {
            out = out.with_link(perm[a], perm[b])?;
        }
        Ok(out)
    }

    /// Sizes of the connected components, ascending (singletons included).
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (a, b) in self.links() {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut counts = vec![0usize; self.n];
        for i in 0..self.n {
            counts[root(&mut parent, i)] += 1;
        }
        let mut sizes: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
        sizes.sort_unstable();
        sizes
    }

    /// The raw link bitmask (used by the exhaustive enumeration tables).
    fn from_mask(n: usize, mask: u32) -> Self {
        Self { n, mask }
    }
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Network(n={}, links={:?})", self.n, self.links())
    }
}

/// The probability that a random infection seed reaches a second,
/// independently drawn agent: `Σ s_j² / n²` over component sizes.
pub fn contagion_potential(g: &Network) -> f64 {
    let n = g.n() as f64;
    g.component_sizes()
        .iter()
        .map(|&s| (s * s) as f64)
        .sum::<f64>()
        / (n * n)
}

/// The contagion premium over the empty network: `P(g) − 1/n`.
pub fn collective_contagion(g: &Network) -> f64 {
    contagion_potential(g) - 1.0 / g.n() as f64
}

/// How gross output grows with the number of links.
#[derive(Clone, Debug, PartialEq)]
pub enum LinkValue {
    /// `v(ℓ) = √ℓ`: strong diminishing returns to connectivity.
    SqrtLinks,
    /// A tabulated curve; entry `ℓ` is the value of `ℓ` links, and the table
    /// must cover every achievable link count.
    ByLinkCount(Vec<f64>),
}

impl LinkValue {
    fn at(&self, links: usize) -> Result<f64> {
        match self {
            LinkValue::SqrtLinks => Ok((links as f64).sqrt()),
            LinkValue::ByLinkCount(table) => {
                table.get(links).copied().ok_or(Error::ShortValueTable {
                    needed: links,
                    found: table.len(),
                })
            }
        }
    }
}

/// Severity and link-value curve for a contagion economy.
#[derive(Clone, Debug)]
pub struct ContagionParams {
    lambda: f64,
    value: LinkValue,
}

impl ContagionParams {
    /// Square-root link value with the given contagion severity `λ ≥ 0`.
    pub fn new(lambda: f64) -> Result<Self> {
        Self::with_value(lambda, LinkValue::SqrtLinks)
    }

    /// A custom link-value curve with the given severity.
    pub fn with_value(lambda: f64, value: LinkValue) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::BadSeverity { value: lambda });
        }
        if let LinkValue::ByLinkCount(table) = &value {
            if let Some(&bad) = table.iter().find(|v| !v.is_finite()) {
                return Err(Error::BadSeverity { value: bad });
            }
        }
        Ok(Self { lambda, value })
    }

    /// The contagion severity.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The link-value curve.
    pub fn value(&self) -> &LinkValue {
        &self.value
    }
}

/// Network surplus `v(ℓ(g)) − λ · c̃(g)`.
pub fn network_surplus(g: &Network, params: &ContagionParams) -> Result<f64> {
    Ok(params.value.at(g.link_count())? - params.lambda * collective_contagion(g))
}

/// Marginal-split pay of every agent: agent `i` receives the join-weighted
/// average of `f(g|_{S∪{i}}) − f(g|_S)` over subsets `S` of the other agents.
pub fn network_shapley(g: &Network, params: &ContagionParams) -> Result<Vec<f64>> {
    let n = g.n();
    let others: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).collect())
        .collect();
    let mut pay = vec![0.0; n];
    for i in 0..n {
        let mut total = 0.0;
        for pick in 0u32..(1 << (n - 1)) {
            let mut members: Vec<usize> = Vec::with_capacity(n);
            for (pos, &agent) in others[i].iter().enumerate() {
                if pick & (1 << pos) != 0 {
                    members.push(agent);
                }
            }
            let weight = join_weight(members.len(), n);
            let without = network_surplus(&g.restricted(&members)?, params)?;
            members.push(i);
            let with = network_surplus(&g.restricted(&members)?, params)?;
            total += weight * (with - without);
        }
        pay[i] = total;
    }
    Ok(pay)
}

/// Marginal-split pay of a single agent.
pub fn network_shapley_agent(g: &Network, params: &ContagionParams, agent: usize) -> Result<f64> {
    if agent >= g.n() {
        return Err(Error::BadLink {
            a: agent,
            b: agent,
            n: g.n(),
        });
    }
    Ok(network_shapley(g, params)?[agent])
}

/// Precomputed per-mask tables for exhaustive stability analysis.
///
/// Surplus is affine in λ (`f = v-part − λ · contagion-part`) and pay is
/// linear in surplus, so both decompose into λ-independent tables; a sweep
/// over severities then costs only lookups.
struct Tables {
    n: usize,
    /// Per agent: link bits incident to that agent.
    incident: Vec<u32>,
    /// Flat `mask * n + agent` tables for the two pay components.
    phi_value: Vec<f64>,
    phi_contagion: Vec<f64>,
}

impl Tables {
    fn new(n: usize, value: &LinkValue) -> Result<Self> {
        check_agent_count(n)?;
        let m = n * (n - 1) / 2;
        let masks = 1usize << m;

        let mut pairs = Vec::with_capacity(m);
        for a in 0..n {
            for b in (a + 1)..n {
                pairs.push((a, b));
            }
        }

        let mut filter = vec![0u32; 1 << n];
        for (members, slot) in filter.iter_mut().enumerate() {
            for (bit, &(a, b)) in pairs.iter().enumerate() {
                if members & (1 << a) != 0 && members & (1 << b) != 0 {
                    *slot |= 1 << bit;
                }
            }
        }
        let mut incident = vec![0u32; n];
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            incident[a] |= 1 << bit;
            incident[b] |= 1 << bit;
        }

        let mut value_part = vec![0.0; masks];
        let mut contagion_part = vec![0.0; masks];
        for mask in 0..masks {
            let g = Network::from_mask(n, mask as u32);
            value_part[mask] = value.at(g.link_count())?;
            contagion_part[mask] = collective_contagion(&g);
        }

        let mut phi_value = vec![0.0; masks * n];
        let mut phi_contagion = vec![0.0; masks * n];
        let everyone = (1usize << n) - 1;
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            // Subset membership masks and join weights, shared across g-masks.
            let subsets: Vec<(u32, u32, f64)> = (0u32..(1 << (n - 1)))
                .map(|pick| {
                    let mut members = 0usize;
                    for (pos, &agent) in others.iter().enumerate() {
                        if pick & (1 << pos) != 0 {
                            members |= 1 << agent;
                        }
                    }
                    let s = (pick.count_ones()) as usize;
                    debug_assert!(members <= everyone);
                    (
                        filter[members],
                        filter[members | (1 << i)],
                        join_weight(s, n),
                    )
                })
                .collect();
            for mask in 0..masks {
                let g = mask as u32;
                let mut v = 0.0;
                let mut c = 0.0;
                for &(without_filter, with_filter, w) in &subsets {
                    let g_without = (g & without_filter) as usize;
                    let g_with = (g & with_filter) as usize;
                    v += w * (value_part[g_with] - value_part[g_without]);
                    c += w * (contagion_part[g_with] - contagion_part[g_without]);
                }
                phi_value[mask * n + i] = v;
                phi_contagion[mask * n + i] = c;
            }
        }

        Ok(Self {
            n,
            incident,
            phi_value,
            phi_contagion,
        })
    }

    fn link_masks(&self) -> usize {
        1 << (self.n * (self.n - 1) / 2)
    }

    fn phi(&self, mask: u32, lambda: f64, agent: usize) -> f64 {
        let idx = mask as usize * self.n + agent;
        self.phi_value[idx] - lambda * self.phi_contagion[idx]
    }

    /// Pairwise-Nash stability of one network at one severity.
    fn stable(&self, mask: u32, lambda: f64) -> bool {
        // Deletion-proof: no agent gains by severing any subset of own links.
        for i in 0..self.n {
            let own = mask & self.incident[i];
            let here = self.phi(mask, lambda, i);
            let mut cut = own;
            while cut != 0 {
                if self.phi(mask & !cut, lambda, i) > here + EPSILON {
                    return false;
                }
                cut = (cut - 1) & own;
            }
        }
        // Addition-proof: no absent link that one endpoint strictly wants
        // while the other would not strictly lose.
        let all = (self.link_masks() - 1) as u32;
        let mut absent = all & !mask;
        while absent != 0 {
            let bit = absent & absent.wrapping_neg();
            absent &= absent - 1;
            let grown = mask | bit;
            let (a, b) = self.endpoints(bit);
            let gain_a = self.phi(grown, lambda, a) - self.phi(mask, lambda, a);
            let gain_b = self.phi(grown, lambda, b) - self.phi(mask, lambda, b);
            if (gain_a > EPSILON && gain_b >= -EPSILON)
                || (gain_b > EPSILON && gain_a >= -EPSILON)
            {
                return false;
            }
        }
        true
    }

    fn endpoints(&self, bit: u32) -> (usize, usize) {
        let target = bit.trailing_zeros() as usize;
        let mut idx = 0;
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if idx == target {
                    return (a, b);
                }
                idx += 1;
            }
        }
        unreachable!("link bit beyond the pair range");
    }

    fn equilibria(&self, lambda: f64) -> Vec<u32> {
        (0..self.link_masks() as u32)
            .filter(|&mask| self.stable(mask, lambda))
            .collect()
    }
}

/// One severity in a regime sweep: the stable networks and the set of link
/// counts they realize.
#[derive(Clone, Debug)]
pub struct RegimeRow {
    /// Contagion severity this row was computed at.
    pub lambda: f64,
    /// Sorted, deduplicated link counts of the stable networks.
    pub link_counts: Vec<usize>,
    /// Every pairwise-Nash stable network, in mask order.
    pub equilibria: Vec<Network>,
}

/// Every pairwise-Nash stable network, in deterministic (bitmask) order.
pub fn pairwise_nash_networks(n: usize, params: &ContagionParams) -> Result<Vec<Network>> {
    let tables = Tables::new(n, params.value())?;
    Ok(tables
        .equilibria(params.lambda())
        .into_iter()
        .map(|mask| Network::from_mask(n, mask))
        .collect())
}

/// Classifies the stable networks at each severity, under the square-root
/// link value.
pub fn lambda_regime_sweep(n: usize, lambdas: &[f64]) -> Result<Vec<RegimeRow>> {
    if lambdas.is_empty() {
        return Err(Error::BadGrid);
    }
    for &lambda in lambdas {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::BadSeverity { value: lambda });
        }
    }
    let tables = Tables::new(n, &LinkValue::SqrtLinks)?;
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let equilibria: Vec<Network> = tables
                .equilibria(lambda)
                .into_iter()
                .map(|mask| Network::from_mask(n, mask))
                .collect();
            let mut link_counts: Vec<usize> =
                equilibria.iter().map(Network::link_count).collect();
            link_counts.sort_unstable();
            link_counts.dedup();
            RegimeRow {
                lambda,
                link_counts,
                equilibria,
            }
        })
        .collect())
}

/// Scans severities from `lo` to `hi` in steps of `step` and reports the
/// midpoint of every consecutive pair whose stable link-count class differs.
///
/// A grid point that lands exactly on a knife-edge severity can form its own
/// one-point class, in which case two midpoints (one either side, within a
/// step of the true boundary) are reported instead of one.
pub fn regime_boundaries(n: usize, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || lo > hi || lo < 0.0 {
        return Err(Error::BadGrid);
    }
    let mut lambdas = Vec::new();
    let mut k = 0usize;
    loop {
        let lambda = lo + step * k as f64;
        if lambda > hi + step * 1e-9 {
            break;
        }
        lambdas.push(lambda.min(hi));
        k += 1;
    }
    let rows = lambda_regime_sweep(n, &lambdas)?;
    let mut boundaries = Vec::new();
    for pair in rows.windows(2) {
        if pair[0].link_counts != pair[1].link_counts {
            boundaries.push((pair[0].lambda + pair[1].lambda) / 2.0);
        }
    }
    Ok(boundaries)
}
