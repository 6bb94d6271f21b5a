//! Error type shared by every fallible operation in the crate.
//!
//! Variants carry enough context to be actionable from a command line: indices,
//! expected shapes, and offending values. Operations that are total for valid
//! inputs (lattice enumeration, payoff lookups) validate with panics instead and
//! document that contract on the method.

/// Everything that can go wrong while building or analyzing an economy.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An economy needs at least one agent.
    #[error("an economy needs at least one agent")]
    NoAgents,
    /// Every agent needs at least one action.
    #[error("agent {agent} has an empty action set")]
    EmptyActionSet { agent: usize },
    /// Agent names must be unique and non-empty.
    #[error("agent names must be unique and non-empty (offender: {name:?})")]
    BadAgentName { name: String },
    /// Action labels must be unique within an agent and non-empty.
    #[error("agent {agent} has a duplicate or empty action label (offender: {label:?})")]
    BadActionLabel { agent: usize, label: String },
    /// A profile must list one coordinate per agent.
    #[error("profile has {found} coordinates but the economy has {expected} agents")]
    ProfileLength { found: usize, expected: usize },
    /// A profile coordinate must index into the agent's action set.
    #[error("coordinate {coordinate} of agent {agent} is out of range ({actions} actions)")]
    ActionOutOfRange {
        agent: usize,
        coordinate: usize,
        actions: usize,
    },
    /// The dense surplus table must cover the whole action space.
    #[error("surplus table has {found} entries but the action space has {expected} profiles")]
    SurplusLength { found: usize, expected: usize },
    /// Surplus values must be finite.
    #[error("surplus values must be finite (entry {index} is {value})")]
    NonFiniteSurplus { index: usize, value: f64 },

    /// Shapley-style schemes normalize the reference surplus to zero.
    #[error("this operation requires zero surplus at the reference profile (found {found})")]
    ReferenceSurplusNonzero { found: f64 },
    /// Mixing weights live in the unit interval.
    #[error("alpha must lie in [0, 1] (found {found})")]
    AlphaOutOfRange { found: f64 },
    /// A custom pay table must cover the whole action space.
    #[error("pay table has {found} rows but the action space has {expected} profiles")]
    PayTableLength { found: usize, expected: usize },
    /// Each pay-table row pays every agent.
    #[error("pay table row {index} has {found} entries but the economy has {expected} agents")]
    PayRowLength {
        index: usize,
        found: usize,
        expected: usize,
    },
    /// Pay values must be finite.
    #[error("pay values must be finite (profile index {index}, agent {agent})")]
    NonFinitePay { index: usize, agent: usize },

    /// A cost table lists one row per agent.
    #[error("cost table has {found} rows but the economy has {expected} agents")]
    CostTableLength { found: usize, expected: usize },
    /// Each cost row prices every action of its agent.
    #[error("agent {agent} has {found} cost entries but {expected} actions")]
    CostRowLength {
        agent: usize,
        found: usize,
        expected: usize,
    },
    /// Costs must be finite.
    #[error("cost values must be finite (agent {agent}, action {action})")]
    NonFiniteCost { agent: usize, action: usize },
    /// Costs must be non-negative deductions.
    #[error("costs must be non-negative (agent {agent}, action {action} has {value})")]
    NegativeCost {
        agent: usize,
        action: usize,
        value: f64,
    },
    /// Staying at the reference action must cost nothing.
    #[error("agent {agent} is charged {found} for the reference action, which must be free")]
    ReferenceCostNonzero { agent: usize, found: f64 },
    /// Game construction refuses to start work beyond the term budget.
    #[error("building this game needs ~{required:.3e} weighted-sum terms, above the cap of {cap:.3e}")]
    SizeLimit { required: f64, cap: f64 },
    /// Only scheme-generated games carry an exact potential.
    #[error("exact potentials exist only for scheme-generated games, not custom pay tables")]
    NotSchemeGenerated,
    /// Best-response dynamics hit the step watchdog.
    #[error("best-response dynamics exceeded the {cap}-step watchdog without converging")]
    NonConvergent { cap: usize },
    /// Deviation cycles need at least two profiles.
    #[error("a deviation cycle needs at least two profiles (found {found})")]
    CycleTooShort { found: usize },
    /// Each cycle step must move exactly its deviator's coordinate.
    #[error("cycle step {step} does not move exactly the deviator's coordinate")]
    CycleStepInvalid { step: usize },

    /// Sweep grids must be well-formed.
    #[error("grid step must be positive and the grid bounds ordered")]
    BadGrid,
    /// Some results require a non-negative surplus function.
    #[error("this operation requires a non-negative surplus (profile index {index} has {value})")]
    NegativeSurplus { index: usize, value: f64 },
    /// Reference shifting needs somewhere strictly productive to shift to.
    #[error("reference shifting requires a profile with strictly positive surplus (maximum found: {max})")]
    NoPositiveSurplus { max: f64 },
    /// A mathematical invariant the implementation relies on failed at runtime.
    #[error("internal invariant failed: {0}")]
    Invariant(String),

    /// Exhaustive network enumeration is bounded.
    #[error("network enumeration is exhaustive and limited to {max} agents (requested {requested})")]
    TooManyNetworkAgents { requested: usize, max: usize },
    /// Links must join two distinct nodes of the network.
    #[error("link ({a}, {b}) is invalid for a network on {n} nodes")]
    BadLink { a: usize, b: usize, n: usize },
    /// Contagion severity is a non-negative scale.
    #[error("contagion severity must be a non-negative finite number (found {value})")]
    BadSeverity { value: f64 },
    /// A tabulated link-value curve must cover every achievable link count.
    #[error("the link-value table has {found} entries but {needed} links were reached")]
    ShortValueTable { needed: usize, found: usize },

    /// An exchange specification failed validation.
    #[error("exchange spec: {0}")]
    ExchangeSpec(String),

    /// Agent permutations must be bijections mapping active agents to active agents.
    #[error("the permutation must be a bijection mapping active agents to active agents")]
    BadPermutation,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
