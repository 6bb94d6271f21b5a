//! Applied domain builders on top of the core machinery.
//!
//! Each submodule adapts one applied setting to the economy/scheme/game
//! pipeline:
//!
//! - [`teamwork`] — bonus pools with per-action effort costs.
//! - [`contagion`] — agents forming bilateral links that raise output but
//!   spread contagion; pay is the coalition-form marginal split, and the
//!   solution concept is pairwise-Nash stability of the network itself.
//! - [`publishing`] — comparing a seniority-biased split of co-authored
//!   output against marginal pay, on the same surplus.
//! - [`exchange`] — barter economies where actions are consumption claims,
//!   the reference is the endowment, and equilibria must be feasible.

pub mod contagion;
pub mod exchange;
pub mod publishing;
pub mod teamwork;
