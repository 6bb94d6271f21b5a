//! Shared helpers for the integration suites: seeded random economies,
//! random profiles, and closed unilateral chains.
#![allow(dead_code)]

use fairsplit::{Economy, Profile};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible generator; every suite derives all randomness from one of
/// these so failures replay exactly.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Decodes a profile index into coordinates, last agent fastest.
fn decode(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut coords = vec![0usize; sizes.len()];
    for i in (0..sizes.len()).rev() {
        coords[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    coords
}

/// A random economy: 2–4 agents, 2–4 actions each, surplus uniform in
/// [−10, 10], zero at the all-reference profile.
pub fn random_economy(rng: &mut ChaCha8Rng) -> Economy {
    let n = rng.gen_range(2..=4);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=4)).collect();
    let total: usize = sizes.iter().product();
    let mut surplus: Vec<f64> = (0..total).map(|_| rng.gen_range(-10.0..10.0)).collect();
    surplus[0] = 0.0;
    Economy::unlabeled(&sizes, surplus).expect("random economies are well-formed")
}

/// A random economy whose surplus is additive in strictly increasing
/// per-agent level values. Every single-agent switch then moves the surplus
/// by the same strictly positive amount in every context, and the
/// irrational-looking random increments make cross-profile value collisions
/// vanishingly unlikely — the shape the strict productivity criterion is
/// after.
pub fn random_strict_monotone(rng: &mut ChaCha8Rng) -> Economy {
    let n = rng.gen_range(2..=3);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let levels = increasing_levels(rng, &sizes);
    additive_economy(&sizes, &levels)
}

/// Like [`random_strict_monotone`] but with one per-agent level tied to its
/// predecessor, so switches never hurt but can be worthless: weak
/// productivity without the strict version.
pub fn random_weak_monotone(rng: &mut ChaCha8Rng) -> Economy {
    let n = rng.gen_range(2..=3);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let mut levels = increasing_levels(rng, &sizes);
    // Flatten one step of one agent (the top step, so the maximizing action
    // set grows rather than reordering).
    let agent = rng.gen_range(0..n);
    let k = sizes[agent];
    levels[agent][k - 1] = levels[agent][k - 2];
    additive_economy(&sizes, &levels)
}

fn increasing_levels(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Vec<Vec<f64>> {
    sizes
        .iter()
        .map(|&k| {
            let mut acc = 0.0;
            let mut levels = vec![0.0];
            for _ in 1..k {
                acc += rng.gen_range(0.5..1.5);
                levels.push(acc);
            }
            levels
        })
        .collect()
}

fn additive_economy(sizes: &[usize], levels: &[Vec<f64>]) -> Economy {
    let total: usize = sizes.iter().product();
    let surplus: Vec<f64> = (0..total)
        .map(|idx| {
            decode(sizes, idx)
                .iter()
                .enumerate()
                .map(|(agent, &coord)| levels[agent][coord])
                .sum()
        })
        .collect();
    Economy::unlabeled(sizes, surplus).expect("additive economies are well-formed")
}

/// A uniformly random profile of the economy.
pub fn random_profile(economy: &Economy, rng: &mut ChaCha8Rng) -> Profile {
    let coords = (0..economy.n_agents())
        .map(|i| rng.gen_range(0..economy.n_actions(i)))
        .collect();
    Profile::new(coords)
}

/// A closed two-step chain: one agent moves (possibly lazily) and moves
/// back. Returns `(profiles, deviators)` in the wrap-around convention.
pub fn back_and_forth_chain(
    economy: &Economy,
    rng: &mut ChaCha8Rng,
) -> (Vec<Profile>, Vec<usize>) {
    let x0 = random_profile(economy, rng);
    let agent = rng.gen_range(0..economy.n_agents());
    let x1 = x0.with(agent, rng.gen_range(0..economy.n_actions(agent)));
    (vec![x0, x1], vec![agent, agent])
}

/// A closed four-step chain over two distinct agents: each moves once, then
/// each moves back, in the same order.
pub fn square_chain(economy: &Economy, rng: &mut ChaCha8Rng) -> (Vec<Profile>, Vec<usize>) {
    let x0 = random_profile(economy, rng);
    let i = rng.gen_range(0..economy.n_agents());
    let mut j = rng.gen_range(0..economy.n_agents());
    while j == i {
        j = rng.gen_range(0..economy.n_agents());
    }
    let x1 = x0.with(i, rng.gen_range(0..economy.n_actions(i)));
    let x2 = x1.with(j, rng.gen_range(0..economy.n_actions(j)));
    let x3 = x2.with(i, x0[i]);
    (vec![x0, x1, x2, x3], vec![i, j, i, j])
}

/// A closed six-step chain over three distinct agents (requires n ≥ 3):
/// each moves once, then each moves back, in the same order.
pub fn hex_chain(
    economy: &Economy,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<Profile>, Vec<usize>)> {
    let n = economy.n_agents();
    if n < 3 {
        return None;
    }
    let mut agents: Vec<usize> = (0..n).collect();
    for pos in 0..3 {
        let swap = rng.gen_range(pos..n);
        agents.swap(pos, swap);
    }
    let (i, j, k) = (agents[0], agents[1], agents[2]);
    let x0 = random_profile(economy, rng);
    let x1 = x0.with(i, rng.gen_range(0..economy.n_actions(i)));
    let x2 = x1.with(j, rng.gen_range(0..economy.n_actions(j)));
    let x3 = x2.with(k, rng.gen_range(0..economy.n_actions(k)));
    let x4 = x3.with(i, x0[i]);
    let x5 = x4.with(j, x0[j]);
    Some((
        vec![x0, x1, x2, x3, x4, x5],
        vec![i, j, k, i, j, k],
    ))
}
