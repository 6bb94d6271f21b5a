//! The release gate: nine numbered end-to-end criteria, each printing a
//! single `ACCEPTANCE n (title): PASS — …` or `… FAIL` line (visible under
//! `cargo test --test acceptance -- --nocapture`). Expected values are frozen
//! independently of the library code; several criteria also carry a wall-clock
//! budget asserted with [`std::time::Instant`].

mod common;

use std::time::{Duration, Instant};

use fairsplit::apps::contagion::{lambda_regime_sweep, regime_boundaries};
use fairsplit::apps::exchange::{build_exchange_economy, solve_exchange};
use fairsplit::apps::publishing::knowledge_pair;
use fairsplit::apps::teamwork::teamwork_game;
use fairsplit::catalog;
use fairsplit::economy::Profile;
use fairsplit::equilibrium::{
    build_game, exact_potential, find_deviation_cycle, cycle_excess_sum, pareto_analysis,
    pure_nash, verify_potential,
};
use fairsplit::justice::optimal_reference;
use fairsplit::monotonicity::{check_weak_monotonicity, consequence_report};
use fairsplit::scheme::PayTable;
use fairsplit::{Economy, PayScheme, EPSILON};

/// Prints exactly one line per criterion: PASS on success, FAIL if the test
/// body panics before `pass` is reached.
struct Outcome {
    number: u32,
    title: &'static str,
    done: bool,
}

impl Outcome {
    fn start(number: u32, title: &'static str) -> Self {
        Outcome {
            number,
            title,
            done: false,
        }
    }

    fn pass(mut self, details: String) {
        self.done = true;
        println!(
            "ACCEPTANCE {} ({}): PASS — {}",
            self.number, self.title, details
        );
    }
}

impl Drop for Outcome {
    fn drop(&mut self) {
        if !self.done {
            println!("ACCEPTANCE {} ({}): FAIL", self.number, self.title);
        }
    }
}

fn p(coords: &[usize]) -> Profile {
    Profile::new(coords.to_vec())
}

fn assert_tensor(economy: &Economy, expected: &[[f64; 2]], tol: f64, label: &str) {
    let table = PayTable::tabulate(economy, &PayScheme::Shapley).unwrap();
    assert_eq!(table.rows().len(), expected.len(), "{label}: row count");
    for (idx, want) in expected.iter().enumerate() {
        let got = table.row(idx);
        for agent in 0..2 {
            assert!(
                (got[agent] - want[agent]).abs() < tol,
                "{label}: row {idx} agent {agent}: got {}, want {}",
                got[agent],
                want[agent]
            );
        }
    }
}

/// The full set of wall-clock–budgeted scheme pools used by criteria 5–6.
fn scheme_pool() -> Vec<PayScheme> {
    vec![
        PayScheme::Shapley,
        PayScheme::Egalitarian { alpha: 0.0 },
        PayScheme::Egalitarian { alpha: 0.25 },
        PayScheme::Egalitarian { alpha: 0.5 },
        PayScheme::Egalitarian { alpha: 0.75 },
        PayScheme::Egalitarian { alpha: 1.0 },
    ]
}

const POOL_SEED: u64 = 0xACCE_0005;
const POOL_SIZE: usize = 1_000;

#[test]
fn criterion_1_marginal_pay_tensors() {
    let outcome = Outcome::start(1, "marginal-pay tensors");
    let clock = Instant::now();
    let tol = 1e-9;

    let joint = catalog::joint_production();
    assert_tensor(
        &joint,
        &[
            [0.0, 0.0],
            [0.0, 5.0],
            [0.0, 5.0],
            [2.0, 0.0],
            [0.5, 3.5],
            [0.5, 3.5],
        ],
        tol,
        "joint production",
    );

    let trap = catalog::equilibrium_trap();
    assert_tensor(
        &trap,
        &[
            [0.0, 0.0],
            [0.0, 0.0],
            [0.0, 12.0],
            [0.0, 6.0],
            [13.0, 0.0],
            [6.5, -6.5],
            [1.5, 0.5],
            [4.0, -3.0],
            [3.0, 0.0],
            [8.0, 5.0],
            [-1.0, 8.0],
            [-1.0, 2.0],
        ],
        tol,
        "equilibrium trap",
    );
    // The two named entries: the lone equilibrium and the outcome that
    // dominates it.
    let trap_pay = PayTable::tabulate(&trap, &PayScheme::Shapley).unwrap();
    let at_nash = trap_pay.row(trap.index(&p(&[1, 2])).unwrap());
    assert!((at_nash[0] - 1.5).abs() < tol && (at_nash[1] - 0.5).abs() < tol);
    let at_better = trap_pay.row(trap.index(&p(&[2, 1])).unwrap());
    assert!((at_better[0] - 8.0).abs() < tol && (at_better[1] - 5.0).abs() < tol);

    let (bonus, _costs) = catalog::team_bonus();
    assert_tensor(
        &bonus,
        &[
            [0.0, 0.0],
            [0.0, 5.0],
            [0.0, 1.0],
            [0.0, 13.0],
            [2.0, 0.0],
            [2.5, 5.5],
            [5.5, 4.5],
            [-4.5, 6.5],
            [5.0, 0.0],
            [6.5, 6.5],
            [2.5, -1.5],
            [2.5, 10.5],
            [3.0, 0.0],
            [3.5, 5.5],
            [7.5, 5.5],
            [-4.0, 6.0],
        ],
        tol,
        "team bonus",
    );

    let (papers, _biased) = catalog::coauthorship();
    assert_tensor(
        &papers,
        &[
            [0.0, 0.0],
            [0.0, 10.0],
            [0.0, 8.0],
            [0.0, 4.0],
            [10.0, 0.0],
            [10.0, 10.0],
            [8.0, 6.0],
            [7.0, 1.0],
            [8.0, 0.0],
            [6.0, 8.0],
            [5.0, 5.0],
            [6.0, 2.0],
            [4.0, 0.0],
            [1.0, 7.0],
            [2.0, 6.0],
            [3.0, 3.0],
        ],
        tol,
        "coauthorship",
    );

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "budget exceeded: {elapsed:?}"
    );
    outcome.pass(format!(
        "4 pay tensors (50 profiles) entrywise within 1e-9 in {elapsed:?}"
    ));
}

#[test]
fn criterion_2_equilibrium_sets() {
    let outcome = Outcome::start(2, "equilibrium sets");
    let clock = Instant::now();

    // Joint production, marginal split: two equilibria.
    let joint = catalog::joint_production();
    let fair = build_game(&joint, &PayScheme::Shapley, None).unwrap();
    assert_eq!(pure_nash(&fair), vec![p(&[1, 1]), p(&[1, 2])]);

    // Same economy under the skewed table: the improvement chase never stops.
    let skewed = catalog::skewed_pay_table(&joint);
    let unfair = build_game(&joint, &PayScheme::Custom(skewed), None).unwrap();
    assert!(pure_nash(&unfair).is_empty());

    // The trap: a unique equilibrium that both agents would rather replace.
    let trap = catalog::equilibrium_trap();
    let trap_game = build_game(&trap, &PayScheme::Shapley, None).unwrap();
    assert_eq!(pure_nash(&trap_game), vec![p(&[1, 2])]);
    let trap_pareto = pareto_analysis(&trap_game);
    let nash_idx = trap.index(&p(&[1, 2])).unwrap();
    let better_idx = trap.index(&p(&[2, 1])).unwrap();
    assert!(!trap_pareto.efficient[nash_idx]);
    assert_eq!(trap_pareto.dominator[nash_idx], Some(better_idx));

    // Costly effort: two equilibria, both Pareto-efficient in net utilities.
    let (bonus, costs) = catalog::team_bonus();
    let team = teamwork_game(&bonus, &costs).unwrap();
    let team_nash = pure_nash(&team);
    assert_eq!(team_nash, vec![p(&[0, 3]), p(&[3, 2])]);
    let team_pareto = pareto_analysis(&team);
    for profile in &team_nash {
        assert!(team_pareto.efficient[bonus.index(profile).unwrap()]);
    }

    // Coauthorship: the biased split locks in (3,2); the marginal split
    // moves the equilibrium to (1,1).
    let (papers, biased) = catalog::coauthorship();
    let (biased_game, fair_game) = knowledge_pair(&papers, &biased).unwrap();
    assert_eq!(pure_nash(&biased_game), vec![p(&[3, 2])]);
    assert_eq!(pure_nash(&fair_game), vec![p(&[1, 1])]);

    // The defect–defect trap of the classic dilemma is not efficient.
    let dilemma = catalog::prisoners_dilemma();
    assert_eq!(pure_nash(&dilemma), vec![p(&[1, 1])]);
    let dd = dilemma.economy().index(&p(&[1, 1])).unwrap();
    assert!(!pareto_analysis(&dilemma).efficient[dd]);

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "budget exceeded: {elapsed:?}"
    );
    outcome.pass(format!(
        "6 equilibrium sets match frozen profiles exactly in {elapsed:?}"
    ));
}

#[test]
fn criterion_3_redistribution_mix() {
    let outcome = Outcome::start(3, "redistribution mix");
    let economy = catalog::state_investment();
    let top = p(&[2, 1, 0]);

    let pay = economy.egalitarian_pay(&top, 0.8).unwrap();
    let expected = [41_758.5, 38_686.5, 5_746.0];
    for (agent, want) in expected.iter().enumerate() {
        assert!(
            (pay[agent] - want).abs() <= 0.1,
            "agent {agent}: got {}, want {want} ± 0.1",
            pay[agent]
        );
    }

    for alpha in [1.0, 0.8] {
        let game = build_game(&economy, &PayScheme::Egalitarian { alpha }, None).unwrap();
        assert_eq!(
            pure_nash(&game),
            vec![top.clone()],
            "unique equilibrium at alpha={alpha}"
        );
    }

    outcome.pass(format!(
        "four-fifths blend pays ({:.1}, {:.1}, {:.1}); top profile is the unique \
         equilibrium at both blends",
        pay[0], pay[1], pay[2]
    ));
}

#[test]
fn criterion_4_network_severity_regimes() {
    let outcome = Outcome::start(4, "network severity regimes");
    let clock = Instant::now();

    let rows = lambda_regime_sweep(3, &[1.0, 2.0, 2.7, 5.0]).unwrap();
    let got: Vec<Vec<usize>> = rows.into_iter().map(|r| r.link_counts).collect();
    assert_eq!(
        got,
        vec![vec![3], vec![1, 3], vec![1], vec![0]],
        "stable link-class sets across the four severity levels"
    );

    // Locate the three transition points by a fine sweep. A boundary landing
    // exactly on a grid point shows up as two midpoints straddling it, so the
    // check is two-way set coverage rather than an exact count.
    let boundaries = regime_boundaries(3, 0.5, 5.0, 0.005).unwrap();
    let expected = [
        1.8 * 2.0_f64.sqrt() - 0.9, // one-link networks stabilize
        1.5 * 3.0_f64.sqrt(),       // the complete network destabilizes
        4.5,                        // the empty network stabilizes
    ];
    for want in expected {
        assert!(
            boundaries.iter().any(|b| (b - want).abs() <= 0.01),
            "no detected boundary within 0.01 of {want}; got {boundaries:?}"
        );
    }
    for found in &boundaries {
        assert!(
            expected.iter().any(|want| (found - want).abs() <= 0.01),
            "spurious boundary {found}; expected near one of {expected:?}"
        );
    }

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "budget exceeded: {elapsed:?}"
    );
    outcome.pass(format!(
        "link-class regimes {{3}}, {{1,3}}, {{1}}, {{0}}; all 3 boundaries within \
         ±0.01 in {elapsed:?}"
    ));
}

#[test]
fn criterion_5_equilibrium_existence_and_potentials() {
    let outcome = Outcome::start(5, "equilibrium existence and potentials");
    let clock = Instant::now();
    let schemes = scheme_pool();

    let mut pool = common::rng(POOL_SEED);
    let mut chains = common::rng(0xC4A1_0005);
    let mut games = 0usize;
    for _ in 0..POOL_SIZE {
        let economy = common::random_economy(&mut pool);
        for scheme in &schemes {
            let game = build_game(&economy, scheme, None).unwrap();
            games += 1;

            assert!(
                !pure_nash(&game).is_empty(),
                "no pure equilibrium under {}",
                scheme.describe()
            );

            // The strict-improvement digraph must be acyclic: any cycle of
            // length ≤ 6 would have a positive excess sum.
            assert!(
                find_deviation_cycle(&game, 6).is_none(),
                "found a strict-improvement cycle under {}",
                scheme.describe()
            );

            // Sampled closed unilateral chains all total zero.
            let (profiles, deviators) = common::back_and_forth_chain(&economy, &mut chains);
            assert!(cycle_excess_sum(&game, &profiles, &deviators).unwrap().abs() <= 1e-6);
            let (profiles, deviators) = common::square_chain(&economy, &mut chains);
            assert!(cycle_excess_sum(&game, &profiles, &deviators).unwrap().abs() <= 1e-6);
            if let Some((profiles, deviators)) = common::hex_chain(&economy, &mut chains) {
                assert!(cycle_excess_sum(&game, &profiles, &deviators).unwrap().abs() <= 1e-6);
            }

            // The closed-form potential reproduces every unilateral utility
            // difference.
            let potential = exact_potential(&game).unwrap();
            let check = verify_potential(&game, &potential);
            assert!(
                check.max_gap <= 1e-6,
                "potential identity off by {} under {}",
                check.max_gap,
                scheme.describe()
            );
        }
    }

    let elapsed = clock.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "budget exceeded: {elapsed:?}"
    );
    outcome.pass(format!(
        "{games} games over {POOL_SIZE} random economies: equilibria exist, \
         improvement digraphs acyclic, chains and potentials within 1e-6 in {elapsed:?}"
    ));
}

#[test]
fn criterion_6_interaction_coefficient_equivalence() {
    let outcome = Outcome::start(6, "interaction-coefficient equivalence");
    let tol = 1e-8;

    // The same pool as criterion 5, regenerated from the same seed.
    let mut pool = common::rng(POOL_SEED);
    let mut profiles_checked = 0usize;
    for _ in 0..POOL_SIZE {
        let economy = common::random_economy(&mut pool);
        let dividends = economy.dividends().unwrap();
        for idx in 0..economy.n_profiles() {
            let x = economy.profile(idx);
            let direct = economy.shapley_pay(&x).unwrap();
            let via = economy.shapley_via_dividends(&dividends, &x).unwrap();
            for agent in 0..economy.n_agents() {
                assert!(
                    (direct[agent] - via[agent]).abs() < tol,
                    "coefficient route disagrees at profile {idx}, agent {agent}"
                );
            }
            let back = dividends.reconstruct(&economy, &x);
            assert!(
                (back - economy.surplus(&x).unwrap()).abs() < tol,
                "coefficients fail to rebuild the surplus at profile {idx}"
            );
            profiles_checked += 1;
        }
    }

    // Two-action economies, where the weighted sum must equal the classical
    // average marginal contribution over all n! agent orderings.
    let mut rng = common::rng(0xACCE_0006);
    let mut coalition_games = 0usize;
    for n in 2..=6usize {
        for _ in 0..4 {
            use rand::Rng;
            let total = 1usize << n;
            let mut surplus: Vec<f64> = (0..total).map(|_| rng.gen_range(-10.0..10.0)).collect();
            surplus[0] = 0.0;
            let economy = Economy::unlabeled(&vec![2; n], surplus).unwrap();

            let worth = |members: &[bool]| -> f64 {
                let mut idx = 0usize;
                for &m in members {
                    idx = idx * 2 + usize::from(m);
                }
                economy.surplus_at(idx)
            };
            let mut oracle = vec![0.0; n];
            let mut order: Vec<usize> = (0..n).collect();
            let mut count = 0usize;
            // Heap's algorithm over all n! orderings.
            let mut stack = vec![0usize; n];
            let mut accumulate = |order: &[usize]| {
                let mut members = vec![false; n];
                for &agent in order {
                    let before = worth(&members);
                    members[agent] = true;
                    oracle[agent] += worth(&members) - before;
                }
            };
            accumulate(&order);
            count += 1;
            let mut i = 1;
            while i < n {
                if stack[i] < i {
                    if i % 2 == 0 {
                        order.swap(0, i);
                    } else {
                        order.swap(stack[i], i);
                    }
                    accumulate(&order);
                    count += 1;
                    stack[i] += 1;
                    i = 1;
                } else {
                    stack[i] = 0;
                    i += 1;
                }
            }
            for value in &mut oracle {
                *value /= count as f64;
            }

            let pay = economy.shapley_pay(&Profile::new(vec![1; n])).unwrap();
            for agent in 0..n {
                assert!(
                    (pay[agent] - oracle[agent]).abs() < tol,
                    "n={n}: weighted sum and permutation average split at agent {agent}"
                );
            }
            coalition_games += 1;
        }
    }

    outcome.pass(format!(
        "coefficient route ≡ direct pay on {profiles_checked} profiles; surplus \
         rebuilt exactly; permutation oracle matched on {coalition_games} coalition games"
    ));
}

#[test]
fn criterion_7_monotonicity_consequences() {
    let outcome = Outcome::start(7, "monotonicity consequences");

    // Constructed batches make the claims non-vacuous.
    let mut rng = common::rng(0xACCE_0007);
    let mut strict_count = 0usize;
    for _ in 0..200 {
        let economy = common::random_strict_monotone(&mut rng);
        let report = consequence_report(&economy).unwrap();
        assert!(report.verdict.strict, "constructed economy must pass strict");
        assert_eq!(report.equilibria.len(), 1, "strict implies uniqueness");
        let eq_idx = economy.index(&report.equilibria[0]).unwrap();
        assert_eq!(
            eq_idx,
            economy.argmax_surplus(),
            "the unique equilibrium must maximize the surplus"
        );
        assert_eq!(report.strict_consequence, Some(true));
        assert!(report.passed);
        strict_count += 1;
    }

    let mut weak_count = 0usize;
    for _ in 0..200 {
        let economy = common::random_weak_monotone(&mut rng);
        let report = consequence_report(&economy).unwrap();
        assert!(report.verdict.weak, "constructed economy must pass weak");
        assert_eq!(
            report.weak_consequence,
            Some(true),
            "some equilibrium must be Pareto-efficient"
        );
        assert!(report.passed);
        weak_count += 1;
    }

    // Scan the shared random pool: whatever passes a criterion there must
    // honor its consequence too.
    let mut pool = common::rng(POOL_SEED);
    let mut pool_hits = 0usize;
    for _ in 0..POOL_SIZE {
        let economy = common::random_economy(&mut pool);
        let verdict = check_weak_monotonicity(&economy);
        if !verdict.weak {
            continue;
        }
        pool_hits += 1;
        let report = consequence_report(&economy).unwrap();
        assert!(report.passed);
        if verdict.strict {
            assert_eq!(report.equilibria.len(), 1);
            assert_eq!(
                economy.index(&report.equilibria[0]).unwrap(),
                economy.argmax_surplus()
            );
        }
    }

    // Negative controls: monotone surplus under loaded tables — no
    // equilibrium at all.
    for (name, (economy, table)) in [
        ("ramp", catalog::ramp()),
        ("plateau", catalog::plateau()),
    ] {
        let game = build_game(&economy, &PayScheme::Custom(table), None).unwrap();
        assert!(
            pure_nash(&game).is_empty(),
            "the {name} control must have an empty equilibrium set"
        );
    }

    outcome.pass(format!(
        "{strict_count} strict economies each have one surplus-maximizing equilibrium; \
         {weak_count} weak ones each have an efficient equilibrium; {pool_hits} pool \
         hits honored; 2 loaded-table controls have none"
    ));
}

#[test]
fn criterion_8_reference_shift_certificates() {
    let outcome = Outcome::start(8, "reference-shift certificates");

    let mut rng = common::rng(0xACCE_0008);
    let mut certified = 0usize;
    while certified < 100 {
        let economy = common::random_economy(&mut rng);
        if economy.surplus_at(economy.argmax_surplus()) <= EPSILON {
            continue; // nothing to re-anchor on — precondition, not a failure
        }
        for alpha in [0.0, 0.5, 1.0] {
            let shift = optimal_reference(&economy, alpha).unwrap();
            let cert = &shift.certificate;
            assert!(
                cert.is_equilibrium && cert.analytic_bound_ok && cert.efficient && cert.passed,
                "certificate failed at alpha={alpha}: {cert:?}"
            );
            let max = economy.surplus_at(economy.argmax_surplus());
            let per_head = max / economy.n_agents() as f64;
            for pay in &shift.payoffs {
                assert!((pay - per_head).abs() < 1e-8);
            }
        }
        certified += 1;
    }

    outcome.pass(format!(
        "{certified} economies × 3 blends: shifted reference certified as an \
         efficient equilibrium paying the equal share of the maximum"
    ));
}

#[test]
fn criterion_9_exchange_markets() {
    let outcome = Outcome::start(9, "exchange markets");

    // Corner market: no price clears it, yet the fair game has exactly two
    // equilibria.
    let corner = build_exchange_economy(catalog::corner_exchange()).unwrap();
    let report = solve_exchange(&corner, &PayScheme::Shapley).unwrap();
    assert_eq!(report.equilibria, vec![p(&[0, 0]), p(&[0, 1])]);

    // Quadratic market: claiming everything is dominant for both, and the
    // fair split of the stalemate surplus leaves each with utility 2.
    let quadratic = catalog::quadratic_exchange();
    let game = build_game(&quadratic, &PayScheme::Shapley, None).unwrap();
    assert_eq!(pure_nash(&game), vec![p(&[2, 2])]);
    let idx = quadratic.index(&p(&[2, 2])).unwrap();
    assert_eq!(game.utilities(idx), &[2.0, 2.0]);

    // Homogeneous market: the even split is the lone feasible agreement.
    let homogeneous = build_exchange_economy(catalog::homogeneous_market()).unwrap();
    let report = solve_exchange(&homogeneous, &PayScheme::Shapley).unwrap();
    assert_eq!(report.equilibria, vec![p(&[1, 1])]);

    // Heterogeneous market: the surplus-maximizing agreement hands the whole
    // stock to the increasing-returns trader.
    let heterogeneous = build_exchange_economy(catalog::heterogeneous_market()).unwrap();
    let report = solve_exchange(&heterogeneous, &PayScheme::Shapley).unwrap();
    let best = report.best.expect("a best equilibrium exists");
    assert_eq!(report.equilibria[best], p(&[0, 3]));

    outcome.pass(
        "corner market has two fair equilibria; quadratic market ends at (2,2) \
         utilities; homogeneous split (1,1); heterogeneous stock goes to one trader"
            .to_string(),
    );
}
