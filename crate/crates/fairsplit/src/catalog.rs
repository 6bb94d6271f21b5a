//! A catalog of small worked economies used across the test suite, the
//! command-line corpus, and the documentation.
//!
//! Every constructor returns a fully specified instance (agents, actions,
//! reference, surplus, and where relevant a pay or cost table) with the
//! conventions used everywhere else in the crate: actions are indexed in
//! label order, the last agent is the fastest-moving digit of the profile
//! index, and the reference profile generates zero surplus unless the
//! economy is deliberately left un-normalized.

use crate::apps::exchange::{ExchangeAgent, ExchangeMode, ExchangeSpec};
use crate::economy::Economy;
use crate::equilibrium::{build_game, Game};
use crate::scheme::{PayScheme, PayTable};

fn economy(
    agents: &[&str],
    actions: &[&[&str]],
    reference: &[usize],
    surplus: &[f64],
) -> Economy {
    Economy::new(
        agents.iter().map(|s| s.to_string()).collect(),
        actions
            .iter()
            .map(|row| row.iter().map(|s| s.to_string()).collect())
            .collect(),
        reference.to_vec(),
        surplus.to_vec(),
    )
    .expect("catalog economies are well-formed")
}

/// Two producers with asymmetric options: the second can contribute through
/// two interchangeable high-value actions, the first through one modest one.
/// Surplus rows (first agent slow, second fast): `[0, 5, 5, 2, 4, 4]`.
pub fn joint_production() -> Economy {
    economy(
        &["1", "2"],
        &[&["a1", "a2"], &["b1", "b2", "b3"]],
        &[0, 0],
        &[0.0, 5.0, 5.0, 2.0, 4.0, 4.0],
    )
}

/// A locally efficient but lopsided split for [`joint_production`]: it hands
/// out the right totals while paying idle agents and ignoring marginal
/// contributions.
pub fn skewed_pay_table(economy: &Economy) -> PayTable {
    PayTable::new(
        economy,
        vec![
            vec![0.0, 0.0],
            vec![2.0, 3.0],
            vec![3.0, 2.0],
            vec![1.0, 1.0],
            vec![3.0, 1.0],
            vec![2.0, 2.0],
        ],
    )
    .expect("table matches the catalog economy")
}

/// A hand-built payoff table whose improvement steps chase each other in a
/// four-step loop, so no pure equilibrium exists. The underlying surplus
/// (row sums `[4, 3, 1, 2]`) is kept for potential-related probes; the pay
/// table is not generated by any scheme.
pub fn cycling_game() -> Game {
    let economy = economy(
        &["1", "2"],
        &[&["c", "d"], &["a", "b"]],
        &[0, 0],
        &[4.0, 3.0, 1.0, 2.0],
    );
    let table = PayTable::new(
        &economy,
        vec![
            vec![0.0, 4.0],
            vec![3.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 2.0],
        ],
    )
    .expect("table matches the catalog economy");
    build_game(&economy, &PayScheme::Custom(table), None)
        .expect("catalog game is well-formed")
}

/// A 3×4 economy whose unique equilibrium under the marginal split is
/// dominated: the surplus maximizers sit off-equilibrium, so it rewards
/// reference-shifting. Surplus rows: `[0, 0, 12, 6 | 13, 0, 2, 1 | 3, 13, 7, 1]`.
pub fn equilibrium_trap() -> Economy {
    economy(
        &["1", "2"],
        &[&["a1", "a2", "a3"], &["b1", "b2", "b3", "b4"]],
        &[0, 0],
        &[
            0.0, 0.0, 12.0, 6.0, //
            13.0, 0.0, 2.0, 1.0, //
            3.0, 13.0, 7.0, 1.0,
        ],
    )
}

/// The minimal coordination economy: surplus `2` appears only when both
/// agents move, so both the reference and the joint move are equilibria.
pub fn coordination() -> Economy {
    economy(
        &["1", "2"],
        &[&["c", "d"], &["a", "b"]],
        &[0, 0],
        &[0.0, 0.0, 0.0, 2.0],
    )
}

/// A strictly increasing 2×2 surplus (`[0, 1, 2, 3]`) paired with a
/// deliberately unfair split. Every action switch changes the surplus, so
/// the strict productivity criterion applies.
pub fn ramp() -> (Economy, PayTable) {
    let e = economy(
        &["1", "2"],
        &[&["a1", "a2"], &["b1", "b2"]],
        &[0, 0],
        &[0.0, 1.0, 2.0, 3.0],
    );
    let unfair = PayTable::new(
        &e,
        vec![
            vec![0.0, 0.0],
            vec![2.0, -1.0],
            vec![2.0, 0.0],
            vec![1.0, 2.0],
        ],
    )
    .expect("table matches the catalog economy");
    (e, unfair)
}

/// Like [`ramp`] but with a flat middle (`[0, 1, 1, 3]`): single moves tie,
/// so only the weak productivity criterion holds.
pub fn plateau() -> (Economy, PayTable) {
    let e = economy(
        &["1", "2"],
        &[&["a1", "a2"], &["b1", "b2"]],
        &[0, 0],
        &[0.0, 1.0, 1.0, 3.0],
    );
    let unfair = PayTable::new(
        &e,
        vec![
            vec![0.0, 0.0],
            vec![2.0, -1.0],
            vec![2.0, -1.0],
            vec![1.0, 2.0],
        ],
    )
    .expect("table matches the catalog economy");
    (e, unfair)
}

/// The classic defection dilemma as a custom-pay game: defecting shifts two
/// units from the other player to oneself while destroying one, so the only
/// equilibrium wastes surplus. Surplus is the payoff total `[0, −1, −1, −2]`.
pub fn prisoners_dilemma() -> Game {
    let economy = economy(
        &["1", "2"],
        &[&["C", "D"], &["C", "D"]],
        &[0, 0],
        &[0.0, -1.0, -1.0, -2.0],
    );
    let table = PayTable::new(
        &economy,
        vec![
            vec![0.0, 0.0],
            vec![-2.0, 1.0],
            vec![1.0, -2.0],
            vec![-1.0, -1.0],
        ],
    )
    .expect("table matches the catalog economy");
    build_game(&economy, &PayScheme::Custom(table), None)
        .expect("catalog game is well-formed")
}

/// A three-agent infrastructure economy at fiscal scale: two active agents
/// choose investment levels while the third only hosts. Used to exercise
/// redistribution mixes on meaningfully large monetary values.
pub fn state_investment() -> Economy {
    economy(
        &["1", "2", "3"],
        &[&["a", "b", "c"], &["a", "b"], &["a"]],
        &[0, 0, 0],
        &[0.0, 41175.5, 41175.5, 82351.0, 45015.5, 86191.0],
    )
}

/// A two-member bonus pool with per-action effort costs. Returns the
/// surplus economy and the cost table (one row per member, reference effort
/// free).
pub fn team_bonus() -> (Economy, Vec<Vec<f64>>) {
    let e = economy(
        &["B", "D"],
        &[&["b1", "b2", "b3", "b4"], &["d1", "d2", "d3", "d4"]],
        &[0, 0],
        &[
            0.0, 5.0, 1.0, 13.0, //
            2.0, 8.0, 10.0, 2.0, //
            5.0, 13.0, 1.0, 13.0, //
            3.0, 9.0, 13.0, 2.0,
        ],
    );
    let costs = vec![vec![0.0, 4.0, 4.0, 3.0], vec![0.0, 4.0, 4.0, 5.0]];
    (e, costs)
}

/// The [`team_bonus`] pool as a ready-made game (marginal split net of
/// effort costs).
pub fn team_bonus_game() -> Game {
    let (e, costs) = team_bonus();
    crate::apps::teamwork::teamwork_game(&e, &costs).expect("catalog game is well-formed")
}

/// Two authors choose how many papers to write together (0–3 each). The
/// surplus is symmetric; the returned pay table splits it with a seniority
/// bias that overpays the second author. Pairs with
/// [`crate::apps::publishing::knowledge_pair`].
pub fn coauthorship() -> (Economy, PayTable) {
    let e = economy(
        &["junior", "senior"],
        &[&["0", "1", "2", "3"], &["0", "1", "2", "3"]],
        &[0, 0],
        &[
            0.0, 10.0, 8.0, 4.0, //
            10.0, 20.0, 14.0, 8.0, //
            8.0, 14.0, 10.0, 8.0, //
            4.0, 8.0, 8.0, 6.0,
        ],
    );
    let biased = PayTable::new(
        &e,
        vec![
            vec![0.0, 0.0],
            vec![0.0, 10.0],
            vec![0.0, 8.0],
            vec![0.0, 4.0],
            vec![5.0, 5.0],
            vec![5.0, 15.0],
            vec![4.0, 10.0],
            vec![2.0, 6.0],
            vec![3.0, 5.0],
            vec![6.0, 8.0],
            vec![1.0, 9.0],
            vec![3.0, 5.0],
            vec![3.0, 1.0],
            vec![4.0, 4.0],
            vec![4.0, 4.0],
            vec![2.0, 4.0],
        ],
    )
    .expect("table matches the catalog economy");
    (e, biased)
}

/// A two-good market where one trader owns a unit of a good they value and
/// the other values only complete pairs: no trade improves on the
/// endowment, so all gains are zero.
pub fn corner_exchange() -> ExchangeSpec {
    let a = ExchangeAgent::with_valuation(
        "A",
        vec![1.0, 0.0],
        vec![vec![1.0, 0.0], vec![0.0, 0.0]],
        |b| b[0] + b[1],
    );
    let b = ExchangeAgent::with_valuation(
        "B",
        vec![2.0, 1.0],
        vec![
            vec![2.0, 1.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![2.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 0.0],
        ],
        |b| b[0].min(b[1]),
    );
    ExchangeSpec::new(2, ExchangeMode::PureExchange, vec![a, b])
}

/// Two identical √-utility traders, one unit each, claims 0–2. Concave
/// utility means no reallocation helps; the only feasible equilibrium is
/// everyone keeping their unit.
pub fn homogeneous_market() -> ExchangeSpec {
    let trader = |name: &str| {
        ExchangeAgent::with_valuation(
            name,
            vec![1.0],
            vec![vec![0.0], vec![1.0], vec![2.0]],
            |b| b[0].sqrt(),
        )
    };
    ExchangeSpec::new(
        1,
        ExchangeMode::PureExchange,
        vec![trader("1"), trader("2")],
    )
}

/// Two traders with convex (increasing-returns) valuations of one good:
/// concentrating the stock on the steeper trader maximizes the gain, and
/// the market's better equilibrium does exactly that.
pub fn heterogeneous_market() -> ExchangeSpec {
    let menu = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
    let flat = ExchangeAgent::with_valuation("1", vec![1.0], menu.clone(), |b| {
        b[0] * b[0] / 2.0
    });
    let steep = ExchangeAgent::with_valuation("2", vec![2.0], menu, |b| b[0] * b[0]);
    ExchangeSpec::new(1, ExchangeMode::TransferableProduction, vec![flat, steep])
}

/// A quantity-offer market reduced to three offers per trader (`a` = keep
/// everything, `b` = offer one unit, `c` = offer both). Each trader owns
/// two units of their good and values the other good more at the margin, so
/// full mutual offering is the unique equilibrium. Built directly as an
/// economy because a trader's final bundle depends on both offers.
pub fn quadratic_exchange() -> Economy {
    let u_a = |x: f64, y: f64| x + 3.0 * y - y * y / 2.0;
    let u_b = |x: f64, y: f64| y + 3.0 * x - x * x / 2.0;
    let mut surplus = Vec::with_capacity(9);
    for offer_a in 0..3 {
        for offer_b in 0..3 {
            let a_bundle = (2.0 - offer_a as f64, offer_b as f64);
            let b_bundle = (offer_a as f64, 2.0 - offer_b as f64);
            surplus.push(
                u_a(a_bundle.0, a_bundle.1) + u_b(b_bundle.0, b_bundle.1)
                    - u_a(2.0, 0.0)
                    - u_b(0.0, 2.0),
            );
        }
    }
    economy(
        &["A", "B"],
        &[&["a", "b", "c"], &["a", "b", "c"]],
        &[0, 0],
        &surplus,
    )
}
