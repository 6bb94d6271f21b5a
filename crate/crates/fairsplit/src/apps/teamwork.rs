//! Bonus pools with per-action effort costs.
//!
//! A team produces a joint bonus that depends on every member's chosen
//! effort level, pay is the marginal split of the bonus, and each member
//! privately bears the cost of their own effort. The induced game nets the
//! costs out of the pay, so equilibria balance a member's marginal pay
//! against their marginal effort cost.

use crate::economy::Economy;
use crate::equilibrium::{build_game, Game};
use crate::error::Result;
use crate::scheme::PayScheme;

/// Builds the effort game for a bonus pool: marginal-split pay minus
/// per-action effort costs.
///
/// `costs` lists one row per agent with one non-negative entry per action;
/// the reference action of each agent must be free.
pub fn teamwork_game(economy: &Economy, costs: &[Vec<f64>]) -> Result<Game> {
    build_game(economy, &PayScheme::Shapley, Some(costs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::economy::Profile;
    use crate::equilibrium::{pareto_analysis, pure_nash};

    fn p(coords: &[usize]) -> Profile {
        Profile::new(coords.to_vec())
    }

    #[test]
    fn net_utilities_subtract_effort_costs() {
        let (economy, costs) = catalog::team_bonus();
        let game = teamwork_game(&economy, &costs).unwrap();

        // Gross pay at (second effort, second effort) is (2.5, 5.5); efforts
        // cost 4 each, so both members run a loss there.
        let idx = economy.index(&p(&[1, 1])).unwrap();
        let pay = game.pay(idx);
        assert!((pay[0] - 2.5).abs() < 1e-9 && (pay[1] - 5.5).abs() < 1e-9);
        let net = game.utilities(idx);
        assert!((net[0] + 1.5).abs() < 1e-9 && (net[1] - 1.5).abs() < 1e-9);

        // The reference profile costs nothing and pays nothing.
        let o = economy.index(economy.reference()).unwrap();
        assert_eq!(game.utilities(o), &[0.0, 0.0]);
    }

    #[test]
    fn effort_equilibria_and_their_efficiency() {
        let (economy, costs) = catalog::team_bonus();
        let game = teamwork_game(&economy, &costs).unwrap();

        let equilibria = pure_nash(&game);
        assert_eq!(equilibria, vec![p(&[0, 3]), p(&[3, 2])]);

        let pareto = pareto_analysis(&game);
        for x in &equilibria {
            assert!(
                pareto.efficient[economy.index(x).unwrap()],
                "equilibrium {x:?} should be efficient net of costs"
            );
        }

        let star = economy.index(&p(&[3, 2])).unwrap();
        let net = game.utilities(star);
        assert!((net[0] - 4.5).abs() < 1e-9 && (net[1] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn free_effort_reduces_to_the_plain_game() {
        let (economy, _) = catalog::team_bonus();
        let zero = vec![vec![0.0; 4], vec![0.0; 4]];
        let game = teamwork_game(&economy, &zero).unwrap();
        for idx in 0..economy.n_profiles() {
            assert_eq!(game.pay(idx), game.utilities(idx));
        }
    }
}
