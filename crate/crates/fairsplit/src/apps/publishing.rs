//! Seniority-biased splits of co-authored output versus marginal pay.
//!
//! Two researchers choose how many papers to co-author. Output is split
//! once by a fixed, seniority-biased table and once by the marginal-split
//! scheme, producing two games over the same surplus whose equilibria can
//! be compared head to head.

use crate::economy::Economy;
use crate::equilibrium::{build_game, Game};
use crate::error::Result;
use crate::scheme::{PayScheme, PayTable};

/// Builds the pair of games induced by one research surplus: the game under
/// a given fixed split `biased`, and the game under the marginal split.
pub fn knowledge_pair(economy: &Economy, biased: &PayTable) -> Result<(Game, Game)> {
    let biased_game = build_game(economy, &PayScheme::Custom(biased.clone()), None)?;
    let fair_game = build_game(economy, &PayScheme::Shapley, None)?;
    Ok((biased_game, fair_game))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::economy::Profile;
    use crate::equilibrium::{audit_fairness, pareto_analysis, pure_nash};

    fn p(coords: &[usize]) -> Profile {
        Profile::new(coords.to_vec())
    }

    #[test]
    fn biased_split_locks_in_a_dominated_outcome() {
        let (economy, biased) = catalog::coauthorship();
        let (biased_game, fair_game) = knowledge_pair(&economy, &biased).unwrap();

        let biased_eq = pure_nash(&biased_game);
        assert_eq!(biased_eq, vec![p(&[3, 2])]);
        let idx = economy.index(&p(&[3, 2])).unwrap();
        assert_eq!(biased_game.utilities(idx), &[4.0, 4.0]);
        let pareto = pareto_analysis(&biased_game);
        assert!(
            !pareto.efficient[idx],
            "the biased equilibrium leaves surplus on the table"
        );
        // Lowest-index dominating profile: one junior paper, (5, 5) ≥ (4, 4).
        assert_eq!(pareto.dominator[idx], Some(economy.index(&p(&[1, 0])).unwrap()));

        let fair_eq = pure_nash(&fair_game);
        assert_eq!(fair_eq, vec![p(&[1, 1])]);
        let star = economy.index(&p(&[1, 1])).unwrap();
        assert_eq!(fair_game.utilities(star), &[10.0, 10.0]);
        assert!(pareto_analysis(&fair_game).efficient[star]);
    }

    #[test]
    fn audits_tell_the_two_splits_apart() {
        let (economy, biased) = catalog::coauthorship();

        let audit = audit_fairness(&economy, &biased).unwrap();
        assert!(!audit.fair);
        assert!(
            !audit.symmetry.is_empty(),
            "interchangeable authors are paid differently"
        );

        let fair_table = PayTable::tabulate(&economy, &PayScheme::Shapley).unwrap();
        let audit = audit_fairness(&economy, &fair_table).unwrap();
        assert!(audit.fair);
        assert!(audit.max_gap < 1e-9);
    }

    #[test]
    fn marginal_pay_mirrors_the_symmetric_surplus() {
        let (economy, _) = catalog::coauthorship();
        let fair_table = PayTable::tabulate(&economy, &PayScheme::Shapley).unwrap();
        // The surplus is symmetric in the two authors, so pay must mirror:
        // author 1 at (q, r) earns what author 2 earns at (r, q).
        for q in 0..4 {
            for r in 0..4 {
                let here = economy.index(&p(&[q, r])).unwrap();
                let there = economy.index(&p(&[r, q])).unwrap();
                let a = fair_table.row(here);
                let b = fair_table.row(there);
                assert!((a[0] - b[1]).abs() < 1e-9 && (a[1] - b[0]).abs() < 1e-9);
            }
        }
    }
}
