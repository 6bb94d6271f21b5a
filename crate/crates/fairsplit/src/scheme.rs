//! Pay schemes: how realized surplus is split back to the agents.
//!
//! The centerpiece is the weighted marginal-contribution scheme — a
//! multivariate Shapley value. At a profile `x` with active set `A`, agent
//! `i ∈ A` is paid
//!
//! ```text
//! Sh_i(f, x) = Σ_{x' ∈ Δ_o^i(x)}  |x'|! (|A| − |x'| − 1)! / |A|!  ·  [f(x'_{−i}, x_i) − f(x')]
//! ```
//!
//! the average of `i`'s marginal contributions over all orders in which the
//! active agents could have joined the coalition. Inactive agents are paid
//! nothing. Derived schemes:
//!
//! - [`PayScheme::Egalitarian`]: `α·Sh_i + (1−α)·f(x)/n` — a fraction `1−α` of
//!   output is taxed and split equally, the rest paid by contribution.
//! - [`PayScheme::Shifted`]: the same mix after re-anchoring the economy at a
//!   reference profile with surplus `f(o) ≠ 0`; every agent collects an equal
//!   share of the reference surplus on top of the marginal-contribution pay.
//! - [`PayScheme::Custom`]: an arbitrary tabulated split, used to model unfair
//!   schemes and textbook games.
//!
//! [`DividendTable`] holds the surplus function's interaction coefficients
//! (Harsanyi dividends) under the Möbius convention: `f` is the sum of 0/1
//! "threshold" basis functions scaled by the dividends. They give an
//! independent route to the same pay — each coalition's dividend is split
//! equally among its members — which the test-suite uses as an oracle.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::economy::{Economy, Profile, MAX_ACTIVE_AGENTS};
use crate::error::{Error, Result};
use crate::EPSILON;

/// A rule for splitting realized surplus at every profile.
#[derive(Clone, Debug, PartialEq)]
pub enum PayScheme {
    /// Weighted marginal-contribution pay (requires `f(o) = 0`).
    Shapley,
    /// `α`-mix of Shapley pay and equal split (requires `f(o) = 0`).
    Egalitarian { alpha: f64 },
    /// Egalitarian mix re-anchored at a reference with nonzero surplus: pays
    /// `α·[Sh_i(f − f(o), x) + f(o)/n] + (1−α)·f(x)/n`.
    Shifted { alpha: f64 },
    /// An arbitrary tabulated split.
    Custom(PayTable),
}

impl PayScheme {
    /// Human-readable scheme name for reports.
    pub fn describe(&self) -> String {
        match self {
            PayScheme::Shapley => "shapley".to_string(),
            PayScheme::Egalitarian { alpha } => format!("egalitarian(alpha={alpha})"),
            PayScheme::Shifted { alpha } => format!("shifted(alpha={alpha})"),
            PayScheme::Custom(_) => "custom table".to_string(),
        }
    }
}

/// A dense pay table: one row per profile (in index order), one entry per agent.
#[derive(Clone, Debug, PartialEq)]
pub struct PayTable {
    rows: Vec<Vec<f64>>,
}

impl PayTable {
    /// Validates a dense table against an economy's shape.
    pub fn new(economy: &Economy, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != economy.n_profiles() {
            return Err(Error::PayTableLength {
                found: rows.len(),
                expected: economy.n_profiles(),
            });
        }
        for (index, row) in rows.iter().enumerate() {
            if row.len() != economy.n_agents() {
                return Err(Error::PayRowLength {
                    index,
                    found: row.len(),
                    expected: economy.n_agents(),
                });
            }
            if let Some(agent) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinitePay { index, agent });
            }
        }
        Ok(PayTable { rows })
    }

    /// Evaluates any scheme at every profile of the economy.
    pub fn tabulate(economy: &Economy, scheme: &PayScheme) -> Result<Self> {
        if let PayScheme::Custom(table) = scheme {
            if table.rows.len() != economy.n_profiles() {
                return Err(Error::PayTableLength {
                    found: table.rows.len(),
                    expected: economy.n_profiles(),
                });
            }
            return Ok(table.clone());
        }
        let rows = (0..economy.n_profiles())
            .map(|idx| economy.scheme_pay(scheme, &economy.profile(idx)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PayTable { rows })
    }

    /// Pay vector at a profile index.
    pub fn row(&self, index: usize) -> &[f64] {
        &self.rows[index]
    }

    /// All rows in profile-index order.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Interaction coefficients (Harsanyi dividends) of a surplus function, one per
/// profile: the inclusion–exclusion residual of `f` at that profile's active
/// coalition. The reference profile's coefficient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DividendTable {
    coeffs: Vec<f64>,
}

impl DividendTable {
    /// Coefficient at a profile index.
    pub fn coeff(&self, index: usize) -> f64 {
        self.coeffs[index]
    }

    /// All coefficients in profile-index order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Rebuilds `f(x)` as the sum of coefficients over the sub-profile lattice
    /// of `x` — the defining identity of the Möbius convention.
    pub fn reconstruct(&self, economy: &Economy, x: &Profile) -> f64 {
        let lattice = economy.lattice(x);
        let mut total = 0.0;
        for mask in 0..(1u64 << lattice.dim()) {
            total += self.coeffs[lattice.index(mask)];
        }
        total
    }
}

const EXACT_FACTORIALS: usize = 20;

fn factorials() -> &'static [f64; EXACT_FACTORIALS + 1] {
    static TABLE: OnceLock<[f64; EXACT_FACTORIALS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; EXACT_FACTORIALS + 1];
        for k in 1..=EXACT_FACTORIALS {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

fn ln_factorials() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; MAX_ACTIVE_AGENTS + 2];
        for k in 1..t.len() {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// The order-averaging coefficient `k!(m−k−1)!/m!`: the probability that, in a
/// uniformly random join order of `m` active agents, a fixed agent arrives
/// right after a fixed set of `k` others. Exact factorials up to 20 agents,
/// log-space beyond.
pub(crate) fn join_weight(k: usize, m: usize) -> f64 {
    debug_assert!(m >= 1 && k < m);
    if m <= EXACT_FACTORIALS {
        let f = factorials();
        f[k] * f[m - 1 - k] / f[m]
    } else {
        let lnf = ln_factorials();
        (lnf[k] + lnf[m - 1 - k] - lnf[m]).exp()
    }
}

/// Expands a bitmask over `dim − 1` positions into a `dim`-bit mask with a hole
/// (a zero bit) at `pos`.
#[inline]
fn insert_hole(mask: u64, pos: usize) -> u64 {
    let low = mask & ((1u64 << pos) - 1);
    let high = (mask >> pos) << (pos + 1);
    high | low
}

impl Economy {
    fn require_zero_reference(&self) -> Result<()> {
        let found = self.reference_surplus();
        if found.abs() > EPSILON {
            return Err(Error::ReferenceSurplusNonzero { found });
        }
        Ok(())
    }

    fn require_alpha(&self, alpha: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            return Err(Error::AlphaOutOfRange { found: alpha });
        }
        Ok(())
    }

    /// The weighted marginal-contribution sum at `x`, with no normalization
    /// precondition: marginal contributions are differences, so any constant
    /// offset of `f` cancels. Inactive agents get zero.
    pub(crate) fn weighted_marginal_pay(&self, x: &Profile) -> Vec<f64> {
        let lattice = self.lattice(x);
        let dim = lattice.dim();
        let mut pay = vec![0.0; self.n_agents()];
        if dim == 0 {
            return pay;
        }
        for (pos, &agent) in lattice.active.iter().enumerate() {
            let mut total = 0.0;
            for rest in 0..(1u64 << (dim - 1)) {
                let mask = insert_hole(rest, pos);
                let sub = lattice.index(mask);
                let joined = lattice.index(mask | (1u64 << pos));
                let k = mask.count_ones() as usize;
                total += join_weight(k, dim) * (self.surplus_at(joined) - self.surplus_at(sub));
            }
            pay[agent] = total;
        }
        pay
    }

    /// Weighted marginal-contribution pay at `x` (the fair scheme).
    ///
    /// Requires the zero normalization `f(o) = 0`; the pay of every inactive
    /// agent is zero and the active pays sum to `f(x)`.
    pub fn shapley_pay(&self, x: &Profile) -> Result<Vec<f64>> {
        self.require_zero_reference()?;
        self.check_profile(x)?;
        Ok(self.weighted_marginal_pay(x))
    }

    /// The egalitarian mix: `α·Sh_i(f,x) + (1−α)·f(x)/n`.
    ///
    /// At `α = 1` this is exactly [`Economy::shapley_pay`]; at `α = 0` the whole
    /// output is split equally.
    pub fn egalitarian_pay(&self, x: &Profile, alpha: f64) -> Result<Vec<f64>> {
        self.require_zero_reference()?;
        self.require_alpha(alpha)?;
        self.check_profile(x)?;
        let n = self.n_agents() as f64;
        let equal = self.surplus(x)? / n;
        let mut pay = self.weighted_marginal_pay(x);
        for p in &mut pay {
            *p = alpha * *p + (1.0 - alpha) * equal;
        }
        Ok(pay)
    }

    /// The egalitarian mix re-anchored at a reference profile whose surplus may
    /// be nonzero: `α·[Sh_i(f − f(o), x) + f(o)/n] + (1−α)·f(x)/n`.
    ///
    /// Every agent collects an equal share of the reference surplus (the part
    /// of output produced by "doing nothing") on top of marginal-contribution
    /// pay for the rest; at the reference profile everyone gets `f(o)/n`.
    pub fn shifted_pay(&self, x: &Profile, alpha: f64) -> Result<Vec<f64>> {
        self.require_alpha(alpha)?;
        self.check_profile(x)?;
        let n = self.n_agents() as f64;
        let anchor = self.reference_surplus() / n;
        let equal = self.surplus(x)? / n;
        let mut pay = self.weighted_marginal_pay(x);
        for p in &mut pay {
            *p = alpha * (*p + anchor) + (1.0 - alpha) * equal;
        }
        Ok(pay)
    }

    /// Looks up a custom tabulated split at `x`.
    pub fn custom_pay(&self, table: &PayTable, x: &Profile) -> Result<Vec<f64>> {
        if table.rows.len() != self.n_profiles() {
            return Err(Error::PayTableLength {
                found: table.rows.len(),
                expected: self.n_profiles(),
            });
        }
        Ok(table.rows[self.index(x)?].clone())
    }

    /// Evaluates any scheme at one profile.
    pub fn scheme_pay(&self, scheme: &PayScheme, x: &Profile) -> Result<Vec<f64>> {
        match scheme {
            PayScheme::Shapley => self.shapley_pay(x),
            PayScheme::Egalitarian { alpha } => self.egalitarian_pay(x, *alpha),
            PayScheme::Shifted { alpha } => self.shifted_pay(x, *alpha),
            PayScheme::Custom(table) => self.custom_pay(table, x),
        }
    }

    /// Interaction coefficients of the surplus function (Möbius convention):
    /// for every profile `x`, `c_x = Σ_{x' ∈ Δ(x)} (−1)^{|x|−|x'|} f(x')`.
    /// Requires `f(o) = 0`, so the reference coefficient is zero.
    pub fn dividends(&self) -> Result<DividendTable> {
        self.require_zero_reference()?;
        Ok(DividendTable {
            coeffs: self.mobius_coefficients(),
        })
    }

    /// The inclusion–exclusion transform without the normalization check;
    /// the reference profile's coefficient equals `f(o)`.
    pub(crate) fn mobius_coefficients(&self) -> Vec<f64> {
        (0..self.n_profiles())
            .map(|idx| {
                let x = self.profile(idx);
                let lattice = self.lattice(&x);
                let dim = lattice.dim() as u32;
                let mut total = 0.0;
                for mask in 0..(1u64 << lattice.dim()) {
                    let sign = if (dim - mask.count_ones()) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    total += sign * self.surplus_at(lattice.index(mask));
                }
                total
            })
            .collect()
    }

    /// Shapley pay computed from a dividend table: each coalition in the
    /// sub-profile lattice of `x` splits its dividend equally among its
    /// members. Must agree with [`Economy::shapley_pay`] — the test-suite uses
    /// the two routes as mutual oracles.
    pub fn shapley_via_dividends(&self, dividends: &DividendTable, x: &Profile) -> Result<Vec<f64>> {
        if dividends.coeffs.len() != self.n_profiles() {
            return Err(Error::Invariant(
                "dividend table does not match this economy's action space".to_string(),
            ));
        }
        self.check_profile(x)?;
        let lattice = self.lattice(x);
        let mut pay = vec![0.0; self.n_agents()];
        for mask in 1..(1u64 << lattice.dim()) {
            let share = dividends.coeffs[lattice.index(mask)] / mask.count_ones() as f64;
            let mut m = mask;
            while m != 0 {
                let pos = m.trailing_zeros() as usize;
                pay[lattice.active[pos]] += share;
                m &= m - 1;
            }
        }
        Ok(pay)
    }
}

/// Evaluates the weighted marginal-contribution pay from a tabulated
/// *restriction* of a surplus function to a sub-profile lattice, such as the
/// relabeled restrictions produced by [`Economy::permute_surplus`]. The map
/// must contain every sub-profile of `x`; the economy supplies only the shape
/// (agents, reference, action sets).
pub fn shapley_pay_restricted(
    economy: &Economy,
    x: &Profile,
    values: &BTreeMap<Profile, f64>,
) -> Result<Vec<f64>> {
    economy.check_profile(x)?;
    let fetch = |p: &Profile| -> Result<f64> {
        values.get(p).copied().ok_or_else(|| {
            Error::Invariant(format!(
                "restricted surplus is missing {}",
                economy.render_profile(p)
            ))
        })
    };
    let active: Vec<usize> = economy.active_set(x).members().to_vec();
    let dim = active.len();
    let mut pay = vec![0.0; economy.n_agents()];
    if dim == 0 {
        return Ok(pay);
    }
    for (pos, &agent) in active.iter().enumerate() {
        let mut total = 0.0;
        for rest in 0..(1u64 << (dim - 1)) {
            let mask = insert_hole(rest, pos);
            let mut sub = economy.reference().clone();
            let mut m = mask;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                sub = sub.with(active[p], x[active[p]]);
                m &= m - 1;
            }
            let joined = sub.with(agent, x[agent]);
            let k = mask.count_ones() as usize;
            total += join_weight(k, dim) * (fetch(&joined)? - fetch(&sub)?);
        }
        pay[agent] = total;
    }
    Ok(pay)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two agents, actions {a1,a2} × {b1,b2,b3}, surplus rows (0,5,5), (2,4,4).
    fn two_by_three() -> Economy {
        Economy::new(
            vec!["1".into(), "2".into()],
            vec![
                vec!["a1".into(), "a2".into()],
                vec!["b1".into(), "b2".into(), "b3".into()],
            ],
            vec![0, 0],
            vec![0.0, 5.0, 5.0, 2.0, 4.0, 4.0],
        )
        .unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-12, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn join_weights_sum_to_one() {
        // Summed over all join positions the weights are a probability
        // distribution: Σ_{x'⊆A∖i} k!(m−k−1)!/m! = 1.
        for m in 1..=24 {
            let total: f64 = (0..(1u64 << (m - 1)))
                .map(|mask| join_weight(mask.count_ones() as usize, m))
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "m={m}: {total}");
        }
    }

    #[test]
    fn log_space_weights_match_exact() {
        // The log-space fallback agrees with exact factorials where both apply.
        let f = factorials();
        let lnf = ln_factorials();
        for m in 1..=EXACT_FACTORIALS {
            for k in 0..m {
                let exact = f[k] * f[m - 1 - k] / f[m];
                let logged = (lnf[k] + lnf[m - 1 - k] - lnf[m]).exp();
                assert!((exact - logged).abs() <= 1e-12 * exact.max(1e-300));
            }
        }
    }

    #[test]
    fn two_agent_pay_by_hand() {
        let e = two_by_three();
        // At (a2,b2): Sh_1 = ½(f(a2,b1)−f(o)) + ½(f(a2,b2)−f(a1,b2)) = ½·2 − ½·1.
        let pay = e.shapley_pay(&Profile::new(vec![1, 1])).unwrap();
        assert_close(&pay, &[0.5, 3.5]);
        // Inactive agents earn nothing; the single active agent takes everything.
        let pay = e.shapley_pay(&Profile::new(vec![0, 2])).unwrap();
        assert_close(&pay, &[0.0, 5.0]);
        let pay = e.shapley_pay(e.reference()).unwrap();
        assert_close(&pay, &[0.0, 0.0]);
    }

    #[test]
    fn local_efficiency_and_inactivity() {
        let e = two_by_three();
        for x in e.profiles() {
            let pay = e.shapley_pay(&x).unwrap();
            let sum: f64 = pay.iter().sum();
            assert!((sum - e.surplus(&x).unwrap()).abs() < 1e-12);
            for (i, &p) in pay.iter().enumerate() {
                if x[i] == e.reference()[i] {
                    assert_eq!(p, 0.0);
                }
            }
        }
    }

    #[test]
    fn egalitarian_interpolates() {
        let e = two_by_three();
        let x = Profile::new(vec![1, 1]);
        assert_close(
            &e.egalitarian_pay(&x, 1.0).unwrap(),
            &e.shapley_pay(&x).unwrap(),
        );
        assert_close(&e.egalitarian_pay(&x, 0.0).unwrap(), &[2.0, 2.0]);
        let mid = e.egalitarian_pay(&x, 0.5).unwrap();
        assert_close(&mid, &[0.5 * 0.5 + 0.5 * 2.0, 0.5 * 3.5 + 0.5 * 2.0]);
        assert!(matches!(
            e.egalitarian_pay(&x, 1.5),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn shifted_pay_reanchors() {
        // Re-anchor the 2×3 economy at its maximizer (a1,b2): f(o) = 5.
        let e = two_by_three();
        let shifted = Economy::new(
            vec!["1".into(), "2".into()],
            vec![
                vec!["a1".into(), "a2".into()],
                vec!["b1".into(), "b2".into(), "b3".into()],
            ],
            vec![0, 1],
            e.surplus_table().to_vec(),
        )
        .unwrap();
        // At the new reference everyone takes an equal share of f(o).
        let pay = shifted.shifted_pay(shifted.reference(), 1.0).unwrap();
        assert_close(&pay, &[2.5, 2.5]);
        // Local efficiency holds at every profile and every mix.
        for alpha in [0.0, 0.3, 1.0] {
            for x in shifted.profiles() {
                let pay = shifted.shifted_pay(&x, alpha).unwrap();
                let sum: f64 = pay.iter().sum();
                assert!((sum - shifted.surplus(&x).unwrap()).abs() < 1e-12);
            }
        }
        // The plain schemes refuse the nonzero reference.
        assert!(matches!(
            shifted.shapley_pay(shifted.reference()),
            Err(Error::ReferenceSurplusNonzero { .. })
        ));
        assert!(matches!(
            shifted.dividends(),
            Err(Error::ReferenceSurplusNonzero { .. })
        ));
    }

    #[test]
    fn dividends_reconstruct_and_pay() {
        let e = two_by_three();
        let div = e.dividends().unwrap();
        // Reconstruction: f(x) = Σ_{y ∈ Δ(x)} c_y.
        for x in e.profiles() {
            assert!((div.reconstruct(&e, &x) - e.surplus(&x).unwrap()).abs() < 1e-12);
        }
        // Equal-split-of-dividends pay equals the weighted-sum pay.
        for x in e.profiles() {
            assert_close(
                &e.shapley_via_dividends(&div, &x).unwrap(),
                &e.shapley_pay(&x).unwrap(),
            );
        }
        // A pure interaction term: f = 1 exactly on the full profile of a 2×2
        // space has dividend 1 there (and on nothing else).
        let unit = Economy::unlabeled(&[2, 2], vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let div = unit.dividends().unwrap();
        assert_close(div.coeffs(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn restricted_evaluation_matches_direct() {
        let e = two_by_three();
        let x = Profile::new(vec![1, 2]);
        let mut values = BTreeMap::new();
        for y in e.sub_profiles(&x) {
            values.insert(y.clone(), e.surplus(&y).unwrap());
        }
        let direct = e.shapley_pay(&x).unwrap();
        let restricted = shapley_pay_restricted(&e, &x, &values).unwrap();
        assert_close(&restricted, &direct);
    }

    #[test]
    fn custom_table_validation() {
        let e = two_by_three();
        assert!(matches!(
            PayTable::new(&e, vec![vec![0.0, 0.0]; 5]),
            Err(Error::PayTableLength { .. })
        ));
        assert!(matches!(
            PayTable::new(&e, vec![vec![0.0]; 6]),
            Err(Error::PayRowLength { .. })
        ));
        let table = PayTable::new(&e, vec![vec![1.0, 2.0]; 6]).unwrap();
        let pay = e.custom_pay(&table, &Profile::new(vec![0, 0])).unwrap();
        assert_close(&pay, &[1.0, 2.0]);
    }
}
