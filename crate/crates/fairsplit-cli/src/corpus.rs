//! The bundled regression corpus: the example documents shipped with the
//! binary, each paired with its frozen expected outcome. The `corpus`
//! subcommand re-solves every document and compares against these
//! expectations, so a correct build prints all-PASS and exits zero.

use anyhow::Result;

use fairsplit::equilibrium::{build_game, solve};

use crate::document::{parse_document, realize};
use crate::report::{money_row, table};

/// One bundled document with its frozen expected solve outcome.
pub struct CorpusCase {
    pub name: &'static str,
    pub text: &'static str,
    /// Rendered equilibrium profiles, in profile-index order.
    pub equilibria: &'static [&'static str],
    /// Parallel to `equilibria`: Pareto-efficient within the whole game?
    pub efficient: &'static [bool],
    /// Parallel to `equilibria`: money-rendered utility rows.
    pub payoffs: &'static [&'static str],
}

/// Every bundled document and its expectations.
pub fn cases() -> Vec<CorpusCase> {
    vec![
        CorpusCase {
            name: "joint_production",
            text: include_str!("../corpus/joint_production.econ"),
            equilibria: &["(a2,b2)", "(a2,b3)"],
            efficient: &[true, true],
            payoffs: &["(0.5, 3.5)", "(0.5, 3.5)"],
        },
        CorpusCase {
            name: "skewed_split",
            text: include_str!("../corpus/skewed_split.econ"),
            equilibria: &[],
            efficient: &[],
            payoffs: &[],
        },
        CorpusCase {
            name: "equilibrium_trap",
            text: include_str!("../corpus/equilibrium_trap.econ"),
            equilibria: &["(a2,b3)"],
            efficient: &[false],
            payoffs: &["(1.5, 0.5)"],
        },
        CorpusCase {
            name: "team_bonus",
            text: include_str!("../corpus/team_bonus.econ"),
            equilibria: &["(b1,d4)", "(b4,d3)"],
            efficient: &[true, true],
            payoffs: &["(0.0, 8.0)", "(4.5, 1.5)"],
        },
        CorpusCase {
            name: "state_investment",
            text: include_str!("../corpus/state_investment.econ"),
            equilibria: &["(c,b,a)"],
            efficient: &[true],
            payoffs: &["(41758.5, 38686.5, 5746.1)"],
        },
        CorpusCase {
            name: "coauthorship_biased",
            text: include_str!("../corpus/coauthorship_biased.econ"),
            equilibria: &["(3,2)"],
            efficient: &[false],
            payoffs: &["(4.0, 4.0)"],
        },
        CorpusCase {
            name: "coauthorship_fair",
            text: include_str!("../corpus/coauthorship_fair.econ"),
            equilibria: &["(1,1)"],
            efficient: &[true],
            payoffs: &["(10.0, 10.0)"],
        },
        CorpusCase {
            name: "prisoners_dilemma",
            text: include_str!("../corpus/prisoners_dilemma.econ"),
            equilibria: &["(D,D)"],
            efficient: &[false],
            payoffs: &["(-1.0, -1.0)"],
        },
        CorpusCase {
            name: "quadratic_exchange",
            text: include_str!("../corpus/quadratic_exchange.econ"),
            equilibria: &["(c,c)"],
            efficient: &[true],
            payoffs: &["(2.0, 2.0)"],
        },
        CorpusCase {
            name: "ramp",
            text: include_str!("../corpus/ramp.econ"),
            equilibria: &[],
            efficient: &[],
            payoffs: &[],
        },
        CorpusCase {
            name: "plateau",
            text: include_str!("../corpus/plateau.econ"),
            equilibria: &[],
            efficient: &[],
            payoffs: &[],
        },
    ]
}

/// Solves one case and returns the row outcome: `Ok(detail)` or
/// `Err(mismatch description)`.
fn run_case(case: &CorpusCase) -> Result<String> {
    let doc = parse_document(case.text, case.name)?;
    let loaded = realize(&doc)?;
    let game = build_game(
        &loaded.economy,
        &loaded.scheme,
        loaded.costs.as_deref(),
    )?;
    let report = solve(&game);

    let got: Vec<String> = report
        .equilibria
        .iter()
        .map(|x| loaded.economy.render_profile(x))
        .collect();
    let want: Vec<String> = case.equilibria.iter().map(|s| s.to_string()).collect();
    if got != want {
        anyhow::bail!("equilibria {got:?}, expected {want:?}");
    }
    for (i, x) in report.equilibria.iter().enumerate() {
        if report.pareto_efficient[i] != case.efficient[i] {
            anyhow::bail!(
                "{} efficiency {}, expected {}",
                got[i],
                report.pareto_efficient[i],
                case.efficient[i]
            );
        }
        let idx = loaded.economy.index(x)?;
        let pay = money_row(game.utilities(idx));
        if pay != case.payoffs[i] {
            anyhow::bail!("{} pays {pay}, expected {}", got[i], case.payoffs[i]);
        }
    }
    Ok(if got.is_empty() {
        "no pure equilibrium, as expected".to_string()
    } else {
        format!("equilibria {} as expected", got.join(" "))
    })
}

/// Runs the whole corpus. Returns the rendered report and whether every row
/// passed.
pub fn run_corpus() -> (String, bool) {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for case in cases() {
        match run_case(&case) {
            Ok(detail) => rows.push(vec!["PASS".to_string(), case.name.to_string(), detail]),
            Err(err) => {
                all_ok = false;
                rows.push(vec![
                    "FAIL".to_string(),
                    case.name.to_string(),
                    err.to_string(),
                ]);
            }
        }
    }
    let summary = if all_ok {
        format!("{} documents, all PASS\n", rows.len())
    } else {
        format!(
            "{} documents, {} FAILED\n",
            rows.len(),
            rows.iter().filter(|r| r[0] == "FAIL").count()
        )
    };
    let mut out = table(&["result", "document", "detail"], &rows);
    out.push_str(&summary);
    (out, all_ok)
}
