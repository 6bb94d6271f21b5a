//! `fairsplit` — analyze fair-division economies from `.econ` documents:
//! solve for equilibria, audit pay tables, tabulate potentials, sweep
//! redistribution blends, map network-formation regimes, and regression-run
//! the bundled corpus.
//!
//! Exit codes: 0 success, 1 analysis failure or corpus mismatch, 2 bad usage
//! or unreadable/invalid document, 3 size-cap refusal.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fairsplit::apps::contagion::{lambda_regime_sweep, regime_boundaries};
use fairsplit::equilibrium::{audit_fairness, build_game_with_budget, solve, Violation};
use fairsplit::justice::alpha_sweep;
use fairsplit::scheme::{PayScheme, PayTable};
use fairsplit::DEFAULT_TERM_BUDGET;

use fairsplit_cli::corpus::run_corpus;
use fairsplit_cli::document::{load_economy, LoadedEconomy, UsageError};
use fairsplit_cli::report::{csv, knob, money, money_row, network_links, table};

#[derive(Parser)]
#[command(
    name = "fairsplit",
    version,
    about = "Fair-division economies: equilibria, audits, potentials, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutFormat {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a document's game: equilibria, payoffs, efficiency, potential.
    Solve {
        /// Path to an `.econ` document.
        file: PathBuf,
        /// Override the document's scheme: shapley | egalitarian:<a> |
        /// shifted:<a> | table.
        #[arg(long)]
        scheme: Option<String>,
        /// Refuse economies whose marginal-pay tabulation needs more terms.
        #[arg(long)]
        max_terms: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        out: OutFormat,
    },
    /// Audit a pay split against the fair-division axioms.
    Audit {
        /// Path to an `.econ` document.
        file: PathBuf,
        /// Audit this scheme's tabulation instead of the document's own pay
        /// table (or scheme).
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Tabulate the exact potential of a document's game.
    Potential {
        /// Path to an `.econ` document.
        file: PathBuf,
        /// Override the document's scheme: shapley | egalitarian:<a> |
        /// shifted:<a> | table.
        #[arg(long)]
        scheme: Option<String>,
        /// Refuse economies whose marginal-pay tabulation needs more terms.
        #[arg(long)]
        max_terms: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        out: OutFormat,
    },
    /// Re-solve a document across a grid of redistribution blends.
    AlphaSweep {
        /// Path to an `.econ` document.
        file: PathBuf,
        /// Blend grid as lo:hi:step over [0, 1].
        #[arg(long, default_value = "0:1:0.1")]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
    },
    /// Stable networks of the contagion formation game.
    Network {
        /// Number of agents (2–6).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Solve at a single contagion severity.
        #[arg(long)]
        lambda: Option<f64>,
        /// Sweep severities over lo:hi:step and locate regime boundaries.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        out: OutFormat,
    },
    /// Re-solve every bundled example document against its frozen outcome.
    Corpus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else if matches!(
        err.downcast_ref::<fairsplit::Error>(),
        Some(fairsplit::Error::SizeLimit { .. })
    ) {
        3
    } else {
        1
    }
}

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

/// Parses a `--scheme` flag value; `None` keeps the document's scheme.
fn resolve_scheme(flag: Option<&str>, loaded: &LoadedEconomy) -> Result<PayScheme> {
    let Some(text) = flag else {
        return Ok(loaded.scheme.clone());
    };
    if text == "shapley" {
        return Ok(PayScheme::Shapley);
    }
    if text == "table" {
        return match &loaded.pay_table {
            Some(table) => Ok(PayScheme::Custom(table.clone())),
            None => Err(usage("--scheme table needs a document with a pay table")),
        };
    }
    if let Some((kind, alpha)) = text.split_once(':') {
        let alpha: f64 = alpha
            .parse()
            .map_err(|_| usage(format!("cannot parse blend weight \"{alpha}\"")))?;
        if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            bail!(usage(format!("alpha must lie in [0, 1] (found {alpha})")));
        }
        return match kind {
            "egalitarian" => Ok(PayScheme::Egalitarian { alpha }),
            "shifted" => Ok(PayScheme::Shifted { alpha }),
            _ => Err(usage(format!(
                "unknown scheme \"{kind}\"; use shapley, egalitarian:<a>, shifted:<a>, or table"
            ))),
        };
    }
    Err(usage(format!(
        "unknown scheme \"{text}\"; use shapley, egalitarian:<a>, shifted:<a>, or table"
    )))
}

/// Parses `lo:hi:step` into an inclusive grid, rounding each point to nine
/// decimals so steps like 0.1 print cleanly.
fn parse_grid(text: &str) -> Result<(f64, f64, f64, Vec<f64>)> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        bail!(usage(format!("grid \"{text}\" must look like lo:hi:step")));
    };
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| usage(format!("cannot parse grid number \"{s}\"")))
    };
    let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
    if !lo.is_finite() || !hi.is_finite() || !(step > 0.0) || lo > hi {
        bail!(usage(format!(
            "grid \"{text}\" needs finite lo ≤ hi and step > 0"
        )));
    }
    let mut points = Vec::new();
    let mut k = 0usize;
    loop {
        let value = lo + k as f64 * step;
        if value > hi + 1e-12 {
            break;
        }
        points.push((value * 1e9).round() / 1e9);
        k += 1;
    }
    if points.last().map_or(true, |&last| last < hi - 1e-12) {
        points.push(hi);
    }
    Ok((lo, hi, step, points))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve {
            file,
            scheme,
            max_terms,
            out,
        } => cmd_solve(&file, scheme.as_deref(), max_terms, out),
        Command::Audit { file, scheme } => cmd_audit(&file, scheme.as_deref()),
        Command::Potential {
            file,
            scheme,
            max_terms,
            out,
        } => cmd_potential(&file, scheme.as_deref(), max_terms, out),
        Command::AlphaSweep { file, grid, out } => cmd_alpha_sweep(&file, &grid, out),
        Command::Network {
            n,
            lambda,
            grid,
            out,
        } => cmd_network(n, lambda, grid.as_deref(), out),
        Command::Corpus => {
            let (report, ok) = run_corpus();
            print!("{report}");
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn cmd_solve(
    file: &std::path::Path,
    scheme_flag: Option<&str>,
    max_terms: Option<f64>,
    out: OutFormat,
) -> Result<u8> {
    let loaded = load_economy(file)?;
    let scheme = resolve_scheme(scheme_flag, &loaded)?;
    let game = build_game_with_budget(
        &loaded.economy,
        &scheme,
        loaded.costs.as_deref(),
        max_terms.unwrap_or(DEFAULT_TERM_BUDGET),
    )?;
    let report = solve(&game);

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, x) in report.equilibria.iter().enumerate() {
        let idx = loaded.economy.index(x)?;
        rows.push(vec![
            loaded.economy.render_profile(x),
            money_row(game.utilities(idx)),
            if report.pareto_efficient[i] { "yes" } else { "no" }.to_string(),
            match &report.potential {
                Some(phi) => money(phi[idx]),
                None => "-".to_string(),
            },
        ]);
    }

    match out {
        OutFormat::Csv => print!(
            "{}",
            csv(&["profile", "pay", "efficient", "potential"], &rows)
        ),
        OutFormat::Table => {
            println!("agents: {}", loaded.economy.agent_names().join(", "));
            println!("scheme: {}", scheme.describe());
            if rows.is_empty() {
                println!("no pure equilibrium");
            } else {
                println!(
                    "equilibria: {} of {} profiles",
                    rows.len(),
                    loaded.economy.n_profiles()
                );
                print!(
                    "{}",
                    table(&["profile", "pay", "efficient", "potential"], &rows)
                );
            }
        }
    }
    Ok(0)
}

fn describe_violations(kind: &str, violations: &[Violation], economy: &fairsplit::Economy) -> String {
    if violations.is_empty() {
        format!("{kind}: ok")
    } else {
        let first = &violations[0];
        format!(
            "{kind}: {} violation(s) — first at {}: {}",
            violations.len(),
            economy.render_profile(&first.profile),
            first.detail
        )
    }
}

fn cmd_audit(file: &std::path::Path, scheme_flag: Option<&str>) -> Result<u8> {
    let loaded = load_economy(file)?;
    // Audit the document's own pay table when it has one and no override is
    // given; otherwise tabulate the requested scheme.
    let (label, pay_table) = match (scheme_flag, &loaded.pay_table) {
        (None, Some(table)) => ("custom table".to_string(), table.clone()),
        _ => {
            let scheme = resolve_scheme(scheme_flag, &loaded)?;
            (
                scheme.describe(),
                PayTable::tabulate(&loaded.economy, &scheme)?,
            )
        }
    };
    let audit = audit_fairness(&loaded.economy, &pay_table)?;

    println!("audited split: {label}");
    println!(
        "matches the marginal split: {} (largest gap {})",
        if audit.fair { "yes" } else { "no" },
        money(audit.max_gap)
    );
    println!(
        "{}",
        describe_violations("local efficiency", &audit.efficiency, &loaded.economy)
    );
    println!(
        "{}",
        describe_violations("idle pay", &audit.idle_pay, &loaded.economy)
    );
    println!(
        "{}",
        describe_violations("marginality", &audit.marginality, &loaded.economy)
    );
    println!(
        "{}",
        describe_violations("symmetry", &audit.symmetry, &loaded.economy)
    );
    println!("verdict: {}", if audit.fair { "fair" } else { "unfair" });
    Ok(0)
}

fn cmd_potential(
    file: &std::path::Path,
    scheme_flag: Option<&str>,
    max_terms: Option<f64>,
    out: OutFormat,
) -> Result<u8> {
    let loaded = load_economy(file)?;
    let scheme = resolve_scheme(scheme_flag, &loaded)?;
    let game = build_game_with_budget(
        &loaded.economy,
        &scheme,
        loaded.costs.as_deref(),
        max_terms.unwrap_or(DEFAULT_TERM_BUDGET),
    )?;
    let potential = fairsplit::equilibrium::exact_potential(&game)?;
    let best = potential
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);

    let rows: Vec<Vec<String>> = loaded
        .economy
        .profiles()
        .enumerate()
        .map(|(idx, x)| {
            vec![
                loaded.economy.render_profile(&x),
                money(potential[idx]),
                if (potential[idx] - best).abs() < 1e-9 {
                    "max".to_string()
                } else {
                    String::new()
                },
            ]
        })
        .collect();
    match out {
        OutFormat::Csv => print!("{}", csv(&["profile", "potential", "argmax"], &rows)),
        OutFormat::Table => {
            println!("scheme: {}", scheme.describe());
            print!("{}", table(&["profile", "potential", "argmax"], &rows));
        }
    }
    Ok(0)
}

fn cmd_alpha_sweep(file: &std::path::Path, grid: &str, out: OutFormat) -> Result<u8> {
    let loaded = load_economy(file)?;
    let (lo, hi, _, points) = parse_grid(grid)?;
    if lo < 0.0 || hi > 1.0 {
        bail!(usage(format!("blend grid \"{grid}\" must stay within [0, 1]")));
    }
    let rows = alpha_sweep(&loaded.economy, &points)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                knob(row.alpha),
                row.equilibria
                    .iter()
                    .map(|x| loaded.economy.render_profile(x))
                    .collect::<Vec<_>>()
                    .join(" "),
                if row.any_efficient { "yes" } else { "no" }.to_string(),
                money(row.min_equilibrium_payoff),
            ]
        })
        .collect();
    let header = ["alpha", "equilibria", "any_efficient", "min_payoff"];
    match out {
        OutFormat::Csv => print!("{}", csv(&header, &cells)),
        OutFormat::Table => print!("{}", table(&header, &cells)),
    }
    Ok(0)
}

fn cmd_network(
    n: usize,
    lambda: Option<f64>,
    grid: Option<&str>,
    out: OutFormat,
) -> Result<u8> {
    let lambdas: Vec<f64>;
    let mut boundaries: Option<Vec<f64>> = None;
    match (lambda, grid) {
        (Some(_), Some(_)) => bail!(usage("pass either --lambda or --grid, not both")),
        (None, None) => bail!(usage("pass --lambda <severity> or --grid lo:hi:step")),
        (Some(value), None) => lambdas = vec![value],
        (None, Some(text)) => {
            let (lo, hi, step, points) = parse_grid(text)?;
            lambdas = points;
            boundaries = Some(regime_boundaries(n, lo, hi, step)?);
        }
    }
    let rows = lambda_regime_sweep(n, &lambdas)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                knob(row.lambda),
                format!(
                    "{{{}}}",
                    row.link_counts
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
                row.equilibria
                    .iter()
                    .map(network_links)
                    .collect::<Vec<_>>()
                    .join("; "),
            ]
        })
        .collect();
    let header = ["lambda", "link_classes", "stable_networks"];
    match out {
        OutFormat::Csv => print!("{}", csv(&header, &cells)),
        OutFormat::Table => print!("{}", table(&header, &cells)),
    }
    if let Some(points) = boundaries {
        let rendered: Vec<String> = points.iter().map(|&b| knob(b)).collect();
        match out {
            OutFormat::Csv => println!("boundaries,{}", rendered.join(",")),
            OutFormat::Table => println!("detected boundaries: {}", rendered.join(", ")),
        }
    }
    Ok(0)
}
