//! The `.econ` document format: a JSON file describing one economy, with
//! profiles keyed by agent name → action label so small instances stay
//! human-writable. The loader validates totality (every profile priced
//! exactly once) and names the offending profile in every diagnostic.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use fairsplit::economy::{Economy, Profile};
use fairsplit::scheme::{PayScheme, PayTable};
use fairsplit::EPSILON;

/// A document-content or file-syntax problem: the command line was used with
/// bad input, as opposed to an analysis that ran and failed.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

/// One agent: name, action labels in play order, the reference action, and
/// optionally a per-action cost map (reference action must cost zero;
/// unlisted actions cost zero).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub name: String,
    pub actions: Vec<String>,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<BTreeMap<String, f64>>,
}

/// One surplus table entry: a full profile (every agent named once) and its
/// surplus value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurplusEntry {
    pub profile: BTreeMap<String, String>,
    pub value: f64,
}

/// One custom pay table entry: a full profile and each agent's pay there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayEntry {
    pub profile: BTreeMap<String, String>,
    pub split: BTreeMap<String, f64>,
}

/// The pay scheme a document asks for. `table` points at the document's own
/// `pay` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SchemeDoc {
    Shapley,
    Egalitarian { alpha: f64 },
    Shifted { alpha: f64 },
    Table,
}

/// A complete `.econ` document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyDocument {
    pub agents: Vec<AgentDoc>,
    pub surplus: Vec<SurplusEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pay: Option<Vec<PayEntry>>,
}

/// A document realized into library objects, ready to analyze.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedEconomy {
    pub economy: Economy,
    /// The document's scheme (`shapley` when the document names none), with
    /// `table` already resolved to the custom pay table.
    pub scheme: PayScheme,
    /// Per-agent per-action effort costs, when any agent declares them.
    pub costs: Option<Vec<Vec<f64>>>,
    /// The document's custom pay table, when present.
    pub pay_table: Option<PayTable>,
}

/// Parses document text. `origin` names the source (a path) in diagnostics.
pub fn parse_document(text: &str, origin: &str) -> Result<EconomyDocument> {
    serde_json::from_str(text).map_err(|err| {
        usage(format!(
            "{origin}: line {}, column {}: {err}",
            err.line(),
            err.column()
        ))
    })
}

/// Reads and parses a document file.
pub fn load_document(path: &Path) -> Result<EconomyDocument> {
    let text = fs::read_to_string(path)
        .map_err(|err| usage(format!("cannot read {}: {err}", path.display())))?;
    parse_document(&text, &path.display().to_string())
}

/// Renders a profile map the way documents spell it: `{1: a2, 2: b3}` in
/// agent order.
fn render_profile_map(agents: &[AgentDoc], coords: &[usize]) -> String {
    let parts: Vec<String> = agents
        .iter()
        .zip(coords)
        .map(|(agent, &c)| format!("{}: {}", agent.name, agent.actions[c]))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Resolves one document profile map to coordinates, rejecting missing,
/// unknown, or mislabeled agents by name.
fn profile_coords(agents: &[AgentDoc], map: &BTreeMap<String, String>) -> Result<Vec<usize>> {
    for name in map.keys() {
        if !agents.iter().any(|a| &a.name == name) {
            bail!(usage(format!("profile names unknown agent \"{name}\"")));
        }
    }
    let mut coords = Vec::with_capacity(agents.len());
    for agent in agents {
        let label = map.get(&agent.name).ok_or_else(|| {
            usage(format!(
                "profile is missing agent \"{}\"",
                agent.name
            ))
        })?;
        let coord = agent
            .actions
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| {
                usage(format!(
                    "agent \"{}\" has no action labeled \"{label}\"",
                    agent.name
                ))
            })?;
        coords.push(coord);
    }
    Ok(coords)
}

fn index_of(agents: &[AgentDoc], coords: &[usize]) -> usize {
    let mut idx = 0usize;
    for (agent, &c) in agents.iter().zip(coords) {
        idx = idx * agent.actions.len() + c;
    }
    idx
}

/// Validates a document and realizes it into an [`Economy`], scheme, and
/// optional cost / pay tables. Action order follows the file.
pub fn realize(doc: &EconomyDocument) -> Result<LoadedEconomy> {
    if doc.agents.is_empty() {
        bail!(usage("the document declares no agents"));
    }
    for (i, agent) in doc.agents.iter().enumerate() {
        if agent.name.trim().is_empty() {
            bail!(usage(format!("agent {i} has a blank name")));
        }
        if doc.agents[..i].iter().any(|a| a.name == agent.name) {
            bail!(usage(format!("duplicate agent name \"{}\"", agent.name)));
        }
        if agent.actions.is_empty() {
            bail!(usage(format!("agent \"{}\" lists no actions", agent.name)));
        }
        for (j, label) in agent.actions.iter().enumerate() {
            if label.is_empty() || agent.actions[..j].contains(label) {
                bail!(usage(format!(
                    "agent \"{}\" has a blank or duplicate action label \"{label}\"",
                    agent.name
                )));
            }
        }
        if !agent.actions.contains(&agent.reference) {
            bail!(usage(format!(
                "agent \"{}\" declares reference \"{}\", which is not one of its actions",
                agent.name, agent.reference
            )));
        }
    }

    let n_profiles: usize = doc.agents.iter().map(|a| a.actions.len()).product();

    // Costs: per-action maps, zero by default, zero required at the reference.
    let any_costs = doc.agents.iter().any(|a| a.costs.is_some());
    let costs: Option<Vec<Vec<f64>>> = if any_costs {
        let mut rows = Vec::with_capacity(doc.agents.len());
        for agent in &doc.agents {
            let mut row = vec![0.0; agent.actions.len()];
            if let Some(map) = &agent.costs {
                for (label, &cost) in map {
                    let coord = agent.actions.iter().position(|a| a == label).ok_or_else(
                        || {
                            usage(format!(
                                "agent \"{}\" prices unknown action \"{label}\"",
                                agent.name
                            ))
                        },
                    )?;
                    if !cost.is_finite() || cost < 0.0 {
                        bail!(usage(format!(
                            "agent \"{}\" gives action \"{label}\" a cost of {cost}; \
                             costs must be finite and non-negative",
                            agent.name
                        )));
                    }
                    row[coord] = cost;
                }
            }
            let reference = agent
                .actions
                .iter()
                .position(|a| a == &agent.reference)
                .expect("validated above");
            if row[reference].abs() > EPSILON {
                bail!(usage(format!(
                    "agent \"{}\" prices the reference action \"{}\" at {}; \
                     the reference action must cost zero",
                    agent.name, agent.reference, row[reference]
                )));
            }
            rows.push(row);
        }
        Some(rows)
    } else {
        None
    };

    // Surplus: exactly one entry per profile.
    let mut surplus: Vec<Option<f64>> = vec![None; n_profiles];
    for entry in &doc.surplus {
        let coords = profile_coords(&doc.agents, &entry.profile)?;
        let idx = index_of(&doc.agents, &coords);
        if surplus[idx].is_some() {
            bail!(usage(format!(
                "duplicate surplus entry for {}",
                render_profile_map(&doc.agents, &coords)
            )));
        }
        if !entry.value.is_finite() {
            bail!(usage(format!(
                "surplus at {} is not a finite number",
                render_profile_map(&doc.agents, &coords)
            )));
        }
        surplus[idx] = Some(entry.value);
    }
    let surplus: Vec<f64> = surplus
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            v.ok_or_else(|| {
                usage(format!(
                    "the surplus table is missing an entry for {}",
                    render_profile_map(&doc.agents, &coords_of(&doc.agents, idx))
                ))
            })
        })
        .collect::<Result<_>>()?;

    let economy = Economy::new(
        doc.agents.iter().map(|a| a.name.clone()).collect(),
        doc.agents.iter().map(|a| a.actions.clone()).collect(),
        doc.agents
            .iter()
            .map(|a| {
                a.actions
                    .iter()
                    .position(|x| x == &a.reference)
                    .expect("validated above")
            })
            .collect(),
        surplus,
    )
    .map_err(|err| usage(format!("the document does not form a valid economy: {err}")))?;

    // Custom pay table: same totality discipline as the surplus.
    let pay_table = match &doc.pay {
        None => None,
        Some(entries) => {
            let mut rows: Vec<Option<Vec<f64>>> = vec![None; n_profiles];
            for entry in entries {
                let coords = profile_coords(&doc.agents, &entry.profile)?;
                let idx = index_of(&doc.agents, &coords);
                if rows[idx].is_some() {
                    bail!(usage(format!(
                        "duplicate pay entry for {}",
                        render_profile_map(&doc.agents, &coords)
                    )));
                }
                for name in entry.split.keys() {
                    if !doc.agents.iter().any(|a| &a.name == name) {
                        bail!(usage(format!("pay entry names unknown agent \"{name}\"")));
                    }
                }
                let mut row = Vec::with_capacity(doc.agents.len());
                for agent in &doc.agents {
                    let value = entry.split.get(&agent.name).ok_or_else(|| {
                        usage(format!(
                            "pay entry at {} is missing agent \"{}\"",
                            render_profile_map(&doc.agents, &coords),
                            agent.name
                        ))
                    })?;
                    row.push(*value);
                }
                rows[idx] = Some(row);
            }
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .enumerate()
                .map(|(idx, v)| {
                    v.ok_or_else(|| {
                        usage(format!(
                            "the pay table is missing an entry for {}",
                            render_profile_map(&doc.agents, &coords_of(&doc.agents, idx))
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            Some(
                PayTable::new(&economy, rows)
                    .map_err(|err| usage(format!("invalid pay table: {err}")))?,
            )
        }
    };

    let scheme = match doc.scheme.clone().unwrap_or(SchemeDoc::Shapley) {
        SchemeDoc::Shapley => PayScheme::Shapley,
        SchemeDoc::Egalitarian { alpha } => {
            check_alpha(alpha)?;
            PayScheme::Egalitarian { alpha }
        }
        SchemeDoc::Shifted { alpha } => {
            check_alpha(alpha)?;
            PayScheme::Shifted { alpha }
        }
        SchemeDoc::Table => PayScheme::Custom(pay_table.clone().ok_or_else(|| {
            usage("the scheme is \"table\" but the document has no pay table")
        })?),
    };

    Ok(LoadedEconomy {
        economy,
        scheme,
        costs,
        pay_table,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        bail!(usage(format!("alpha must lie in [0, 1] (found {alpha})")));
    }
    Ok(())
}

fn coords_of(agents: &[AgentDoc], mut idx: usize) -> Vec<usize> {
    let mut coords = vec![0usize; agents.len()];
    for (i, agent) in agents.iter().enumerate().rev() {
        coords[i] = idx % agent.actions.len();
        idx /= agent.actions.len();
    }
    coords
}

/// Loads a document file and realizes it in one step.
pub fn load_economy(path: &Path) -> Result<LoadedEconomy> {
    realize(&load_document(path)?)
}

/// Reconstructs a document from realized objects, entries in profile-index
/// order. `save` of a `load` round-trips exactly.
pub fn to_document(loaded: &LoadedEconomy) -> EconomyDocument {
    let economy = &loaded.economy;
    let names = economy.agent_names();
    let agents: Vec<AgentDoc> = names
        .iter()
        .enumerate()
        .map(|(i, name)| AgentDoc {
            name: name.clone(),
            actions: economy.action_labels(i).to_vec(),
            reference: economy.action_labels(i)[economy.reference()[i]].clone(),
            costs: loaded.costs.as_ref().map(|rows| {
                economy
                    .action_labels(i)
                    .iter()
                    .zip(&rows[i])
                    .map(|(label, &cost)| (label.clone(), cost))
                    .collect()
            }),
        })
        .collect();

    let profile_map = |x: &Profile| -> BTreeMap<String, String> {
        names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), economy.action_labels(i)[x[i]].clone()))
            .collect()
    };

    let surplus = economy
        .profiles()
        .map(|x| SurplusEntry {
            value: economy.surplus(&x).expect("own profile"),
            profile: profile_map(&x),
        })
        .collect();

    let pay = loaded.pay_table.as_ref().map(|table| {
        economy
            .profiles()
            .enumerate()
            .map(|(idx, x)| PayEntry {
                profile: profile_map(&x),
                split: names
                    .iter()
                    .zip(table.row(idx))
                    .map(|(name, &v)| (name.clone(), v))
                    .collect(),
            })
            .collect()
    });

    let scheme = Some(match &loaded.scheme {
        PayScheme::Shapley => SchemeDoc::Shapley,
        PayScheme::Egalitarian { alpha } => SchemeDoc::Egalitarian { alpha: *alpha },
        PayScheme::Shifted { alpha } => SchemeDoc::Shifted { alpha: *alpha },
        PayScheme::Custom(_) => SchemeDoc::Table,
    });

    EconomyDocument {
        agents,
        surplus,
        scheme,
        pay,
    }
}

/// Pretty-prints a document as stable, diff-friendly JSON.
pub fn render_document(doc: &EconomyDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

/// Writes a document to a file.
pub fn save_document(doc: &EconomyDocument, path: &Path) -> Result<()> {
    fs::write(path, render_document(doc))
        .with_context(|| format!("cannot write {}", path.display()))
}
