//! Library half of the command-line tool: the `.econ` document format with
//! its loader and saver, deterministic report rendering, and the bundled
//! regression corpus. The binary in `main.rs` is a thin clap wrapper over
//! these pieces.

pub mod corpus;
pub mod document;
pub mod report;

pub use document::{
    load_document, load_economy, parse_document, realize, render_document, save_document,
    to_document, AgentDoc, EconomyDocument, LoadedEconomy, PayEntry, SchemeDoc, SurplusEntry,
    UsageError,
};
