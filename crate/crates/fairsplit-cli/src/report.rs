//! Deterministic report rendering. Monetary amounts print with one decimal;
//! all orderings are inherited from profile-index order, so identical inputs
//! produce byte-identical output.

use fairsplit::apps::contagion::Network;

/// Formats a monetary amount with one decimal, normalizing `-0.0`.
pub fn money(value: f64) -> String {
    let rounded = (value * 10.0).round() / 10.0;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:.1}")
}

/// Formats a pay or utility vector: `(0.5, 3.5)`.
pub fn money_row(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| money(v)).collect();
    format!("({})", parts.join(", "))
}

/// Formats a blend weight or severity without monetary rounding, trimming
/// trailing zeros: `0.25`, `1`, `2.7`.
pub fn knob(value: f64) -> String {
    let text = format!("{value:.6}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text.is_empty() || text == "-" {
        "0".to_string()
    } else {
        text.to_string()
    }
}

/// Left-aligns `cells` rows under `header` with two-space gutters.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render_row = |cells: &[String]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i + 1 == cells.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
        }
        line
    };
    let mut out = String::new();
    let header_cells: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    out.push_str(&render_row(&header_cells));
    out.push('\n');
    for row in rows {
        out.push_str(&render_row(row));
        out.push('\n');
    }
    out
}

/// Quotes a CSV cell when it contains a comma, quote, or newline.
pub fn csv_cell(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Renders header + rows as CSV.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| csv_cell(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|c| csv_cell(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Renders a network as its link list: `0-1 0-2`, or `(empty)`.
pub fn network_links(network: &Network) -> String {
    let links = network.links();
    if links.is_empty() {
        "(empty)".to_string()
    } else {
        links
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
