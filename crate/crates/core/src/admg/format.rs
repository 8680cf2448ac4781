//! Text format for graph files.
//!
//! ```toml
//! nodes = ["Z", "X", "Y:3"]   # optional ":k" sets the domain size (default 2)
//! directed = ["Z->X", "X->Y"]
//! bidirected = ["Z<->Y"]
//! reward = "Y"
//! intervenable = ["X"]        # optional, defaults to every non-reward node
//! ```

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use super::graph::{Admg, NodeId};
use crate::error::{line_column, GraphError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    nodes: Vec<Spanned<String>>,
    #[serde(default)]
    directed: Vec<Spanned<String>>,
    #[serde(default)]
    bidirected: Vec<Spanned<String>>,
    reward: Spanned<String>,
    intervenable: Option<Vec<Spanned<String>>>,
}

fn parse_error(source: &str, span: Range<usize>, message: impl Into<String>) -> GraphError {
    let (line, column) = line_column(source, span.start);
    GraphError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a graph file. Errors carry the line and column of the offending
/// entry.
pub fn parse_graph(source: &str) -> Result<Admg, GraphError> {
    let file: GraphFile = toml::from_str(source).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        parse_error(source, span, e.message().trim().to_string())
    })?;

    let mut names = Vec::with_capacity(file.nodes.len());
    let mut domains = Vec::with_capacity(file.nodes.len());
    for entry in &file.nodes {
        let text = entry.get_ref().trim();
        let (name, size) = match text.split_once(':') {
            Some((name, size)) => {
                let size = size.trim().parse::<usize>().map_err(|_| {
                    parse_error(source, entry.span(), format!("bad domain size in `{text}`"))
                })?;
                (name.trim(), size)
            }
            None => (text, 2),
        };
        if name.is_empty() || name.contains(['-', '<', '>', ' ']) {
            return Err(parse_error(
                source,
                entry.span(),
                format!("invalid node name `{name}`"),
            ));
        }
        if names.iter().any(|n| n == name) {
            return Err(parse_error(
                source,
                entry.span(),
                format!("duplicate node `{name}`"),
            ));
        }
        names.push(name.to_string());
        domains.push(size);
    }

    let lookup = |entry: &Spanned<String>, name: &str| -> Result<NodeId, GraphError> {
        names
            .iter()
            .position(|n| n == name.trim())
            .map(NodeId)
            .ok_or_else(|| {
                parse_error(
                    source,
                    entry.span(),
                    format!("unknown node `{}`", name.trim()),
                )
            })
    };
    let edges =
        |list: &[Spanned<String>], sep: &str| -> Result<Vec<(NodeId, NodeId)>, GraphError> {
            list.iter()
                .map(|entry| {
                    let text = entry.get_ref();
                    let (a, b) = text.split_once(sep).ok_or_else(|| {
                        parse_error(
                            source,
                            entry.span(),
                            format!("expected `A{sep}B`, got `{text}`"),
                        )
                    })?;
                    Ok((lookup(entry, a)?, lookup(entry, b)?))
                })
                .collect()
        };
    // `<->` is checked first so that `A<->B` is never read as a directed edge.
    if let Some(bad) = file.directed.iter().find(|e| e.get_ref().contains("<->")) {
        return Err(parse_error(
            source,
            bad.span(),
            "bidirected edge listed under `directed`",
        ));
    }
    let directed = edges(&file.directed, "->")?;
    let bidirected = edges(&file.bidirected, "<->")?;
    let reward = lookup(&file.reward, file.reward.get_ref())?;
    let intervenable = match &file.intervenable {
        Some(list) => Some(
            list.iter()
                .map(|e| lookup(e, e.get_ref()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    Admg::from_parts(names, domains, &directed, &bidirected, reward, intervenable)
}

/// Serializes a graph in the format accepted by [`parse_graph`].
///
/// Node order is preserved; edge lists are sorted by name so output is
/// deterministic.
pub fn write_graph(g: &Admg) -> String {
    let quote = |s: &str| format!("\"{s}\"");
    let list = |items: Vec<String>| format!("[{}]", items.join(", "));
    let nodes = g
        .nodes()
        .map(|v| match g.domain(v) {
            2 => quote(g.name(v)),
            k => quote(&format!("{}:{k}", g.name(v))),
        })
        .collect();
    let mut directed: Vec<String> = g
        .directed_edges()
        .into_iter()
        .map(|(a, b)| format!("{}->{}", g.name(a), g.name(b)))
        .collect();
    directed.sort();
    let mut bidirected: Vec<String> = g
        .bidirected_edges()
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (g.name(a), g.name(b));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            format!("{a}<->{b}")
        })
        .collect();
    bidirected.sort();
    let mut intervenable: Vec<&str> = g.intervenable().iter().map(|&v| g.name(v)).collect();
    intervenable.sort_unstable();

    let mut out = String::new();
    out.push_str(&format!("nodes = {}\n", list(nodes)));
    out.push_str(&format!(
        "directed = {}\n",
        list(directed.iter().map(|s| quote(s)).collect())
    ));
    out.push_str(&format!(
        "bidirected = {}\n",
        list(bidirected.iter().map(|s| quote(s)).collect())
    ));
    out.push_str(&format!("reward = {}\n", quote(g.name(g.reward()))));
    out.push_str(&format!(
        "intervenable = {}\n",
        list(intervenable.iter().map(|s| quote(s)).collect())
    ));
    out
}
