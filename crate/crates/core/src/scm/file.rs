//! Text format for model files.
//!
//! ```toml
//! graph = "graphs/front_door.toml"   # relative to this file
//!
//! [[latent]]
//! between = ["X", "Y"]
//! name = "U"                         # optional, default U_<a>_<b>
//! probs = [0.5, 0.5]                 # optional, default uniform binary
//!
//! [[cpt]]
//! node = "X"
//! parents = ["U"]                    # observed parents or latent names
//! rows = [[0.9, 0.1], [0.2, 0.8]]    # first parent most significant
//! ```

use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use super::model::{Cpt, LatentVar, Scm, Var};
use crate::admg::{parse_graph, Admg};
use crate::error::{line_column, GraphError, HarnessError, ModelError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    graph: Spanned<String>,
    #[serde(default)]
    latent: Vec<Spanned<LatentEntry>>,
    #[serde(default)]
    cpt: Vec<Spanned<CptEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatentEntry {
    between: [String; 2],
    name: Option<String>,
    probs: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CptEntry {
    node: String,
    #[serde(default)]
    parents: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn parse_error(source: &str, span: Range<usize>, message: impl Into<String>) -> ModelError {
    let (line, column) = line_column(source, span.start);
    ModelError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a model file whose graph path is resolved against `base_dir`.
pub fn parse_model(source: &str, base_dir: &Path) -> Result<Scm, ModelError> {
    let file: ModelFile = toml::from_str(source).map_err(|e| {
        parse_error(
            source,
            e.span().unwrap_or(0..0),
            e.message().trim().to_string(),
        )
    })?;
    let graph_path = base_dir.join(file.graph.get_ref());
    let graph_source = std::fs::read_to_string(&graph_path).map_err(|e| {
        parse_error(
            source,
            file.graph.span(),
            format!("cannot read graph file {}: {e}", graph_path.display()),
        )
    })?;
    let graph = parse_graph(&graph_source).map_err(|e| match e {
        GraphError::Parse {
            line,
            column,
            message,
        } => ModelError::Parse {
            line,
            column,
            message: format!("in {}: {message}", graph_path.display()),
        },
        other => ModelError::Graph(other),
    })?;
    build_model(source, graph, &file)
}

fn build_model(source: &str, graph: Admg, file: &ModelFile) -> Result<Scm, ModelError> {
    let mut latents = Vec::new();
    for entry in &file.latent {
        let span = entry.span();
        let entry = entry.get_ref();
        let a = graph
            .node(&entry.between[0])
            .map_err(|e| parse_error(source, span.clone(), e.to_string()))?;
        let b = graph
            .node(&entry.between[1])
            .map_err(|e| parse_error(source, span.clone(), e.to_string()))?;
        let name = entry
            .name
            .clone()
            .unwrap_or_else(|| format!("U_{}_{}", entry.between[0], entry.between[1]));
        if graph.node(&name).is_ok() || latents.iter().any(|l: &LatentVar| l.name == name) {
            return Err(parse_error(
                source,
                span,
                format!("latent name `{name}` is taken"),
            ));
        }
        latents.push(LatentVar {
            name,
            between: (a, b),
            probs: entry.probs.clone().unwrap_or_else(|| vec![0.5, 0.5]),
        });
    }

    let mut cpts: Vec<Option<Cpt>> = vec![None; graph.len()];
    for entry in &file.cpt {
        let span = entry.span();
        let entry = entry.get_ref();
        let v = graph
            .node(&entry.node)
            .map_err(|e| parse_error(source, span.clone(), e.to_string()))?;
        let parents = entry
            .parents
            .iter()
            .map(|p| {
                if let Some(l) = latents.iter().position(|l| &l.name == p) {
                    Ok(Var::Latent(l))
                } else {
                    graph
                        .node(p)
                        .map(Var::Observed)
                        .map_err(|e| parse_error(source, span.clone(), e.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if cpts[v.0].is_some() {
            return Err(parse_error(
                source,
                span,
                format!("second table for `{}`", entry.node),
            ));
        }
        cpts[v.0] = Some(Cpt::new(parents, entry.rows.clone()));
    }
    let cpts = graph
        .nodes()
        .zip(cpts)
        .map(|(v, cpt)| {
            cpt.ok_or_else(|| ModelError::InvalidCpt {
                node: graph.name(v).to_string(),
                reason: "missing table".into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Scm::new(graph, latents, cpts)
}

/// Reads and parses a model file.
pub fn load_model(path: &Path) -> Result<Scm, HarnessError> {
    let source = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    Ok(parse_model(&source, base)?)
}

/// Serializes a model, referring to its graph as `graph_path`.
pub fn write_model(scm: &Scm, graph_path: &str) -> String {
    let g = scm.graph();
    let floats = |row: &[f64]| {
        let items: Vec<String> = row.iter().map(|p| format!("{p:?}")).collect();
        format!("[{}]", items.join(", "))
    };
    let mut out = format!("graph = \"{graph_path}\"\n");
    for latent in scm.latents() {
        out.push_str(&format!(
            "\n[[latent]]\nbetween = [\"{}\", \"{}\"]\nname = \"{}\"\nprobs = {}\n",
            g.name(latent.between.0),
            g.name(latent.between.1),
            latent.name,
            floats(&latent.probs)
        ));
    }
    for v in g.nodes() {
        let cpt = scm.cpt(v);
        let parents: Vec<String> = cpt
            .parents()
            .iter()
            .map(|&p| match p {
                Var::Observed(u) => format!("\"{}\"", g.name(u)),
                Var::Latent(l) => format!("\"{}\"", scm.latents()[l].name),
            })
            .collect();
        let rows: Vec<String> = cpt.rows().iter().map(|r| floats(r)).collect();
        out.push_str(&format!(
            "\n[[cpt]]\nnode = \"{}\"\nparents = [{}]\nrows = [{}]\n",
            g.name(v),
            parents.join(", "),
            rows.join(", ")
        ));
    }
    out
}
