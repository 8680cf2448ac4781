//! Named graphs used throughout the experiments and tests.

use super::graph::{Admg, AdmgBuilder};

fn build(builder: AdmgBuilder) -> Admg {
    builder.build().expect("catalog graphs are valid")
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

/// Five-node graph with two c-components, `{X1, X2, X3, X5}` and `{X4}`.
///
/// It has no separate reward variable, so the sink `X1` plays that role and
/// `X2..X5` are intervenable.
pub fn confounded_example() -> Admg {
    let mut b = AdmgBuilder::new().nodes(numbered(5));
    for (from, to) in [
        ("X2", "X4"),
        ("X2", "X3"),
        ("X3", "X5"),
        ("X3", "X1"),
        ("X4", "X5"),
        ("X4", "X1"),
        ("X5", "X1"),
    ] {
        b = b.directed(from, to);
    }
    for (a, c) in [("X2", "X5"), ("X3", "X1"), ("X2", "X1")] {
        b = b.bidirected(a, c);
    }
    build(b.reward("X1"))
}

/// `X1, ..., Xn -> Y` with no confounding.
pub fn parallel(n: usize) -> Admg {
    let mut b = AdmgBuilder::new().nodes(numbered(n)).node("Y");
    for i in 1..=n {
        b = b.directed(format!("X{i}"), "Y");
    }
    build(b.reward("Y"))
}

/// Front-door graph `X -> M -> Y` with `X <-> Y`.
pub fn front_door() -> Admg {
    build(
        AdmgBuilder::new()
            .nodes(["X", "M", "Y"])
            .directed("X", "M")
            .directed("M", "Y")
            .bidirected("X", "Y")
            .reward("Y"),
    )
}

fn with_reward(n: usize, directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Admg {
    let mut b = AdmgBuilder::new().nodes(numbered(n)).node("Y");
    for &(from, to) in directed {
        b = b.directed(from, to);
    }
    for &(a, c) in bidirected {
        b = b.bidirected(a, c);
    }
    build(b.reward("Y"))
}

/// Six-node fully observed graph of the cumulative-regret experiment.
pub fn cumulative_n6() -> Admg {
    with_reward(
        6,
        &[
            ("X1", "X2"),
            ("X1", "X3"),
            ("X2", "X3"),
            ("X2", "X4"),
            ("X3", "X5"),
            ("X3", "X4"),
            ("X4", "X5"),
            ("X4", "X6"),
            ("X5", "X6"),
            ("X6", "Y"),
        ],
        &[],
    )
}

/// Six-node graph of the cumulative-regret experiment with hidden confounders.
pub fn cumulative_n6_hidden() -> Admg {
    with_reward(
        6,
        &[
            ("X1", "X3"),
            ("X2", "X3"),
            ("X2", "X4"),
            ("X3", "X4"),
            ("X3", "X5"),
            ("X3", "X6"),
            ("X4", "X5"),
            ("X5", "X6"),
            ("X6", "Y"),
        ],
        &[("X1", "X2"), ("X4", "X6")],
    )
}

/// Seven-node confounded graph of the simple-regret experiment.
pub fn simple_general_n7() -> Admg {
    with_reward(
        7,
        &[
            ("X1", "X2"),
            ("X1", "X3"),
            ("X2", "X4"),
            ("X2", "X3"),
            ("X3", "X4"),
            ("X3", "X5"),
            ("X3", "X6"),
            ("X4", "X5"),
            ("X4", "X6"),
            ("X5", "X7"),
            ("X6", "X7"),
            ("X7", "Y"),
        ],
        &[("X2", "X5"), ("X2", "X6")],
    )
}

/// Five-node confounded graph of the simple-regret experiment.
pub fn simple_general_n5() -> Admg {
    with_reward(
        5,
        &[
            ("X1", "X3"),
            ("X1", "X4"),
            ("X1", "X2"),
            ("X2", "X3"),
            ("X2", "X4"),
            ("X3", "X5"),
            ("X4", "X5"),
            ("X5", "Y"),
        ],
        &[("X3", "X4")],
    )
}

/// Looks up a catalog graph by name. `parallel-<n>` selects [`parallel`].
pub fn by_name(name: &str) -> Option<Admg> {
    if let Some(n) = name.strip_prefix("parallel-") {
        return n.parse().ok().filter(|&n| n >= 1).map(parallel);
    }
    Some(match name {
        "confounded-example" => confounded_example(),
        "front-door" => front_door(),
        "cumulative-n6" => cumulative_n6(),
        "cumulative-n6-hidden" => cumulative_n6_hidden(),
        "simple-general-n7" => simple_general_n7(),
        "simple-general-n5" => simple_general_n5(),
        _ => return None,
    })
}

/// Names accepted by [`by_name`], with `parallel-<n>` shown as a template.
pub const NAMES: &[&str] = &[
    "confounded-example",
    "front-door",
    "cumulative-n6",
    "cumulative-n6-hidden",
    "simple-general-n7",
    "simple-general-n5",
    "parallel-<n>",
];
