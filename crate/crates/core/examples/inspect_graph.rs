//! Structural queries on a confounded graph: c-components, effective
//! parents, backdoor status, identifiability and per-arm reductions.
//!
//! ```text
//! cargo run --example inspect_graph
//! ```

use causal_bandits::admg::{catalog, write_graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = catalog::simple_general_n7();
    let components: Vec<String> = g.c_components().iter().map(|c| g.format_set(c)).collect();
    println!("c-components: {}", components.join(" "));
    for &i in g.intervenable() {
        let (pa, k) = g.component_parents(i)?;
        println!(
            "{}: effective parents {} (k = {k}), open backdoor: {}, identifiable: {}",
            g.name(i),
            g.format_set(&pa),
            g.has_unblocked_backdoor(i)?,
            g.identifiable_sufficient(i)?,
        );
    }
    let x3 = g.node("X3")?;
    println!(
        "\nreduced graph for X3:\n{}",
        write_graph(&g.reduced_graph_for(x3)?)
    );
    Ok(())
}
