//! Draws an XOR model on a confounded graph, writes it as a model file next
//! to its graph file, and loads it back.
//!
//! ```text
//! cargo run --example model_files
//! ```

use causal_bandits::admg::{catalog, write_graph};
use causal_bandits::scm::{load_model, make_xor_model, write_model, ArmSet};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = catalog::cumulative_n6_hidden();
    let scm = make_xor_model(&g, &mut seed::from_seed(7))?;
    let dir = std::env::temp_dir().join("causal-bandits-model-files");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("graph.toml"), write_graph(&g))?;
    let path = dir.join("model.toml");
    std::fs::write(&path, write_model(&scm, "graph.toml"))?;

    let loaded = load_model(&path)?;
    let arms = ArmSet::for_graph(&g);
    let (before, after) = (scm.oracle_means(&arms)?, loaded.oracle_means(&arms)?);
    println!(
        "wrote {} ({} latents)",
        path.display(),
        loaded.latents().len()
    );
    for (a, arm) in arms.iter().enumerate() {
        println!("{:<10} {:.6} {:.6}", arm.label(&g), before[a], after[a]);
    }
    Ok(())
}
