//! Writes catalog graphs to graph files and reads them back.
//!
//! ```text
//! cargo run --example graph_files -- [DIR]
//! ```
//! With `DIR`, each graph is written to `DIR/<name>.toml`.

use causal_bandits::admg::{catalog, parse_graph, write_graph};

const NAMES: [&str; 7] = [
    "confounded-example",
    "front-door",
    "cumulative-n6",
    "cumulative-n6-hidden",
    "simple-general-n7",
    "simple-general-n5",
    "parallel-7",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1);
    for name in NAMES {
        let g = catalog::by_name(name).expect("catalog name");
        let text = write_graph(&g);
        let back = parse_graph(&text)?;
        assert_eq!(write_graph(&back), text);
        match &dir {
            Some(dir) => {
                let path =
                    std::path::Path::new(dir).join(format!("{}.toml", name.replace('-', "_")));
                std::fs::write(&path, &text)?;
                println!("wrote {}", path.display());
            }
            None => println!("# {name}\n{text}"),
        }
    }
    Ok(())
}
