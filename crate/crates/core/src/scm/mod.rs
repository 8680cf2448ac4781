//! Discrete structural causal models: sampling, exact oracles and the
//! experiment model generators.

mod arms;
mod file;
mod generators;
mod model;
mod oracle;

pub use arms::{Arm, ArmSet, CostSet};
pub use file::{load_model, parse_model, write_model};
pub use generators::{
    make_parallel_model, make_random_model, make_xor_model, ParallelParams, XOR_FIDELITY,
};
pub use model::{Cpt, LatentVar, Scm, Var, ROW_TOLERANCE};
pub use oracle::{
    argmax, best_arm, integer_costs, optimal_value, optimal_value_table, ratio_optimal_arm,
    STATE_SPACE_CAP,
};
