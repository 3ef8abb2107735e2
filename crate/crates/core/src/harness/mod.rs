//! Problem registry, convergence and benchmark drivers, reference
//! comparison and file output.

pub mod analysis;
pub mod config;
pub mod exact;
pub mod output;
pub mod problems;

pub use analysis::{
    compare_to_reference, norms, relative_overshoot, restrict, run_convergence, ConvergenceReport,
    ConvergenceRow, Norms,
};
pub use config::{parse_key_values, RunConfig};
pub use exact::{burgers_sine, burgers_sine_2d, RiemannSolution};
pub use output::{format_snapshot, parse_snapshot, read_snapshot, write_atomic, write_run};
pub use problems::{
    exact_averages, exact_point, run_problem, Geometry, Mesh, ProblemId, ProblemInfo, RunOutcome,
    Snapshot,
};
