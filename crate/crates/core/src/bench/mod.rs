//! Benchmark problems, run configuration and file output.

pub mod config;
pub mod problems;
pub mod run;
pub mod vtk;

pub use config::RunConfig;
pub use problems::{builtin_problems, problem_by_name, InflowStrip, PrimitiveState, ProblemKind, ProblemSpec, SideBc, VORTEX_STRENGTHS};
pub use run::{
    briowu_density_error, generate_briowu_reference, run, simulate, simulate_from, strip_profile, sweep, BrioWuReference, RateRow,
    RateTable, RunOutput, SweepOutput,
};
pub use vtk::write_vtk;
