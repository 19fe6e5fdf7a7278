//! Studies built on the solver: error norms and convergence tables,
//! long-time accuracy, the CFS robustness sweep, per-step timing, and the
//! file formats and configuration they use.

pub mod config;
pub mod invariants;
pub mod io;
mod norms;
mod run;
mod studies;
mod timing;

pub use norms::{error_norms, observed_order, ErrorNorms};
pub use run::{default_run_config, generate_reference, run_problem, ProblemRun, Solution};
pub use studies::{
    cfs_sweep, convergence_study, long_time_study, ConvergenceRow, ConvergenceTable, LongTimeRow, LongTimeStudy,
    SweepRow, ACCURACY_MESHES, DISCONTINUOUS_MESHES, LONG_TIMES,
};
pub use timing::{extra_cost, reduced_cost, timing_study, SchemeTiming, TimingReport, MIN_TIMED_STAGES};
