//! Finite-volume discretization: meshes, boundary ghost cells, the WENO
//! spatial operators and SSP-RK3 time stepping.
//!
//! Fields hold interior cells only. Each evaluation of the operator copies
//! one row or column at a time into a padded line buffer, fills its ghost
//! cells, and computes the interface fluxes of that line.

mod boundary;
mod grid;
mod operator;
mod time;

pub use boundary::{Boundary, GhostFn, GhostQuery, GHOSTS};
pub use grid::{Grid1, Grid2, Mask, MIN_CELLS};
pub use operator::{Boundaries2, Operator1, Operator2, PostStage, SpatialOperator, Violation};
pub use time::{compute_dt, run_simulation, ssp_rk3_step, CflRule, Diagnostics, RkWorkspace, RunConfig, RunOutcome};
