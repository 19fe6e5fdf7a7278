//! Fifth-order finite-volume WENO schemes for hyperbolic conservation laws.
//!
//! Four nonlinear weightings share one reconstruction: the classic
//! Jiang-Shu weights (WENO-JS), the rational mapping (WENO-M), the
//! piecewise-polynomial mapping (WENO-PM6), and the approximate constant
//! mapping (WENO-ACM), which is as accurate as the other mappings but almost
//! as cheap as WENO-JS because its map is a constant almost everywhere.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: smoothness indicators, weights and mappings;
//! * [`reconstruction`]: scalar and characteristic-wise interface values;
//! * [`euler`]: ideal-gas physics, Roe eigensystems and the Lax-Friedrichs flux;
//! * [`solver`]: meshes, boundaries, the semi-discrete operator, SSP-RK3;
//! * [`problems`]: the benchmark catalog with initial and boundary data;
//! * [`harness`]: convergence, long-time, timing and parameter studies and their I/O.

pub mod error;
pub mod euler;
pub mod harness;
pub mod problems;
pub mod reconstruction;
pub mod solver;
pub mod weights;

pub use error::{BlowUp, Offense, Result, WenoError};
pub use weights::{AcmParams, Scheme, WeightConfig, Weighting};
