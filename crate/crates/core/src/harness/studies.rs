use crate::error::{BlowUp, Result, WenoError};
use crate::problems::{advection_cell_averages, setup_advection, Equation, Problem, ProblemSpec};
use crate::solver::{run_simulation, CflRule, RunConfig};
use crate::weights::{AcmParams, Scheme, WeightConfig};

use super::norms::{error_norms, observed_order, ErrorNorms};
use super::run::{default_run_config, run_problem};

/// Cell counts on `[-1, 1]` for `h = 0.2, 0.1, ..., 0.00625`.
pub const ACCURACY_MESHES: [usize; 6] = [10, 20, 40, 80, 160, 320];

/// Cell counts for the discontinuous advection test, `h = 0.01, 0.005, 0.0025`.
pub const DISCONTINUOUS_MESHES: [usize; 3] = [200, 400, 800];

/// Output times of the long-time advection study.
pub const LONG_TIMES: [f64; 8] = [1.0, 10.0, 30.0, 50.0, 100.0, 200.0, 500.0, 1000.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// `None` when the run blew up.
    pub norms: Option<ErrorNorms>,
    /// Orders of `(L1, L2, Linf)` against the previous row.
    pub orders: Option<[f64; 3]>,
    pub failure: Option<BlowUp>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub problem: Problem,
    pub scheme: Scheme,
    pub t_end: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn row(&self, n: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn advection_only(spec: &ProblemSpec) -> Result<()> {
    if spec.equation != Equation::Advection {
        return Err(WenoError::InvalidInput(format!("{} has no exact solution", spec.name)));
    }
    Ok(())
}

/// Errors against the exact cell averages on each mesh, and observed orders.
pub fn convergence_study(
    spec: &ProblemSpec,
    weights: &WeightConfig,
    meshes: &[usize],
    t_end: f64,
    cfl: CflRule,
) -> Result<ConvergenceTable> {
    advection_only(spec)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(meshes.len());
    for &n in meshes {
        let run = run_problem(spec, weights, n, 1, &RunConfig::new(t_end, cfl))?;
        let crate::harness::Solution::Scalar { grid, u } = &run.solution else { unreachable!() };
        let h = grid.dx();
        let norms = match run.failure {
            Some(_) => None,
            None => {
                let exact = advection_cell_averages(spec, grid, t_end)?;
                let num: Vec<f64> = u.iter().map(|c| c[0]).collect();
                Some(error_norms(&num, &exact, h)?)
            }
        };
        let orders = match (rows.last(), norms) {
            (Some(prev), Some(cur)) => prev.norms.map(|p| {
                let (a, b) = (p.as_array(), cur.as_array());
                [0, 1, 2].map(|k| observed_order(a[k], b[k], prev.h, h))
            }),
            _ => None,
        };
        rows.push(ConvergenceRow { n, h, norms, orders, failure: run.failure });
    }
    Ok(ConvergenceTable { problem: spec.problem, scheme: weights.scheme, t_end, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongTimeRow {
    pub t: f64,
    pub norms: ErrorNorms,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongTimeStudy {
    pub scheme: Scheme,
    pub n: usize,
    pub rows: Vec<LongTimeRow>,
    pub failure: Option<BlowUp>,
}

/// One run with checkpoints at `times`, errors against exact transport at each.
pub fn long_time_study(spec: &ProblemSpec, weights: &WeightConfig, n: usize, times: &[f64]) -> Result<LongTimeStudy> {
    advection_only(spec)?;
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let (op, u0) = setup_advection(spec, n, weights.prepare()?)?;
    let mut cfg = RunConfig::new(t_end, spec.cfl);
    cfg.checkpoints = times.to_vec();
    let out = run_simulation(&op, u0, &cfg, op.grid.dx())?;
    let mut rows = Vec::new();
    for (t, field) in &out.snapshots {
        let exact = advection_cell_averages(spec, &op.grid, *t)?;
        let num: Vec<f64> = field.iter().map(|c| c[0]).collect();
        rows.push(LongTimeRow { t: *t, norms: error_norms(&num, &exact, op.grid.dx())? });
    }
    Ok(LongTimeStudy { scheme: weights.scheme, n, rows, failure: out.failure })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cfs_fraction: f64,
    pub steps: usize,
    pub time: f64,
    pub failure: Option<BlowUp>,
}

impl SweepRow {
    pub fn blew_up(&self) -> bool {
        self.failure.is_some()
    }
}

/// Runs the problem with WENO-ACM once per `cfs_fraction`, everything else
/// taken from `base`.
pub fn cfs_sweep(spec: &ProblemSpec, base: &AcmParams, fractions: &[f64], n: usize) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(fractions.len());
    for &cfs_fraction in fractions {
        let acm = AcmParams { cfs_fraction, ..*base };
        let weights = WeightConfig::new(Scheme::Acm).with_acm(acm);
        let run = run_problem(spec, &weights, n, spec.mesh.1, &default_run_config(spec))?;
        rows.push(SweepRow { cfs_fraction, steps: run.diagnostics.steps, time: run.time, failure: run.failure });
    }
    Ok(rows)
}
