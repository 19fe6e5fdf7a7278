use std::time::Instant;

use crate::error::{BlowUp, Result, WenoError};

use super::operator::{SpatialOperator, Violation};

/// How the CFL number is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CflRule {
    Fixed(f64),
    /// `cfl = dx^p`, so the temporal error of the third-order integrator
    /// scales like the fifth-order spatial error when `p = 2/3`.
    DxPower(f64),
}

impl CflRule {
    pub fn value(&self, dx: f64) -> f64 {
        match *self {
            CflRule::Fixed(c) => c,
            CflRule::DxPower(p) => dx.powf(p),
        }
    }
}

/// `cfl dx / alpha` in one dimension, `cfl / (alpha_x/dx + alpha_y/dy)` in two.
pub fn compute_dt(alpha: [f64; 2], h: [f64; 2], cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl.is_finite()) {
        return Err(WenoError::Config(format!("cfl must be positive, got {cfl}")));
    }
    if alpha.iter().any(|a| !(*a >= 0.0 && a.is_finite())) || h.iter().any(|x| !(*x > 0.0)) {
        return Err(WenoError::InvalidInput(format!("bad wave speeds {alpha:?} or spacings {h:?}")));
    }
    let rate = alpha[0] / h[0] + alpha[1] / h[1];
    if rate == 0.0 {
        return Err(WenoError::InvalidInput("zero wave speed gives no step size".into()));
    }
    Ok(cfl / rate)
}

/// Stage buffers reused across steps.
#[derive(Debug, Clone, Default)]
pub struct RkWorkspace<const N: usize> {
    rhs: Vec<[f64; N]>,
    u1: Vec<[f64; N]>,
    u2: Vec<[f64; N]>,
}

impl<const N: usize> RkWorkspace<N> {
    pub fn new(len: usize) -> Self {
        Self { rhs: vec![[0.0; N]; len], u1: vec![[0.0; N]; len], u2: vec![[0.0; N]; len] }
    }
}

fn blow_up<O: SpatialOperator<N>, const N: usize>(op: &O, v: Violation, time: f64, stage: u8) -> WenoError {
    WenoError::BlowUp(BlowUp { cell: op.cell_of(v.index), time, step: 0, stage, offense: v.offense, value: v.value })
}

/// One step of the three-stage third-order strong-stability-preserving
/// Runge-Kutta scheme. `speeds` must come from `op.scan(u)`; the speeds of
/// the new solution are returned. Every stage result is checked; a bad one
/// yields [`WenoError::BlowUp`] (with `step = 0`, for the caller to fill in)
/// and leaves `u` untouched.
pub fn ssp_rk3_step<O: SpatialOperator<N>, const N: usize>(
    op: &O,
    u: &mut [[f64; N]],
    speeds: [f64; 2],
    t: f64,
    dt: f64,
    ws: &mut RkWorkspace<N>,
) -> Result<[f64; 2]> {
    let len = u.len();
    if ws.rhs.len() != len {
        *ws = RkWorkspace::new(len);
    }
    let RkWorkspace { rhs, u1, u2 } = ws;

    op.evaluate(u, speeds, t, rhs)?;
    for ((a, u0), l) in u1.iter_mut().zip(u.iter()).zip(rhs.iter()) {
        for m in 0..N {
            a[m] = u0[m] + dt * l[m];
        }
    }
    op.after_stage(u1);
    let s1 = op.scan(u1).map_err(|v| blow_up(op, v, t + dt, 1))?;

    op.evaluate(u1, s1, t + dt, rhs)?;
    for (((b, u0), a), l) in u2.iter_mut().zip(u.iter()).zip(u1.iter()).zip(rhs.iter()) {
        for m in 0..N {
            b[m] = 0.75 * u0[m] + 0.25 * (a[m] + dt * l[m]);
        }
    }
    op.after_stage(u2);
    let s2 = op.scan(u2).map_err(|v| blow_up(op, v, t + 0.5 * dt, 2))?;

    op.evaluate(u2, s2, t + 0.5 * dt, rhs)?;
    // u/3 + 2/3 (u2 + dt L) written as an increment of u, so L = 0 leaves u bitwise unchanged
    for ((a, u0), (b, l)) in u1.iter_mut().zip(u.iter()).zip(u2.iter().zip(rhs.iter())) {
        for m in 0..N {
            a[m] = u0[m] + (2.0 / 3.0) * ((b[m] + dt * l[m]) - u0[m]);
        }
    }
    op.after_stage(u1);
    let s3 = op.scan(u1).map_err(|v| blow_up(op, v, t + dt, 3))?;
    u.copy_from_slice(u1);
    Ok(s3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    pub cfl: CflRule,
    /// Stop after this many steps even if `t_end` is not reached.
    pub max_steps: Option<usize>,
    /// Extra times the step size is clipped to hit; a snapshot is kept at each.
    pub checkpoints: Vec<f64>,
    /// Keep the wall-clock duration of every step.
    pub record_step_times: bool,
}

impl RunConfig {
    pub fn new(t_end: f64, cfl: CflRule) -> Self {
        Self { t_end, cfl, max_steps: None, checkpoints: Vec::new(), record_step_times: false }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(WenoError::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        let c = match self.cfl {
            CflRule::Fixed(c) | CflRule::DxPower(c) => c,
        };
        if !(c > 0.0 && c.is_finite()) {
            return Err(WenoError::Config(format!("bad CFL setting {:?}", self.cfl)));
        }
        if self.checkpoints.iter().any(|t| !(*t > 0.0 && *t <= self.t_end)) {
            return Err(WenoError::Config("checkpoints must lie in (0, t_end]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub steps: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    /// Total wall-clock seconds spent stepping.
    pub wall_seconds: f64,
    /// Per-step wall-clock seconds, if requested.
    pub step_seconds: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome<const N: usize> {
    pub field: Vec<[f64; N]>,
    pub time: f64,
    pub diagnostics: Diagnostics,
    pub snapshots: Vec<(f64, Vec<[f64; N]>)>,
    /// Set when the run stopped early; `field` is then the last good state.
    pub failure: Option<BlowUp>,
}

impl<const N: usize> RunOutcome<N> {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Advances `u0` to `cfg.t_end`. A blow-up ends the run early and is
/// reported in [`RunOutcome::failure`]; other errors propagate.
pub fn run_simulation<O: SpatialOperator<N>, const N: usize>(
    op: &O,
    u0: Vec<[f64; N]>,
    cfg: &RunConfig,
    dx: f64,
) -> Result<RunOutcome<N>> {
    cfg.validate()?;
    if u0.len() != op.len() {
        return Err(WenoError::MeshMismatch(format!("field has {} cells, operator {}", u0.len(), op.len())));
    }
    let cfl = cfg.cfl.value(dx);
    let mut u = u0;
    let mut ws = RkWorkspace::new(u.len());
    let mut diag = Diagnostics { min_dt: f64::INFINITY, ..Default::default() };
    let mut snapshots = Vec::new();
    let mut marks: Vec<f64> = cfg.checkpoints.clone();
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut next_mark = 0;

    let mut t = 0.0;
    let mut speeds = match op.scan(&u) {
        Ok(s) => s,
        Err(v) => {
            let (i, j) = op.cell_of(v.index);
            return Err(WenoError::InvalidInput(format!("initial state: {} ({}) at cell ({i}, {j})", v.offense, v.value)));
        }
    };
    let start = Instant::now();
    let mut failure = None;

    while t < cfg.t_end && cfg.max_steps.is_none_or(|m| diag.steps < m) {
        let mut dt = op.stable_dt(speeds, cfl);
        let target = marks.get(next_mark).copied().unwrap_or(cfg.t_end);
        let hits = t + dt >= target;
        if hits {
            dt = target - t;
        }
        let step_start = Instant::now();
        match ssp_rk3_step(op, &mut u, speeds, t, dt, &mut ws) {
            Ok(s) => speeds = s,
            Err(WenoError::BlowUp(mut b)) => {
                b.step = diag.steps + 1;
                failure = Some(b);
                break;
            }
            Err(e) => return Err(e),
        }
        if cfg.record_step_times {
            diag.step_seconds.push(step_start.elapsed().as_secs_f64());
        }
        diag.steps += 1;
        diag.min_dt = diag.min_dt.min(dt);
        diag.max_dt = diag.max_dt.max(dt);
        if hits {
            t = target;
            if next_mark < marks.len() {
                snapshots.push((t, u.clone()));
                next_mark += 1;
            }
        } else {
            t += dt;
        }
    }
    diag.wall_seconds = start.elapsed().as_secs_f64();
    if diag.steps == 0 {
        diag.min_dt = 0.0;
    }
    Ok(RunOutcome { field: u, time: t, diagnostics: diag, snapshots, failure })
}
