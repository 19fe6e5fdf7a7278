use crate::error::{BlowUp, Result, WenoError};
use crate::euler::{cons_to_prim, Primitive};
use crate::problems::{restrict_1d, restrict_2d, setup_advection, setup_euler1d, setup_euler2d, Equation, ProblemSpec, ReferenceRecipe};
use crate::solver::{run_simulation, Diagnostics, Grid1, Grid2, Mask, RunConfig};
use crate::weights::{Scheme, WeightConfig};

/// A field together with its mesh.
#[derive(Debug, Clone)]
pub enum Solution {
    Scalar { grid: Grid1, u: Vec<[f64; 1]> },
    Euler1 { grid: Grid1, u: Vec<[f64; 3]> },
    Euler2 { grid: Grid2, u: Vec<[f64; 4]>, mask: Option<Mask> },
}

impl Solution {
    pub fn cells(&self) -> usize {
        match self {
            Solution::Scalar { u, .. } => u.len(),
            Solution::Euler1 { u, .. } => u.len(),
            Solution::Euler2 { u, .. } => u.len(),
        }
    }

    /// The scalar unknown, or the density for Euler problems.
    pub fn primary(&self) -> Vec<f64> {
        match self {
            Solution::Scalar { u, .. } => u.iter().map(|c| c[0]).collect(),
            Solution::Euler1 { u, .. } => u.iter().map(|c| c[0]).collect(),
            Solution::Euler2 { u, .. } => u.iter().map(|c| c[0]).collect(),
        }
    }

    /// Smallest density and pressure over fluid cells (`None` for advection).
    pub fn min_density_pressure(&self) -> Option<(f64, f64)> {
        let fold = |prims: &mut dyn Iterator<Item = Primitive>| {
            prims.fold((f64::INFINITY, f64::INFINITY), |(r, p), q| (r.min(q.rho), p.min(q.p)))
        };
        let bad = Primitive::new(f64::NAN, 0.0, 0.0, f64::NAN);
        match self {
            Solution::Scalar { .. } => None,
            Solution::Euler1 { u, .. } => Some(fold(&mut u.iter().map(|c| cons_to_prim(c).unwrap_or(bad)))),
            Solution::Euler2 { grid, u, mask } => {
                let nx = grid.nx();
                Some(fold(
                    &mut u
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| !mask.as_ref().is_some_and(|m| m.is_solid(k % nx, k / nx)))
                        .map(|(_, c)| cons_to_prim(c).unwrap_or(bad)),
                ))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemRun {
    pub spec: ProblemSpec,
    pub scheme: Scheme,
    pub solution: Solution,
    pub time: f64,
    pub diagnostics: Diagnostics,
    pub failure: Option<BlowUp>,
}

impl ProblemRun {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The problem's own end time and CFL rule.
pub fn default_run_config(spec: &ProblemSpec) -> RunConfig {
    RunConfig::new(spec.t_end, spec.cfl)
}

/// Sets up and runs one problem on an `nx x ny` mesh (`ny` is ignored in one dimension).
pub fn run_problem(spec: &ProblemSpec, weights: &WeightConfig, nx: usize, ny: usize, cfg: &RunConfig) -> Result<ProblemRun> {
    let w = weights.prepare()?;
    let (solution, time, diagnostics, failure) = match spec.equation {
        Equation::Advection => {
            let (op, u0) = setup_advection(spec, nx, w)?;
            let out = run_simulation(&op, u0, cfg, op.grid.dx())?;
            (Solution::Scalar { grid: op.grid, u: out.field }, out.time, out.diagnostics, out.failure)
        }
        Equation::Euler1d => {
            let (op, u0) = setup_euler1d(spec, nx, w)?;
            let out = run_simulation(&op, u0, cfg, op.grid.dx())?;
            (Solution::Euler1 { grid: op.grid, u: out.field }, out.time, out.diagnostics, out.failure)
        }
        Equation::Euler2d => {
            let (op, u0) = setup_euler2d(spec, nx, ny, w)?;
            let out = run_simulation(&op, u0, cfg, op.grid.x.dx())?;
            let mask = op.mask().cloned();
            (Solution::Euler2 { grid: op.grid, u: out.field, mask }, out.time, out.diagnostics, out.failure)
        }
    };
    Ok(ProblemRun { spec: spec.clone(), scheme: weights.scheme, solution, time, diagnostics, failure })
}

/// Runs `weights` at the recipe resolution and agglomerates onto the
/// `nx x ny` mesh. Advection problems have exact solutions and are refused.
pub fn generate_reference(
    spec: &ProblemSpec,
    recipe: &ReferenceRecipe,
    weights: &WeightConfig,
    nx: usize,
    ny: usize,
) -> Result<Solution> {
    if spec.equation == Equation::Advection {
        return Err(WenoError::InvalidInput(format!("{} has an exact solution; no reference needed", spec.name)));
    }
    let one_d = spec.equation == Equation::Euler1d;
    let ny = if one_d { 1 } else { ny };
    if recipe.nx % nx != 0 || recipe.ny % ny != 0 || recipe.nx <= nx {
        return Err(WenoError::MeshMismatch(format!("reference {}x{} does not refine {nx}x{ny}", recipe.nx, recipe.ny)));
    }
    let run = run_problem(spec, weights, recipe.nx, recipe.ny, &default_run_config(spec))?;
    if let Some(b) = run.failure {
        return Err(WenoError::BlowUp(b));
    }
    match run.solution {
        Solution::Euler1 { grid, u } => {
            let coarse = Grid1::new(grid.lo, grid.hi, nx)?;
            Ok(Solution::Euler1 { grid: coarse, u: restrict_1d(&u, recipe.nx / nx)? })
        }
        Solution::Euler2 { grid, u, .. } => {
            let coarse = Grid2::new(Grid1::new(grid.x.lo, grid.x.hi, nx)?, Grid1::new(grid.y.lo, grid.y.hi, ny)?);
            let u = restrict_2d(&u, recipe.nx, recipe.ny, recipe.nx / nx, recipe.ny / ny)?;
            Ok(Solution::Euler2 { grid: coarse, u, mask: None })
        }
        Solution::Scalar { .. } => unreachable!(),
    }
}
