//! The benchmark catalog: thirteen problems with their initial data,
//! boundary conditions, default meshes, CFL rules and output times.
//!
//! Advection initial data and exact solutions are cell averages (10-point
//! Gauss-Legendre per cell). Euler initial data are sampled at cell centres.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Result, WenoError};
use crate::euler::{prim_to_cons, Advection, Euler1d, Euler2d, Primitive, GAMMA};
use crate::solver::{Boundaries2, Boundary, CflRule, Grid1, Grid2, GhostQuery, Mask, Operator1, Operator2};
use crate::weights::Weighting;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    LaeSine,
    LaeCritical,
    LaeComposite,
    LaeSine9,
    Sod,
    Lax,
    ShuOsher,
    Blastwave,
    ShockVortex,
    Explosion,
    Riemann2d,
    Dmr,
    Ffs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Advection,
    Euler1d,
    Euler2d,
}

/// How a reference solution is produced: a WENO-JS run on a finer mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRecipe {
    pub nx: usize,
    /// 1 for one-dimensional problems.
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub name: &'static str,
    pub title: &'static str,
    pub equation: Equation,
    pub x: (f64, f64),
    /// `None` for one-dimensional problems.
    pub y: Option<(f64, f64)>,
    /// Default `(nx, ny)`; `ny = 1` in one dimension.
    pub mesh: (usize, usize),
    pub cfl: CflRule,
    pub t_end: f64,
    pub reference: Option<ReferenceRecipe>,
    /// Order of the critical points of the initial data, where known.
    pub critical_order: Option<u32>,
}

impl Problem {
    pub const ALL: [Problem; 13] = [
        Problem::LaeSine,
        Problem::LaeCritical,
        Problem::LaeComposite,
        Problem::LaeSine9,
        Problem::Sod,
        Problem::Lax,
        Problem::ShuOsher,
        Problem::Blastwave,
        Problem::ShockVortex,
        Problem::Explosion,
        Problem::Riemann2d,
        Problem::Dmr,
        Problem::Ffs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::LaeSine => "lae-sine",
            Problem::LaeCritical => "lae-critical",
            Problem::LaeComposite => "lae-composite",
            Problem::LaeSine9 => "lae-sine9",
            Problem::Sod => "sod",
            Problem::Lax => "lax",
            Problem::ShuOsher => "shu-osher",
            Problem::Blastwave => "blastwave",
            Problem::ShockVortex => "shock-vortex",
            Problem::Explosion => "explosion",
            Problem::Riemann2d => "riemann2d",
            Problem::Dmr => "dmr",
            Problem::Ffs => "ffs",
        }
    }

    pub fn spec(self) -> ProblemSpec {
        use Problem::*;
        let lae = |title, t_end, cfl, critical_order| ProblemSpec {
            problem: self,
            name: self.name(),
            title,
            equation: Equation::Advection,
            x: (-1.0, 1.0),
            y: None,
            mesh: (200, 1),
            cfl,
            t_end,
            reference: None,
            critical_order,
        };
        let e1 = |title, x, n, t_end, reference: Option<usize>| ProblemSpec {
            problem: self,
            name: self.name(),
            title,
            equation: Equation::Euler1d,
            x,
            y: None,
            mesh: (n, 1),
            cfl: CflRule::Fixed(0.5),
            t_end,
            reference: reference.map(|nx| ReferenceRecipe { nx, ny: 1 }),
            critical_order: None,
        };
        let e2 = |title, x, y, mesh, t_end, reference: Option<(usize, usize)>| ProblemSpec {
            problem: self,
            name: self.name(),
            title,
            equation: Equation::Euler2d,
            x,
            y: Some(y),
            mesh,
            cfl: CflRule::Fixed(0.5),
            t_end,
            reference: reference.map(|(nx, ny)| ReferenceRecipe { nx, ny }),
            critical_order: None,
        };
        let accuracy_cfl = CflRule::DxPower(2.0 / 3.0);
        match self {
            LaeSine => lae("advection of sin(pi x)", 2.0, accuracy_cfl, Some(1)),
            LaeCritical => lae("advection of sin(pi x - sin(pi x)/pi)", 2.0, accuracy_cfl, Some(1)),
            LaeComposite => lae("advection of Gaussian, square, triangle and ellipse", 2.0, CflRule::Fixed(0.1), None),
            LaeSine9 => lae("advection of sin^9(pi x)", 1.0, accuracy_cfl, Some(8)),
            Sod => e1("Sod shock tube", (0.0, 1.0), 200, 0.25, Some(10_000)),
            Lax => e1("Lax shock tube", (-5.0, 5.0), 200, 1.3, None),
            ShuOsher => e1("Mach 3 shock-density wave interaction", (-5.0, 5.0), 300, 1.8, Some(10_000)),
            Blastwave => e1("interacting blastwaves", (0.0, 1.0), 400, 0.038, Some(10_000)),
            ShockVortex => e2("shock-vortex interaction", (0.0, 1.0), (0.0, 1.0), (400, 400), 0.35, Some((1000, 1000))),
            Explosion => e2("circular explosion", (-1.0, 1.0), (-1.0, 1.0), (400, 400), 0.25, Some((1000, 1000))),
            Riemann2d => e2("four-quadrant Riemann problem", (0.0, 1.0), (0.0, 1.0), (1200, 1200), 0.3, None),
            Dmr => e2("double Mach reflection", (0.0, 3.0), (0.0, 1.0), (2000, 500), 0.2, None),
            Ffs => e2("Mach 3 forward-facing step", (0.0, 3.0), (0.0, 1.0), (900, 300), 4.0, None),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| WenoError::NotFound { kind: "problem", name: s.to_string() })
    }
}

pub fn catalog() -> Vec<ProblemSpec> {
    Problem::ALL.into_iter().map(Problem::spec).collect()
}

pub fn lookup(name: &str) -> Result<ProblemSpec> {
    Ok(name.parse::<Problem>()?.spec())
}

/// Values of `cfs_fraction` in the blastwave robustness sweep.
pub const BLASTWAVE_CFS_SWEEP: [f64; 10] = [0.001, 0.01, 0.095, 0.099, 0.0999, 0.1, 0.3, 0.5, 0.7, 0.9];

// ---------------------------------------------------------------- advection

const GL_NODES: [f64; 5] = [0.148_874_338_981_631_22, 0.433_395_394_129_247_2, 0.679_409_568_299_024_4, 0.865_063_366_688_984_5, 0.973_906_528_517_171_7];
const GL_WEIGHTS: [f64; 5] = [0.295_524_224_714_753, 0.269_266_719_309_996_5, 0.219_086_362_515_982, 0.149_451_349_150_580_36, 0.066_671_344_308_688_07];

/// Mean of `f` over `[a, b]` by 10-point Gauss-Legendre.
fn gauss_mean(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    0.5 * acc
}

fn composite(x: f64) -> f64 {
    let z = -0.7;
    let dh = 0.005;
    let beta = 2.0f64.ln() / (36.0 * dh * dh);
    let a = 0.5;
    let alpha = 10.0;
    let g = |z: f64| (-beta * (x - z) * (x - z)).exp();
    let f = |a: f64| (1.0 - alpha * alpha * (x - a) * (x - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(z - dh) + 4.0 * g(z) + g(z + dh)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (f(a - dh) + 4.0 * f(a) + f(a + dh)) / 6.0
    } else {
        0.0
    }
}

fn require(spec: &ProblemSpec, eq: Equation) -> Result<()> {
    if spec.equation == eq {
        Ok(())
    } else {
        Err(WenoError::InvalidInput(format!("{} is not a {eq:?} problem", spec.name)))
    }
}

/// Point value of an advection problem's initial data; `x` is wrapped
/// into the periodic domain `[-1, 1)`.
pub fn advection_ic(spec: &ProblemSpec, x: f64) -> Result<f64> {
    require(spec, Equation::Advection)?;
    let x = (x + 1.0).rem_euclid(2.0) - 1.0;
    Ok(match spec.problem {
        Problem::LaeSine => (PI * x).sin(),
        Problem::LaeCritical => (PI * x - (PI * x).sin() / PI).sin(),
        Problem::LaeComposite => composite(x),
        Problem::LaeSine9 => (PI * x).sin().powi(9),
        _ => unreachable!(),
    })
}

/// Exact transported solution `u0(x - t)`, point value. Whole periods of
/// `t` are removed first, so they cost no accuracy.
pub fn advection_exact(spec: &ProblemSpec, x: f64, t: f64) -> Result<f64> {
    advection_ic(spec, x - t.rem_euclid(2.0))
}

/// Exact cell averages at time `t`; the wrap keeps long times exact for
/// whole periods.
pub fn advection_cell_averages(spec: &ProblemSpec, grid: &Grid1, t: f64) -> Result<Vec<f64>> {
    require(spec, Equation::Advection)?;
    let shift = t.rem_euclid(2.0);
    (0..grid.n)
        .map(|i| {
            let (a, b) = (grid.face(i) - shift, grid.face(i + 1) - shift);
            Ok(gauss_mean(a, b, |x| advection_ic(spec, x).unwrap_or(f64::NAN)))
        })
        .collect()
}

pub fn setup_advection(spec: &ProblemSpec, n: usize, w: Weighting) -> Result<(Operator1<Advection, 1>, Vec<[f64; 1]>)> {
    require(spec, Equation::Advection)?;
    let grid = Grid1::new(spec.x.0, spec.x.1, n)?;
    let u0 = advection_cell_averages(spec, &grid, 0.0)?.into_iter().map(|v| [v]).collect();
    let op = Operator1::new(Advection, grid, Boundary::Periodic, Boundary::Periodic, w)?;
    Ok((op, u0))
}

// ---------------------------------------------------------------- 1D Euler

pub fn euler1d_ic(spec: &ProblemSpec, x: f64) -> Result<Primitive> {
    require(spec, Equation::Euler1d)?;
    let p = |rho, u, p| Primitive::new(rho, u, 0.0, p);
    Ok(match spec.problem {
        Problem::Sod if x < 0.5 => p(1.0, 0.0, 1.0),
        Problem::Sod => p(0.125, 0.0, 0.1),
        Problem::Lax if x < 0.0 => p(0.445, 0.698, 3.528),
        Problem::Lax => p(0.5, 0.0, 0.571),
        Problem::ShuOsher if x < -4.0 => p(3.857143, 2.629369, 10.333333),
        Problem::ShuOsher => p(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0),
        Problem::Blastwave if x < 0.1 => p(1.0, 0.0, 1000.0),
        Problem::Blastwave if x < 0.9 => p(1.0, 0.0, 0.01),
        Problem::Blastwave => p(1.0, 0.0, 100.0),
        _ => unreachable!(),
    })
}

pub fn setup_euler1d(spec: &ProblemSpec, n: usize, w: Weighting) -> Result<(Operator1<Euler1d, 3>, Vec<[f64; 3]>)> {
    require(spec, Equation::Euler1d)?;
    let grid = Grid1::new(spec.x.0, spec.x.1, n)?;
    let u0 = grid.centers().into_iter().map(|x| prim_to_cons(&euler1d_ic(spec, x)?)).collect::<Result<Vec<_>>>()?;
    let (l, r) = match spec.problem {
        Problem::Blastwave => (Boundary::Reflective, Boundary::Reflective),
        _ => (Boundary::Transmissive, Boundary::Transmissive),
    };
    Ok((Operator1::new(Euler1d, grid, l, r, w)?, u0))
}

// ---------------------------------------------------------------- 2D Euler

/// Shock-vortex interaction: a Mach 1.1 stationary shock at `x = 0.5`
/// with a vortex superimposed on the upstream state.
pub fn shock_vortex_ic(x: f64, y: f64) -> Primitive {
    let (rho_l, u_l, p_l) = (1.0, GAMMA.sqrt(), 1.0);
    if x >= 0.5 {
        let p_r = 1.3;
        let rho_r = rho_l * (GAMMA - 1.0 + (GAMMA + 1.0) * p_r) / (GAMMA + 1.0 + (GAMMA - 1.0) * p_r);
        let u_r = u_l * (1.0 - p_r) / (GAMMA - 1.0 + p_r * (GAMMA + 1.0)).sqrt();
        return Primitive::new(rho_r, u_r, 0.0, p_r);
    }
    let (eps, rc, alpha, xc, yc) = (0.3, 0.05, 0.204, 0.25, 0.5);
    let r2 = ((x - xc) * (x - xc) + (y - yc) * (y - yc)) / (rc * rc);
    let swirl = eps * (alpha * (1.0 - r2)).exp();
    let du = swirl * (y - yc) / rc;
    let dv = -swirl * (x - xc) / rc;
    let dt = -(GAMMA - 1.0) / (4.0 * alpha * GAMMA) * eps * eps * (2.0 * alpha * (1.0 - r2)).exp();
    let drho = rho_l * rho_l / ((GAMMA - 1.0) * p_l) * dt;
    // as printed: the denominator has rho_L where p_L would be expected; equal here
    let dp = GAMMA * rho_l * rho_l / ((GAMMA - 1.0) * rho_l) * dt;
    Primitive::new(rho_l + drho, u_l + du, dv, p_l + dp)
}

pub const DMR_X0: f64 = 1.0 / 6.0;

pub fn dmr_post_shock() -> Primitive {
    Primitive::new(8.0, 8.25 * (PI / 6.0).cos(), -8.25 * (PI / 6.0).sin(), 116.5)
}

pub fn dmr_pre_shock() -> Primitive {
    Primitive::new(1.4, 0.0, 0.0, 1.0)
}

/// Position of the incident shock on the top boundary.
pub fn dmr_shock_position(t: f64) -> f64 {
    DMR_X0 + (1.0 + 20.0 * t) / 3.0f64.sqrt()
}

pub fn ffs_inflow() -> Primitive {
    Primitive::new(1.4, 3.0, 0.0, 1.0)
}

pub fn euler2d_ic(spec: &ProblemSpec, x: f64, y: f64) -> Result<Primitive> {
    require(spec, Equation::Euler2d)?;
    let p = Primitive::new;
    Ok(match spec.problem {
        Problem::ShockVortex => shock_vortex_ic(x, y),
        Problem::Explosion if (x * x + y * y).sqrt() < 0.4 => p(1.0, 0.0, 0.0, 1.0),
        Problem::Explosion => p(0.125, 0.0, 0.0, 0.1),
        Problem::Riemann2d => match (x >= 0.5, y >= 0.5) {
            (true, true) => p(1.0, 0.0, -0.3, 1.0),
            (false, true) => p(2.0, 0.0, 0.3, 1.0),
            (false, false) => p(1.0625, 0.0, 0.8145, 0.4),
            (true, false) => p(0.5313, 0.0, 0.4276, 0.4),
        },
        Problem::Dmr if x < DMR_X0 + y / 3.0f64.sqrt() => dmr_post_shock(),
        Problem::Dmr => dmr_pre_shock(),
        Problem::Ffs => ffs_inflow(),
        _ => unreachable!(),
    })
}

/// Step geometry of the forward-facing step on a given mesh: the first
/// solid column and the number of solid rows.
pub fn ffs_step_cells(grid: &Grid2) -> (usize, usize) {
    let i = ((0.6 - grid.x.lo) / grid.x.dx()).round() as usize;
    let j = ((0.2 - grid.y.lo) / grid.y.dx()).round() as usize;
    (i, j)
}

/// Corner treatment for the forward-facing step: the 2x2 block of fluid
/// cells at the step corner gets the entropy and total enthalpy of the
/// cell diagonally upstream, keeping each cell's own pressure and flow
/// direction.
pub fn ffs_corner_fix(u: &mut [[f64; 4]], nx: usize, i_step: usize, j_step: usize) {
    let idx = |i: usize, j: usize| j * nx + i;
    let Some(reference) = admissible(&u[idx(i_step - 1, j_step + 1)]) else { return };
    let entropy = reference.p / reference.rho.powf(GAMMA);
    let enthalpy = reference.enthalpy();
    for j in j_step..j_step + 2 {
        for i in i_step..i_step + 2 {
            let Some(cell) = admissible(&u[idx(i, j)]) else { continue };
            let rho = (cell.p / entropy).powf(1.0 / GAMMA);
            let q2 = (2.0 * (enthalpy - GAMMA / (GAMMA - 1.0) * cell.p / rho)).max(0.0);
            let speed = (cell.u * cell.u + cell.v * cell.v).sqrt();
            let (cx, cy) = if speed > 0.0 { (cell.u / speed, cell.v / speed) } else { (1.0, 0.0) };
            let q = q2.sqrt();
            if let Ok(c) = prim_to_cons(&Primitive::new(rho, q * cx, q * cy, cell.p)) {
                u[idx(i, j)] = c;
            }
        }
    }
}

fn admissible(c: &[f64; 4]) -> Option<Primitive> {
    crate::euler::cons_to_prim(c).ok()
}

pub fn setup_euler2d(spec: &ProblemSpec, nx: usize, ny: usize, w: Weighting) -> Result<(Operator2<Euler2d, 4>, Vec<[f64; 4]>)> {
    require(spec, Equation::Euler2d)?;
    let (ylo, yhi) = spec.y.expect("two-dimensional problem");
    let grid = Grid2::new(Grid1::new(spec.x.0, spec.x.1, nx)?, Grid1::new(ylo, yhi, ny)?);
    let mut u0 = Vec::with_capacity(grid.len());
    for j in 0..ny {
        for i in 0..nx {
            u0.push(prim_to_cons(&euler2d_ic(spec, grid.x.center(i), grid.y.center(j))?)?);
        }
    }
    let cons = |p: Primitive| -> [f64; 4] { prim_to_cons(&p).expect("catalog state is admissible") };
    let mut mask = None;
    let mut post = None;
    let bc = match spec.problem {
        Problem::Dmr => {
            let post_state = cons(dmr_post_shock());
            let pre_state = cons(dmr_pre_shock());
            Boundaries2 {
                left: Boundary::Inflow(post_state),
                right: Boundary::outflow(),
                bottom: Boundary::Custom(Arc::new(move |q: &GhostQuery<4>| {
                    if q.tangential < DMR_X0 {
                        post_state
                    } else {
                        q.reflected
                    }
                })),
                top: Boundary::custom(move |q: &GhostQuery<4>| {
                    if q.tangential < dmr_shock_position(q.t) {
                        post_state
                    } else {
                        pre_state
                    }
                }),
            }
        }
        Problem::Ffs => {
            let (i_s, j_s) = ffs_step_cells(&grid);
            if i_s < 1 || i_s + 2 > nx || j_s + 2 > ny {
                return Err(WenoError::InvalidInput(format!("{nx}x{ny} mesh cannot resolve the step")));
            }
            mask = Some(Mask::step(&grid, i_s, j_s));
            post = Some(Arc::new(move |u: &mut [[f64; 4]]| ffs_corner_fix(u, nx, i_s, j_s)) as crate::solver::PostStage<4>);
            Boundaries2 {
                left: Boundary::Inflow(cons(ffs_inflow())),
                right: Boundary::outflow(),
                bottom: Boundary::Reflective,
                top: Boundary::Reflective,
            }
        }
        _ => Boundaries2::uniform(Boundary::Transmissive),
    };
    let mut op = Operator2::new(Euler2d, grid, bc, w, mask)?;
    if let Some(f) = post {
        op = op.with_post_stage(f);
    }
    Ok((op, u0))
}

// ---------------------------------------------------------------- restriction

/// Agglomerates a fine one-dimensional field by averaging `factor` cells.
pub fn restrict_1d<const N: usize>(fine: &[[f64; N]], factor: usize) -> Result<Vec<[f64; N]>> {
    if factor == 0 || fine.len() % factor != 0 {
        return Err(WenoError::MeshMismatch(format!("{} cells do not split into groups of {factor}", fine.len())));
    }
    Ok(fine
        .chunks(factor)
        .map(|c| {
            let mut s = [0.0; N];
            for u in c {
                for m in 0..N {
                    s[m] += u[m];
                }
            }
            s.map(|v| v / factor as f64)
        })
        .collect())
}

/// Agglomerates a fine row-major `fnx x fny` field into `(fnx/fx) x (fny/fy)`.
pub fn restrict_2d<const N: usize>(fine: &[[f64; N]], fnx: usize, fny: usize, fx: usize, fy: usize) -> Result<Vec<[f64; N]>> {
    if fx == 0 || fy == 0 || fnx % fx != 0 || fny % fy != 0 || fine.len() != fnx * fny {
        return Err(WenoError::MeshMismatch(format!("{fnx}x{fny} does not agglomerate by {fx}x{fy}")));
    }
    let (cnx, cny) = (fnx / fx, fny / fy);
    let mut out = vec![[0.0; N]; cnx * cny];
    for j in 0..fny {
        for i in 0..fnx {
            let o = &mut out[(j / fy) * cnx + i / fx];
            for m in 0..N {
                o[m] += fine[j * fnx + i][m];
            }
        }
    }
    let scale = (fx * fy) as f64;
    for o in &mut out {
        for v in o.iter_mut() {
            *v /= scale;
        }
    }
    Ok(out)
}
