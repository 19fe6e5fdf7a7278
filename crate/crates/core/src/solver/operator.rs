use std::fmt;
use std::sync::Arc;

use crate::error::{Offense, Result, WenoError};
use crate::euler::{lax_friedrichs_flux, Axis, ConservationLaw};
use crate::reconstruction::{characteristic_raw, componentwise};
use crate::weights::{with_kernel, Kernel, Weighting};

use super::boundary::{fill_ghosts, Boundary, LineGeometry, GHOSTS};
use super::grid::{Grid1, Grid2, Mask};

/// An inadmissible cell found while scanning a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub offense: Offense,
    pub value: f64,
}

/// Semi-discrete right-hand side `du/dt = L(u)` on a flat field.
pub trait SpatialOperator<const N: usize> {
    /// Number of cells (solid cells included).
    fn len(&self) -> usize;

    /// Checks every fluid cell and returns the largest characteristic speed
    /// per axis (the y entry is 0 in one dimension).
    fn scan(&self, u: &[[f64; N]]) -> std::result::Result<[f64; 2], Violation>;

    /// Writes `L(u)` into `out`, using the speeds `scan` returned for `u`.
    fn evaluate(&self, u: &[[f64; N]], speeds: [f64; 2], t: f64, out: &mut [[f64; N]]) -> Result<()>;

    /// Largest stable step for a CFL number.
    fn stable_dt(&self, speeds: [f64; 2], cfl: f64) -> f64;

    /// Hook applied to each stage result before it is scanned.
    fn after_stage(&self, _u: &mut [[f64; N]]) {}

    /// `(i, j)` of a flat index.
    fn cell_of(&self, index: usize) -> (usize, usize);
}

/// Interface fluxes of one line. `buf` holds `n` interior cells plus three
/// ghosts per side; `fluxes[k]` is the flux through the low face of interior
/// cell `k` (`k = n` is the high face of the last one).
#[inline]
pub(crate) fn line_fluxes<L: ConservationLaw<N>, K: Kernel, const N: usize>(
    law: &L,
    buf: &[[f64; N]],
    alpha: f64,
    w: &K,
    fluxes: &mut [[f64; N]],
) -> Result<()> {
    let n = buf.len() - 2 * GHOSTS;
    let mut slack = 0.0;
    for (k, f) in fluxes[..=n].iter_mut().enumerate() {
        let six = &buf[k..k + 6];
        let pair = if L::CHARACTERISTIC {
            let eig = law.eigensystem(&six[2], &six[3])?;
            characteristic_raw(six, &eig, w, &mut slack)
        } else {
            componentwise(six, w, &mut slack)
        };
        *f = lax_friedrichs_flux(law, &pair.minus, &pair.plus, alpha);
    }
    if slack < 0.0 {
        // a shortcut did not apply somewhere on this line (for ACM, a weight
        // inside a transition interval); redo the line without it
        return line_fluxes(law, buf, alpha, &w.exact(), fluxes);
    }
    Ok(())
}

fn dt_for(speeds: [f64; 2], h: [f64; 2], cfl: f64) -> f64 {
    let rate = speeds[0] / h[0] + speeds[1] / h[1];
    if rate > 0.0 {
        cfl / rate
    } else {
        // nothing moves; any step is stable
        cfl * h[0].min(h[1])
    }
}

/// One-dimensional finite-volume WENO operator.
pub struct Operator1<L, const N: usize> {
    pub law: L,
    pub grid: Grid1,
    pub left: Boundary<N>,
    pub right: Boundary<N>,
    pub weighting: Weighting,
}

impl<L: ConservationLaw<N>, const N: usize> Operator1<L, N> {
    pub fn new(law: L, grid: Grid1, left: Boundary<N>, right: Boundary<N>, weighting: Weighting) -> Result<Self> {
        if left.is_periodic() != right.is_periodic() {
            return Err(WenoError::Config("periodic boundaries must be paired".into()));
        }
        Ok(Self { law, grid, left, right, weighting })
    }
}

impl<L: ConservationLaw<N>, const N: usize> SpatialOperator<N> for Operator1<L, N> {
    fn len(&self) -> usize {
        self.grid.n
    }

    fn scan(&self, u: &[[f64; N]]) -> std::result::Result<[f64; 2], Violation> {
        let mut alpha = 0.0f64;
        for (index, c) in u.iter().enumerate() {
            if let Some((offense, value)) = self.law.violation(c) {
                return Err(Violation { index, offense, value });
            }
            alpha = alpha.max(self.law.wave_speed(c));
        }
        Ok([alpha, 0.0])
    }

    fn evaluate(&self, u: &[[f64; N]], speeds: [f64; 2], t: f64, out: &mut [[f64; N]]) -> Result<()> {
        let n = self.grid.n;
        let h = self.grid.dx();
        let mut buf = vec![[0.0; N]; n + 2 * GHOSTS];
        buf[GHOSTS..GHOSTS + n].copy_from_slice(u);
        let geo = LineGeometry { axis: Axis::X, tangential: 0.0, lo_face: self.grid.lo, h, t };
        fill_ghosts(&self.law, &mut buf, n, &self.left, &self.right, &geo);
        let mut fluxes = vec![[0.0; N]; n + 1];
        with_kernel!(self.weighting, |k| line_fluxes(&self.law, &buf, speeds[0], &k, &mut fluxes))?;
        for (k, o) in out.iter_mut().enumerate() {
            for m in 0..N {
                o[m] = -(fluxes[k + 1][m] - fluxes[k][m]) / h;
            }
        }
        Ok(())
    }

    fn stable_dt(&self, speeds: [f64; 2], cfl: f64) -> f64 {
        dt_for([speeds[0], 0.0], [self.grid.dx(), 1.0], cfl)
    }

    fn cell_of(&self, index: usize) -> (usize, usize) {
        (index, 0)
    }
}

/// Boundaries of a rectangle.
#[derive(Clone, Debug)]
pub struct Boundaries2<const N: usize> {
    pub left: Boundary<N>,
    pub right: Boundary<N>,
    pub bottom: Boundary<N>,
    pub top: Boundary<N>,
}

impl<const N: usize> Boundaries2<N> {
    pub fn uniform(b: Boundary<N>) -> Self {
        Self { left: b.clone(), right: b.clone(), bottom: b.clone(), top: b }
    }
}

pub type PostStage<const N: usize> = Arc<dyn Fn(&mut [[f64; N]]) + Send + Sync>;

/// Two-dimensional dimension-by-dimension WENO operator, with optional
/// solid cells whose faces act as slip walls.
pub struct Operator2<L, const N: usize> {
    pub law: L,
    pub grid: Grid2,
    pub bc: Boundaries2<N>,
    pub weighting: Weighting,
    mask: Option<Mask>,
    rows: Vec<Vec<(usize, usize)>>,
    cols: Vec<Vec<(usize, usize)>>,
    post: Option<PostStage<N>>,
}

impl<L, const N: usize> fmt::Debug for Operator2<L, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator2").field("grid", &self.grid).field("bc", &self.bc).finish_non_exhaustive()
    }
}

fn runs(len: usize, solid: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for k in 0..=len {
        let fluid = k < len && !solid(k);
        match (fluid, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push((s, k));
                start = None;
            }
            _ => {}
        }
    }
    out
}

impl<L: ConservationLaw<N>, const N: usize> Operator2<L, N> {
    pub fn new(law: L, grid: Grid2, bc: Boundaries2<N>, weighting: Weighting, mask: Option<Mask>) -> Result<Self> {
        if bc.left.is_periodic() != bc.right.is_periodic() || bc.bottom.is_periodic() != bc.top.is_periodic() {
            return Err(WenoError::Config("periodic boundaries must be paired".into()));
        }
        let (nx, ny) = (grid.nx(), grid.ny());
        let (rows, cols) = match &mask {
            None => (vec![vec![(0, nx)]; ny], vec![vec![(0, ny)]; nx]),
            Some(m) => {
                if m.dims() != (nx, ny) {
                    return Err(WenoError::MeshMismatch(format!("mask {:?} on a {nx}x{ny} grid", m.dims())));
                }
                let rows: Vec<_> = (0..ny).map(|j| runs(nx, |i| m.is_solid(i, j))).collect();
                let cols: Vec<_> = (0..nx).map(|i| runs(ny, |j| m.is_solid(i, j))).collect();
                (rows, cols)
            }
        };
        let short = rows.iter().chain(&cols).flatten().find(|(a, b)| b - a < GHOSTS);
        if let Some((a, b)) = short {
            return Err(WenoError::Config(format!("fluid run {a}..{b} is shorter than {GHOSTS} cells")));
        }
        let periodic_cut = (bc.left.is_periodic() && rows.iter().any(|r| r.len() != 1 || r[0] != (0, nx)))
            || (bc.bottom.is_periodic() && cols.iter().any(|c| c.len() != 1 || c[0] != (0, ny)));
        if periodic_cut {
            return Err(WenoError::Config("periodic direction is interrupted by solid cells".into()));
        }
        Ok(Self { law, grid, bc, weighting, mask, rows, cols, post: None })
    }

    pub fn with_post_stage(mut self, f: PostStage<N>) -> Self {
        self.post = Some(f);
        self
    }

    pub fn mask(&self) -> Option<&Mask> {
        self.mask.as_ref()
    }

    #[inline(always)]
    fn is_solid(&self, i: usize, j: usize) -> bool {
        self.mask.as_ref().is_some_and(|m| m.is_solid(i, j))
    }
}

impl<L: ConservationLaw<N>, const N: usize> SpatialOperator<N> for Operator2<L, N> {
    fn len(&self) -> usize {
        self.grid.len()
    }

    fn scan(&self, u: &[[f64; N]]) -> std::result::Result<[f64; 2], Violation> {
        let (mut ax, mut ay) = (0.0f64, 0.0f64);
        let nx = self.grid.nx();
        for (index, c) in u.iter().enumerate() {
            if self.is_solid(index % nx, index / nx) {
                continue;
            }
            if let Some((offense, value)) = self.law.violation(c) {
                return Err(Violation { index, offense, value });
            }
            ax = ax.max(self.law.wave_speed(c));
            ay = ay.max(self.law.wave_speed(&self.law.orient(*c, Axis::Y)));
        }
        Ok([ax, ay])
    }

    fn evaluate(&self, u: &[[f64; N]], speeds: [f64; 2], t: f64, out: &mut [[f64; N]]) -> Result<()> {
        let g = &self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let (hx, hy) = (g.x.dx(), g.y.dx());
        let longest = nx.max(ny);
        let mut buf = vec![[0.0; N]; longest + 2 * GHOSTS];
        let mut fluxes = vec![[0.0; N]; longest + 1];
        out.fill([0.0; N]);

        for (j, segs) in self.rows.iter().enumerate() {
            for &(a, b) in segs {
                let n = b - a;
                let line = &mut buf[..n + 2 * GHOSTS];
                line[GHOSTS..GHOSTS + n].copy_from_slice(&u[g.index(a, j)..g.index(b, j)]);
                let lo = if a == 0 { &self.bc.left } else { &Boundary::Reflective };
                let hi = if b == nx { &self.bc.right } else { &Boundary::Reflective };
                let geo = LineGeometry { axis: Axis::X, tangential: g.y.center(j), lo_face: g.x.face(a), h: hx, t };
                fill_ghosts(&self.law, line, n, lo, hi, &geo);
                with_kernel!(self.weighting, |k| line_fluxes(&self.law, line, speeds[0], &k, &mut fluxes))?;
                for k in 0..n {
                    let o = &mut out[g.index(a + k, j)];
                    for m in 0..N {
                        o[m] = -(fluxes[k + 1][m] - fluxes[k][m]) / hx;
                    }
                }
            }
        }

        for (i, segs) in self.cols.iter().enumerate() {
            for &(a, b) in segs {
                let n = b - a;
                let line = &mut buf[..n + 2 * GHOSTS];
                for k in 0..n {
                    line[GHOSTS + k] = self.law.orient(u[g.index(i, a + k)], Axis::Y);
                }
                let lo = if a == 0 { &self.bc.bottom } else { &Boundary::Reflective };
                let hi = if b == ny { &self.bc.top } else { &Boundary::Reflective };
                let geo = LineGeometry { axis: Axis::Y, tangential: g.x.center(i), lo_face: g.y.face(a), h: hy, t };
                fill_ghosts(&self.law, line, n, lo, hi, &geo);
                with_kernel!(self.weighting, |k| line_fluxes(&self.law, line, speeds[1], &k, &mut fluxes))?;
                for k in 0..n {
                    let lo_f = self.law.orient(fluxes[k], Axis::Y);
                    let hi_f = self.law.orient(fluxes[k + 1], Axis::Y);
                    let o = &mut out[g.index(i, a + k)];
                    for m in 0..N {
                        o[m] -= (hi_f[m] - lo_f[m]) / hy;
                    }
                }
            }
        }
        Ok(())
    }

    fn stable_dt(&self, speeds: [f64; 2], cfl: f64) -> f64 {
        dt_for(speeds, [self.grid.x.dx(), self.grid.y.dx()], cfl)
    }

    fn after_stage(&self, u: &mut [[f64; N]]) {
        if let Some(f) = &self.post {
            f(u);
        }
    }

    fn cell_of(&self, index: usize) -> (usize, usize) {
        (index % self.grid.nx(), index / self.grid.nx())
    }
}
