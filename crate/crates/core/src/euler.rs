//! Ideal-gas Euler physics and the scalar advection law, behind one
//! [`ConservationLaw`] trait that the line kernels are generic over.
//!
//! Every law is written for the x direction. Two-dimensional y sweeps swap the
//! momentum components with [`ConservationLaw::orient`], run the x-direction
//! physics and swap back, which makes the y eigensystem an exact permutation
//! of the x one.

use crate::error::{Offense, Result, WenoError};

pub const GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Left and right eigenvectors of the flux Jacobian, plus eigenvalues.
///
/// `left[k]` is the k-th left eigenvector (a row of `L`); `right[i][k]` is
/// component `i` of the k-th right eigenvector (so `right` is `R`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem<const N: usize> {
    pub left: [[f64; N]; N],
    pub right: [[f64; N]; N],
    pub eigenvalues: [f64; N],
}

impl<const N: usize> EigenSystem<N> {
    #[inline(always)]
    pub fn project(&self, u: &[f64; N]) -> [f64; N] {
        let mut w = [0.0; N];
        for (wk, row) in w.iter_mut().zip(&self.left) {
            let mut acc = 0.0;
            for i in 0..N {
                acc += row[i] * u[i];
            }
            *wk = acc;
        }
        w
    }

    #[inline(always)]
    pub fn unproject(&self, w: &[f64; N]) -> [f64; N] {
        let mut u = [0.0; N];
        for (ui, row) in u.iter_mut().zip(&self.right) {
            let mut acc = 0.0;
            for k in 0..N {
                acc += row[k] * w[k];
            }
            *ui = acc;
        }
        u
    }

    /// Largest entry of `|L R - I|`.
    pub fn inverse_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                let mut acc = 0.0;
                for k in 0..N {
                    acc += self.left[i][k] * self.right[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    /// `R diag(lambda) L`, the matrix this system diagonalizes.
    pub fn reassemble(&self) -> [[f64; N]; N] {
        let mut a = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                a[i][j] = (0..N).map(|k| self.right[i][k] * self.eigenvalues[k] * self.left[k][j]).sum();
            }
        }
        a
    }
}

/// A hyperbolic law in x-direction form, over `N` conserved components.
pub trait ConservationLaw<const N: usize>: Send + Sync {
    /// Whether reconstruction runs in characteristic variables.
    const CHARACTERISTIC: bool;

    /// Physical x flux. No admissibility check; reconstructed interface states
    /// may be slightly outside the admissible set.
    fn flux(&self, u: &[f64; N]) -> [f64; N];

    /// `|u_n| + c` for an admissible state.
    fn wave_speed(&self, u: &[f64; N]) -> f64;

    /// `None` when the state is admissible; otherwise the violated
    /// condition and the offending value.
    fn violation(&self, u: &[f64; N]) -> Option<(Offense, f64)>;

    /// Interface eigensystem between two neighbouring admissible states.
    fn eigensystem(&self, left: &[f64; N], right: &[f64; N]) -> Result<EigenSystem<N>>;

    /// Maps a physical state to the orientation of a sweep along `axis`
    /// (an involution). Identity except for two-dimensional Euler.
    #[inline(always)]
    fn orient(&self, u: [f64; N], _axis: Axis) -> [f64; N] {
        u
    }

    /// Component index of the momentum normal to the sweep direction, if any.
    fn normal_momentum(&self) -> Option<usize> {
        None
    }
}

/// `u_t + u_x = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Advection;

impl ConservationLaw<1> for Advection {
    const CHARACTERISTIC: bool = false;

    #[inline(always)]
    fn flux(&self, u: &[f64; 1]) -> [f64; 1] {
        *u
    }

    fn wave_speed(&self, _u: &[f64; 1]) -> f64 {
        1.0
    }

    fn violation(&self, u: &[f64; 1]) -> Option<(Offense, f64)> {
        (!u[0].is_finite()).then_some((Offense::NonFinite, u[0]))
    }

    fn eigensystem(&self, _l: &[f64; 1], _r: &[f64; 1]) -> Result<EigenSystem<1>> {
        Ok(EigenSystem { left: [[1.0]], right: [[1.0]], eigenvalues: [1.0] })
    }
}

/// Primitive variables; `v = 0` for one-dimensional states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub fn sound_speed(&self) -> f64 {
        (GAMMA * self.p / self.rho).sqrt()
    }

    /// Total specific enthalpy `(E + p) / rho`.
    pub fn enthalpy(&self) -> f64 {
        GAMMA / (GAMMA - 1.0) * self.p / self.rho + 0.5 * (self.u * self.u + self.v * self.v)
    }
}

fn positivity(rho: f64, p: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(WenoError::InvalidInput(format!("{}: rho = {rho}", Offense::NonPositiveDensity)));
    }
    if !(p > 0.0) {
        return Err(WenoError::InvalidInput(format!("{}: p = {p}", Offense::NonPositivePressure)));
    }
    Ok(())
}

/// Conserved `(rho, rho u, [rho v,] E)` to primitive, for `N = 3` or `N = 4`.
pub fn cons_to_prim<const N: usize>(c: &[f64; N]) -> Result<Primitive> {
    let p = prim_unchecked(c);
    positivity(p.rho, p.p)?;
    Ok(p)
}

/// Primitive to conserved, for `N = 3` (drops `v`, which must be zero) or `N = 4`.
pub fn prim_to_cons<const N: usize>(p: &Primitive) -> Result<[f64; N]> {
    positivity(p.rho, p.p)?;
    if N == 3 && p.v != 0.0 {
        return Err(WenoError::InvalidInput("one-dimensional state with v != 0".into()));
    }
    Ok(cons_unchecked(p))
}

#[inline(always)]
fn prim_unchecked<const N: usize>(c: &[f64; N]) -> Primitive {
    assert!(N == 3 || N == 4, "Euler states have 3 or 4 components");
    let rho = c[0];
    let u = c[1] / rho;
    let v = if N == 4 { c[2] / rho } else { 0.0 };
    let e = c[N - 1];
    let p = (GAMMA - 1.0) * (e - 0.5 * rho * (u * u + v * v));
    Primitive { rho, u, v, p }
}

fn cons_unchecked<const N: usize>(p: &Primitive) -> [f64; N] {
    assert!(N == 3 || N == 4, "Euler states have 3 or 4 components");
    let mut c = [0.0; N];
    c[0] = p.rho;
    c[1] = p.rho * p.u;
    if N == 4 {
        c[2] = p.rho * p.v;
    }
    c[N - 1] = p.p / (GAMMA - 1.0) + 0.5 * p.rho * (p.u * p.u + p.v * p.v);
    c
}

/// Physical flux of a conserved state along `axis`.
pub fn physical_flux<const N: usize>(c: &[f64; N], axis: Axis) -> Result<[f64; N]> {
    cons_to_prim(c)?;
    Ok(match N {
        3 if axis == Axis::X => euler_flux_x(c),
        3 => return Err(WenoError::InvalidInput("one-dimensional state has no y flux".into())),
        _ => {
            let law = Euler2d;
            let f4 = law.flux(&law.orient(as4(c), axis));
            from4(law.orient(f4, axis))
        }
    })
}

fn as4<const N: usize>(c: &[f64; N]) -> [f64; 4] {
    let mut out = [0.0; 4];
    out.copy_from_slice(&c[..4]);
    out
}

fn from4<const N: usize>(c: [f64; 4]) -> [f64; N] {
    let mut out = [0.0; N];
    out.copy_from_slice(&c);
    out
}

#[inline(always)]
fn euler_flux_x<const N: usize>(c: &[f64; N]) -> [f64; N] {
    let p = prim_unchecked(c);
    let mut f = [0.0; N];
    f[0] = c[1];
    f[1] = c[1] * p.u + p.p;
    if N == 4 {
        f[2] = c[2] * p.u;
    }
    f[N - 1] = p.u * (c[N - 1] + p.p);
    f
}

/// Largest `|u_n| + c` over a set of cells.
pub fn max_wave_speed<const N: usize>(cells: &[[f64; N]], axis: Axis) -> Result<f64> {
    let mut alpha = 0.0f64;
    for c in cells {
        let p = cons_to_prim(c)?;
        let un = match axis {
            Axis::X => p.u,
            Axis::Y => p.v,
        };
        alpha = alpha.max(un.abs() + p.sound_speed());
    }
    Ok(alpha)
}

/// Roe-averaged interface state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoeAverage {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    /// Total specific enthalpy.
    pub h: f64,
    pub c: f64,
}

/// Roe average of two admissible conserved states; fails if the averaged
/// sound speed is not real and positive.
pub fn roe_average<const N: usize>(left: &[f64; N], right: &[f64; N]) -> Result<RoeAverage> {
    let pl = cons_to_prim(left)?;
    let pr = cons_to_prim(right)?;
    roe_from_prims(&pl, &pr)
}

#[inline(always)]
fn roe_from_prims(pl: &Primitive, pr: &Primitive) -> Result<RoeAverage> {
    let sl = pl.rho.sqrt();
    let sr = pr.rho.sqrt();
    let inv = 1.0 / (sl + sr);
    let u = (sl * pl.u + sr * pr.u) * inv;
    let v = (sl * pl.v + sr * pr.v) * inv;
    let h = (sl * pl.enthalpy() + sr * pr.enthalpy()) * inv;
    let c2 = (GAMMA - 1.0) * (h - 0.5 * (u * u + v * v));
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(WenoError::Decomposition(format!("Roe-averaged sound speed squared is {c2}")));
    }
    Ok(RoeAverage { rho: sl * sr, u, v, h, c: c2.sqrt() })
}

/// Eigensystem of the flux Jacobian along `axis` at an averaged state.
/// `N = 3` gives the one-dimensional system (ignoring `v`), `N = 4` the
/// two-dimensional one.
pub fn eigensystem<const N: usize>(avg: &RoeAverage, axis: Axis) -> Result<EigenSystem<N>> {
    if !(avg.rho > 0.0 && avg.c > 0.0 && avg.c.is_finite()) {
        return Err(WenoError::Decomposition(format!("degenerate average state {avg:?}")));
    }
    match (N, axis) {
        (3, Axis::X) => {
            let e = eigen_1d(avg.u, avg.h, avg.c);
            Ok(from_sys(&e))
        }
        (4, Axis::X) => Ok(from_sys(&eigen_2d_x(avg.u, avg.v, avg.h, avg.c))),
        (4, Axis::Y) => {
            // permute momentum rows/columns of the x system evaluated with u and v swapped
            let e = eigen_2d_x(avg.v, avg.u, avg.h, avg.c);
            let perm = [0, 2, 1, 3];
            let mut out = e;
            for i in 0..4 {
                for k in 0..4 {
                    out.left[k][i] = e.left[k][perm[i]];
                    out.right[i][k] = e.right[perm[i]][k];
                }
            }
            Ok(from_sys(&out))
        }
        _ => Err(WenoError::InvalidInput(format!("no {N}-component eigensystem along {axis:?}"))),
    }
}

fn from_sys<const M: usize, const N: usize>(e: &EigenSystem<M>) -> EigenSystem<N> {
    assert_eq!(M, N);
    let mut out = EigenSystem { left: [[0.0; N]; N], right: [[0.0; N]; N], eigenvalues: [0.0; N] };
    for i in 0..N {
        out.eigenvalues[i] = e.eigenvalues[i];
        for j in 0..N {
            out.left[i][j] = e.left[i][j];
            out.right[i][j] = e.right[i][j];
        }
    }
    out
}

#[inline(always)]
fn eigen_1d(u: f64, h: f64, c: f64) -> EigenSystem<3> {
    let b1 = (GAMMA - 1.0) / (c * c);
    let b2 = 0.5 * b1 * u * u;
    let ic = 1.0 / c;
    EigenSystem {
        left: [
            [0.5 * (b2 + u * ic), -0.5 * (b1 * u + ic), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u * ic), -0.5 * (b1 * u - ic), 0.5 * b1],
        ],
        right: [[1.0, 1.0, 1.0], [u - c, u, u + c], [h - u * c, 0.5 * u * u, h + u * c]],
        eigenvalues: [u - c, u, u + c],
    }
}

#[inline(always)]
fn eigen_2d_x(u: f64, v: f64, h: f64, c: f64) -> EigenSystem<4> {
    let b1 = (GAMMA - 1.0) / (c * c);
    let q2 = 0.5 * (u * u + v * v);
    let b2 = b1 * q2;
    let ic = 1.0 / c;
    EigenSystem {
        left: [
            [0.5 * (b2 + u * ic), -0.5 * (b1 * u + ic), -0.5 * b1 * v, 0.5 * b1],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, 0.0, 1.0, 0.0],
            [0.5 * (b2 - u * ic), -0.5 * (b1 * u - ic), -0.5 * b1 * v, 0.5 * b1],
        ],
        right: [
            [1.0, 1.0, 0.0, 1.0],
            [u - c, u, 0.0, u + c],
            [v, v, 1.0, v],
            [h - u * c, q2, v, h + u * c],
        ],
        eigenvalues: [u - c, u, u, u + c],
    }
}

/// Global Lax-Friedrichs flux `(f(a) + f(b) - alpha (b - a)) / 2`.
#[inline(always)]
pub fn lax_friedrichs_flux<L: ConservationLaw<N>, const N: usize>(
    law: &L,
    a: &[f64; N],
    b: &[f64; N],
    alpha: f64,
) -> [f64; N] {
    let fa = law.flux(a);
    let fb = law.flux(b);
    let mut out = [0.0; N];
    for m in 0..N {
        out[m] = 0.5 * (fa[m] + fb[m] - alpha * (b[m] - a[m]));
    }
    out
}

#[inline(always)]
fn euler_violation<const N: usize>(u: &[f64; N]) -> Option<(Offense, f64)> {
    if let Some(bad) = u.iter().find(|x| !x.is_finite()) {
        return Some((Offense::NonFinite, *bad));
    }
    let p = prim_unchecked(u);
    if !(p.rho > 0.0) {
        Some((Offense::NonPositiveDensity, p.rho))
    } else if !(p.p > 0.0) {
        Some((Offense::NonPositivePressure, p.p))
    } else {
        None
    }
}

/// One-dimensional Euler equations, state `(rho, rho u, E)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euler1d;

impl ConservationLaw<3> for Euler1d {
    const CHARACTERISTIC: bool = true;

    #[inline(always)]
    fn flux(&self, u: &[f64; 3]) -> [f64; 3] {
        euler_flux_x(u)
    }

    #[inline(always)]
    fn wave_speed(&self, u: &[f64; 3]) -> f64 {
        let p = prim_unchecked(u);
        p.u.abs() + p.sound_speed()
    }

    fn violation(&self, u: &[f64; 3]) -> Option<(Offense, f64)> {
        euler_violation(u)
    }

    #[inline(always)]
    fn eigensystem(&self, left: &[f64; 3], right: &[f64; 3]) -> Result<EigenSystem<3>> {
        let avg = roe_from_prims(&prim_unchecked(left), &prim_unchecked(right))?;
        Ok(eigen_1d(avg.u, avg.h, avg.c))
    }

    fn normal_momentum(&self) -> Option<usize> {
        Some(1)
    }
}

/// Two-dimensional Euler equations, state `(rho, rho u, rho v, E)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euler2d;

impl ConservationLaw<4> for Euler2d {
    const CHARACTERISTIC: bool = true;

    #[inline(always)]
    fn flux(&self, u: &[f64; 4]) -> [f64; 4] {
        euler_flux_x(u)
    }

    #[inline(always)]
    fn wave_speed(&self, u: &[f64; 4]) -> f64 {
        let p = prim_unchecked(u);
        p.u.abs() + p.sound_speed()
    }

    fn violation(&self, u: &[f64; 4]) -> Option<(Offense, f64)> {
        euler_violation(u)
    }

    #[inline(always)]
    fn eigensystem(&self, left: &[f64; 4], right: &[f64; 4]) -> Result<EigenSystem<4>> {
        let avg = roe_from_prims(&prim_unchecked(left), &prim_unchecked(right))?;
        Ok(eigen_2d_x(avg.u, avg.v, avg.h, avg.c))
    }

    #[inline(always)]
    fn orient(&self, u: [f64; 4], axis: Axis) -> [f64; 4] {
        match axis {
            Axis::X => u,
            Axis::Y => [u[0], u[2], u[1], u[3]],
        }
    }

    fn normal_momentum(&self) -> Option<usize> {
        Some(1)
    }
}
