use std::fmt;
use std::sync::Arc;

use crate::euler::{Axis, ConservationLaw};

/// Ghost layers on each side of a line; the fifth-order stencil needs three.
pub const GHOSTS: usize = 3;

/// What a [`Boundary::Custom`] closure is told about the ghost cell it fills.
/// All states are in physical orientation.
#[derive(Debug, Clone, Copy)]
pub struct GhostQuery<const N: usize> {
    /// Direction normal to the boundary.
    pub axis: Axis,
    /// Coordinate of the line along the boundary.
    pub tangential: f64,
    /// Normal coordinate of the ghost cell centre.
    pub normal: f64,
    /// 1 for the layer touching the boundary, up to 3.
    pub layer: usize,
    pub t: f64,
    /// Interior cell mirrored across the boundary.
    pub mirror: [f64; N],
    /// `mirror` with its normal momentum negated (a slip wall).
    pub reflected: [f64; N],
}

pub type GhostFn<const N: usize> = Arc<dyn Fn(&GhostQuery<N>) -> [f64; N] + Send + Sync>;

#[derive(Clone)]
pub enum Boundary<const N: usize> {
    Periodic,
    /// Zeroth-order extrapolation (copy of the boundary cell); also used as outflow.
    Transmissive,
    /// Slip wall: mirrored cells with the normal momentum negated.
    Reflective,
    /// Fixed state, in physical orientation.
    Inflow([f64; N]),
    /// Position- and time-dependent ghost values.
    Custom(GhostFn<N>),
}

impl<const N: usize> Boundary<N> {
    pub fn outflow() -> Self {
        Boundary::Transmissive
    }

    pub fn custom(f: impl Fn(&GhostQuery<N>) -> [f64; N] + Send + Sync + 'static) -> Self {
        Boundary::Custom(Arc::new(f))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Boundary::Periodic)
    }
}

impl<const N: usize> fmt::Debug for Boundary<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("Periodic"),
            Boundary::Transmissive => f.write_str("Transmissive"),
            Boundary::Reflective => f.write_str("Reflective"),
            Boundary::Inflow(s) => f.debug_tuple("Inflow").field(s).finish(),
            Boundary::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Where a line sits, for time/position dependent ghost values.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineGeometry {
    pub axis: Axis,
    pub tangential: f64,
    /// Normal coordinate of the low face of the first interior cell.
    pub lo_face: f64,
    pub h: f64,
    pub t: f64,
}

#[inline(always)]
fn reflect<const N: usize>(mut u: [f64; N], normal: Option<usize>) -> [f64; N] {
    if let Some(k) = normal {
        u[k] = -u[k];
    }
    u
}

/// Fills the three ghost cells at each end of `buf`, whose interior
/// `buf[GHOSTS..GHOSTS + n]` is already in line orientation.
pub(crate) fn fill_ghosts<L: ConservationLaw<N>, const N: usize>(
    law: &L,
    buf: &mut [[f64; N]],
    n: usize,
    lo: &Boundary<N>,
    hi: &Boundary<N>,
    geo: &LineGeometry,
) {
    debug_assert_eq!(buf.len(), n + 2 * GHOSTS);
    debug_assert!(n >= GHOSTS);
    let normal = law.normal_momentum();
    for layer in 1..=GHOSTS {
        // low end: ghost at GHOSTS - layer, mirror of interior GHOSTS + layer - 1
        let g = GHOSTS - layer;
        let m = GHOSTS + layer - 1;
        buf[g] = match lo {
            Boundary::Periodic => buf[GHOSTS + n - layer],
            Boundary::Transmissive => buf[GHOSTS],
            Boundary::Reflective => reflect(buf[m], normal),
            Boundary::Inflow(s) => law.orient(*s, geo.axis),
            Boundary::Custom(f) => {
                let normal_pos = geo.lo_face - (layer as f64 - 0.5) * geo.h;
                custom(law, f, buf[m], normal, normal_pos, layer, geo)
            }
        };
        // high end: ghost at GHOSTS + n + layer - 1, mirror of GHOSTS + n - layer
        let g = GHOSTS + n + layer - 1;
        let m = GHOSTS + n - layer;
        buf[g] = match hi {
            Boundary::Periodic => buf[GHOSTS + layer - 1],
            Boundary::Transmissive => buf[GHOSTS + n - 1],
            Boundary::Reflective => reflect(buf[m], normal),
            Boundary::Inflow(s) => law.orient(*s, geo.axis),
            Boundary::Custom(f) => {
                let normal_pos = geo.lo_face + (n as f64 + layer as f64 - 0.5) * geo.h;
                custom(law, f, buf[m], normal, normal_pos, layer, geo)
            }
        };
    }
}

fn custom<L: ConservationLaw<N>, const N: usize>(
    law: &L,
    f: &GhostFn<N>,
    mirror_line: [f64; N],
    normal: Option<usize>,
    normal_pos: f64,
    layer: usize,
    geo: &LineGeometry,
) -> [f64; N] {
    let mirror = law.orient(mirror_line, geo.axis);
    let reflected = law.orient(reflect(mirror_line, normal), geo.axis);
    let q = GhostQuery { axis: geo.axis, tangential: geo.tangential, normal: normal_pos, layer, t: geo.t, mirror, reflected };
    law.orient(f(&q), geo.axis)
}
