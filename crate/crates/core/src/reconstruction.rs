//! Fifth-order WENO interface reconstruction, scalar and characteristic-wise.
//!
//! Stencils are always five consecutive cell averages. The left state at
//! `x_{j+1/2}` uses `(u_{j-2}, ..., u_{j+2})`; the right state at the same
//! interface is the left reconstruction of the reversed stencil
//! `(u_{j+3}, ..., u_{j-1})`.

use crate::euler::EigenSystem;
use crate::error::{Result, WenoError};
use crate::weights::{betas_raw, with_kernel, Kernel, Weighting};

/// Third-order candidate values `(q0, q1, q2)` of the three substencils.
pub fn substencil_values(stencil: &[f64; 5]) -> [f64; 3] {
    substencil_raw(stencil)
}

#[inline(always)]
fn substencil_raw(s: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *s;
    [
        (2.0 * a - 7.0 * b + 11.0 * c) / 6.0,
        (-b + 5.0 * c + 2.0 * d) / 6.0,
        (2.0 * c + 5.0 * d - e) / 6.0,
    ]
}

#[inline(always)]
pub(crate) fn left_raw<K: Kernel>(s: &[f64; 5], k: &K, slack: &mut f64) -> f64 {
    let q = substencil_raw(s);
    let om = k.weights(&betas_raw(s), slack);
    om[0] * q[0] + om[1] * q[1] + om[2] * q[2]
}

fn check_finite(s: &[f64; 5]) -> Result<()> {
    if s.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(WenoError::InvalidInput(format!("non-finite stencil {s:?}")))
    }
}

/// Value at the right face of the central cell.
pub fn reconstruct_left(stencil: &[f64; 5], w: &Weighting) -> Result<f64> {
    check_finite(stencil)?;
    Ok(with_kernel!(w, |k| left_raw(stencil, &k.exact(), &mut 0.0)))
}

/// Value at the left face of the central cell of `(u_{j-2}, ..., u_{j+2})`,
/// i.e. the right-side state at `x_{j-1/2}`.
pub fn reconstruct_right(stencil: &[f64; 5], w: &Weighting) -> Result<f64> {
    let [a, b, c, d, e] = *stencil;
    reconstruct_left(&[e, d, c, b, a], w)
}

/// Left and right states at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfacePair<const N: usize> {
    pub minus: [f64; N],
    pub plus: [f64; N],
}

/// Component-wise reconstruction at `x_{j+1/2}` from the six cells
/// `j-2, ..., j+3`. Lowers `slack` below zero when `w` took a shortcut
/// that does not apply; see [`Kernel`].
#[inline(always)]
pub(crate) fn componentwise<K: Kernel, const N: usize>(six: &[[f64; N]], w: &K, slack: &mut f64) -> InterfacePair<N> {
    let mut minus = [0.0; N];
    let mut plus = [0.0; N];
    for m in 0..N {
        minus[m] = left_raw(&[six[0][m], six[1][m], six[2][m], six[3][m], six[4][m]], w, slack);
        plus[m] = left_raw(&[six[5][m], six[4][m], six[3][m], six[2][m], six[1][m]], w, slack);
    }
    InterfacePair { minus, plus }
}

/// Characteristic-wise reconstruction without validating the eigensystem.
#[inline(always)]
pub(crate) fn characteristic_raw<K: Kernel, const N: usize>(
    six: &[[f64; N]],
    eig: &EigenSystem<N>,
    w: &K,
    slack: &mut f64,
) -> InterfacePair<N> {
    let mut proj = [[0.0; N]; 6];
    for (p, u) in proj.iter_mut().zip(six) {
        *p = eig.project(u);
    }
    let InterfacePair { minus, plus } = componentwise(&proj, w, slack);
    InterfacePair { minus: eig.unproject(&minus), plus: eig.unproject(&plus) }
}

/// Projects the six cells `j-2..=j+3` onto the characteristic fields of
/// `eig`, reconstructs each field on both sides of `x_{j+1/2}` and maps back.
pub fn reconstruct_characteristic<const N: usize>(
    six: &[[f64; N]; 6],
    eig: &EigenSystem<N>,
    w: &Weighting,
) -> Result<InterfacePair<N>> {
    let defect = eig.inverse_defect();
    if !(defect <= 1e-12) {
        return Err(WenoError::Decomposition(format!("|L R - I| = {defect:e}")));
    }
    if six.iter().flatten().any(|x| !x.is_finite()) {
        return Err(WenoError::InvalidInput("non-finite cell state".into()));
    }
    Ok(with_kernel!(w, |k| characteristic_raw(six, eig, &k.exact(), &mut 0.0)))
}
