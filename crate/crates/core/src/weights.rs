//! Nonlinear WENO weights for the fifth-order scheme.
//!
//! The pipeline is: smoothness indicators `beta_s` of the three
//! third-order substencils, the classic Jiang-Shu weights
//! `omega_s = alpha_s / sum(alpha)` with `alpha_s = d_s / (eps + beta_s)^2`,
//! and then, for the mapped schemes, a per-substencil mapping
//! `alpha_s = g_s(omega_s)` followed by renormalization.
//!
//! Three mappings are provided:
//!
//! * [`map_m`], the rational map of Henrick et al. (WENO-M);
//! * [`map_pm`], the piecewise polynomial map of Feng et al. (WENO-PMk, k = 6 by default);
//! * [`map_acm`], the approximate constant map built from two spliced
//!   signum-like functions [`sgm`]. Outside two transition intervals of
//!   half-width `delta` it is exactly one of the constants `0`, `d_s`, `1`,
//!   so almost every evaluation is a single comparison and assignment.
//!
//! The free functions validate their inputs and are meant for analysis and
//! tests. The solver goes through [`Weighting`], which is validated once and
//! keeps every per-`d_s` constant precomputed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, WenoError};

/// Linear (ideal) weights `d_0, d_1, d_2` of the left-biased fifth-order reconstruction.
pub const IDEAL_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Weights outside `[0, 1]` by at most this much are roundoff and get clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Smoothness indicators `(beta_0, beta_1, beta_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessTriple(pub [f64; 3]);

/// Three nonnegative weights summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTriple([f64; 3]);

impl WeightTriple {
    pub fn new(w: [f64; 3]) -> Result<Self> {
        if w.iter().any(|x| !x.is_finite() || *x < -CLAMP_TOLERANCE) {
            return Err(WenoError::InvalidInput(format!("weights {w:?} must be finite and nonnegative")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > CLAMP_TOLERANCE {
            return Err(WenoError::InvalidInput(format!("weights {w:?} sum to {sum}, not 1")));
        }
        Ok(Self(w))
    }

    pub fn ideal() -> Self {
        Self(IDEAL_WEIGHTS)
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Js,
    M,
    Pm6,
    Acm,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Js, Scheme::M, Scheme::Pm6, Scheme::Acm];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Js => "js",
            Scheme::M => "m",
            Scheme::Pm6 => "pm6",
            Scheme::Acm => "acm",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Js => "WENO-JS",
            Scheme::M => "WENO-M",
            Scheme::Pm6 => "WENO-PM6",
            Scheme::Acm => "WENO-ACM",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().trim_start_matches("weno-") {
            "js" => Ok(Scheme::Js),
            "m" => Ok(Scheme::M),
            "pm6" | "pm" => Ok(Scheme::Pm6),
            "acm" => Ok(Scheme::Acm),
            _ => Err(WenoError::NotFound { kind: "scheme", name: s.to_string() }),
        }
    }
}

/// Tunables of the approximate constant mapping.
///
/// `CFS_s = cfs_fraction * d_s` and `CFSbar_s = 1 - (1 - d_s) / d_s * CFS_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcmParams {
    /// Exponent parameter; the smooth branch of `sgm` uses the power `k + 3`.
    pub k: u32,
    /// Scale factor `A`.
    pub a: f64,
    /// Half-width of the two transition intervals.
    pub delta: f64,
    pub cfs_fraction: f64,
}

impl Default for AcmParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl AcmParams {
    pub const DEFAULT: Self = Self { k: 2, a: 20.0, delta: 1e-6, cfs_fraction: 0.1 };

    pub const fn cfs(&self, d: f64) -> f64 {
        self.cfs_fraction * d
    }

    pub const fn cfs_bar(&self, d: f64) -> f64 {
        1.0 - (1.0 - d) / d * self.cfs(d)
    }

    /// Checks the splicing conditions for one ideal weight.
    pub fn validate_for(&self, d: f64) -> Result<()> {
        if self.k == 0 {
            return Err(WenoError::Config("ACM k must be a positive integer".into()));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(WenoError::Config(format!("ACM scale factor A = {} must be positive", self.a)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(WenoError::Config(format!("ACM delta = {} must be positive", self.delta)));
        }
        if !(self.cfs_fraction > 0.0 && self.cfs_fraction < 1.0) {
            return Err(WenoError::Config(format!(
                "ACM cfs fraction = {} must lie in (0, 1)",
                self.cfs_fraction
            )));
        }
        let (cfs, cfs_bar, delta) = (self.cfs(d), self.cfs_bar(d), self.delta);
        let ok = cfs - delta > 0.0 && cfs + delta < d && d < cfs_bar - delta && cfs_bar + delta < 1.0;
        if !ok {
            return Err(WenoError::Config(format!(
                "ACM splicing condition violated for d = {d}: CFS = {cfs}, CFSbar = {cfs_bar}, delta = {delta} \
                 (need delta < {})",
                self.max_delta(d)
            )));
        }
        Ok(())
    }

    /// Supremum of admissible `delta` for the given ideal weight.
    pub fn max_delta(&self, d: f64) -> f64 {
        let cfs = self.cfs(d);
        cfs.min(d - cfs).min((1.0 - d) * (1.0 - cfs / d)).min((1.0 - d) / d * cfs)
    }

    pub fn validate(&self) -> Result<()> {
        IDEAL_WEIGHTS.iter().try_for_each(|&d| self.validate_for(d))
    }
}

/// User-facing weight configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    pub epsilon: f64,
    pub scheme: Scheme,
    pub acm: AcmParams,
    pub pm_k: u32,
}

impl WeightConfig {
    pub const DEFAULT_EPSILON: f64 = 1e-40;
    pub const DEFAULT_PM_K: u32 = 6;

    pub fn new(scheme: Scheme) -> Self {
        Self { epsilon: Self::DEFAULT_EPSILON, scheme, acm: AcmParams::DEFAULT, pm_k: Self::DEFAULT_PM_K }
    }

    pub fn with_acm(mut self, acm: AcmParams) -> Self {
        self.acm = acm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(WenoError::Config(format!("epsilon = {} must be positive", self.epsilon)));
        }
        if self.pm_k < 2 {
            return Err(WenoError::Config(format!("PM exponent k = {} must be at least 2", self.pm_k)));
        }
        if self.scheme == Scheme::Acm {
            self.acm.validate()?;
        }
        Ok(())
    }

    /// Validates and precomputes everything the inner loop needs.
    pub fn prepare(&self) -> Result<Weighting> {
        Weighting::new(*self)
    }
}

// ---------------------------------------------------------------------------
// Raw kernels. No validation; these run once per interface per field.

#[inline(always)]
pub(crate) fn betas_raw(u: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *u;
    let t0 = a - 2.0 * b + c;
    let t1 = a - 4.0 * b + 3.0 * c;
    let t2 = b - 2.0 * c + d;
    let t3 = b - d;
    let t4 = c - 2.0 * d + e;
    let t5 = 3.0 * c - 4.0 * d + e;
    const C13: f64 = 13.0 / 12.0;
    [
        C13 * t0 * t0 + 0.25 * t1 * t1,
        C13 * t2 * t2 + 0.25 * t3 * t3,
        C13 * t4 * t4 + 0.25 * t5 * t5,
    ]
}

#[inline(always)]
pub(crate) fn js_raw(beta: &[f64; 3], eps: f64) -> [f64; 3] {
    let a0 = IDEAL_WEIGHTS[0] / ((eps + beta[0]) * (eps + beta[0]));
    let a1 = IDEAL_WEIGHTS[1] / ((eps + beta[1]) * (eps + beta[1]));
    let a2 = IDEAL_WEIGHTS[2] / ((eps + beta[2]) * (eps + beta[2]));
    let inv = 1.0 / (a0 + a1 + a2);
    [a0 * inv, a1 * inv, a2 * inv]
}

#[inline(always)]
fn normalize(a: [f64; 3]) -> [f64; 3] {
    let inv = 1.0 / (a[0] + a[1] + a[2]);
    [a[0] * inv, a[1] * inv, a[2] * inv]
}

#[inline(always)]
fn m_raw(w: f64, d: f64) -> f64 {
    w * (d + d * d - 3.0 * d * w + w * w) / (d * d + (1.0 - 2.0 * d) * w)
}

/// `x^n` by binary powering, so the result does not depend on whether the
/// exponent is known at compile time (`powi` may expand differently).
#[inline(always)]
const fn powi_exact(x: f64, n: u32) -> f64 {
    let (mut base, mut n, mut r) = (x, n, 1.0);
    loop {
        if n & 1 == 1 {
            r *= base;
        }
        n >>= 1;
        if n == 0 {
            return r;
        }
        base *= base;
    }
}

/// `(C1, C2)` of the piecewise polynomial map on the branch containing `w`.
#[inline(always)]
const fn pm_constants(d: f64, k: u32, lower: bool) -> (f64, f64) {
    let kp1 = (k + 1) as f64;
    if lower {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (sign * kp1 / powi_exact(d, k + 1), d / kp1)
    } else {
        (-kp1 / powi_exact(1.0 - d, k + 1), (d - (k + 2) as f64) / kp1)
    }
}

#[inline(always)]
fn pm_raw(w: f64, d: f64, c1: f64, c2: f64, kp1: u32) -> f64 {
    c1 * powi_exact(w - d, kp1) * (w + c2) + d
}

fn check_unit(omega: f64) -> Result<f64> {
    if !omega.is_finite() || !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&omega) {
        return Err(WenoError::InvalidInput(format!("weight {omega} lies outside [0, 1]")));
    }
    Ok(omega.clamp(0.0, 1.0))
}

fn check_ideal(d: f64) -> Result<()> {
    if d > 0.0 && d < 1.0 {
        Ok(())
    } else {
        Err(WenoError::InvalidInput(format!("ideal weight {d} must lie in (0, 1)")))
    }
}

// ---------------------------------------------------------------------------
// Public operations.

/// Jiang-Shu smoothness indicators of the stencil `u_{j-2..j+2}`.
pub fn smoothness_indicators(stencil: &[f64; 5]) -> Result<SmoothnessTriple> {
    if stencil.iter().any(|v| !v.is_finite()) {
        return Err(WenoError::InvalidInput(format!("non-finite stencil {stencil:?}")));
    }
    Ok(SmoothnessTriple(betas_raw(stencil)))
}

/// Classic WENO-JS weights with `alpha_s = d_s / (eps + beta_s)^2`.
pub fn weights_js(beta: &SmoothnessTriple, epsilon: f64) -> Result<WeightTriple> {
    if beta.0.iter().any(|b| !b.is_finite() || *b < 0.0) {
        return Err(WenoError::InvalidInput(format!("smoothness indicators {:?} must be finite and >= 0", beta.0)));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(WenoError::InvalidInput(format!("epsilon = {epsilon} must be positive")));
    }
    Ok(WeightTriple(js_raw(&beta.0, epsilon)))
}

/// WENO-M map `g(w) = w (d + d^2 - 3 d w + w^2) / (d^2 + (1 - 2d) w)`.
pub fn map_m(omega: f64, d: f64) -> Result<f64> {
    check_ideal(d)?;
    Ok(m_raw(check_unit(omega)?, d))
}

/// WENO-PMk map `g(w) = C1 (w - d)^(k+1) (w + C2) + d` with
///
/// * `C1 = (-1)^k (k+1) / d^(k+1)`, `C2 = d / (k+1)` for `w <= d`,
/// * `C1 = -(k+1) / (1-d)^(k+1)`, `C2 = (d - (k+2)) / (k+1)` for `w > d`.
pub fn map_pm(omega: f64, d: f64, k: u32) -> Result<f64> {
    check_ideal(d)?;
    if k < 2 {
        return Err(WenoError::InvalidInput(format!("PM exponent k = {k} must be at least 2")));
    }
    let w = check_unit(omega)?;
    let (c1, c2) = pm_constants(d, k, w <= d);
    Ok(pm_raw(w, d, c1, c2, k + 1))
}

/// Signum-like function: `x / |x|` for `|x| >= delta`, otherwise
/// `x / ((A (delta^2 - x^2))^(k+3) + |x|)`. Odd and nondecreasing.
#[inline]
pub fn sgm(x: f64, delta: f64, a: f64, k: u32) -> f64 {
    let ax = x.abs();
    if ax >= delta {
        x / ax
    } else {
        x / ((a * (delta * delta - x * x)).powi(k as i32 + 3) + ax)
    }
}

/// Approximate constant map for the ideal weight `d`. Parameters are
/// validated on construction only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcmMap {
    d: f64,
    cfs: f64,
    cfs_bar: f64,
    delta: f64,
    a: f64,
    k: u32,
    half_d: f64,
    half_rest: f64,
    // plateau values, computed through the same expressions as the smooth
    // branch; indexed by `2 * upper + (x >= 0)`
    plateau: [f64; 4],
    centre: [f64; 2],
}

impl AcmMap {
    pub fn new(d: f64, params: &AcmParams) -> Result<Self> {
        check_ideal(d)?;
        params.validate_for(d)?;
        let half_d = d / 2.0;
        let half_rest = (1.0 - d) / 2.0;
        let mut map = Self {
            d,
            cfs: params.cfs(d),
            cfs_bar: params.cfs_bar(d),
            delta: params.delta,
            a: params.a,
            k: params.k,
            half_d,
            half_rest,
            plateau: [0.0; 4],
            centre: [0.0; 2],
        };
        map.plateau = [map.lower(-1.0), map.lower(1.0), map.upper(-1.0), map.upper(1.0)];
        map.centre = [map.cfs, map.cfs_bar];
        Ok(map)
    }

    pub fn cfs(&self) -> f64 {
        self.cfs
    }

    pub fn cfs_bar(&self) -> f64 {
        self.cfs_bar
    }

    pub fn ideal(&self) -> f64 {
        self.d
    }

    #[inline(always)]
    fn lower(&self, s: f64) -> f64 {
        acm_lower(self.half_d, s)
    }

    #[inline(always)]
    fn upper(&self, s: f64) -> f64 {
        acm_upper(self.d, self.half_rest, s)
    }

    #[inline(always)]
    fn smooth(&self, x: f64) -> f64 {
        x / ((self.a * (self.delta * self.delta - x * x)).powi(self.k as i32 + 3) + x.abs())
    }

    /// Evaluates the map, short-circuiting to a stored constant whenever
    /// `omega` is outside both transition intervals. Expects `omega` in `[0, 1]`.
    /// The plateau path is a table lookup rather than nested branches: in
    /// smooth regions `omega` hovers around `d`, which defeats branch
    /// prediction.
    #[inline(always)]
    pub fn eval(&self, omega: f64) -> f64 {
        let upper = usize::from(omega > self.d);
        let x = omega - self.centre[upper];
        if x.abs() >= self.delta {
            self.plateau[2 * upper + usize::from(x >= 0.0)]
        } else {
            self.transition(x, upper == 1)
        }
    }

    // kept out of line so the plateau path stays a few instructions
    #[cold]
    #[inline(never)]
    fn transition(&self, x: f64, upper: bool) -> f64 {
        let s = self.smooth(x);
        if upper {
            self.upper(s)
        } else {
            self.lower(s)
        }
    }

    /// Same map, always routed through [`sgm`].
    pub fn eval_full(&self, omega: f64) -> f64 {
        if omega <= self.d {
            self.lower(sgm(omega - self.cfs, self.delta, self.a, self.k))
        } else {
            self.upper(sgm(omega - self.cfs_bar, self.delta, self.a, self.k))
        }
    }
}

// (d/2) sgm + d/2, evaluated as (d/2)(sgm + 1) so the plateaus are exact
#[inline(always)]
const fn acm_lower(half_d: f64, s: f64) -> f64 {
    half_d * (s + 1.0)
}

// ((1-d)/2) sgm + (1+d)/2, evaluated as d + ((1-d)/2)(sgm + 1)
#[inline(always)]
const fn acm_upper(d: f64, half_rest: f64, s: f64) -> f64 {
    d + half_rest * (s + 1.0)
}

/// Approximate constant map `g^ACM` for one weight.
pub fn map_acm(omega: f64, d: f64, params: &AcmParams) -> Result<f64> {
    let map = AcmMap::new(d, params)?;
    Ok(map.eval(check_unit(omega)?))
}

/// Maps a JS weight triple under the configured scheme and renormalizes.
pub fn apply_mapping(w: &WeightTriple, cfg: &WeightConfig) -> Result<WeightTriple> {
    let weighting = Weighting::new(*cfg)?;
    let mut omega = [0.0; 3];
    for (o, &x) in omega.iter_mut().zip(&w.0) {
        *o = check_unit(x)?;
    }
    if weighting.mapper.is_identity() {
        return Ok(WeightTriple(omega));
    }
    let alpha = weighting.mapper.map(&omega);
    let sum: f64 = alpha.iter().sum();
    if !(sum > 0.0 && sum.is_finite()) {
        return Err(WenoError::DegenerateWeights);
    }
    Ok(WeightTriple(normalize(alpha)))
}

// ---------------------------------------------------------------------------
// Prepared weighting used by the reconstruction kernels.

#[derive(Debug, Clone, Copy, PartialEq)]
struct PmBranchConstants {
    lower: (f64, f64),
    upper: (f64, f64),
}

/// PM constants of all three weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PmLanes {
    consts: [PmBranchConstants; 3],
    kp1: u32,
}

impl PmLanes {
    const fn new(k: u32) -> Self {
        let zero = PmBranchConstants { lower: (0.0, 0.0), upper: (0.0, 0.0) };
        let mut consts = [zero; 3];
        let mut s = 0;
        while s < 3 {
            let d = IDEAL_WEIGHTS[s];
            consts[s] = PmBranchConstants { lower: pm_constants(d, k, true), upper: pm_constants(d, k, false) };
            s += 1;
        }
        Self { consts, kp1: k + 1 }
    }

    #[inline(always)]
    fn map(&self, w: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for s in 0..3 {
            let d = IDEAL_WEIGHTS[s];
            let (lo, hi) = (self.consts[s].lower, self.consts[s].upper);
            let below = w[s] <= d;
            out[s] = pm_raw(w[s], d, select(below, lo.0, hi.0), select(below, lo.1, hi.1), self.kp1);
        }
        out
    }
}

/// The three ACM maps' plateau constants, one array per quantity so the
/// plateau test is the same straight-line code for every weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AcmLanes {
    cfs: [f64; 3],
    cfs_bar: [f64; 3],
    delta: f64,
    middle: [f64; 3],
    top: [f64; 3],
}

impl AcmLanes {
    /// Same expressions as [`AcmMap::new`]; no validation.
    const fn raw(p: &AcmParams) -> Self {
        let mut l = Self { cfs: [0.0; 3], cfs_bar: [0.0; 3], delta: p.delta, middle: [0.0; 3], top: [0.0; 3] };
        let mut s = 0;
        while s < 3 {
            let d = IDEAL_WEIGHTS[s];
            l.cfs[s] = p.cfs(d);
            l.cfs_bar[s] = p.cfs_bar(d);
            l.middle[s] = acm_lower(d / 2.0, 1.0);
            l.top[s] = acm_upper(d, (1.0 - d) / 2.0, 1.0);
            s += 1;
        }
        l
    }

    /// Testing against both centres matches `AcmMap::eval`, which only tests
    /// the centre on `omega`'s side of `d`, provided each centre's
    /// transition interval stays clear of `d` in floating point too.
    fn new(maps: &[AcmMap; 3], p: &AcmParams) -> Result<Self> {
        let l = Self::raw(p);
        for (s, m) in maps.iter().enumerate() {
            let clear = (m.d - m.cfs).abs() >= p.delta && (m.d - m.cfs_bar).abs() >= p.delta;
            let same = m.cfs == l.cfs[s]
                && m.cfs_bar == l.cfs_bar[s]
                && m.plateau[0].to_bits() == 0
                && m.plateau[1] == l.middle[s]
                && m.plateau[2] == l.middle[s]
                && m.plateau[3] == l.top[s];
            if !clear || !same {
                return Err(WenoError::Config(format!("ACM transition intervals too close to d = {}", m.d)));
            }
        }
        Ok(l)
    }

    /// Plateau values, and whether every weight is on a plateau, i.e.
    /// whether those values are the maps' results.
    #[inline(always)]
    fn plateau(&self, w: &[f64; 3]) -> ([f64; 3], bool) {
        let mut g = [0.0; 3];
        let mut flat = true;
        for s in 0..3 {
            // slots of unclamped JS weights agree with those of clamped ones
            let lo = w[s] - self.cfs[s];
            let hi = w[s] - self.cfs_bar[s];
            g[s] = if hi >= 0.0 {
                self.top[s]
            } else if lo >= 0.0 {
                self.middle[s]
            } else {
                0.0
            };
            flat &= (lo.abs() >= self.delta) & (hi.abs() >= self.delta);
        }
        (g, flat)
    }
}

const DEFAULT_PM_LANES: PmLanes = PmLanes::new(WeightConfig::DEFAULT_PM_K);
const DEFAULT_ACM_LANES: AcmLanes = AcmLanes::raw(&AcmParams::DEFAULT);

/// Where a kernel finds its constants. Held at run time they compete for
/// registers with the reconstruction itself, which costs the ACM sweep
/// about a quarter of its time; for the default parameters [`Defaults`]
/// makes them compile-time constants instead.
pub(crate) trait Source<T>: Copy {
    fn get(&self) -> &T;
}

#[derive(Clone, Copy)]
pub(crate) struct Runtime<T>(T);

impl<T: Copy> Source<T> for Runtime<T> {
    #[inline(always)]
    fn get(&self) -> &T {
        &self.0
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Defaults;

impl Source<PmLanes> for Defaults {
    #[inline(always)]
    fn get(&self) -> &PmLanes {
        &DEFAULT_PM_LANES
    }
}

impl Source<AcmLanes> for Defaults {
    #[inline(always)]
    fn get(&self) -> &AcmLanes {
        &DEFAULT_ACM_LANES
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mapper {
    Identity,
    M,
    Pm(PmLanes),
    Acm { maps: [AcmMap; 3], lanes: AcmLanes },
}

impl Mapper {
    fn is_identity(&self) -> bool {
        matches!(self, Mapper::Identity)
    }

    /// Mapped (unnormalized) alphas of weights already in `[0, 1]`.
    #[inline(always)]
    fn map(&self, w: &[f64; 3]) -> [f64; 3] {
        match self {
            Mapper::Identity => *w,
            Mapper::M => [
                m_raw(w[0], IDEAL_WEIGHTS[0]),
                m_raw(w[1], IDEAL_WEIGHTS[1]),
                m_raw(w[2], IDEAL_WEIGHTS[2]),
            ],
            Mapper::Pm(lanes) => lanes.map(w),
            Mapper::Acm { maps, .. } => [maps[0].eval(w[0]), maps[1].eval(w[1]), maps[2].eval(w[2])],
        }
    }
}

/// A validated [`WeightConfig`] with its mapping constants precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weighting {
    cfg: WeightConfig,
    mapper: Mapper,
}

impl Weighting {
    pub fn new(cfg: WeightConfig) -> Result<Self> {
        cfg.validate()?;
        let mapper = match cfg.scheme {
            Scheme::Js => Mapper::Identity,
            Scheme::M => Mapper::M,
            Scheme::Pm6 => Mapper::Pm(PmLanes::new(cfg.pm_k)),
            Scheme::Acm => {
                let [d0, d1, d2] = IDEAL_WEIGHTS;
                let maps = [AcmMap::new(d0, &cfg.acm)?, AcmMap::new(d1, &cfg.acm)?, AcmMap::new(d2, &cfg.acm)?];
                let lanes = AcmLanes::new(&maps, &cfg.acm)?;
                Mapper::Acm { maps, lanes }
            }
        };
        Ok(Self { cfg, mapper })
    }

    pub fn config(&self) -> &WeightConfig {
        &self.cfg
    }

    pub fn scheme(&self) -> Scheme {
        self.cfg.scheme
    }

    /// Final nonlinear weights for the given smoothness indicators.
    ///
    /// With a validated configuration the mapped alphas cannot all vanish
    /// (their arguments sum to one while every map is positive on a set
    /// covering `[1/3, 1]`), so no degenerate check is made here; NaN input
    /// propagates and is caught by the solver's blow-up checks.
    #[inline(always)]
    pub fn nonlinear_weights(&self, beta: &[f64; 3]) -> [f64; 3] {
        with_kernel!(self, |k| k.exact().weights(beta, &mut 0.0))
    }

    /// The scheme's weight kernel; see [`with_kernel`].
    #[inline(always)]
    pub(crate) fn kernel(&self) -> KernelRef<'_> {
        let eps = self.cfg.epsilon;
        match &self.mapper {
            Mapper::Identity => KernelRef::Js(JsKernel { eps }),
            Mapper::M => KernelRef::M(MKernel { eps }),
            Mapper::Pm(lanes) if *lanes == DEFAULT_PM_LANES => KernelRef::Pm6(PmKernel { eps, lanes: Defaults }),
            Mapper::Pm(lanes) => KernelRef::Pm(PmKernel { eps, lanes: Runtime(*lanes) }),
            Mapper::Acm { maps, lanes } if *lanes == DEFAULT_ACM_LANES => {
                KernelRef::AcmDefault(AcmKernel { eps, lanes: Defaults, maps })
            }
            Mapper::Acm { maps, lanes } => KernelRef::Acm(AcmKernel { eps, lanes: Runtime(*lanes), maps }),
        }
    }
}

/// Nonlinear weights of one scheme. Hot loops are written generically over
/// this trait and instantiated once per scheme through [`with_kernel`], so
/// the scheme is resolved once per sweep instead of once per stencil.
pub(crate) trait Kernel: Copy {
    /// Kernel to redo the work with after `weights` lowered the slack.
    type Exact: Kernel;

    /// Nonlinear weights. A kernel may use a shortcut that is only valid for
    /// some inputs; when it is not, the kernel lowers `slack` below zero and
    /// the caller must recompute with [`Kernel::exact`], whose results are
    /// always final.
    fn weights(&self, beta: &[f64; 3], slack: &mut f64) -> [f64; 3];

    fn exact(&self) -> Self::Exact;
}

/// `if c { a } else { b }` through bit masks. Mapped weights hover around
/// `d` in smooth regions, so a data-dependent branch here mispredicts often.
#[inline(always)]
fn select(c: bool, a: f64, b: f64) -> f64 {
    let m = (c as u64).wrapping_neg();
    f64::from_bits((a.to_bits() & m) | (b.to_bits() & !m))
}

#[inline(always)]
fn clamp_unit(w: [f64; 3]) -> [f64; 3] {
    [w[0].clamp(0.0, 1.0), w[1].clamp(0.0, 1.0), w[2].clamp(0.0, 1.0)]
}

#[derive(Clone, Copy)]
pub(crate) struct JsKernel {
    eps: f64,
}

impl Kernel for JsKernel {
    type Exact = Self;

    #[inline(always)]
    fn weights(&self, beta: &[f64; 3], _: &mut f64) -> [f64; 3] {
        js_raw(beta, self.eps)
    }

    fn exact(&self) -> Self {
        *self
    }
}

#[derive(Clone, Copy)]
pub(crate) struct MKernel {
    eps: f64,
}

impl Kernel for MKernel {
    type Exact = Self;

    #[inline(always)]
    fn weights(&self, beta: &[f64; 3], _: &mut f64) -> [f64; 3] {
        normalize(Mapper::M.map(&clamp_unit(js_raw(beta, self.eps))))
    }

    fn exact(&self) -> Self {
        *self
    }
}

#[derive(Clone, Copy)]
pub(crate) struct PmKernel<S> {
    eps: f64,
    lanes: S,
}

impl<S: Source<PmLanes>> Kernel for PmKernel<S> {
    type Exact = Self;

    #[inline(always)]
    fn weights(&self, beta: &[f64; 3], _: &mut f64) -> [f64; 3] {
        normalize(self.lanes.get().map(&clamp_unit(js_raw(beta, self.eps))))
    }

    fn exact(&self) -> Self {
        *self
    }
}

/// The plateau shortcut alone: off the plateaus it lowers the caller's
/// slack instead of evaluating the map, which keeps any call out of the hot
/// loop.
#[derive(Clone, Copy)]
pub(crate) struct AcmKernel<'a, S> {
    eps: f64,
    lanes: S,
    maps: &'a [AcmMap; 3],
}

/// Plateau shortcut with the full map as per-call fallback.
#[derive(Clone, Copy)]
pub(crate) struct AcmExactKernel<'a, S>(AcmKernel<'a, S>);

impl<S> AcmKernel<'_, S> {
    #[cold]
    #[inline(never)]
    fn transition(&self, w: &[f64; 3]) -> [f64; 3] {
        let m = self.maps;
        let w = clamp_unit(*w);
        normalize([m[0].eval(w[0]), m[1].eval(w[1]), m[2].eval(w[2])])
    }
}

impl<'a, S: Source<AcmLanes>> Kernel for AcmKernel<'a, S> {
    type Exact = AcmExactKernel<'a, S>;

    #[inline(always)]
    fn weights(&self, beta: &[f64; 3], slack: &mut f64) -> [f64; 3] {
        let (g, flat) = self.lanes.get().plateau(&js_raw(beta, self.eps));
        // a float rather than a flag keeps the bookkeeping with the arithmetic
        *slack = slack.min(if flat { 0.0 } else { -1.0 });
        normalize(g)
    }

    fn exact(&self) -> AcmExactKernel<'a, S> {
        AcmExactKernel(*self)
    }
}

impl<S: Source<AcmLanes>> Kernel for AcmExactKernel<'_, S> {
    type Exact = Self;

    #[inline(always)]
    fn weights(&self, beta: &[f64; 3], _: &mut f64) -> [f64; 3] {
        let w = js_raw(beta, self.0.eps);
        match self.0.lanes.get().plateau(&w) {
            (g, true) => normalize(g),
            _ => self.0.transition(&w),
        }
    }

    fn exact(&self) -> Self {
        *self
    }
}

pub(crate) enum KernelRef<'a> {
    Js(JsKernel),
    M(MKernel),
    Pm(PmKernel<Runtime<PmLanes>>),
    Pm6(PmKernel<Defaults>),
    Acm(AcmKernel<'a, Runtime<AcmLanes>>),
    AcmDefault(AcmKernel<'a, Defaults>),
}

/// Evaluates `$body` with `$k` bound to the concrete kernel of a
/// [`Weighting`], instantiating the body once per kernel.
macro_rules! with_kernel {
    ($w:expr, |$k:ident| $body:expr) => {
        match $w.kernel() {
            $crate::weights::KernelRef::Js($k) => $body,
            $crate::weights::KernelRef::M($k) => $body,
            $crate::weights::KernelRef::Pm($k) => $body,
            $crate::weights::KernelRef::Pm6($k) => $body,
            $crate::weights::KernelRef::Acm($k) => $body,
            $crate::weights::KernelRef::AcmDefault($k) => $body,
        }
    };
}
pub(crate) use with_kernel;

#[cfg(test)]
mod tests {
    use super::*;

    const D: [f64; 3] = IDEAL_WEIGHTS;

    fn acm_default(d: f64) -> AcmMap {
        AcmMap::new(d, &AcmParams::default()).unwrap()
    }

    #[test]
    fn smoothness_of_constant_linear_and_step_data() {
        assert_eq!(smoothness_indicators(&[3.5; 5]).unwrap().0, [0.0; 3]);
        assert_eq!(smoothness_indicators(&[-2.0, -1.0, 0.0, 1.0, 2.0]).unwrap().0, [1.0; 3]);
        let b = smoothness_indicators(&[0.0, 0.0, 0.0, 1.0, 1.0]).unwrap().0;
        assert_eq!(b[0], 0.0);
        assert!((b[1] - 4.0 / 3.0).abs() < 1e-15);
        assert!((b[2] - 10.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn smoothness_rejects_non_finite() {
        assert!(matches!(
            smoothness_indicators(&[0.0, f64::NAN, 0.0, 0.0, 0.0]),
            Err(WenoError::InvalidInput(_))
        ));
    }

    #[test]
    fn equal_betas_give_ideal_weights() {
        for beta in [[0.0; 3], [1.0; 3]] {
            let w = weights_js(&SmoothnessTriple(beta), 1e-40).unwrap().as_array();
            for s in 0..3 {
                assert!((w[s] - D[s]).abs() < 1e-15, "{w:?}");
            }
        }
    }

    #[test]
    fn js_weights_of_step_match_oracle() {
        // oracle: 50-digit evaluation, see tests/oracles/weno_oracles.py
        let w = weights_js(&SmoothnessTriple([0.0, 4.0 / 3.0, 10.0 / 3.0]), 1e-40).unwrap().as_array();
        assert_eq!(w[0], 1.0);
        assert!((w[1] / 3.375e-80 - 1.0).abs() < 1e-14);
        assert!((w[2] / 2.7e-81 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weights_js_rejects_bad_input() {
        assert!(weights_js(&SmoothnessTriple([-1.0, 0.0, 0.0]), 1e-40).is_err());
        assert!(weights_js(&SmoothnessTriple([0.0; 3]), 0.0).is_err());
    }

    #[test]
    fn m_map_values() {
        assert_eq!(map_m(0.0, 0.6).unwrap(), 0.0);
        assert!((map_m(0.6, 0.6).unwrap() - 0.6).abs() < 1e-15);
        assert!((map_m(1.0, 0.6).unwrap() - 1.0).abs() < 1e-15);
        assert!((map_m(0.5, 0.6).unwrap() - 31.0 / 52.0).abs() < 1e-15);
        assert!((map_m(0.1, 0.1).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn maps_reject_domain_violations() {
        assert!(map_m(1.5, 0.6).is_err());
        assert!(map_m(0.5, 0.0).is_err());
        assert!(map_pm(-0.1, 0.6, 6).is_err());
        assert!(map_pm(0.5, 0.6, 1).is_err());
        assert!(map_acm(2.0, 0.6, &AcmParams::default()).is_err());
    }

    #[test]
    fn roundoff_excursions_are_clamped() {
        assert_eq!(map_m(-1e-13, 0.6).unwrap(), 0.0);
        assert_eq!(map_acm(1.0 + 1e-13, 0.6, &AcmParams::default()).unwrap(), 1.0);
    }

    #[test]
    fn pm_map_values() {
        assert!(map_pm(0.0, 0.6, 6).unwrap().abs() < 1e-15);
        assert!((map_pm(1.0, 0.6, 6).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(map_pm(0.6, 0.6, 6).unwrap(), 0.6);
        // exact rational 741/1280
        assert_eq!(map_pm(0.3, 0.6, 6).unwrap(), 0.578_906_25);
    }

    #[test]
    fn pm_cached_and_uncached_agree_bitwise() {
        let weighting = WeightConfig::new(Scheme::Pm6).prepare().unwrap();
        let Mapper::Pm(_) = weighting.mapper else { panic!("expected PM mapper") };
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let mapped = weighting.mapper.map(&[x, x, x]);
            for s in 0..3 {
                assert_eq!(mapped[s].to_bits(), map_pm(x, D[s], 6).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn sgm_branches() {
        assert_eq!(sgm(0.5, 1e-6, 20.0, 2), 1.0);
        assert_eq!(sgm(-0.5, 1e-6, 20.0, 2), -1.0);
        assert_eq!(sgm(0.0, 1e-6, 20.0, 2), 0.0);
        // the smooth branch at 5e-7 is 1 - 1.5e-48 exactly, which rounds to 1
        let v = sgm(5e-7, 1e-6, 20.0, 2);
        assert!(v > 0.0 && v <= 1.0);
        assert_eq!(v, 1.0);
        // deep inside the transition the value is visibly fractional (oracle)
        assert!((sgm(1e-60, 1e-6, 20.0, 2) / 3.124_999_023_437_805e-7 - 1.0).abs() < 1e-13);
        assert!((sgm(-3e-55, 1e-6, 20.0, 2) / -0.085_714_285_714_285_71 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn acm_plateaus_and_centre() {
        let p = AcmParams::default();
        assert_eq!(map_acm(0.3, 0.6, &p).unwrap(), 0.6);
        assert_eq!(map_acm(0.01, 0.6, &p).unwrap(), 0.0);
        assert_eq!(map_acm(0.99, 0.6, &p).unwrap(), 1.0);
        assert_eq!(map_acm(0.06, 0.6, &p).unwrap(), 0.3);
        let m = acm_default(0.6);
        assert_eq!(m.cfs(), 0.06);
        assert!((m.cfs_bar() - 0.96).abs() < 1e-15);
    }

    #[test]
    fn default_parameters_use_the_constant_kernels() {
        let acm = WeightConfig::new(Scheme::Acm).prepare().unwrap();
        let Mapper::Acm { lanes, .. } = acm.mapper else { panic!("expected ACM mapper") };
        assert_eq!(lanes, DEFAULT_ACM_LANES);
        assert!(matches!(acm.kernel(), KernelRef::AcmDefault(_)));
        let pm = WeightConfig::new(Scheme::Pm6).prepare().unwrap();
        assert_eq!(pm.mapper, Mapper::Pm(DEFAULT_PM_LANES));
        assert!(matches!(pm.kernel(), KernelRef::Pm6(_)));

        let other = AcmParams { cfs_fraction: 0.2, ..AcmParams::DEFAULT };
        let acm = WeightConfig::new(Scheme::Acm).with_acm(other).prepare().unwrap();
        assert!(matches!(acm.kernel(), KernelRef::Acm(_)));
        let pm = WeightConfig { pm_k: 4, ..WeightConfig::new(Scheme::Pm6) }.prepare().unwrap();
        assert!(matches!(pm.kernel(), KernelRef::Pm(_)));
    }

    #[test]
    fn non_default_kernels_match_the_maps() {
        let configs = [
            WeightConfig::new(Scheme::Acm).with_acm(AcmParams { k: 3, a: 10.0, delta: 1e-4, cfs_fraction: 0.3 }),
            WeightConfig { pm_k: 3, ..WeightConfig::new(Scheme::Pm6) },
        ];
        for cfg in configs {
            let w = cfg.prepare().unwrap();
            for i in 0..=400 {
                // sweeps the JS weights through every plateau and transition
                let beta = [i as f64 / 40.0, 1.0, (400 - i) as f64 / 40.0];
                let slow = apply_mapping(&weights_js(&SmoothnessTriple(beta), cfg.epsilon).unwrap(), &cfg).unwrap();
                assert_eq!(w.nonlinear_weights(&beta).map(f64::to_bits), slow.0.map(f64::to_bits), "{beta:?}");
            }
        }
    }

    #[test]
    fn acm_fixed_points_exact_for_every_ideal_weight() {
        for &d in &D {
            let m = acm_default(d);
            assert_eq!(m.eval(0.0), 0.0);
            assert_eq!(m.eval(d), d);
            assert_eq!(m.eval(1.0), 1.0);
            assert_eq!(m.eval_full(1.0), 1.0);
            // upper plateau below CFSbar is exactly d as well
            assert_eq!(m.eval((d + m.cfs_bar()) / 2.0), d);
        }
    }

    #[test]
    fn acm_params_validation() {
        assert!(AcmParams::default().validate().is_ok());
        let bad = AcmParams { delta: 0.05, ..AcmParams::default() };
        assert!(matches!(bad.validate(), Err(WenoError::Config(_))));
        let bad = AcmParams { cfs_fraction: 1.0, ..AcmParams::default() };
        assert!(bad.validate().is_err());
        let bad = AcmParams { k: 0, ..AcmParams::default() };
        assert!(bad.validate().is_err());
        // the smallest fraction of the robustness sweep still satisfies the splicing condition
        let tiny = AcmParams { cfs_fraction: 0.001, ..AcmParams::default() };
        assert!(tiny.validate().is_ok());
        assert!((tiny.max_delta(0.1) - 1e-4).abs() < 1e-12);
    }

    #[test]
    fn apply_mapping_fixed_points_and_plateaus() {
        let ideal = WeightTriple::ideal();
        for scheme in Scheme::ALL {
            let out = apply_mapping(&ideal, &WeightConfig::new(scheme)).unwrap().as_array();
            for s in 0..3 {
                assert!((out[s] - D[s]).abs() < 1e-15, "{scheme}: {out:?}");
            }
        }
        let w = WeightTriple::new([0.2, 0.5, 0.3]).unwrap();
        let acm = apply_mapping(&w, &WeightConfig::new(Scheme::Acm)).unwrap().as_array();
        for s in 0..3 {
            assert!((acm[s] - D[s]).abs() < 1e-15);
        }
        let js = apply_mapping(&w, &WeightConfig::new(Scheme::Js)).unwrap();
        assert_eq!(js, w);
    }

    #[test]
    fn apply_mapping_m_matches_rational_oracle() {
        let w = WeightTriple::new([0.2, 0.5, 0.3]).unwrap();
        let out = apply_mapping(&w, &WeightConfig::new(Scheme::M)).unwrap().as_array();
        let expect = [0.10566719349740347, 0.59494242492662, 0.2993903815759765];
        for s in 0..3 {
            assert!((out[s] - expect[s]).abs() < 1e-15, "{out:?}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = WeightConfig::new(Scheme::Pm6);
        cfg.pm_k = 1;
        assert!(cfg.prepare().is_err());
        let mut cfg = WeightConfig::new(Scheme::Js);
        cfg.epsilon = 0.0;
        assert!(cfg.prepare().is_err());
        // ACM parameters are irrelevant to the other schemes
        let cfg = WeightConfig::new(Scheme::M).with_acm(AcmParams { delta: 1.0, ..AcmParams::default() });
        assert!(cfg.prepare().is_ok());
    }

    #[test]
    fn prepared_weights_match_free_functions() {
        let beta = [0.3, 1e-3, 2.5];
        let js = weights_js(&SmoothnessTriple(beta), 1e-40).unwrap();
        for scheme in Scheme::ALL {
            let cfg = WeightConfig::new(scheme);
            let fast = cfg.prepare().unwrap().nonlinear_weights(&beta);
            let slow = apply_mapping(&js, &cfg).unwrap().as_array();
            assert_eq!(fast, slow, "{scheme}");
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
            assert_eq!(s.label().parse::<Scheme>().unwrap(), s);
        }
        assert!("weno-z".parse::<Scheme>().is_err());
    }
}
