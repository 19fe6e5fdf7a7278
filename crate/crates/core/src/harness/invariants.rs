//! A quick self-check suite run by `weno --seed-check`: small-mesh versions
//! of the solver invariants, for every scheme.

use rand_free::Lcg;

use crate::euler::{prim_to_cons, Euler2d, Primitive};
use crate::problems::{lookup, setup_euler2d};
use crate::reconstruction::reconstruct_left;
use crate::solver::{run_simulation, Boundaries2, Boundary, CflRule, Grid1, Grid2, Operator2, RunConfig};
use crate::weights::{AcmMap, AcmParams, Scheme, WeightConfig, IDEAL_WEIGHTS};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, value: f64, tol: f64) -> Check {
    Check { name: name.into(), passed: value <= tol, detail: format!("{value:.3e} (tolerance {tol:.0e})") }
}

/// Runs every check; never panics on a failed check.
pub fn invariant_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for s in Scheme::ALL {
        let cfg = WeightConfig::new(s);
        out.push(match freestream(&cfg) {
            Ok(v) => check(format!("{}: freestream after 10 steps", s.label()), v, 1e-13),
            Err(e) => failed(format!("{}: freestream", s.label()), e),
        });
        out.push(match periodic_conservation(&cfg) {
            Ok(v) => check(format!("{}: periodic conservation over 100 steps", s.label()), v, 1e-12),
            Err(e) => failed(format!("{}: periodic conservation", s.label()), e),
        });
        out.push(match explosion_symmetry(&cfg) {
            Ok(v) => check(format!("{}: explosion x-y mirror symmetry", s.label()), v, 1e-11),
            Err(e) => failed(format!("{}: explosion symmetry", s.label()), e),
        });
        out.push(match quadratic_exactness(&cfg) {
            Ok(v) => check(format!("{}: quadratic reconstruction", s.label()), v, 1e-12),
            Err(e) => failed(format!("{}: quadratic reconstruction", s.label()), e),
        });
    }
    out.push(acm_shortcut());
    out
}

fn failed(name: String, e: crate::WenoError) -> Check {
    Check { name, passed: false, detail: e.to_string() }
}

fn periodic_box(n: usize, cfg: &WeightConfig) -> crate::Result<Operator2<Euler2d, 4>> {
    let g = Grid2::new(Grid1::new(0.0, 1.0, n)?, Grid1::new(0.0, 1.0, n)?);
    Operator2::new(Euler2d, g, Boundaries2::uniform(Boundary::Periodic), cfg.prepare()?, None)
}

/// Max deviation of a uniform oblique flow after 10 steps.
pub fn freestream(cfg: &WeightConfig) -> crate::Result<f64> {
    let op = periodic_box(16, cfg)?;
    let state: [f64; 4] = prim_to_cons(&Primitive::new(1.3, 0.7, -0.4, 2.1))?;
    let mut run = RunConfig::new(1.0, CflRule::Fixed(0.5));
    run.max_steps = Some(10);
    let out = run_simulation(&op, vec![state; op.grid.len()], &run, op.grid.x.dx())?;
    Ok(out.field.iter().flat_map(|c| (0..4).map(move |m| (c[m] - state[m]).abs())).fold(0.0, f64::max))
}

/// Largest relative drift of the four conserved totals of a smooth
/// periodic flow over 100 steps.
pub fn periodic_conservation(cfg: &WeightConfig) -> crate::Result<f64> {
    let n = 16;
    let op = periodic_box(n, cfg)?;
    let g = op.grid;
    let mut u0 = Vec::with_capacity(g.len());
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (g.x.center(i), g.y.center(j));
            let rho = 1.0 + 0.3 * (2.0 * std::f64::consts::PI * (x + 2.0 * y)).sin();
            u0.push(prim_to_cons(&Primitive::new(rho, 0.5, 0.25, 1.0))?);
        }
    }
    let total = |u: &[[f64; 4]]| {
        let mut s = [0.0; 4];
        for c in u {
            for m in 0..4 {
                s[m] += c[m] * g.cell_area();
            }
        }
        s
    };
    let before = total(&u0);
    let mut run = RunConfig::new(10.0, CflRule::Fixed(0.5));
    run.max_steps = Some(100);
    let out = run_simulation(&op, u0, &run, g.x.dx())?;
    let after = total(&out.field);
    Ok((0..4).map(|m| (after[m] - before[m]).abs() / before[m].abs().max(1.0)).fold(0.0, f64::max))
}

/// `max |rho(i, j) - rho(j, i)|` for the explosion on a 40x40 mesh.
pub fn explosion_symmetry(cfg: &WeightConfig) -> crate::Result<f64> {
    let spec = lookup("explosion")?;
    let n = 40;
    let (op, u0) = setup_euler2d(&spec, n, n, cfg.prepare()?)?;
    let out = run_simulation(&op, u0, &RunConfig::new(0.05, spec.cfl), op.grid.x.dx())?;
    if let Some(b) = out.failure {
        return Err(crate::WenoError::BlowUp(b));
    }
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            worst = worst.max((out.field[j * n + i][0] - out.field[i * n + j][0]).abs());
        }
    }
    Ok(worst)
}

/// Reconstruction error on cell averages of random quadratics.
pub fn quadratic_exactness(cfg: &WeightConfig) -> crate::Result<f64> {
    let w = cfg.prepare()?;
    let mut rng = Lcg::new(17);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b, c) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        // average of a + b x + c x^2 over [k - 1/2, k + 1/2]
        let avg = |k: f64| a + b * k + c * (k * k + 1.0 / 12.0);
        let stencil = [avg(-2.0), avg(-1.0), avg(0.0), avg(1.0), avg(2.0)];
        let exact = a + 0.5 * b + 0.25 * c;
        worst = worst.max((reconstruct_left(&stencil, &w)? - exact).abs());
    }
    Ok(worst)
}

fn acm_shortcut() -> Check {
    let params = AcmParams::default();
    let mut rng = Lcg::new(99);
    let mut mismatches = 0usize;
    for d in IDEAL_WEIGHTS {
        let Ok(map) = AcmMap::new(d, &params) else {
            return Check { name: "ACM shortcut equivalence".into(), passed: false, detail: "bad default parameters".into() };
        };
        for _ in 0..10_000 {
            let w = rng.uniform(0.0, 1.0);
            if map.eval(w).to_bits() != map.eval_full(w).to_bits() {
                mismatches += 1;
            }
        }
    }
    Check {
        name: "ACM shortcut equivalence".into(),
        passed: mismatches == 0,
        detail: format!("{mismatches} mismatches in 30000 samples"),
    }
}

/// Tiny deterministic generator so the library needs no RNG dependency.
mod rand_free {
    pub struct Lcg(u64);

    impl Lcg {
        pub fn new(seed: u64) -> Self {
            Self(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
        }

        pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let unit = (self.0 >> 11) as f64 / (1u64 << 53) as f64;
            lo + (hi - lo) * unit
        }
    }
}
