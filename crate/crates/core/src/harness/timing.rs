use crate::error::{Result, WenoError};
use crate::problems::{Problem, ProblemSpec};
use crate::solver::RunConfig;
use crate::weights::{Scheme, WeightConfig};

use super::run::run_problem;

/// Below this many RK stages per run the timer resolution is doubtful.
pub const MIN_TIMED_STAGES: usize = 100;

/// Per-step cost samples of one scheme, one sample per repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeTiming {
    pub scheme: Scheme,
    /// Seconds per Runge-Kutta step.
    pub samples: Vec<f64>,
}

impl SchemeTiming {
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn median(&self) -> f64 {
        let mut s = self.samples.clone();
        s.sort_by(f64::total_cmp);
        let k = s.len() / 2;
        if s.len() % 2 == 1 {
            s[k]
        } else {
            0.5 * (s[k - 1] + s[k])
        }
    }
}

/// Extra cost over WENO-JS in percent: `(T - T_js) / T_js * 100`.
pub fn extra_cost(t: f64, t_js: f64) -> f64 {
    (t - t_js) / t_js * 100.0
}

/// Share of a mapped scheme's overhead that WENO-ACM avoids, in percent:
/// `(T_x - T_acm) / (T_x - T_js) * 100`.
pub fn reduced_cost(t_x: f64, t_acm: f64, t_js: f64) -> f64 {
    (t_x - t_acm) / (t_x - t_js) * 100.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub problem: Problem,
    pub nx: usize,
    pub ny: usize,
    pub steps: usize,
    pub timings: Vec<SchemeTiming>,
    pub warnings: Vec<String>,
}

impl TimingReport {
    pub fn get(&self, s: Scheme) -> Option<&SchemeTiming> {
        self.timings.iter().find(|t| t.scheme == s)
    }

    /// Mean cost `T(X)`.
    pub fn cost(&self, s: Scheme) -> Option<f64> {
        self.get(s).map(SchemeTiming::mean)
    }

    /// `P(X)` from mean costs.
    pub fn extra_cost(&self, s: Scheme) -> Option<f64> {
        Some(extra_cost(self.cost(s)?, self.cost(Scheme::Js)?))
    }

    /// Reduced cost of WENO-ACM against `versus`, from mean costs.
    pub fn reduced_cost(&self, versus: Scheme) -> Option<f64> {
        Some(reduced_cost(self.cost(versus)?, self.cost(Scheme::Acm)?, self.cost(Scheme::Js)?))
    }
}

/// Times `steps` RK steps of each scheme, `repeats` times, interleaving
/// the schemes within each repeat so slow drifts of the machine affect all
/// of them alike. Only the step bodies are timed (no setup or I/O).
pub fn timing_study(
    spec: &ProblemSpec,
    schemes: &[Scheme],
    nx: usize,
    ny: usize,
    repeats: usize,
    steps: usize,
) -> Result<TimingReport> {
    if repeats == 0 || steps == 0 || schemes.is_empty() {
        return Err(WenoError::Config("timing needs at least one scheme, repeat and step".into()));
    }
    let mut cfg = RunConfig::new(spec.t_end, spec.cfl);
    cfg.max_steps = Some(steps);
    cfg.record_step_times = true;
    let mut warnings = Vec::new();
    if 3 * steps < MIN_TIMED_STAGES {
        warnings.push(format!("only {} RK stages per run; timer resolution may dominate", 3 * steps));
    }

    // one untimed step per scheme to fault in memory and warm caches
    let mut warm = cfg.clone();
    warm.max_steps = Some(1);
    for &s in schemes {
        run_problem(spec, &WeightConfig::new(s), nx, ny, &warm)?;
    }

    let mut timings: Vec<SchemeTiming> = schemes.iter().map(|&scheme| SchemeTiming { scheme, samples: Vec::new() }).collect();
    for _ in 0..repeats {
        for t in &mut timings {
            let run = run_problem(spec, &WeightConfig::new(t.scheme), nx, ny, &cfg)?;
            if let Some(b) = run.failure {
                return Err(WenoError::BlowUp(b));
            }
            let d = &run.diagnostics;
            if d.steps < steps {
                warnings.push(format!("{} reached t_end after {} of {steps} steps", t.scheme.label(), d.steps));
            }
            t.samples.push(d.step_seconds.iter().sum::<f64>() / d.steps as f64);
        }
    }
    Ok(TimingReport { problem: spec.problem, nx, ny, steps, timings, warnings })
}
