//! Command-line front end: single runs, convergence and long-time studies,
//! the CFS robustness sweep, per-step timing, and the problem catalog.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weno::harness::config::FileConfig;
use weno::harness::invariants::invariant_suite;
use weno::harness::io::{
    field_file, fmt_f64, solution_slice, write_convergence_csv, write_field, write_longtime_csv, write_slice, write_sweep_csv,
    write_timing_csv,
};
use weno::harness::{
    cfs_sweep, convergence_study, default_run_config, long_time_study, run_problem, timing_study, Solution, ACCURACY_MESHES,
    DISCONTINUOUS_MESHES, LONG_TIMES,
};
use weno::problems::{catalog, lookup, Equation, Problem, ProblemSpec, BLASTWAVE_CFS_SWEEP};
use weno::solver::CflRule;
use weno::{AcmParams, Scheme, WeightConfig, WenoError};

const EXIT_USAGE: u8 = 2;
const EXIT_BLOWUP: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "weno", version, about = "Fifth-order finite-volume WENO solver (JS, M, PM6 and ACM weights)")]
struct Cli {
    /// Run the built-in invariant suite before anything else; exits 4 on failure.
    #[arg(long, global = true)]
    seed_check: bool,

    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default, Clone)]
struct Common {
    /// Problem name (see `weno list`).
    #[arg(long, global = true)]
    problem: Option<String>,
    /// js, m, pm6 or acm. Studies run all four when omitted.
    #[arg(long, global = true)]
    scheme: Option<String>,
    #[arg(long, global = true)]
    nx: Option<usize>,
    #[arg(long, global = true)]
    ny: Option<usize>,
    /// Fixed CFL number, replacing the problem's own rule.
    #[arg(long, global = true)]
    cfl: Option<f64>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    #[arg(long = "acm-k", global = true)]
    acm_k: Option<u32>,
    #[arg(long = "acm-A", global = true)]
    acm_a: Option<f64>,
    #[arg(long = "acm-delta", global = true)]
    acm_delta: Option<f64>,
    #[arg(long = "acm-cfs-fraction", global = true)]
    acm_cfs_fraction: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Timing repeats.
    #[arg(long, global = true)]
    repeats: Option<usize>,
    /// Timed RK steps per repeat.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// INI-style configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One simulation; writes a slice (1D) or field file (2D).
    Run,
    /// Error and order table of an advection problem.
    Converge,
    /// Errors of the long-time advection run at t = 1, 10, ..., 1000.
    Longtime,
    /// WENO-ACM robustness sweep over cfs_fraction.
    SweepCfs,
    /// Per-step cost of the four schemes, serial.
    Time,
    /// The problem catalog.
    List,
}

/// Flags merged over the configuration file.
struct Settings {
    c: Common,
}

impl Settings {
    fn new(mut c: Common) -> weno::Result<Self> {
        if let Some(path) = c.config.clone() {
            let f = FileConfig::load(&path)?;
            c.problem = c.problem.or(f.problem);
            c.scheme = c.scheme.or(f.scheme);
            c.nx = c.nx.or(f.nx);
            c.ny = c.ny.or(f.ny);
            c.cfl = c.cfl.or(f.cfl);
            c.t_end = c.t_end.or(f.t_end);
            c.out_dir = c.out_dir.or(f.out_dir);
            c.epsilon = c.epsilon.or(f.epsilon);
            c.acm_k = c.acm_k.or(f.acm_k);
            c.acm_a = c.acm_a.or(f.acm_a);
            c.acm_delta = c.acm_delta.or(f.acm_delta);
            c.acm_cfs_fraction = c.acm_cfs_fraction.or(f.acm_cfs_fraction);
            c.repeats = c.repeats.or(f.repeats);
            c.steps = c.steps.or(f.steps);
        }
        Ok(Self { c })
    }

    fn problem(&self, default: Option<Problem>) -> weno::Result<ProblemSpec> {
        match (&self.c.problem, default) {
            (Some(name), _) => lookup(name),
            (None, Some(p)) => Ok(p.spec()),
            (None, None) => Err(WenoError::Config("--problem is required".into())),
        }
    }

    fn schemes(&self) -> weno::Result<Vec<Scheme>> {
        match &self.c.scheme {
            Some(s) => Ok(vec![s.parse()?]),
            None => Ok(Scheme::ALL.to_vec()),
        }
    }

    fn acm(&self) -> AcmParams {
        let d = AcmParams::default();
        AcmParams {
            k: self.c.acm_k.unwrap_or(d.k),
            a: self.c.acm_a.unwrap_or(d.a),
            delta: self.c.acm_delta.unwrap_or(d.delta),
            cfs_fraction: self.c.acm_cfs_fraction.unwrap_or(d.cfs_fraction),
        }
    }

    fn weights(&self, scheme: Scheme) -> weno::Result<WeightConfig> {
        let mut w = WeightConfig::new(scheme).with_acm(self.acm());
        if let Some(e) = self.c.epsilon {
            w.epsilon = e;
        }
        w.validate()?;
        Ok(w)
    }

    fn cfl(&self, spec: &ProblemSpec) -> CflRule {
        self.c.cfl.map(CflRule::Fixed).unwrap_or(spec.cfl)
    }

    fn out_dir(&self) -> weno::Result<PathBuf> {
        let dir = self.c.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)?;
        Ok(dir)
    }
}

enum Outcome {
    Ok,
    BlowUp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seed_check {
        let mut ok = true;
        for c in invariant_suite() {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            ok &= c.passed;
        }
        if !ok {
            return ExitCode::from(EXIT_INVARIANT);
        }
        if cli.command.is_none() {
            return ExitCode::SUCCESS;
        }
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try `weno --help`)");
        return ExitCode::from(EXIT_USAGE);
    };
    let result = Settings::new(cli.common).and_then(|s| dispatch(&command, &s));
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::BlowUp) => ExitCode::from(EXIT_BLOWUP),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                WenoError::BlowUp(_) => ExitCode::from(EXIT_BLOWUP),
                WenoError::Io(_) => ExitCode::FAILURE,
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn dispatch(command: &Command, s: &Settings) -> weno::Result<Outcome> {
    match command {
        Command::Run => cmd_run(s),
        Command::Converge => cmd_converge(s),
        Command::Longtime => cmd_longtime(s),
        Command::SweepCfs => cmd_sweep(s),
        Command::Time => cmd_time(s),
        Command::List => {
            for p in catalog() {
                let mesh = match p.equation {
                    Equation::Euler2d => format!("{}x{}", p.mesh.0, p.mesh.1),
                    _ => p.mesh.0.to_string(),
                };
                println!("{:<14} {:<9} t_end={:<6} mesh={:<10} {}", p.name, equation_name(p.equation), p.t_end, mesh, p.title);
            }
            Ok(Outcome::Ok)
        }
    }
}

fn equation_name(e: Equation) -> &'static str {
    match e {
        Equation::Advection => "advection",
        Equation::Euler1d => "euler-1d",
        Equation::Euler2d => "euler-2d",
    }
}

fn cmd_run(s: &Settings) -> weno::Result<Outcome> {
    let spec = s.problem(None)?;
    let scheme: Scheme = match &s.c.scheme {
        Some(x) => x.parse()?,
        None => Scheme::Acm,
    };
    let nx = s.c.nx.unwrap_or(spec.mesh.0);
    let ny = s.c.ny.unwrap_or(spec.mesh.1);
    let mut cfg = default_run_config(&spec);
    cfg.cfl = s.cfl(&spec);
    if let Some(t) = s.c.t_end {
        cfg.t_end = t;
    }
    let run = run_problem(&spec, &s.weights(scheme)?, nx, ny, &cfg)?;
    let dir = s.out_dir()?;
    let path = match &run.solution {
        Solution::Euler2 { grid, u, .. } => {
            let path = dir.join(format!("{}_{}_{}x{}.field", spec.name, scheme.name(), nx, ny));
            write_field(&path, &field_file(grid, run.time, u))?;
            path
        }
        sol => {
            let path = dir.join(format!("{}_{}_{}.dat", spec.name, scheme.name(), nx));
            write_slice(&path, &solution_slice(sol))?;
            path
        }
    };
    let d = &run.diagnostics;
    println!("{} {} t={} steps={} wall={:.3}s -> {}", spec.name, scheme.label(), run.time, d.steps, d.wall_seconds, path.display());
    if let Some((rho, p)) = run.solution.min_density_pressure() {
        println!("min rho={} min p={}", fmt_f64(rho), fmt_f64(p));
    }
    match run.failure {
        Some(b) => {
            eprintln!("blow-up: {b}");
            Ok(Outcome::BlowUp)
        }
        None => Ok(Outcome::Ok),
    }
}

fn cmd_converge(s: &Settings) -> weno::Result<Outcome> {
    let spec = s.problem(Some(Problem::LaeSine))?;
    let meshes: &[usize] = if spec.problem == Problem::LaeComposite { &DISCONTINUOUS_MESHES } else { &ACCURACY_MESHES };
    let t_end = s.c.t_end.unwrap_or(spec.t_end);
    let mut tables = Vec::new();
    let mut outcome = Outcome::Ok;
    for scheme in s.schemes()? {
        let table = convergence_study(&spec, &s.weights(scheme)?, meshes, t_end, s.cfl(&spec))?;
        println!("{} {} t={}", spec.name, scheme.label(), t_end);
        println!("{:>10} {:>14} {:>8} {:>14} {:>8} {:>14} {:>8}", "h", "L1", "order", "L2", "order", "Linf", "order");
        for r in &table.rows {
            match r.norms {
                None => {
                    println!("{:>10} blow-up", r.h);
                    outcome = Outcome::BlowUp;
                }
                Some(n) => {
                    let o = |k: usize| r.orders.map(|o| format!("{:.4}", o[k])).unwrap_or_else(|| "-".into());
                    println!("{:>10} {:>14.5e} {:>8} {:>14.5e} {:>8} {:>14.5e} {:>8}", r.h, n.l1, o(0), n.l2, o(1), n.linf, o(2));
                }
            }
        }
        tables.push(table);
    }
    let path = s.out_dir()?.join(format!("converge_{}.csv", spec.name));
    write_convergence_csv(&path, &tables)?;
    println!("-> {}", path.display());
    Ok(outcome)
}

fn cmd_longtime(s: &Settings) -> weno::Result<Outcome> {
    let spec = s.problem(Some(Problem::LaeSine9))?;
    let n = s.c.nx.unwrap_or(spec.mesh.0);
    let t_max = s.c.t_end.unwrap_or(1000.0);
    let times: Vec<f64> = LONG_TIMES.into_iter().filter(|t| *t <= t_max).collect();
    if times.is_empty() {
        return Err(WenoError::Config(format!("--t-end {t_max} is below the first output time {}", LONG_TIMES[0])));
    }
    let mut studies = Vec::new();
    let mut outcome = Outcome::Ok;
    for scheme in s.schemes()? {
        let study = long_time_study(&spec, &s.weights(scheme)?, n, &times)?;
        println!("{} {} N={}", spec.name, scheme.label(), n);
        for r in &study.rows {
            println!("  t={:<6} L1={:.5e} L2={:.5e} Linf={:.5e}", r.t, r.norms.l1, r.norms.l2, r.norms.linf);
        }
        if let Some(b) = &study.failure {
            println!("  blow-up: {b}");
            outcome = Outcome::BlowUp;
        }
        studies.push(study);
    }
    let path = s.out_dir()?.join(format!("longtime_{}.csv", spec.name));
    write_longtime_csv(&path, &studies)?;
    println!("-> {}", path.display());
    Ok(outcome)
}

fn cmd_sweep(s: &Settings) -> weno::Result<Outcome> {
    let spec = s.problem(Some(Problem::Blastwave))?;
    let n = s.c.nx.unwrap_or(spec.mesh.0);
    let fractions: Vec<f64> = match s.c.acm_cfs_fraction {
        Some(f) => vec![f],
        None => BLASTWAVE_CFS_SWEEP.to_vec(),
    };
    let rows = cfs_sweep(&spec, &s.acm(), &fractions, n)?;
    for r in &rows {
        match &r.failure {
            None => println!("cfs_fraction={:<8} completed  steps={} t={}", r.cfs_fraction, r.steps, r.time),
            Some(b) => println!("cfs_fraction={:<8} blow-up    {b}", r.cfs_fraction),
        }
    }
    let path = s.out_dir()?.join(format!("sweep_cfs_{}.csv", spec.name));
    write_sweep_csv(&path, &rows)?;
    println!("-> {}", path.display());
    // blow-ups are the measured outcome here, not an error
    Ok(Outcome::Ok)
}

fn cmd_time(s: &Settings) -> weno::Result<Outcome> {
    let spec = s.problem(Some(Problem::ShockVortex))?;
    if spec.equation != Equation::Euler2d && s.c.ny.is_some() {
        return Err(WenoError::Config("--ny only applies to two-dimensional problems".into()));
    }
    let nx = s.c.nx.unwrap_or(spec.mesh.0);
    let ny = s.c.ny.unwrap_or(if spec.equation == Equation::Euler2d { nx * spec.mesh.1 / spec.mesh.0 } else { 1 });
    let mut schemes = s.schemes()?;
    if !schemes.contains(&Scheme::Js) {
        schemes.insert(0, Scheme::Js);
    }
    let report = timing_study(&spec, &schemes, nx, ny, s.c.repeats.unwrap_or(3), s.c.steps.unwrap_or(40))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{} {}x{} {} steps x {} repeats (serial)", spec.name, nx, ny, report.steps, s.c.repeats.unwrap_or(3));
    println!("{:<9} {:>12} {:>12} {:>9} {:>12}", "scheme", "T mean [s]", "T median [s]", "P(X)", "reduced");
    for t in &report.timings {
        let p = report.extra_cost(t.scheme).map(|p| format!("{p:.2}%")).unwrap_or_default();
        let r = match t.scheme {
            Scheme::M | Scheme::Pm6 => report.reduced_cost(t.scheme).map(|r| format!("{r:.2}%")).unwrap_or_default(),
            _ => String::new(),
        };
        println!("{:<9} {:>12.5e} {:>12.5e} {:>9} {:>12}", t.scheme.label(), t.mean(), t.median(), p, r);
    }
    let path = s.out_dir()?.join(format!("timing_{}_{}x{}.csv", spec.name, nx, ny));
    write_timing_csv(&path, &report)?;
    println!("-> {}", path.display());
    Ok(Outcome::Ok)
}
