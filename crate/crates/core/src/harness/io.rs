//! Plain-text output formats. Every float is written with 17 significant
//! digits, so parsing a file gives back exactly the values that were written.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Result, WenoError};
use crate::euler::{cons_to_prim, Primitive};
use crate::solver::Grid2;

use super::run::Solution;
use super::studies::{ConvergenceTable, LongTimeStudy, SweepRow};
use super::timing::TimingReport;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| WenoError::Parse(format!("bad number `{s}`")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| WenoError::Parse(format!("bad integer `{s}`")))
}

/// Columns of a one-dimensional slice file.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    /// Column names, starting with `x`.
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn write_slice(path: &Path, slice: &Slice) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {}", slice.names.join(" "))?;
    for row in &slice.rows {
        if row.len() != slice.names.len() {
            return Err(WenoError::InvalidInput(format!("row has {} values for {} columns", row.len(), slice.names.len())));
        }
        let cols: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", cols.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_slice(path: &Path) -> Result<Slice> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| WenoError::Parse("empty slice file".into()))??;
    let names: Vec<String> = header
        .strip_prefix('#')
        .ok_or_else(|| WenoError::Parse("slice header must start with `#`".into()))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line.split_whitespace().map(parse_f64).collect::<Result<Vec<_>>>()?;
        if row.len() != names.len() {
            return Err(WenoError::Parse(format!("expected {} columns, got {}", names.len(), row.len())));
        }
        rows.push(row);
    }
    Ok(Slice { names, rows })
}

fn euler_columns(p: &Primitive, e: f64) -> [f64; 4] {
    [p.rho, p.u, p.p, e]
}

/// A one-dimensional view of a solution: the whole field in 1D, the row
/// through the middle of the domain in 2D.
pub fn solution_slice(sol: &Solution) -> Slice {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    let nan = Primitive::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    match sol {
        Solution::Scalar { grid, u } => Slice {
            names: names(&["x", "u"]),
            rows: u.iter().enumerate().map(|(i, c)| vec![grid.center(i), c[0]]).collect(),
        },
        Solution::Euler1 { grid, u } => Slice {
            names: names(&["x", "rho", "u", "p", "E"]),
            rows: u
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let p = cons_to_prim(c).unwrap_or(nan);
                    let mut row = vec![grid.center(i)];
                    row.extend(euler_columns(&p, c[2]));
                    row
                })
                .collect(),
        },
        Solution::Euler2 { grid, u, .. } => {
            let j = grid.ny() / 2;
            Slice {
                names: names(&["x", "rho", "u", "v", "p", "E"]),
                rows: (0..grid.nx())
                    .map(|i| {
                        let c = &u[grid.index(i, j)];
                        let p = cons_to_prim(c).unwrap_or(nan);
                        vec![grid.x.center(i), p.rho, p.u, p.v, p.p, c[3]]
                    })
                    .collect(),
            }
        }
    }
}

/// Contents of a two-dimensional field file.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub t: f64,
    /// `(rho, u, v, p, E)` per cell, row-major with `j` outer.
    pub cells: Vec<[f64; 5]>,
}

pub fn field_file(grid: &Grid2, t: f64, u: &[[f64; 4]]) -> FieldFile {
    let nan = Primitive::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    let cells = u
        .iter()
        .map(|c| {
            let p = cons_to_prim(c).unwrap_or(nan);
            [p.rho, p.u, p.v, p.p, c[3]]
        })
        .collect();
    FieldFile { nx: grid.nx(), ny: grid.ny(), x0: grid.x.lo, y0: grid.y.lo, dx: grid.x.dx(), dy: grid.y.dx(), t, cells }
}

pub fn write_field(path: &Path, f: &FieldFile) -> Result<()> {
    if f.cells.len() != f.nx * f.ny {
        return Err(WenoError::MeshMismatch(format!("{} cells for a {}x{} mesh", f.cells.len(), f.nx, f.ny)));
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{} {} {} {} {} {} {}", f.nx, f.ny, fmt_f64(f.x0), fmt_f64(f.y0), fmt_f64(f.dx), fmt_f64(f.dy), fmt_f64(f.t))?;
    for (k, c) in f.cells.iter().enumerate() {
        let vals: Vec<String> = c.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{} {} {}", k % f.nx, k / f.nx, vals.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<FieldFile> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| WenoError::Parse("empty field file".into()))??;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 7 {
        return Err(WenoError::Parse(format!("field header needs 7 values, got {}", h.len())));
    }
    let (nx, ny) = (parse_usize(h[0])?, parse_usize(h[1])?);
    let mut cells = Vec::with_capacity(nx * ny);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<&str> = line.split_whitespace().collect();
        if v.len() != 7 {
            return Err(WenoError::Parse(format!("field row needs 7 values, got {}", v.len())));
        }
        let (i, j) = (parse_usize(v[0])?, parse_usize(v[1])?);
        if i != cells.len() % nx.max(1) || j != cells.len() / nx.max(1) {
            return Err(WenoError::Parse(format!("row ({i}, {j}) out of order")));
        }
        cells.push([parse_f64(v[2])?, parse_f64(v[3])?, parse_f64(v[4])?, parse_f64(v[5])?, parse_f64(v[6])?]);
    }
    if cells.len() != nx * ny {
        return Err(WenoError::Parse(format!("{} rows for a {nx}x{ny} mesh", cells.len())));
    }
    Ok(FieldFile {
        nx,
        ny,
        x0: parse_f64(h[2])?,
        y0: parse_f64(h[3])?,
        dx: parse_f64(h[4])?,
        dy: parse_f64(h[5])?,
        t: parse_f64(h[6])?,
        cells,
    })
}

fn csv_err(e: csv::Error) -> WenoError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => WenoError::Io(io),
        other => WenoError::Parse(format!("{other:?}")),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const CONVERGENCE_HEADER: [&str; 10] = ["scheme", "n", "h", "L1", "order1", "L2", "order2", "Linf", "orderInf", "status"];

/// Writes one or more convergence tables into a single CSV file.
pub fn write_convergence_csv(path: &Path, tables: &[ConvergenceTable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(CONVERGENCE_HEADER).map_err(csv_err)?;
    for t in tables {
        for r in &t.rows {
            let n = r.norms.map(|n| n.as_array());
            let o = r.orders;
            w.write_record([
                t.scheme.name().to_string(),
                r.n.to_string(),
                fmt_f64(r.h),
                opt(n.map(|a| a[0])),
                opt(o.map(|a| a[0])),
                opt(n.map(|a| a[1])),
                opt(o.map(|a| a[1])),
                opt(n.map(|a| a[2])),
                opt(o.map(|a| a[2])),
                if r.failure.is_some() { "blow-up".into() } else { "ok".into() },
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rows of any of the CSV tables, as strings keyed by the header.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

pub fn write_longtime_csv(path: &Path, studies: &[LongTimeStudy]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["scheme", "n", "t", "L1", "L2", "Linf"]).map_err(csv_err)?;
    for s in studies {
        for r in &s.rows {
            w.write_record([
                s.scheme.name().to_string(),
                s.n.to_string(),
                fmt_f64(r.t),
                fmt_f64(r.norms.l1),
                fmt_f64(r.norms.l2),
                fmt_f64(r.norms.linf),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["cfs_fraction", "status", "steps", "t", "cell_i", "cell_j", "offense"]).map_err(csv_err)?;
    for r in rows {
        let (status, i, j, off) = match &r.failure {
            None => ("completed", String::new(), String::new(), String::new()),
            Some(b) => ("blow-up", b.cell.0.to_string(), b.cell.1.to_string(), b.offense.to_string()),
        };
        w.write_record([fmt_f64(r.cfs_fraction), status.into(), r.steps.to_string(), fmt_f64(r.time), i, j, off]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per scheme: every repeat, mean and median cost, extra cost, and
/// the reduced cost of WENO-ACM against that scheme (blank where undefined).
pub fn write_timing_csv(path: &Path, report: &TimingReport) -> Result<()> {
    use super::timing::{extra_cost, reduced_cost};
    use crate::weights::Scheme;
    let repeats = report.timings.iter().map(|t| t.samples.len()).max().unwrap_or(0);
    let mut header = vec!["scheme".to_string()];
    header.extend((1..=repeats).map(|k| format!("T_{k}")));
    header.extend(["T_mean", "T_median", "P_mean", "P_median", "reduced_mean", "reduced_median"].map(String::from));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(&header).map_err(csv_err)?;
    let js = report.get(Scheme::Js);
    let acm = report.get(Scheme::Acm);
    for t in &report.timings {
        let mut rec = vec![t.scheme.name().to_string()];
        rec.extend((0..repeats).map(|k| opt(t.samples.get(k).copied())));
        rec.push(fmt_f64(t.mean()));
        rec.push(fmt_f64(t.median()));
        rec.push(opt(js.map(|j| extra_cost(t.mean(), j.mean()))));
        rec.push(opt(js.map(|j| extra_cost(t.median(), j.median()))));
        let reduced = |f: fn(&super::timing::SchemeTiming) -> f64| match (js, acm) {
            (Some(j), Some(a)) if t.scheme != Scheme::Js && t.scheme != Scheme::Acm => Some(reduced_cost(f(t), f(a), f(j))),
            _ => None,
        };
        rec.push(opt(reduced(|s| s.mean())));
        rec.push(opt(reduced(|s| s.median())));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
