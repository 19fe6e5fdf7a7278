//! Optional run configuration file:
//!
//! ```text
//! [run]
//! problem = sod
//! scheme = acm
//! nx = 200
//! ny = 1
//! cfl = 0.5
//! t_end = 0.25
//! out_dir = out
//!
//! [weights]
//! epsilon = 1e-40
//!
//! [acm]
//! k = 2
//! A = 20
//! delta = 1e-6
//! cfs_fraction = 0.1
//!
//! [timing]
//! repeats = 3
//! steps = 40
//! ```
//!
//! Every key is optional; command-line flags take precedence.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::error::{Result, WenoError};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub problem: Option<String>,
    pub scheme: Option<String>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub acm_k: Option<u32>,
    pub acm_a: Option<f64>,
    pub acm_delta: Option<f64>,
    pub acm_cfs_fraction: Option<f64>,
    pub repeats: Option<usize>,
    pub steps: Option<usize>,
}

fn value<T: FromStr>(section: &str, key: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| WenoError::Config(format!("[{section}] {key} = `{raw}` is not valid")))
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| WenoError::Config(e.to_string()))?;
        let mut c = FileConfig::default();
        for (section, props) in ini.iter() {
            let sec = section.unwrap_or("");
            for (key, raw) in props.iter() {
                match (sec, key) {
                    ("run", "problem") => c.problem = Some(raw.trim().to_string()),
                    ("run", "scheme") => c.scheme = Some(raw.trim().to_string()),
                    ("run", "nx") => c.nx = Some(value(sec, key, raw)?),
                    ("run", "ny") => c.ny = Some(value(sec, key, raw)?),
                    ("run", "cfl") => c.cfl = Some(value(sec, key, raw)?),
                    ("run", "t_end") => c.t_end = Some(value(sec, key, raw)?),
                    ("run", "out_dir") => c.out_dir = Some(PathBuf::from(raw.trim())),
                    ("weights", "epsilon") => c.epsilon = Some(value(sec, key, raw)?),
                    ("acm", "k") => c.acm_k = Some(value(sec, key, raw)?),
                    ("acm", "A") | ("acm", "a") => c.acm_a = Some(value(sec, key, raw)?),
                    ("acm", "delta") => c.acm_delta = Some(value(sec, key, raw)?),
                    ("acm", "cfs_fraction") => c.acm_cfs_fraction = Some(value(sec, key, raw)?),
                    ("timing", "repeats") => c.repeats = Some(value(sec, key, raw)?),
                    ("timing", "steps") => c.steps = Some(value(sec, key, raw)?),
                    _ => return Err(WenoError::Config(format!("unknown key `{key}` in section [{sec}]"))),
                }
            }
        }
        Ok(c)
    }
}
