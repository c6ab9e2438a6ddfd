//! Run configuration: defaults, `key = value` files and overrides.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::euler::Mode;

use super::problems::{problem_by_name, ProblemSpec};

/// Settings of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub level: u32,
    /// Defaults to the problem's CFL number.
    pub cfl: Option<f64>,
    pub mode: Mode,
    pub out_dir: PathBuf,
    /// Write a snapshot every this many steps; zero writes only the first and last.
    pub snapshot_every: usize,
    /// Accepted for compatibility; runs are always sequential and bitwise repeatable.
    pub reproducible: bool,
    pub t_final: Option<f64>,
    pub mu_strength: Option<f64>,
    pub b_a: Option<f64>,
    pub gamma: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: "vortex".into(),
            level: 0,
            cfl: None,
            mode: Mode::HighLimited,
            out_dir: PathBuf::from("out"),
            snapshot_every: 0,
            reproducible: false,
            t_final: None,
            mu_strength: None,
            b_a: None,
            gamma: None,
        }
    }
}

impl RunConfig {
    /// Parses `key = value` lines on top of the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Config(format!("invalid value '{value}' for {key}")))
        }
        match key {
            "problem" => self.problem = value.to_string(),
            "level" => self.level = num(key, value)?,
            "cfl" => self.cfl = Some(num(key, value)?),
            "mode" => self.mode = value.parse()?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "snapshot_every" => self.snapshot_every = num(key, value)?,
            "reproducible" => self.reproducible = num(key, value)?,
            "t_final" => self.t_final = Some(num(key, value)?),
            "mu_strength" => self.mu_strength = Some(num(key, value)?),
            "ba" | "b_a" => self.b_a = Some(num(key, value)?),
            "gamma" => self.gamma = Some(num(key, value)?),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Problem with all overrides applied, after validation.
    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let mut spec = problem_by_name(&self.problem)?;
        if let Some(c) = self.cfl {
            spec.cfl = c;
        }
        if let Some(t) = self.t_final {
            spec.t_final = t;
        }
        if let Some(m) = self.mu_strength {
            spec.mu_strength = m;
        }
        if let Some(b) = self.b_a {
            spec.b_a = b;
        }
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        if !(spec.cfl > 0.0 && spec.cfl < 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1), got {}", spec.cfl)));
        }
        if !(spec.t_final >= 0.0 && spec.t_final.is_finite()) {
            return Err(Error::Config(format!("invalid final time {}", spec.t_final)));
        }
        Ok(spec)
    }
}
