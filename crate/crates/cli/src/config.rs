//! `key = value` run configuration with `#` comments.

use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Parameters shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub generators: usize,
    pub seed: u64,
    /// Quartic coupling; the Ψ⁴ command defaults to half the coupling bound.
    pub alpha: Option<f64>,
    pub mass: f64,
    pub lambda0: f64,
    pub box_len: f64,
    pub dimension: usize,
    pub t_max: f64,
    pub steps: usize,
    pub grid_points: usize,
    pub sites: usize,
    pub output: Option<PathBuf>,
    pub truncate: bool,
    /// Flow certificate tolerance.
    pub tolerance: f64,
    /// Scale of the random covariance blocks in synthetic instances.
    pub schedule_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            generators: 8,
            seed: 42,
            alpha: None,
            mass: 1.0,
            lambda0: std::f64::consts::E,
            box_len: 4.0,
            dimension: 4,
            t_max: 1.0,
            steps: 400,
            grid_points: 11,
            sites: 4,
            output: None,
            truncate: false,
            tolerance: 1e-7,
            schedule_scale: 0.2,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse '{value}'")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "generators" => self.generators = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "alpha" => self.alpha = Some(number(key, value)?),
            "mass" => self.mass = number(key, value)?,
            "lambda0" => self.lambda0 = number(key, value)?,
            "box_len" => self.box_len = number(key, value)?,
            "dimension" => self.dimension = number(key, value)?,
            "t_max" => self.t_max = number(key, value)?,
            "steps" => self.steps = number(key, value)?,
            "grid_points" => self.grid_points = number(key, value)?,
            "sites" => self.sites = number(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "truncate" => self.truncate = number(key, value)?,
            "tolerance" => self.tolerance = number(key, value)?,
            "schedule_scale" => self.schedule_scale = number(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.generators < 2 || self.generators % 2 != 0 {
            return bad(format!("generators must be a positive even number, got {}", self.generators));
        }
        if let Some(a) = self.alpha {
            if !a.is_finite() || a < 0.0 {
                return bad(format!("alpha must be finite and >= 0, got {a}"));
            }
        }
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return bad(format!("mass must be positive, got {}", self.mass));
        }
        if !(self.lambda0 > self.mass) || !self.lambda0.is_finite() {
            return bad(format!("lambda0 must exceed mass, got {}", self.lambda0));
        }
        if !(self.box_len > 0.0) || !self.box_len.is_finite() {
            return bad(format!("box_len must be positive, got {}", self.box_len));
        }
        if !(3..=6).contains(&self.dimension) {
            return bad(format!("dimension must be in 3..=6, got {}", self.dimension));
        }
        if !(self.t_max > 0.0 && self.t_max <= 50.0) {
            return bad(format!("t_max must be in (0, 50], got {}", self.t_max));
        }
        if !(1..=1_000_000).contains(&self.steps) {
            return bad(format!("steps must be in 1..=1000000, got {}", self.steps));
        }
        if !(2..=10_001).contains(&self.grid_points) {
            return bad(format!("grid_points must be in 2..=10001, got {}", self.grid_points));
        }
        if !(2..=6).contains(&self.sites) {
            return bad(format!("sites must be in 2..=6, got {}", self.sites));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad(format!("tolerance must be in (0, 1), got {}", self.tolerance));
        }
        if !(self.schedule_scale > 0.0) || !self.schedule_scale.is_finite() {
            return bad(format!("schedule_scale must be positive, got {}", self.schedule_scale));
        }
        Ok(())
    }
}
