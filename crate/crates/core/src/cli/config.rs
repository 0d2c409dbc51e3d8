use std::path::PathBuf;
use std::str::FromStr;

use crate::balance::{DEFAULT_S_GRID, QDB_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub qdb: f64,
    pub qfr: f64,
    pub cptp: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tau_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub beta_i: f64,
    pub beta_f: f64,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tau_grid: log_grid(1e-2, 50.0, 40),
            s_grid: DEFAULT_S_GRID.to_vec(),
            beta_i: 2.0,
            beta_f: 1.0,
            tol: Tolerances { qdb: QDB_TOL, qfr: 1e-9, cptp: 1e-9 },
            out: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        check_grid("tau grid", &self.tau_grid)?;
        check_grid("s grid", &self.s_grid)?;
        if self.tau_grid[0] < 0.0 {
            return Err(Error::InvalidParameter("tau grid has negative times".into()));
        }
        if self.s_grid.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidParameter("s grid must lie in [0, 1]".into()));
        }
        if !(self.beta_i >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta_i = {}", self.beta_i)));
        }
        if !(self.beta_f >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta_f = {}", self.beta_f)));
        }
        for (name, t) in [("qdb", self.tol.qdb), ("qfr", self.tol.qfr), ("cptp", self.tol.cptp)] {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} tolerance {t} must be positive")));
            }
        }
        Ok(())
    }
}

fn check_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} is empty")));
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} has non-finite entries")));
    }
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

/// `count` points from `start` to `stop`, equally spaced in `log τ`.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect(),
    }
}

pub fn lin_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count).map(|k| start + (stop - start) * k as f64 / (count - 1) as f64).collect(),
    }
}

/// `START:STOP:COUNT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        lin_grid(self.start, self.stop, self.count)
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:COUNT, got '{s}'"));
        }
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count = parts[2].trim().parse::<usize>().map_err(|e| format!("'{}': {e}", parts[2]))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("non-finite range '{s}'"));
        }
        Ok(Range { start, stop, count })
    }
}

/// A parsed `--tau-grid` or `--s-grid` argument.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

/// Comma-separated list, or `log:START:STOP:COUNT` / `lin:START:STOP:COUNT`.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    if let Some(rest) = s.strip_prefix("log:") {
        let r: Range = rest.parse()?;
        if !(r.start > 0.0 && r.stop > 0.0) {
            return Err("log grid needs positive endpoints".into());
        }
        return Ok(log_grid(r.start, r.stop, r.count));
    }
    if let Some(rest) = s.strip_prefix("lin:") {
        let r: Range = rest.parse()?;
        return Ok(r.values());
    }
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let c = RunConfig::default();
        assert_eq!(c.tau_grid.len(), 40);
        assert!((c.tau_grid[0] - 1e-2).abs() < 1e-15);
        assert!((c.tau_grid[39] - 50.0).abs() < 1e-12);
        c.validate().unwrap();
    }

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("0.1, 1,10").unwrap(), vec![0.1, 1.0, 10.0]);
        assert_eq!(parse_grid("lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("log:1:100:3").unwrap().len(), 3);
        assert!(parse_grid("log:0:1:3").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut c = RunConfig { tau_grid: vec![1.0, 0.5], ..RunConfig::default() };
        assert!(c.validate().is_err());
        c.tau_grid = vec![];
        assert!(c.validate().is_err());
        let c = RunConfig { s_grid: vec![0.0, 1.5], ..RunConfig::default() };
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tol.qdb = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ranges() {
        let r: Range = "0:1:0".parse().unwrap();
        assert!(r.values().is_empty());
        let r: Range = "1:2:2".parse().unwrap();
        assert_eq!(r.values(), vec![1.0, 2.0]);
        assert!("1:2".parse::<Range>().is_err());
    }
}
