use std::fmt;
use std::str::FromStr;

use crate::exec::Execution;
use crate::numerics::{Precision, MIN_DIGITS};
use crate::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 30;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_K_BOUND: u64 = 200_000;
pub const DEFAULT_PRIME_BOUND: u64 = 100_000;
pub const DEFAULT_TERM_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidParameter(format!("format must be text or json, got `{s}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        })
    }
}

/// Settings shared by every identity in a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub digits: u32,
    /// Relative tolerance for numeric verdicts and series truncation.
    pub tolerance: f64,
    pub k_bound: u64,
    pub prime_bound: u64,
    pub term_budget: u64,
    pub format: OutputFormat,
    /// Record wall time in reports; off keeps output reproducible.
    pub timings: bool,
    pub execution: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: DEFAULT_DIGITS,
            tolerance: DEFAULT_TOLERANCE,
            k_bound: DEFAULT_K_BOUND,
            prime_bound: DEFAULT_PRIME_BOUND,
            term_budget: DEFAULT_TERM_BUDGET,
            format: OutputFormat::Text,
            timings: false,
            execution: Execution::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS {
            return Err(Error::InvalidParameter(format!("digits must be >= {MIN_DIGITS}, got {}", self.digits)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        for (name, v) in [("kBound", self.k_bound), ("primeBound", self.prime_bound), ("termBudget", self.term_budget)] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn precision(&self) -> Result<Precision> {
        Precision::new(self.digits)
    }

    /// Smallest tolerance the working precision can honour: `10^(5 - digits)`.
    pub fn attainable_tolerance(&self) -> f64 {
        10f64.powi(5 - self.digits as i32)
    }

    pub fn tolerance_attainable(&self) -> bool {
        self.tolerance >= self.attainable_tolerance() * (1.0 - 1e-12)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidParameter(format!("{key}: `{value}` is not {what}"));
        let int = || value.replace('_', "").parse::<u64>().or_else(|_| parse_sci_int(value)).map_err(|_| bad("a positive integer"));
        match key {
            "digits" => self.digits = value.parse().map_err(|_| bad("an integer"))?,
            "tolerance" => self.tolerance = value.parse().map_err(|_| bad("a number"))?,
            "kbound" | "kBound" | "k_bound" => self.k_bound = int()?,
            "prime_bound" | "primeBound" | "prime-bound" => self.prime_bound = int()?,
            "term_budget" | "termBudget" | "term-budget" => self.term_budget = int()?,
            "format" => self.format = value.parse()?,
            "timings" => self.timings = value.parse().map_err(|_| bad("true or false"))?,
            "execution" => {
                self.execution = match value {
                    "sequential" => Execution::Sequential,
                    "parallel" => Execution::Parallel,
                    _ => return Err(bad("sequential or parallel")),
                }
            }
            _ => return Err(Error::InvalidParameter(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("config line {}: expected `key = value`", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

/// Accepts integers written like `2e5` or `1e7`.
fn parse_sci_int(s: &str) -> std::result::Result<u64, ()> {
    let v: f64 = s.parse().map_err(|_| ())?;
    if v >= 1.0 && v.fract() == 0.0 && v < 1.8e19 {
        Ok(v as u64)
    } else {
        Err(())
    }
}
