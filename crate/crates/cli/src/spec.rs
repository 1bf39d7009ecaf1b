//! Sweep descriptions and numeric argument parsing.

use std::f64::consts::PI;
use std::path::PathBuf;

use entprod::{
    ising2_hamiltonian, ising_chain_hamiltonian, random_operator, Ising2Params, LogBase,
    OperatorOnSpace, RandomKind, SchattenIndex, SpaceStructure,
};

use crate::error::CliError;
use crate::operator_file::read_operator;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Ising2(Ising2Params),
    IsingChain {
        n: usize,
        h: f64,
        j: f64,
    },
    /// Hamiltonian read from an operator file.
    OperatorFile(PathBuf),
    /// Seeded random Hermitian Hamiltonian on the given local dimensions.
    Random {
        dims: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Time,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeUnits {
    /// Grid times are `J t`; only meaningful for the two-qubit Ising model.
    #[default]
    InverseJ,
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub p: SchattenIndex,
    pub log_base: LogBase,
    pub units: TimeUnits,
    pub seed: Option<u64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Usage("grid bounds must be finite".into()));
        }
        if self.start > self.stop {
            return Err(CliError::Usage(format!(
                "start {} exceeds stop {}",
                self.start, self.stop
            )));
        }
        if self.points == 0 {
            return Err(CliError::Usage("points must be at least 1".into()));
        }
        if self.points == 1 && self.start != self.stop {
            return Err(CliError::Usage(
                "a single point requires start = stop".into(),
            ));
        }
        if self.variable == Variable::Beta && self.start < 0.0 {
            return Err(CliError::Usage(
                "inverse temperature must be non-negative".into(),
            ));
        }
        if let Model::Ising2(params) = self.model {
            if self.variable == Variable::Time
                && self.units == TimeUnits::InverseJ
                && params.j == 0.0
            {
                return Err(CliError::Usage(
                    "times in units of 1/J need J != 0; pass --units absolute".into(),
                ));
            }
        }
        Ok(())
    }

    /// Uniform grid from `start` to `stop` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last as f64
                }
            })
            .collect()
    }

    /// Physical time for a grid value.
    pub fn physical_time(&self, t: f64) -> f64 {
        match (&self.model, self.units) {
            (Model::Ising2(params), TimeUnits::InverseJ) => t / params.j.abs(),
            _ => t,
        }
    }

    pub fn ising2_params(&self) -> Option<Ising2Params> {
        match self.model {
            Model::Ising2(params) => Some(params),
            _ => None,
        }
    }

    pub fn hamiltonian(&self) -> Result<OperatorOnSpace, CliError> {
        let h = match &self.model {
            Model::Ising2(params) => ising2_hamiltonian(*params),
            Model::IsingChain { n, h, j } => {
                ising_chain_hamiltonian(*n, *h, *j).map_err(|e| CliError::Usage(e.to_string()))?
            }
            Model::OperatorFile(path) => read_operator(path)?,
            Model::Random { dims } => {
                let structure = SpaceStructure::new(dims.clone())
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                random_operator(&structure, RandomKind::Hermitian, self.seed.unwrap_or(0))
            }
        };
        if !h
            .matrix()
            .is_hermitian(entprod::matrix::HERMITIAN_TOLERANCE)
        {
            return Err(CliError::Usage(format!(
                "Hamiltonian is not Hermitian (max |H - H^+| = {:e})",
                h.matrix().max_asymmetry()
            )));
        }
        Ok(h)
    }
}

/// Parses a real number written as a decimal, a fraction (`5/7`), a multiple
/// of pi (`8pi`, `3*pi/4`) or a square root (`sqrt(2)`, `sqrt(3)/2`).
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(i) = split_top_level(s, '/') {
        return Ok(parse_real(&s[..i])? / parse_real(&s[i + 1..])?);
    }
    if let Some(i) = split_top_level(s, '*') {
        return Ok(parse_real(&s[..i])? * parse_real(&s[i + 1..])?);
    }
    if let Some(coef) = s.strip_suffix("pi") {
        return match coef.trim() {
            "" => Ok(PI),
            "-" => Ok(-PI),
            c => Ok(parse_real(c)? * PI),
        };
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return Ok(parse_real(inner)?.sqrt());
    }
    s.parse::<f64>()
        .map_err(|_| format!("invalid number {s:?}"))
}

// last occurrence of `op` outside parentheses
fn split_top_level(s: &str, op: char) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == op && depth == 0 && i > 0 => found = Some(i),
            _ => {}
        }
    }
    found
}

pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|d| {
            d.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid dimension {d:?}"))
        })
        .collect()
}
