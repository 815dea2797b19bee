//! Run configuration: flat `key=value` text with dotted section keys.
//!
//! ```text
//! # comment
//! mu = 0.3, 0.7
//! qubits = 4
//! strategy = enveloping
//! bath.frequencies = 1.0, 1.5
//! bath.truncation = 4
//! couplings.g = 0.1, 0.1
//! couplings.h = 0.1, 0.1
//! times.steps = 50
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::dynamics::{BathSpec, DEFAULT_COUPLING};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qalg::Mu;
use crate::qspin::{BaseCase, Strategy};

const KEYS: &[&str] = &[
    "mu",
    "qubits",
    "strategy",
    "base_case.k1",
    "base_case.k2",
    "base_case.k3",
    "bath.frequencies",
    "bath.truncation",
    "bath.initial",
    "couplings.g",
    "couplings.h",
    "times.start",
    "times.stop",
    "times.steps",
    "time",
    "code",
    "seed",
    "output",
];

/// Initial bath vector `ζ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BathInitial {
    Vacuum,
    /// Haar-random vector drawn from the run seed.
    Random,
}

/// Which code `kraus` certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeChoice {
    /// The joint kernel of the spin operators.
    Invariant,
    /// The product state `|+…+⟩`.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mu: Vec<f64>,
    pub qubits: usize,
    pub strategy: Strategy,
    pub base_case: Option<BaseCase>,
    pub bath: BathSpec,
    pub bath_initial: BathInitial,
    pub couplings_g: Vec<f64>,
    pub couplings_h: Vec<f64>,
    pub times: TimeSpec,
    /// Evaluation time for `kraus`.
    pub time: f64,
    pub code: CodeChoice,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mu: vec![0.5],
            qubits: 2,
            strategy: Strategy::Enveloping,
            base_case: None,
            bath: BathSpec {
                mode_frequencies: vec![1.0, 1.5],
                truncation: 4,
            },
            bath_initial: BathInitial::Vacuum,
            couplings_g: vec![DEFAULT_COUPLING; 2],
            couplings_h: vec![DEFAULT_COUPLING; 2],
            times: TimeSpec {
                start: 0.0,
                stop: 10.0,
                steps: 50,
            },
            time: 1.0,
            code: CodeChoice::Invariant,
            seed: 1,
            output: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: `{v}` is not a number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_f64(key, x)).collect()
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: `{v}` is not a non-negative integer")))
}

/// Eight numbers `re, im` for the row-major entries of a 2×2 matrix.
fn parse_matrix(key: &str, v: &str) -> Result<CMatrix> {
    let xs = parse_list(key, v)?;
    if xs.len() != 8 {
        return Err(Error::Config(format!(
            "{key}: expected 8 numbers (re,im of a 2×2 matrix, row-major), got {}",
            xs.len()
        )));
    }
    let entries: Vec<Complex64> = xs.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    Ok(CMatrix::from_row_slice(2, 2, &entries))
}

fn format_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn format_matrix(m: &CMatrix) -> String {
    let mut parts = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            parts.push(m[(i, j)].re.to_string());
            parts.push(m[(i, j)].im.to_string());
        }
    }
    parts.join(",")
}

impl RunConfig {
    /// Parse configuration text on top of the defaults. Unknown keys are
    /// reported together.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key=value, got `{line}`",
                    lineno + 1
                ))
            })?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        let unknown: Vec<&str> = entries
            .keys()
            .map(String::as_str)
            .filter(|k| !KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!(
                "unknown keys: {}",
                unknown.join(", ")
            )));
        }
        let mut cfg = RunConfig::default();
        let mut base = [None, None, None];
        for (k, v) in &entries {
            match k.as_str() {
                "base_case.k1" => base[0] = Some(parse_matrix(k, v)?),
                "base_case.k2" => base[1] = Some(parse_matrix(k, v)?),
                "base_case.k3" => base[2] = Some(parse_matrix(k, v)?),
                _ => cfg.set(k, v)?,
            }
        }
        match base {
            [None, None, None] => {}
            [Some(k1), Some(k2), Some(k3)] => cfg.base_case = Some(BaseCase::new(k1, k2, k3)?),
            _ => return Err(Error::Config("base_case needs all of k1, k2 and k3".into())),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one non-matrix key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "mu" => self.mu = parse_list(key, value)?,
            "qubits" => self.qubits = parse_usize(key, value)?,
            "strategy" => self.strategy = value.trim().parse()?,
            "bath.frequencies" => self.bath.mode_frequencies = parse_list(key, value)?,
            "bath.truncation" => self.bath.truncation = parse_usize(key, value)?,
            "bath.initial" => {
                self.bath_initial = match value.trim() {
                    "vacuum" => BathInitial::Vacuum,
                    "random" => BathInitial::Random,
                    other => {
                        return Err(Error::Config(format!(
                            "bath.initial: `{other}` (expected vacuum or random)"
                        )))
                    }
                }
            }
            "couplings.g" => self.couplings_g = parse_list(key, value)?,
            "couplings.h" => self.couplings_h = parse_list(key, value)?,
            "times.start" => self.times.start = parse_f64(key, value)?,
            "times.stop" => self.times.stop = parse_f64(key, value)?,
            "times.steps" => self.times.steps = parse_usize(key, value)?,
            "time" => self.time = parse_f64(key, value)?,
            "code" => {
                self.code = match value.trim() {
                    "invariant" => CodeChoice::Invariant,
                    "product" => CodeChoice::Product,
                    other => {
                        return Err(Error::Config(format!(
                            "code: `{other}` (expected invariant or product)"
                        )))
                    }
                }
            }
            "seed" => {
                self.seed = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("seed: `{value}` is not an integer")))?
            }
            "output" => self.output = Some(PathBuf::from(value.trim())),
            other => return Err(Error::Config(format!("unknown keys: {other}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.is_empty() {
            return Err(Error::Config("mu grid is empty".into()));
        }
        for m in &self.mu {
            Mu::new(*m).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.qubits == 0 {
            return Err(Error::Config("qubits must be positive".into()));
        }
        if self.times.steps == 0 {
            return Err(Error::Config("times.steps must be at least 1".into()));
        }
        self.bath
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        let modes = self.bath.modes();
        if self.couplings_g.len() != modes || self.couplings_h.len() != modes {
            return Err(Error::Config(format!(
                "couplings.g and couplings.h need {modes} entries (one per bath mode)"
            )));
        }
        Ok(())
    }

    pub fn mus(&self) -> Vec<Mu> {
        self.mu
            .iter()
            .map(|m| Mu::new(*m).expect("validated"))
            .collect()
    }

    /// Every key with its resolved value, defaults included, in a fixed order.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("mu={}", format_list(&self.mu)),
            format!("qubits={}", self.qubits),
            format!("strategy={}", self.strategy.name()),
        ];
        match &self.base_case {
            Some(b) => {
                lines.push(format!("base_case.k1={}", format_matrix(&b.k1)));
                lines.push(format!("base_case.k2={}", format_matrix(&b.k2)));
                lines.push(format!("base_case.k3={}", format_matrix(&b.k3)));
            }
            None => lines.push("base_case=singlet-diagonal".into()),
        }
        lines.extend([
            format!(
                "bath.frequencies={}",
                format_list(&self.bath.mode_frequencies)
            ),
            format!("bath.truncation={}", self.bath.truncation),
            format!(
                "bath.initial={}",
                match self.bath_initial {
                    BathInitial::Vacuum => "vacuum",
                    BathInitial::Random => "random",
                }
            ),
            format!("couplings.g={}", format_list(&self.couplings_g)),
            format!("couplings.h={}", format_list(&self.couplings_h)),
            format!("times.start={}", self.times.start),
            format!("times.stop={}", self.times.stop),
            format!("times.steps={}", self.times.steps),
            format!("time={}", self.time),
            format!(
                "code={}",
                match self.code {
                    CodeChoice::Invariant => "invariant",
                    CodeChoice::Product => "product",
                }
            ),
            format!("seed={}", self.seed),
            format!(
                "output={}",
                self.output
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
            ),
        ]);
        lines
    }
}
