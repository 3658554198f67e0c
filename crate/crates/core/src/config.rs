//! Run configuration shared by the command-line front end and config files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::SelfPairedRule;
use crate::phase::DEFAULT_EP_TOL;

/// Hard cap on the number of points a single grid may expand to.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// A set of sample values: `v`, `min:max:step`, or `a,b,c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GridSpec {
    List(Vec<f64>),
    Range { min: f64, max: f64, step: f64 },
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Validation(format!(
            "value must be finite, got {s:?}"
        )));
    }
    Ok(v)
}

impl GridSpec {
    pub fn single(v: f64) -> Self {
        GridSpec::List(vec![v])
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GridSpec::List(ref vs) => {
                if vs.is_empty() {
                    return Err(Error::Validation("empty value list".into()));
                }
                if let Some(v) = vs.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Validation(format!("value must be finite, got {v}")));
                }
            }
            GridSpec::Range { min, max, step } => {
                if !(min.is_finite() && max.is_finite() && step.is_finite()) {
                    return Err(Error::Validation("range bounds must be finite".into()));
                }
                if step <= 0.0 {
                    return Err(Error::Validation(format!(
                        "step must be positive, got {step}"
                    )));
                }
                if min > max {
                    return Err(Error::Validation(format!("empty range {min}:{max}")));
                }
                let count = ((max - min) / step).floor();
                if count.is_nan() || count >= MAX_GRID_POINTS as f64 {
                    return Err(Error::Validation(format!(
                        "range {min}:{max}:{step} has more than {MAX_GRID_POINTS} points"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Expanded sample values. A range includes `max` when it lies on the
    /// grid up to a relative slack of `1e-9` steps.
    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match *self {
            GridSpec::List(ref vs) => vs.clone(),
            GridSpec::Range { min, max, step } => {
                let count = ((max - min) / step + 1e-9).floor() as usize;
                (0..=count).map(|i| min + i as f64 * step).collect()
            }
        })
    }

    /// The single value of a one-point grid.
    pub fn scalar(&self, name: &str) -> Result<f64> {
        let vs = self.values()?;
        match vs.as_slice() {
            [v] => Ok(*v),
            _ => Err(Error::Validation(format!(
                "--{name} must be a single value here, got {} values",
                vs.len()
            ))),
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [min, max, step] = parts.as_slice() else {
                return Err(Error::Validation(format!(
                    "range must be min:max:step, got {s:?}"
                )));
            };
            GridSpec::Range {
                min: parse_number(min)?,
                max: parse_number(max)?,
                step: parse_number(step)?,
            }
        } else {
            GridSpec::List(s.split(',').map(parse_number).collect::<Result<_>>()?)
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::List(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            GridSpec::Range { min, max, step } => write!(f, "{min}:{max}:{step}"),
        }
    }
}

impl TryFrom<String> for GridSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PhaseDiagram,
    Dispersion,
    Evolve,
    PairDynamics,
    Overlap,
    OracleCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PhaseDiagram => "phase-diagram",
            Command::Dispersion => "dispersion",
            Command::Evolve => "evolve",
            Command::PairDynamics => "pair-dynamics",
            Command::Overlap => "overlap",
            Command::OracleCheck => "oracle-check",
        }
    }
}

fn default_j() -> f64 {
    1.0
}

fn default_tol_ep() -> f64 {
    DEFAULT_EP_TOL
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Everything needed to reproduce one run. Field names mirror the flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_j")]
    pub j: f64,
    pub delta: Option<GridSpec>,
    pub mu: Option<GridSpec>,
    pub delta_h: Option<f64>,
    pub mu_h: Option<f64>,
    pub sites: Option<usize>,
    pub t: Option<f64>,
    pub times: Option<GridSpec>,
    pub k_nodes: Option<usize>,
    pub t_nodes: Option<usize>,
    #[serde(default = "default_tol_ep")]
    pub tol_ep: f64,
    #[serde(default)]
    pub self_paired: SelfPairedRule,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    /// Negative-control hook for `oracle-check`.
    #[serde(default, skip_serializing_if = "is_false")]
    pub corrupt_sign: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            j: default_j(),
            delta: None,
            mu: None,
            delta_h: None,
            mu_h: None,
            sites: None,
            t: None,
            times: None,
            k_nodes: None,
            t_nodes: None,
            tol_ep: default_tol_ep(),
            self_paired: SelfPairedRule::default(),
            workers: None,
            out: None,
            corrupt_sign: false,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(s).map_err(|e| Error::Validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("j", Some(self.j)),
            ("delta-h", self.delta_h),
            ("mu-h", self.mu_h),
            ("t", self.t),
        ];
        for (name, v) in finite {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "--{name} must be finite, got {v}"
                    )));
                }
            }
        }
        for g in [&self.delta, &self.mu, &self.times].into_iter().flatten() {
            g.validate()?;
        }
        if !(self.tol_ep.is_finite() && self.tol_ep >= 0.0) {
            return Err(Error::Validation(format!(
                "--tol-ep must be a non-negative number, got {}",
                self.tol_ep
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::Validation("--workers must be at least 1".into()));
        }
        for (name, n) in [("k-nodes", self.k_nodes), ("t-nodes", self.t_nodes)] {
            if n == Some(0) {
                return Err(Error::Validation(format!("--{name} must be positive")));
            }
        }
        Ok(())
    }
}
