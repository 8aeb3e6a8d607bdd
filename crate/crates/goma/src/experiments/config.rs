//! Flat key=value experiment configuration.
//!
//! A config file holds one `key = value` pair per line, `#` comments, and
//! nothing else. Every field is optional; each runner fills the gaps with its
//! stock defaults, so an empty file (or none at all) reproduces the standard
//! studies. Command-line flags override file values.

use crate::beta::{ColliderDenominator, GainSchedule};
use crate::error::{GomaError, Result};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Toy,
    Basins,
    Symmetric,
    Asymmetric,
    Beta,
    Robustness,
    Verify,
}

impl FromStr for Experiment {
    type Err = GomaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(Self::Toy),
            "basins" => Ok(Self::Basins),
            "symmetric" => Ok(Self::Symmetric),
            "asymmetric" => Ok(Self::Asymmetric),
            "beta" => Ok(Self::Beta),
            "robustness" => Ok(Self::Robustness),
            "verify" => Ok(Self::Verify),
            other => Err(GomaError::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Toy => "toy",
            Self::Basins => "basins",
            Self::Symmetric => "symmetric",
            Self::Asymmetric => "asymmetric",
            Self::Beta => "beta",
            Self::Robustness => "robustness",
            Self::Verify => "verify",
        };
        f.write_str(name)
    }
}

/// Every knob a study accepts. `None` means "use the runner's default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    /// Node count (or sweep cap for the symmetric study).
    pub nodes: Option<usize>,
    /// Transmission cost; unset runs every stock panel.
    pub psi: Option<f64>,
    /// Value-distribution spec, e.g. `chi2m(1)` or `gauss(0.5,4)`.
    pub dist: Option<String>,
    /// Mean spread for asymmetric fleets: means drawn from [1−ν, 1+ν].
    pub nu: Option<f64>,
    /// Belief perturbation half-width for the robustness study.
    pub eta: Option<f64>,
    pub episodes: Option<usize>,
    /// Independent training runs for the learning study.
    pub runs: Option<usize>,
    /// Monte Carlo slots per evaluation.
    pub mc_slots: Option<u64>,
    /// Training slots per learning run.
    pub train_slots: Option<u64>,
    /// Traffic-estimation window (slots).
    pub window: Option<usize>,
    /// Exploration rate ε.
    pub explore: Option<f64>,
    /// Step-size exponent κ.
    pub kappa: Option<f64>,
    /// Largest threshold arm.
    pub arm_max: Option<f64>,
    /// Spacing of the threshold-arm grid.
    pub arm_step: Option<f64>,
    /// Initial-condition grid spacing for the basin study.
    pub basin_step: Option<f64>,
    /// Step-size sequence shape for the learner.
    pub gain_schedule: Option<GainSchedule>,
    /// Rival-count normalization in silent-collision estimates.
    pub collider_denominator: Option<ColliderDenominator>,
    /// Report max(relative reward, 1) by falling back to the baseline.
    pub fallback: Option<bool>,
    pub seed: Option<u64>,
    /// Output directory; tables go to stdout when unset.
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
            .map_err(|e| GomaError::Config(format!("{}: {e}", path.display())))
    }

    /// Set one field from its textual form. Unknown keys are rejected so a
    /// typo cannot silently fall back to a default.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => self.experiment = Some(value.parse()?),
            "nodes" => self.nodes = Some(parse(key, value)?),
            "psi" => self.psi = Some(parse(key, value)?),
            "dist" => self.dist = Some(value.to_string()),
            "nu" => self.nu = Some(parse(key, value)?),
            "eta" => self.eta = Some(parse(key, value)?),
            "episodes" => self.episodes = Some(parse(key, value)?),
            "runs" => self.runs = Some(parse(key, value)?),
            "mc_slots" => self.mc_slots = Some(parse(key, value)?),
            "train_slots" => self.train_slots = Some(parse(key, value)?),
            "window" => self.window = Some(parse(key, value)?),
            "explore" => self.explore = Some(parse(key, value)?),
            "kappa" => self.kappa = Some(parse(key, value)?),
            "arm_max" => self.arm_max = Some(parse(key, value)?),
            "arm_step" => self.arm_step = Some(parse(key, value)?),
            "basin_step" => self.basin_step = Some(parse(key, value)?),
            "gain_schedule" => {
                self.gain_schedule = Some(match value {
                    "geometric" => GainSchedule::Geometric,
                    "power" => GainSchedule::PowerLaw,
                    other => {
                        return Err(GomaError::Config(format!(
                            "gain_schedule must be geometric or power, got '{other}'"
                        )))
                    }
                })
            }
            "collider_denominator" => {
                self.collider_denominator = Some(match value {
                    "foreign_collisions" => ColliderDenominator::ForeignCollisions,
                    "foreign_activity" => ColliderDenominator::ForeignActivity,
                    other => {
                        return Err(GomaError::Config(format!(
                            "collider_denominator must be foreign_collisions or \
                             foreign_activity, got '{other}'"
                        )))
                    }
                })
            }
            "fallback" => {
                self.fallback = Some(match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    other => {
                        return Err(GomaError::Config(format!(
                            "fallback must be boolean, got '{other}'"
                        )))
                    }
                })
            }
            "seed" => self.seed = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(GomaError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    /// Cost panels to run: the override alone, or the stock {0, 0.25} pair.
    pub fn psi_panels(&self) -> Vec<f64> {
        match self.psi {
            Some(p) => vec![p],
            None => vec![0.0, 0.25],
        }
    }
}

impl FromStr for ExperimentConfig {
    type Err = GomaError;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                GomaError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| GomaError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| GomaError::Config(format!("cannot parse {key} = '{value}'")))
}
