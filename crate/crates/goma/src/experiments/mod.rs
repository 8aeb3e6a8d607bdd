//! Experiment harness: the studies behind each figure-style dataset, driven
//! by an [`ExperimentConfig`] and emitting [`Table`]s.

pub mod config;
pub mod output;

mod asymmetric;
mod basins;
mod beta;
mod robustness;
mod symmetric;
mod toy;
mod verify;

pub use config::{Experiment, ExperimentConfig};
pub use output::Table;

use crate::dists::{parse_dist, ValueDist};
use crate::error::{GomaError, Result};
use crate::strategy::{expected_reward_threshold, Scenario, ThresholdProfile};
use rand::Rng;

/// Run the configured study. `experiment` must be set.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let experiment = cfg
        .experiment
        .ok_or_else(|| GomaError::Config("no experiment selected".into()))?;
    match experiment {
        Experiment::Toy => toy::run(cfg),
        Experiment::Basins => basins::run(cfg),
        Experiment::Symmetric => symmetric::run(cfg),
        Experiment::Asymmetric => asymmetric::run(cfg),
        Experiment::Beta => beta::run(cfg),
        Experiment::Robustness => robustness::run(cfg),
        Experiment::Verify => verify::run(cfg),
    }
}

/// The configured value distribution, or the study's stock choice.
fn dist_template(cfg: &ExperimentConfig, stock: &str) -> Result<ValueDist> {
    parse_dist(cfg.dist.as_deref().unwrap_or(stock))
}

/// Per-node means for an asymmetric fleet: iid uniform on [1−ν, 1+ν].
fn draw_means(rng: &mut impl Rng, n: usize, nu: f64) -> Vec<f64> {
    (0..n).map(|_| 1.0 - nu + 2.0 * nu * rng.gen::<f64>()).collect()
}

/// Best single-dominant strategy: every candidate node in turn transmits
/// exactly when its value covers ψ while the rest stay mute; returns the
/// winning profile and its reward.
fn best_cdns(scenario: &Scenario) -> Result<(ThresholdProfile, f64)> {
    let n = scenario.num_nodes();
    let mut best: Option<(ThresholdProfile, f64)> = None;
    for dominant in 0..n {
        let mut thetas = vec![1.0; n];
        thetas[dominant] = scenario.dist(dominant).cdf(scenario.psi());
        let profile = ThresholdProfile::new(thetas)?;
        let reward = expected_reward_threshold(scenario, &profile)?;
        if best.as_ref().map_or(true, |(_, r)| reward > *r) {
            best = Some((profile, reward));
        }
    }
    best.ok_or_else(|| GomaError::InvalidScenario("empty scenario".into()))
}

/// File-name fragment for a distribution spec: `gauss(0.5,4)` → `gauss_0.5_4`.
fn dist_tag(spec: &str) -> String {
    let mut tag = String::new();
    for c in spec.chars() {
        if c.is_ascii_alphanumeric() || c == '.' {
            tag.push(c);
        } else if !tag.ends_with('_') {
            tag.push('_');
        }
    }
    tag.trim_matches('_').to_string()
}

/// File-name fragment for a cost value: `0`, `0.25`, ...
fn psi_tag(psi: f64) -> String {
    let s = format!("{psi}");
    s.replace('-', "m")
}
