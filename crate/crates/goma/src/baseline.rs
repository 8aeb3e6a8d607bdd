//! Polling baseline and the equal-value starting point for best-response
//! iteration.
//!
//! The polling (pull) baseline sidesteps contention entirely: a single
//! scheduled node transmits whenever its value exceeds the cost, everyone
//! else stays off the air. It is the reference every push strategy is
//! measured against.

use crate::dists::ValueDist;
use crate::error::Result;
use crate::strategy::{expected_reward_threshold, Scenario, ThresholdProfile};

/// Node a scheduler should poll: the one with the largest expected value
/// delivered per slot under the `v > ψ` gate, `E[V·1{V>ψ}]`. Ties go to the
/// lowest index.
pub fn pull_action(scenario: &Scenario) -> usize {
    let psi = scenario.psi();
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (n, d) in scenario.dists().iter().enumerate() {
        let score = d.tail_above_value(psi);
        if score > best_score {
            best = n;
            best_score = score;
        }
    }
    best
}

/// Single-transmitter profile: the polled node sends iff `v > ψ`, the rest
/// are silent.
pub fn cdns_profile(scenario: &Scenario) -> Result<ThresholdProfile> {
    let dominant = pull_action(scenario);
    let mut thetas = vec![1.0; scenario.num_nodes()];
    thetas[dominant] = scenario.dist(dominant).cdf(scenario.psi());
    ThresholdProfile::new(thetas)
}

/// Expected reward of [`cdns_profile`]: `E[(V−ψ)⁺]` for the dominant node.
pub fn cdns_reward(scenario: &Scenario) -> Result<f64> {
    expected_reward_threshold(scenario, &cdns_profile(scenario)?)
}

/// Common value threshold shared by all nodes, with the profile it induces.
#[derive(Debug, Clone)]
pub struct EqualValueInit {
    pub v_eq: f64,
    pub profile: ThresholdProfile,
    pub reward: f64,
    pub search_step: f64,
}

/// Grid-search the common value threshold `v` maximizing
/// `Σ_n E[V_n·1{V_n>v}]·Π_{m≠n} P_m(v) − ψ·Σ_n P(V_n>v)`
/// over `[0, max_n Q_n(0.9999)]`.
pub fn equal_value_init(scenario: &Scenario, step: f64) -> Result<EqualValueInit> {
    assert!(step > 0.0, "search step must be positive");
    let hi = scenario
        .dists()
        .iter()
        .map(|d| d.quantile(0.9999))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let steps = (hi / step).ceil() as usize;
    let mut best_v = 0.0;
    let mut best_reward = f64::NEG_INFINITY;
    for k in 0..=steps {
        let v = k as f64 * step;
        let r = equal_value_reward(scenario, v);
        if r > best_reward {
            best_reward = r;
            best_v = v;
        }
    }
    let profile = ThresholdProfile::new(
        scenario.dists().iter().map(|d| d.cdf(best_v)).collect(),
    )?;
    Ok(EqualValueInit {
        v_eq: best_v,
        profile,
        reward: best_reward,
        search_step: step,
    })
}

/// Expected reward when every node transmits iff its value exceeds `v`.
pub fn equal_value_reward(scenario: &Scenario, v: f64) -> f64 {
    let silent: Vec<f64> = scenario.dists().iter().map(|d| 1.0 - d.tx_prob_above(v)).collect();
    let mut total = 0.0;
    for (n, d) in scenario.dists().iter().enumerate() {
        let zeta: f64 = silent
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != n)
            .map(|(_, s)| s)
            .product();
        total += zeta * d.tail_above_value(v) - scenario.psi() * (1.0 - silent[n]);
    }
    total
}

/// Closed-form equal-value optimum for `n` iid `Uniform(0, hi)` nodes at
/// `ψ=0`: `hi·√((n−1)/(n+1))`.
pub fn uniform_equal_value_optimum(hi: f64, n: usize) -> f64 {
    hi * ((n as f64 - 1.0) / (n as f64 + 1.0)).sqrt()
}

/// Closed-form equal-value optimum for `n` iid `Pareto(scale, shape)` nodes
/// at `ψ=0`: `scale·((shape−1)/(shape·n−1))^(−1/shape)`, from the first-order
/// condition of [`equal_value_reward`].
pub fn pareto_equal_value_optimum(scale: f64, shape: f64, n: usize) -> f64 {
    let u = (shape - 1.0) / (shape * n as f64 - 1.0);
    scale * u.powf(-1.0 / shape)
}

/// Mean-preserving helper used by the studies: the distribution of each node
/// in `scenario`, with node means replaced by `means`.
pub fn with_means(template: &ValueDist, means: &[f64]) -> Result<Vec<ValueDist>> {
    let base = template.mean();
    means.iter().map(|&m| template.scaled(m / base)).collect()
}
