//! Slotted collision channel: per-slot sampling, transmission resolution, and
//! Monte Carlo episode statistics.
//!
//! One transmitter per slot delivers its value; two or more erase each other;
//! silence wastes the slot. Every transmission attempt costs ψ whether or not
//! it gets through.

use crate::error::Result;
use crate::rng::{self, node_stream};
use crate::strategy::{Scenario, ThresholdProfile};
use rand_chacha::ChaCha12Rng;

/// What the receiver saw in one slot.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotOutcome {
    Idle,
    Success { transmitter: usize, value: f64 },
    Collision { num_transmitters: usize },
}

impl SlotOutcome {
    pub fn num_transmitters(&self) -> usize {
        match self {
            SlotOutcome::Idle => 0,
            SlotOutcome::Success { .. } => 1,
            SlotOutcome::Collision { num_transmitters } => *num_transmitters,
        }
    }

    pub fn delivered_value(&self) -> f64 {
        match self {
            SlotOutcome::Success { value, .. } => *value,
            _ => 0.0,
        }
    }
}

/// The receiver's broadcast after a slot: the outcome, plus the aggregate
/// transmission rate on reporting slots.
#[derive(Debug, Clone)]
pub struct SlotFeedback {
    pub outcome: SlotOutcome,
    pub rho_bar: Option<f64>,
}

/// Draw every node's fresh value for the slot. Each node owns an independent
/// stream, so the draw sequence of one node never depends on the others.
pub fn sample_values_into(scenario: &Scenario, rngs: &mut [ChaCha12Rng], values: &mut [f64]) {
    for (n, rng) in rngs.iter_mut().enumerate() {
        values[n] = scenario.dist(n).sample(rng);
    }
}

/// Resolve transmission decisions into a slot outcome.
pub fn resolve(decisions: &[bool], values: &[f64]) -> SlotOutcome {
    let count = decisions.iter().filter(|&&d| d).count();
    match count {
        0 => SlotOutcome::Idle,
        1 => {
            let n = decisions.iter().position(|&d| d).unwrap();
            SlotOutcome::Success { transmitter: n, value: values[n] }
        }
        _ => SlotOutcome::Collision { num_transmitters: count },
    }
}

/// Sample one slot under fixed value cutoffs (transmit exactly when v > cut).
pub fn simulate_slot(
    scenario: &Scenario,
    cuts: &[f64],
    rngs: &mut [ChaCha12Rng],
    values: &mut [f64],
    decisions: &mut [bool],
) -> SlotOutcome {
    sample_values_into(scenario, rngs, values);
    for n in 0..scenario.num_nodes() {
        decisions[n] = values[n] > cuts[n];
    }
    resolve(decisions, values)
}

/// Aggregates over one simulated episode.
#[derive(Debug, Clone)]
pub struct EpisodeStats {
    pub slots: u64,
    pub mean_reward: f64,
    /// Standard error of the per-slot reward mean.
    pub std_error: f64,
    /// Mean transmission attempts per slot.
    pub mean_energy: f64,
    pub idle_slots: u64,
    pub success_slots: u64,
    pub collision_slots: u64,
    pub per_node_tx: Vec<u64>,
}

impl EpisodeStats {
    /// Per-node attempt rates, for fairness summaries.
    pub fn tx_rates(&self) -> Vec<f64> {
        self.per_node_tx
            .iter()
            .map(|&c| c as f64 / self.slots as f64)
            .collect()
    }
}

/// Run `t_slots` slots of the channel under a fixed threshold profile.
///
/// Identical `(scenario, profile, seed)` triples reproduce the exact outcome
/// sequence.
pub fn run_episode(
    scenario: &Scenario,
    profile: &ThresholdProfile,
    t_slots: u64,
    seed: u64,
) -> Result<EpisodeStats> {
    let n = scenario.num_nodes();
    let cuts = profile.value_thresholds(scenario)?;
    let mut rngs: Vec<ChaCha12Rng> = (0..n)
        .map(|k| rng::stream(seed, node_stream(k)))
        .collect();
    let mut values = vec![0.0; n];
    let mut decisions = vec![false; n];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut energy = 0u64;
    let mut idle = 0u64;
    let mut success = 0u64;
    let mut collision = 0u64;
    let mut per_node_tx = vec![0u64; n];
    for _ in 0..t_slots {
        let outcome = simulate_slot(scenario, &cuts, &mut rngs, &mut values, &mut decisions);
        let sent = outcome.num_transmitters();
        energy += sent as u64;
        for (k, &d) in decisions.iter().enumerate() {
            per_node_tx[k] += d as u64;
        }
        match outcome {
            SlotOutcome::Idle => idle += 1,
            SlotOutcome::Success { .. } => success += 1,
            SlotOutcome::Collision { .. } => collision += 1,
        }
        let reward = outcome.delivered_value() - scenario.psi() * sent as f64;
        sum += reward;
        sum_sq += reward * reward;
    }
    let t = t_slots as f64;
    let mean = sum / t;
    let var = (sum_sq / t - mean * mean).max(0.0);
    Ok(EpisodeStats {
        slots: t_slots,
        mean_reward: mean,
        std_error: (var / t).sqrt(),
        mean_energy: energy as f64 / t,
        idle_slots: idle,
        success_slots: success,
        collision_slots: collision,
        per_node_tx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{ContinuousDist, ValueDist};
    use crate::strategy::expected_reward_threshold;

    fn exp_scenario(n: usize, psi: f64) -> Scenario {
        let d: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
        Scenario::symmetric(d, n, psi).unwrap()
    }

    #[test]
    fn all_silent_is_always_idle() {
        let s = exp_scenario(3, 0.0);
        let profile = ThresholdProfile::uniform(3, 1.0).unwrap();
        let stats = run_episode(&s, &profile, 1000, 42).unwrap();
        assert_eq!(stats.idle_slots, 1000);
        assert_eq!(stats.mean_reward, 0.0);
        assert_eq!(stats.mean_energy, 0.0);
    }

    #[test]
    fn lone_transmitter_always_succeeds() {
        let s = exp_scenario(3, 0.0);
        let profile = ThresholdProfile::new(vec![0.0, 1.0, 1.0]).unwrap();
        let stats = run_episode(&s, &profile, 1000, 42).unwrap();
        assert_eq!(stats.success_slots, 1000);
        assert_eq!(stats.per_node_tx, vec![1000, 0, 0]);
        // Mean of 1000 Exp(1) draws.
        assert!((stats.mean_reward - 1.0).abs() < 0.15);
    }

    #[test]
    fn outcome_frequencies_match_closed_forms() {
        let s = exp_scenario(3, 0.0);
        let profile = ThresholdProfile::uniform(3, 0.5).unwrap();
        let t = 1_000_000u64;
        let stats = run_episode(&s, &profile, t, 7).unwrap();
        // P(idle) = 0.5^3; P(success) = 3·0.5^3; 4σ binomial bands.
        let idle = stats.idle_slots as f64 / t as f64;
        assert!((idle - 0.125).abs() < 0.002, "idle {idle}");
        let succ = stats.success_slots as f64 / t as f64;
        assert!((succ - 0.375).abs() < 0.002, "success {succ}");
        assert!((stats.mean_energy - 1.5).abs() < 0.005);
    }

    #[test]
    fn monte_carlo_agrees_with_analytic_reward() {
        let s = exp_scenario(4, 0.25);
        let profile = ThresholdProfile::new(vec![0.6, 0.8, 0.9, 0.95]).unwrap();
        let analytic = expected_reward_threshold(&s, &profile).unwrap();
        let stats = run_episode(&s, &profile, 500_000, 3).unwrap();
        let gap = (stats.mean_reward - analytic).abs();
        assert!(
            gap < 4.0 * stats.std_error,
            "MC {} vs analytic {analytic} (4σ = {})",
            stats.mean_reward,
            4.0 * stats.std_error
        );
    }

    #[test]
    fn identical_seeds_reproduce_bitwise() {
        let s = exp_scenario(5, 0.25);
        let profile = ThresholdProfile::uniform(5, 0.7).unwrap();
        let a = run_episode(&s, &profile, 10_000, 99).unwrap();
        let b = run_episode(&s, &profile, 10_000, 99).unwrap();
        assert_eq!(a.mean_reward.to_bits(), b.mean_reward.to_bits());
        assert_eq!(a.per_node_tx, b.per_node_tx);
        let c = run_episode(&s, &profile, 10_000, 100).unwrap();
        assert_ne!(a.mean_reward.to_bits(), c.mean_reward.to_bits());
    }

    #[test]
    fn node_streams_survive_fleet_growth() {
        // Adding a node must not disturb the draw sequences of existing ones.
        let s3 = exp_scenario(3, 0.0);
        let s4 = exp_scenario(4, 0.0);
        let p3 = ThresholdProfile::uniform(3, 0.4).unwrap();
        let p4 = ThresholdProfile::new(vec![0.4, 0.4, 0.4, 1.0]).unwrap();
        let a = run_episode(&s3, &p3, 5_000, 5).unwrap();
        let b = run_episode(&s4, &p4, 5_000, 5).unwrap();
        assert_eq!(a.per_node_tx, b.per_node_tx[..3].to_vec());
    }

    #[test]
    fn resolve_classifies_counts() {
        let values = [1.0, 2.0, 3.0];
        assert_eq!(resolve(&[false, false, false], &values), SlotOutcome::Idle);
        assert_eq!(
            resolve(&[false, true, false], &values),
            SlotOutcome::Success { transmitter: 1, value: 2.0 }
        );
        assert_eq!(
            resolve(&[true, true, false], &values),
            SlotOutcome::Collision { num_transmitters: 2 }
        );
    }
}
