//! Strategy representations and exact expected-reward evaluation.
//!
//! The canonical strategy is a per-node quantile threshold: node `n` transmits
//! exactly when its observed value is strictly above `Q_n(θ_n)`. The fully
//! general per-value randomized strategy exists only for discrete scenarios,
//! where the brute-force oracle needs it.

use crate::dists::ValueDist;
use crate::error::{GomaError, Result};

/// A network instance: one value distribution per node plus the common
/// transmission cost.
#[derive(Debug, Clone)]
pub struct Scenario {
    dists: Vec<ValueDist>,
    psi: f64,
}

impl Scenario {
    pub fn new(dists: Vec<ValueDist>, psi: f64) -> Result<Self> {
        if dists.is_empty() {
            return Err(GomaError::InvalidScenario("at least one node required".into()));
        }
        if !(psi >= 0.0) || !psi.is_finite() {
            return Err(GomaError::InvalidScenario(format!(
                "transmission cost must be finite and nonnegative, got {psi}"
            )));
        }
        Ok(Self { dists, psi })
    }

    /// Identical distribution for every one of `n` nodes.
    pub fn symmetric(dist: ValueDist, n: usize, psi: f64) -> Result<Self> {
        Ok(Self::new(vec![dist; n.max(1)], psi)?)
    }

    pub fn num_nodes(&self) -> usize {
        self.dists.len()
    }

    pub fn dists(&self) -> &[ValueDist] {
        &self.dists
    }

    pub fn dist(&self, n: usize) -> &ValueDist {
        &self.dists[n]
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn is_discrete(&self) -> bool {
        self.dists.iter().all(|d| !d.is_continuous())
    }
}

/// Per-node quantile thresholds; node `n` transmits iff `v > Q_n(θ_n)`.
///
/// On discrete supports a quantile threshold snaps to the nearest atom
/// boundary from above: the transmit rule stays deterministic and the
/// realized transmission probability can be below `1 − θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdProfile {
    thetas: Vec<f64>,
}

impl ThresholdProfile {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        for &t in &thetas {
            if !(0.0..=1.0).contains(&t) || t.is_nan() {
                return Err(GomaError::ProbabilityOutOfRange(t));
            }
        }
        Ok(Self { thetas })
    }

    /// All `n` nodes at the same threshold.
    pub fn uniform(n: usize, theta: f64) -> Result<Self> {
        Self::new(vec![theta; n])
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, n: usize) -> f64 {
        self.thetas[n]
    }

    pub fn set_theta(&mut self, n: usize, theta: f64) {
        assert!((0.0..=1.0).contains(&theta), "threshold out of range: {theta}");
        self.thetas[n] = theta;
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn linf_distance(&self, other: &Self) -> f64 {
        self.thetas
            .iter()
            .zip(&other.thetas)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Value threshold each node compares its observation against.
    pub fn value_thresholds(&self, scenario: &Scenario) -> Result<Vec<f64>> {
        self.thetas
            .iter()
            .zip(scenario.dists())
            .map(|(&theta, d)| d.quantile(theta))
            .collect()
    }
}

/// Per-value transmission probabilities for every node; discrete only.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralStrategy {
    x: Vec<Vec<f64>>,
}

impl GeneralStrategy {
    /// `x[n][k]` is node n's transmission probability at the k-th value of its
    /// PMF; lengths must match the scenario's value sets.
    pub fn new(scenario: &Scenario, x: Vec<Vec<f64>>) -> Result<Self> {
        if x.len() != scenario.num_nodes() {
            return Err(GomaError::InvalidStrategy(format!(
                "expected {} per-node strategies, got {}",
                scenario.num_nodes(),
                x.len()
            )));
        }
        for (n, (xs, d)) in x.iter().zip(scenario.dists()).enumerate() {
            let pmf = d.as_discrete().ok_or_else(|| {
                GomaError::DiscreteRequired(format!("node {n} has a continuous distribution"))
            })?;
            if xs.len() != pmf.values().len() {
                return Err(GomaError::InvalidStrategy(format!(
                    "node {n}: {} probabilities for {} values",
                    xs.len(),
                    pmf.values().len()
                )));
            }
            if xs.iter().any(|p| !(0.0..=1.0).contains(p) || p.is_nan()) {
                return Err(GomaError::InvalidStrategy(format!(
                    "node {n}: transmission probability out of [0,1]"
                )));
            }
        }
        Ok(Self { x })
    }

    /// Deterministic threshold strategies expressed in the general form.
    pub fn from_profile(scenario: &Scenario, profile: &ThresholdProfile) -> Result<Self> {
        let cuts = profile.value_thresholds(scenario)?;
        let x = scenario
            .dists()
            .iter()
            .zip(&cuts)
            .map(|(d, &cut)| {
                let pmf = d.as_discrete().ok_or_else(|| {
                    GomaError::DiscreteRequired("continuous distribution".into())
                })?;
                Ok(pmf
                    .values()
                    .iter()
                    .map(|&v| if v > cut { 1.0 } else { 0.0 })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { x })
    }

    pub fn probs(&self, n: usize) -> &[f64] {
        &self.x[n]
    }

    pub fn probs_mut(&mut self, n: usize) -> &mut Vec<f64> {
        &mut self.x[n]
    }

    /// `x̄_n = E[x_{n,V}]`.
    pub fn mean_tx_prob(&self, scenario: &Scenario, n: usize) -> f64 {
        let pmf = scenario.dist(n).as_discrete().expect("validated discrete");
        pmf.probs().iter().zip(&self.x[n]).map(|(p, x)| p * x).sum()
    }
}

/// Realized per-node transmission probabilities of a threshold profile.
pub fn tx_probs(scenario: &Scenario, profile: &ThresholdProfile) -> Result<Vec<f64>> {
    let cuts = profile.value_thresholds(scenario)?;
    Ok(scenario
        .dists()
        .iter()
        .zip(&cuts)
        .map(|(d, &cut)| d.tx_prob_above(cut))
        .collect())
}

/// `ζ_n`: probability that every node other than `n` stays silent.
pub fn silence_factor(scenario: &Scenario, profile: &ThresholdProfile, n: usize) -> Result<f64> {
    let tx = tx_probs(scenario, profile)?;
    Ok(silence_from_tx(&tx, n))
}

fn silence_from_tx(tx: &[f64], n: usize) -> f64 {
    tx.iter()
        .enumerate()
        .filter(|(m, _)| *m != n)
        .map(|(_, x)| 1.0 - x)
        .product()
}

/// Exact expected reward of a general per-value strategy:
/// `Σ_n Σ_v v·ζ_n·p_{n,v}·x_{n,v} − ψ·Σ_n x̄_n`.
pub fn expected_reward(scenario: &Scenario, strategy: &GeneralStrategy) -> Result<f64> {
    if !scenario.is_discrete() {
        return Err(GomaError::DiscreteRequired(
            "general strategies are evaluated on discrete scenarios only".into(),
        ));
    }
    let tx: Vec<f64> = (0..scenario.num_nodes())
        .map(|n| strategy.mean_tx_prob(scenario, n))
        .collect();
    let mut total = 0.0;
    for (n, d) in scenario.dists().iter().enumerate() {
        let pmf = d.as_discrete().unwrap();
        let zeta = silence_from_tx(&tx, n);
        let delivered: f64 = pmf
            .values()
            .iter()
            .zip(pmf.probs())
            .zip(strategy.probs(n))
            .map(|((v, p), x)| v * p * x)
            .sum();
        total += zeta * delivered - scenario.psi() * tx[n];
    }
    Ok(total)
}

/// Expected reward of a threshold profile:
/// `Σ_n [ζ_n·E[V_n·1{V_n>t_n}] − ψ·P(V_n>t_n)]` with `t_n = Q_n(θ_n)`.
pub fn expected_reward_threshold(scenario: &Scenario, profile: &ThresholdProfile) -> Result<f64> {
    Ok(expected_reward_cuts(scenario, &profile.value_thresholds(scenario)?))
}

/// Expected reward when each node transmits exactly on `v > cuts[n]`.
pub fn expected_reward_cuts(scenario: &Scenario, cuts: &[f64]) -> f64 {
    assert_eq!(cuts.len(), scenario.num_nodes());
    let tx: Vec<f64> = scenario
        .dists()
        .iter()
        .zip(cuts)
        .map(|(d, &cut)| d.tx_prob_above(cut))
        .collect();
    let mut total = 0.0;
    for (n, d) in scenario.dists().iter().enumerate() {
        let zeta = silence_from_tx(&tx, n);
        total += zeta * d.tail_above_value(cuts[n]) - scenario.psi() * tx[n];
    }
    total
}

/// Mean transmissions per slot, `E = Σ_n x̄_n`.
pub fn energy(scenario: &Scenario, profile: &ThresholdProfile) -> Result<f64> {
    Ok(tx_probs(scenario, profile)?.iter().sum())
}

/// Jain fairness index over nonnegative rates: `(Σr)² / (n·Σr²)`.
pub fn jfi(rates: &[f64]) -> Result<f64> {
    let sum: f64 = rates.iter().sum();
    let sq: f64 = rates.iter().map(|r| r * r).sum();
    if sq == 0.0 {
        return Err(GomaError::Degenerate(
            "fairness is undefined when no node ever transmits".into(),
        ));
    }
    Ok(sum * sum / (rates.len() as f64 * sq))
}

/// Fairness of a threshold profile's realized transmission rates.
pub fn profile_jfi(scenario: &Scenario, profile: &ThresholdProfile) -> Result<f64> {
    jfi(&tx_probs(scenario, profile)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{ContinuousDist, DiscreteDist};
    use approx::assert_abs_diff_eq;

    fn exp_scenario(n: usize, psi: f64) -> Scenario {
        Scenario::symmetric(ContinuousDist::exponential(1.0).unwrap().into(), n, psi).unwrap()
    }

    #[test]
    fn threshold_tx_prob_is_one_minus_theta_for_continuous() {
        let s = exp_scenario(3, 0.0);
        let p = ThresholdProfile::new(vec![1.0, 0.77, 0.0]).unwrap();
        let tx = tx_probs(&s, &p).unwrap();
        assert_abs_diff_eq!(tx[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tx[1], 0.23, epsilon = 1e-12);
        assert_abs_diff_eq!(tx[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn general_strategy_mean_tx_prob() {
        let d = DiscreteDist::binary(0.1).unwrap();
        let s = Scenario::symmetric(d.into(), 1, 0.0).unwrap();
        let g = GeneralStrategy::new(&s, vec![vec![0.0, 0.5]]).unwrap();
        assert_abs_diff_eq!(g.mean_tx_prob(&s, 0), 0.05, epsilon = 1e-15);
    }

    #[test]
    fn silence_factor_examples() {
        let s = exp_scenario(3, 0.0);
        let all_silent = ThresholdProfile::uniform(3, 1.0).unwrap();
        assert_abs_diff_eq!(silence_factor(&s, &all_silent, 0).unwrap(), 1.0);
        let half = ThresholdProfile::new(vec![0.3, 0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(silence_factor(&s, &half, 0).unwrap(), 0.25, epsilon = 1e-12);
        let blocked = ThresholdProfile::new(vec![0.3, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(silence_factor(&s, &blocked, 0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn all_silent_profile_earns_nothing() {
        let s = exp_scenario(4, 0.25);
        let p = ThresholdProfile::uniform(4, 1.0).unwrap();
        assert_abs_diff_eq!(expected_reward_threshold(&s, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(energy(&s, &p).unwrap(), 0.0);
    }

    #[test]
    fn ten_eager_binary_nodes() {
        let d = DiscreteDist::binary(0.1).unwrap();
        let s = Scenario::symmetric(d.into(), 10, 0.0).unwrap();
        let g = GeneralStrategy::new(&s, vec![vec![0.0, 1.0]; 10]).unwrap();
        let r = expected_reward(&s, &g).unwrap();
        assert_abs_diff_eq!(r, 10.0 * 0.1 * 0.9f64.powi(9), epsilon = 1e-12);
        assert_abs_diff_eq!(r, 0.38742, epsilon = 5e-6);
    }

    #[test]
    fn single_always_on_binary_node_delivers_p() {
        let d = DiscreteDist::binary(0.3).unwrap();
        let s = Scenario::symmetric(d.into(), 1, 0.0).unwrap();
        let g = GeneralStrategy::new(&s, vec![vec![1.0, 1.0]]).unwrap();
        assert_abs_diff_eq!(expected_reward(&s, &g).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn threshold_and_general_evaluations_agree_on_discrete() {
        let d = DiscreteDist::new(vec![0.0, 1.0, 2.5, 4.0], vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let s = Scenario::symmetric(d.into(), 3, 0.2).unwrap();
        for thetas in [[0.0, 0.4, 0.9], [0.7, 0.7, 0.7], [1.0, 0.3, 0.55]] {
            let p = ThresholdProfile::new(thetas.to_vec()).unwrap();
            let g = GeneralStrategy::from_profile(&s, &p).unwrap();
            assert_abs_diff_eq!(
                expected_reward(&s, &g).unwrap(),
                expected_reward_threshold(&s, &p).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn discretized_continuous_reward_approaches_exact() {
        let s = exp_scenario(3, 0.25);
        let p = ThresholdProfile::uniform(3, 0.77).unwrap();
        let exact = expected_reward_threshold(&s, &p).unwrap();
        let coarse: Vec<ValueDist> = s
            .dists()
            .iter()
            .map(|d| d.discretize(1e-3).unwrap().into())
            .collect();
        let sc = Scenario::new(coarse, 0.25).unwrap();
        let approx_reward = expected_reward_threshold(&sc, &p).unwrap();
        assert!(
            (approx_reward - exact).abs() < 1e-2,
            "discretized {approx_reward} vs exact {exact}"
        );
    }

    #[test]
    fn energy_counts_expected_transmissions() {
        let s = exp_scenario(10, 0.0);
        let p = ThresholdProfile::uniform(10, 0.98).unwrap();
        assert_abs_diff_eq!(energy(&s, &p).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn jfi_bounds_and_examples() {
        assert_abs_diff_eq!(jfi(&[0.2, 0.2, 0.2]).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jfi(&[0.2, 0.1]).unwrap(), 0.9, epsilon = 1e-12);
        let mut cdns = vec![0.0; 10];
        cdns[3] = 1.0;
        assert_abs_diff_eq!(jfi(&cdns).unwrap(), 0.1, epsilon = 1e-15);
        assert!(jfi(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn reward_scales_linearly_with_values_when_free() {
        let base = exp_scenario(3, 0.0);
        let scaled = Scenario::new(
            base.dists().iter().map(|d| d.scaled(3.5).unwrap()).collect(),
            0.0,
        )
        .unwrap();
        for thetas in [[0.2, 0.5, 0.8], [0.77, 0.77, 0.77], [0.0, 1.0, 0.5]] {
            let p = ThresholdProfile::new(thetas.to_vec()).unwrap();
            let r = expected_reward_threshold(&base, &p).unwrap();
            let rs = expected_reward_threshold(&scaled, &p).unwrap();
            assert_abs_diff_eq!(rs, 3.5 * r, epsilon = 1e-10);
        }
    }
}
