//! Best-response computation and round-robin best-response dynamics.
//!
//! A node facing fixed rivals has a one-dimensional problem: transmit exactly
//! when the observed value clears
//!
//! ```text
//!   t*  =  ψ / ζ   +   Σ_m  E[V_m · 1{V_m transmits}] / P(V_m silent)
//! ```
//!
//! where ζ is the probability every rival stays silent. The first term prices
//! the transmission; the second is the expected value the node erases by
//! colliding, given it transmits. The best-response threshold is therefore a
//! closed-form functional of the rivals' strategies, and the solver below
//! never runs an inner optimization.

use crate::baseline::equal_value_init;
use crate::error::Result;
use crate::strategy::{
    expected_reward_threshold, GeneralStrategy, Scenario, ThresholdProfile,
};

/// The pieces of one best-response computation.
#[derive(Debug, Clone)]
pub struct BestResponseReport {
    pub node: usize,
    /// Optimal quantile threshold in [0, 1].
    pub theta_star: f64,
    /// The transmit rule in value space: send exactly when v > value_threshold.
    pub value_threshold: f64,
    /// Expected rival value erased per own transmission.
    pub interference_term: f64,
    /// ψ marked up by the probability the slot is clear.
    pub cost_term: f64,
}

/// Best response of node `n` to a threshold profile.
pub fn best_response(
    scenario: &Scenario,
    n: usize,
    profile: &ThresholdProfile,
) -> Result<BestResponseReport> {
    let cuts = profile.value_thresholds(scenario)?;
    let mut interference = 0.0;
    let mut zeta = 1.0;
    let mut blocked = false;
    for m in 0..scenario.num_nodes() {
        if m == n {
            continue;
        }
        let silent = 1.0 - scenario.dist(m).tx_prob_above(cuts[m]);
        if silent <= 0.0 {
            blocked = true;
            break;
        }
        zeta *= silent;
        interference += scenario.dist(m).tail_above_value(cuts[m]) / silent;
    }
    finish_report(scenario, n, blocked, zeta, interference)
}

/// Best response of node `n` when rivals play arbitrary per-value strategies
/// over discrete supports.
pub fn best_response_discrete(
    scenario: &Scenario,
    n: usize,
    others: &GeneralStrategy,
) -> Result<BestResponseReport> {
    let mut interference = 0.0;
    let mut zeta = 1.0;
    let mut blocked = false;
    for m in 0..scenario.num_nodes() {
        if m == n {
            continue;
        }
        let silent = 1.0 - others.mean_tx_prob(scenario, m);
        if silent <= 0.0 {
            blocked = true;
            break;
        }
        zeta *= silent;
        let d = scenario
            .dist(m)
            .as_discrete()
            .expect("general strategies exist only over discrete scenarios");
        let sent: f64 = d
            .values()
            .iter()
            .zip(d.probs())
            .zip(others.probs(m))
            .map(|((&v, &p), &x)| v * p * x)
            .sum();
        interference += sent / silent;
    }
    finish_report(scenario, n, blocked, zeta, interference)
}

fn finish_report(
    scenario: &Scenario,
    n: usize,
    blocked: bool,
    zeta: f64,
    interference: f64,
) -> Result<BestResponseReport> {
    if blocked {
        // Some rival transmits every slot: nothing gets through, stay silent.
        return Ok(BestResponseReport {
            node: n,
            theta_star: 1.0,
            value_threshold: scenario.dist(n).quantile(1.0)?,
            interference_term: f64::INFINITY,
            cost_term: f64::INFINITY,
        });
    }
    let cost = scenario.psi() / zeta;
    let t_star = cost + interference;
    let theta_star = if t_star.is_finite() {
        scenario.dist(n).cdf(t_star)
    } else {
        1.0
    };
    // Quantile snapping is reward-neutral except when t* undercuts the whole
    // support (θ*=0): there Q(0) would exclude the lowest atom, so keep the
    // raw cut, which transmits on everything.
    let value_threshold = if theta_star == 0.0 {
        t_star
    } else {
        scenario.dist(n).quantile(theta_star)?
    };
    Ok(BestResponseReport {
        node: n,
        theta_star,
        value_threshold,
        interference_term: interference,
        cost_term: cost,
    })
}

/// One profile-and-reward snapshot per completed round of best responses.
#[derive(Debug, Clone)]
pub struct IbrTrace {
    pub iterations: Vec<(ThresholdProfile, f64)>,
    pub converged: bool,
    pub epsilon: f64,
}

impl IbrTrace {
    pub fn final_profile(&self) -> &ThresholdProfile {
        &self.iterations.last().expect("trace is never empty").0
    }

    pub fn final_reward(&self) -> f64 {
        self.iterations.last().expect("trace is never empty").1
    }

    pub fn rounds(&self) -> usize {
        self.iterations.len().saturating_sub(1)
    }
}

const MAX_ROUNDS: usize = 10_000;

/// Round-robin best-response dynamics from a given starting profile.
///
/// Nodes update in ascending index order, each seeing the rivals' freshest
/// thresholds. Stops when no threshold moves more than `epsilon` over a full
/// round.
pub fn ibr_from(
    scenario: &Scenario,
    start: ThresholdProfile,
    epsilon: f64,
) -> Result<(ThresholdProfile, IbrTrace)> {
    assert!(epsilon > 0.0, "stopping tolerance must be positive");
    let mut profile = start;
    let mut iterations = vec![(
        profile.clone(),
        expected_reward_threshold(scenario, &profile)?,
    )];
    let mut converged = false;
    for _ in 0..MAX_ROUNDS {
        let before = profile.clone();
        for n in 0..scenario.num_nodes() {
            let br = best_response(scenario, n, &profile)?;
            profile.set_theta(n, br.theta_star);
        }
        iterations.push((
            profile.clone(),
            expected_reward_threshold(scenario, &profile)?,
        ));
        if profile.linf_distance(&before) < epsilon {
            converged = true;
            break;
        }
    }
    Ok((profile, IbrTrace { iterations, converged, epsilon }))
}

/// Full pipeline: equal-value initialization, then best-response dynamics.
pub fn libra(scenario: &Scenario, epsilon: f64) -> Result<(ThresholdProfile, IbrTrace)> {
    let init = equal_value_init(scenario, 1e-3)?;
    ibr_from(scenario, init.profile, epsilon)
}

/// Largest reward any single node can gain by deviating to its best response.
/// A profile is an ε-equilibrium exactly when this is below ε.
pub fn epsilon_ne_certificate(scenario: &Scenario, profile: &ThresholdProfile) -> Result<f64> {
    let base = expected_reward_threshold(scenario, profile)?;
    let mut worst: f64 = 0.0;
    for n in 0..scenario.num_nodes() {
        let br = best_response(scenario, n, profile)?;
        let mut deviated = profile.clone();
        deviated.set_theta(n, br.theta_star);
        let gain = expected_reward_threshold(scenario, &deviated)? - base;
        worst = worst.max(gain);
    }
    Ok(worst)
}
