//! Distributed threshold learning over the collision channel.
//!
//! Each node runs an exploration-smoothed Hedge over a fixed grid of
//! value-space threshold arms. After every slot the receiver's broadcast
//! (outcome, delivered value, periodic aggregate attempt rate) lets a node
//! score *every* arm counterfactually: what would the system have earned this
//! slot had I used that threshold? Unobservable quantities — the value lost in
//! a collision, how many rivals were involved — are replaced by plug-in
//! estimates from a sliding window of recent feedback.
//!
//! With exact plug-in statistics the per-arm estimate is exactly unbiased for
//! the system reward, whatever policy the node actually played; the windowed
//! estimates trade a little bias for adaptivity.

use crate::channel::{resolve, sample_values_into, SlotFeedback, SlotOutcome};
use crate::error::{GomaError, Result};
use crate::rng::{self, node_stream};
use crate::strategy::{expected_reward_cuts, Scenario, ThresholdProfile};
use rand::Rng;
use std::collections::VecDeque;

/// Ordered value-space thresholds a learner may play.
#[derive(Debug, Clone)]
pub struct ArmGrid {
    thresholds: Vec<f64>,
}

impl ArmGrid {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(GomaError::InvalidStrategy("empty arm grid".into()));
        }
        let ok = thresholds.iter().all(|t| t.is_finite())
            && thresholds.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(GomaError::InvalidStrategy(
                "arm thresholds must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { thresholds })
    }

    /// `{0, step, 2·step, …, max}`.
    pub fn uniform(max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && max >= 0.0) {
            return Err(GomaError::InvalidStrategy(
                "arm grid needs max ≥ 0 and step > 0".into(),
            ));
        }
        let count = (max / step).round() as usize;
        Self::new((0..=count).map(|k| k as f64 * step).collect())
    }

    /// The default laboratory grid: 201 arms over [0, 20] in steps of 0.1.
    pub fn standard() -> Self {
        Self::uniform(20.0, 0.1).expect("static parameters")
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Index of the first arm that would stay silent on `value`; arms below
    /// transmit (strict `value > threshold`).
    pub fn split_at_value(&self, value: f64) -> usize {
        self.thresholds.partition_point(|&t| t < value)
    }
}

/// Denominator for the estimated rival count in collision slots a node
/// sat out: normalize by the rate of foreign-only collisions (α−β) or by
/// all foreign activity (α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColliderDenominator {
    #[default]
    ForeignCollisions,
    ForeignActivity,
}

/// Step-size sequence for the weight updates.
///
/// Geometric anneals e-fold every 1/(1−κ) updates — with κ = 1−5·10⁻⁵ that is
/// 2·10⁴ steps, the horizon where the learners settle. The power law takes κ
/// as an exponent, γ_i = i^{−κ}; with κ that close to 1 the cumulative gain
/// mass only grows logarithmically, which is too slow to let the softmax
/// concentrate against the near-flat payoff over the mostly-silent arms, so
/// a 10-node system never leaves its diffuse transient. It stays available
/// as the conservative stochastic-approximation variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainSchedule {
    /// γ_i = κ^i.
    #[default]
    Geometric,
    /// γ_i = i^{−κ}.
    PowerLaw,
}

impl GainSchedule {
    /// Gain applied by the i-th update, i ≥ 1.
    pub fn gain(self, kappa: f64, i: u64) -> f64 {
        match self {
            GainSchedule::Geometric => kappa.powi(i as i32),
            GainSchedule::PowerLaw => (i as f64).powf(-kappa),
        }
    }
}

/// Training-loop parameters.
#[derive(Debug, Clone)]
pub struct BetaConfig {
    /// Slots to train for.
    pub train_slots: u64,
    /// Sliding-window length for feedback statistics; also the attempt-rate
    /// reporting cadence.
    pub window: usize,
    /// Exploration rate ε.
    pub explore: f64,
    /// Gain-decay parameter κ: κ^i under the geometric schedule, i^{−κ}
    /// under the power law.
    pub kappa: f64,
    /// Shape of the step-size sequence.
    pub gain: GainSchedule,
    pub grid: ArmGrid,
    pub collider_denominator: ColliderDenominator,
    /// Record per-node greedy thresholds every this many slots (0 = never).
    pub snapshot_every: u64,
}

impl Default for BetaConfig {
    fn default() -> Self {
        Self {
            train_slots: 100_000,
            window: 25,
            explore: 0.01,
            kappa: 1.0 - 5e-5,
            gain: GainSchedule::default(),
            grid: ArmGrid::standard(),
            collider_denominator: ColliderDenominator::default(),
            snapshot_every: 1000,
        }
    }
}

impl BetaConfig {
    fn validate(&self) -> Result<()> {
        if self.train_slots == 0 || self.window == 0 {
            return Err(GomaError::Config(
                "training length and window must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.explore) {
            return Err(GomaError::ProbabilityOutOfRange(self.explore));
        }
        if !(self.kappa > 0.5 && self.kappa < 1.0) {
            return Err(GomaError::Config(
                "step-size exponent must lie in (0.5, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// The statistics a node holds when scoring a slot, as seen by the estimator.
#[derive(Debug, Clone, Copy)]
pub struct StatsView {
    /// Fraction of slots with at least one foreign transmission.
    pub alpha: f64,
    /// Foreign-success rate over the node's silent slots.
    pub beta: Option<f64>,
    /// Mean delivered value over silent slots with foreign activity
    /// (collisions count as zero).
    pub lambda: Option<f64>,
    /// Own attempt rate as of the last report.
    pub rho_own: f64,
    /// Aggregate attempt rate as of the last broadcast.
    pub rho_bar: f64,
    /// Window full and at least one rate broadcast received.
    pub ready: bool,
}

#[derive(Debug, Clone, Copy)]
struct SlotRecord {
    others_active: bool,
    silent: bool,
    silent_success: bool,
    silent_delivered: Option<f64>,
}

/// Sliding-window feedback statistics maintained by one node.
#[derive(Debug, Clone)]
pub struct RunningStats {
    window: usize,
    slots: VecDeque<SlotRecord>,
    rho_own: f64,
    rho_bar: f64,
    have_broadcast: bool,
}

impl RunningStats {
    pub fn new(window: usize) -> Self {
        Self {
            window,
            slots: VecDeque::with_capacity(window + 1),
            rho_own: 0.0,
            rho_bar: 0.0,
            have_broadcast: false,
        }
    }

    /// Fold in one slot of feedback. A node never sees rivals' decisions
    /// directly; foreign activity is inferred from the outcome and its own
    /// decision, which determines it in every case.
    pub fn record(&mut self, own_decision: bool, outcome: &SlotOutcome) {
        let others_active = match outcome {
            SlotOutcome::Idle => false,
            SlotOutcome::Success { .. } => !own_decision,
            SlotOutcome::Collision { .. } => true,
        };
        let silent = !own_decision;
        let silent_success = silent && matches!(outcome, SlotOutcome::Success { .. });
        let silent_delivered = if silent && others_active {
            Some(outcome.delivered_value())
        } else {
            None
        };
        self.slots.push_back(SlotRecord {
            others_active,
            silent,
            silent_success,
            silent_delivered,
        });
        if self.slots.len() > self.window {
            self.slots.pop_front();
        }
    }

    /// Install the rates from a periodic report.
    pub fn set_rates(&mut self, rho_own: f64, rho_bar: f64) {
        self.rho_own = rho_own;
        self.rho_bar = rho_bar;
        self.have_broadcast = true;
    }

    pub fn view(&self) -> StatsView {
        let total = self.slots.len();
        let active = self.slots.iter().filter(|r| r.others_active).count();
        let silent = self.slots.iter().filter(|r| r.silent).count();
        let silent_succ = self.slots.iter().filter(|r| r.silent_success).count();
        let delivered: Vec<f64> = self.slots.iter().filter_map(|r| r.silent_delivered).collect();
        StatsView {
            alpha: if total > 0 { active as f64 / total as f64 } else { 0.0 },
            beta: (silent > 0).then(|| silent_succ as f64 / silent as f64),
            lambda: (!delivered.is_empty())
                .then(|| delivered.iter().sum::<f64>() / delivered.len() as f64),
            rho_own: self.rho_own,
            rho_bar: self.rho_bar,
            ready: total >= self.window && self.have_broadcast,
        }
    }
}

/// Exact statistics a node at position `n` would converge to if every rival
/// kept the given profile forever. Used to certify estimator unbiasedness.
pub fn analytic_stats(scenario: &Scenario, n: usize, profile: &ThresholdProfile) -> Result<StatsView> {
    let cuts = profile.value_thresholds(scenario)?;
    let others: Vec<usize> = (0..scenario.num_nodes()).filter(|&m| m != n).collect();
    let silent = |m: usize| 1.0 - scenario.dist(m).tx_prob_above(cuts[m]);
    let all_silent: f64 = others.iter().map(|&m| silent(m)).product();
    let alpha = 1.0 - all_silent;
    let mut beta = 0.0;
    let mut lone_value = 0.0;
    for &m in &others {
        let rest: f64 = others.iter().filter(|&&k| k != m).map(|&k| silent(k)).product();
        beta += scenario.dist(m).tx_prob_above(cuts[m]) * rest;
        lone_value += scenario.dist(m).tail_above_value(cuts[m]) * rest;
    }
    let rho_foreign: f64 = others
        .iter()
        .map(|&m| scenario.dist(m).tx_prob_above(cuts[m]))
        .sum();
    Ok(StatsView {
        alpha,
        beta: Some(beta),
        lambda: (alpha > 0.0).then(|| lone_value / alpha),
        rho_own: 0.0,
        rho_bar: rho_foreign,
        ready: true,
    })
}

/// Per-arm counterfactual system-reward estimates for one slot, or `None`
/// when a collision slot lacks usable statistics (unfilled window, no
/// broadcast yet, vanishing denominator, no delivered-value history).
///
/// `num_nodes` caps the estimated rival count at N−1, which bounds every
/// estimate by `max(v, λ̂) + (N+1)·ψ` in magnitude.
#[allow(clippy::too_many_arguments)]
pub fn counterfactual_rewards(
    grid: &ArmGrid,
    own_value: f64,
    own_threshold: f64,
    psi: f64,
    feedback: &SlotFeedback,
    stats: &StatsView,
    num_nodes: usize,
    denom: ColliderDenominator,
) -> Option<Vec<f64>> {
    let own_decision = own_value > own_threshold;
    // Arms below the split transmit on this value (a = 1), the rest hold.
    let split = grid.split_at_value(own_value);
    let max_rivals = (num_nodes - 1) as f64;
    // Every branch is affine in the transmit indicator: r̂ = base + a·slope.
    let (base, slope) = match (&feedback.outcome, own_decision) {
        (SlotOutcome::Idle, _) | (SlotOutcome::Success { .. }, true) => {
            (0.0, own_value - psi)
        }
        (SlotOutcome::Success { value, .. }, false) => {
            // A rival delivered `value`; transmitting would have erased it
            // and doubled the energy bill.
            (*value - psi, -*value - psi)
        }
        (SlotOutcome::Collision { .. }, true) => {
            if !stats.ready || stats.alpha <= 0.0 {
                return None;
            }
            let lambda = stats.lambda?;
            let rivals = ((stats.rho_bar - stats.rho_own) / stats.alpha).clamp(0.0, max_rivals);
            (lambda - psi * rivals, -lambda - psi)
        }
        (SlotOutcome::Collision { .. }, false) => {
            if !stats.ready {
                return None;
            }
            let beta = stats.beta?;
            let d = match denom {
                ColliderDenominator::ForeignCollisions => stats.alpha - beta,
                ColliderDenominator::ForeignActivity => stats.alpha,
            };
            if d <= 1e-12 {
                return None;
            }
            let rivals = ((stats.rho_bar - stats.rho_own - beta) / d).clamp(0.0, max_rivals);
            (-psi * rivals, -psi)
        }
    };
    let mut out = vec![base; grid.len()];
    for slot in out.iter_mut().take(split) {
        *slot += slope;
    }
    Some(out)
}

/// One node's arm weights and schedule position.
#[derive(Debug, Clone)]
pub struct LearnerState {
    weights: Vec<f64>,
    step: u64,
    explore: f64,
    kappa: f64,
    gain: GainSchedule,
    pub stats: RunningStats,
    pub skipped_slots: u64,
}

impl LearnerState {
    pub fn new(
        num_arms: usize,
        explore: f64,
        kappa: f64,
        gain: GainSchedule,
        window: usize,
    ) -> Self {
        Self {
            weights: vec![0.0; num_arms],
            step: 0,
            explore,
            kappa,
            gain,
            stats: RunningStats::new(window),
            skipped_slots: 0,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// ε-smoothed softmax over the cumulative weights; every arm keeps mass
    /// at least ε/|arms|, and the softmax part is shift-invariant.
    pub fn arm_probabilities(&self) -> Vec<f64> {
        let k = self.weights.len() as f64;
        let top = self.weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = self.weights.iter().map(|w| (w - top).exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.iter()
            .map(|e| self.explore / k + (1.0 - self.explore) * e / total)
            .collect()
    }

    /// Sample an arm index: explore uniformly with probability ε, otherwise
    /// draw from the softmax.
    pub fn choose_arm(&self, rng: &mut impl Rng) -> usize {
        let k = self.weights.len();
        if rng.gen::<f64>() < self.explore {
            return rng.gen_range(0..k);
        }
        let top = self.weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = self.weights.iter().map(|w| (w - top).exp()).collect();
        let total: f64 = exps.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        for (i, e) in exps.iter().enumerate() {
            u -= e;
            if u <= 0.0 {
                return i;
            }
        }
        k - 1
    }

    /// Arm with the largest cumulative weight; ties go to the lowest index.
    pub fn greedy_arm(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        best
    }

    /// Fold in one slot's estimates with the i-th gain of the schedule.
    pub fn update(&mut self, estimates: &[f64]) {
        assert_eq!(estimates.len(), self.weights.len());
        self.step += 1;
        let gain = self.gain.gain(self.kappa, self.step);
        for (w, r) in self.weights.iter_mut().zip(estimates) {
            *w += gain * r;
        }
    }
}

/// Everything a training run produces.
#[derive(Debug, Clone)]
pub struct TrainResult {
    /// Final greedy value-space threshold per node.
    pub greedy_thresholds: Vec<f64>,
    /// The same rule in quantile space.
    pub greedy_profile: ThresholdProfile,
    /// Analytic expected reward of the greedy profile.
    pub greedy_reward: f64,
    /// Realized system reward per slot.
    pub trajectory: Vec<f64>,
    /// (slot, per-node greedy thresholds) snapshots.
    pub snapshots: Vec<(u64, Vec<f64>)>,
    /// Collision slots per node whose update had to be skipped.
    pub skipped: Vec<u64>,
    /// Applied updates per node.
    pub applied: Vec<u64>,
}

/// Run the full closed loop: sample, choose arms, resolve, broadcast, score,
/// update — for `config.train_slots` slots.
pub fn train(scenario: &Scenario, config: &BetaConfig, seed: u64) -> Result<TrainResult> {
    config.validate()?;
    let n = scenario.num_nodes();
    let arms = config.grid.len();
    let mut rngs: Vec<_> = (0..n).map(|k| rng::stream(seed, node_stream(k))).collect();
    let mut states: Vec<LearnerState> = (0..n)
        .map(|_| {
            LearnerState::new(arms, config.explore, config.kappa, config.gain, config.window)
        })
        .collect();
    let mut values = vec![0.0; n];
    let mut decisions = vec![false; n];
    let mut played = vec![0usize; n];
    let mut attempts_since_report = vec![0u64; n];
    let mut trajectory = Vec::with_capacity(config.train_slots as usize);
    let mut snapshots = Vec::new();
    for slot in 0..config.train_slots {
        sample_values_into(scenario, &mut rngs, &mut values);
        for k in 0..n {
            played[k] = states[k].choose_arm(&mut rngs[k]);
            decisions[k] = values[k] > config.grid.thresholds()[played[k]];
        }
        let outcome = resolve(&decisions, &values);
        for (k, &d) in decisions.iter().enumerate() {
            attempts_since_report[k] += d as u64;
        }
        // Periodic synchronized attempt-rate report.
        let rho_bar = if (slot + 1) % config.window as u64 == 0 {
            let rhos: Vec<f64> = attempts_since_report
                .iter()
                .map(|&a| a as f64 / config.window as f64)
                .collect();
            Some(rhos.iter().sum::<f64>())
        } else {
            None
        };
        let feedback = SlotFeedback { outcome: outcome.clone(), rho_bar };
        for k in 0..n {
            // Score with the statistics held *before* this slot, so the
            // estimate never conditions on its own outcome.
            let view = states[k].stats.view();
            match counterfactual_rewards(
                &config.grid,
                values[k],
                config.grid.thresholds()[played[k]],
                scenario.psi(),
                &feedback,
                &view,
                n,
                config.collider_denominator,
            ) {
                Some(est) => states[k].update(&est),
                None => states[k].skipped_slots += 1,
            }
            states[k].stats.record(decisions[k], &outcome);
        }
        if let Some(total) = rho_bar {
            for k in 0..n {
                let own = attempts_since_report[k] as f64 / config.window as f64;
                states[k].stats.set_rates(own, total);
            }
            attempts_since_report.iter_mut().for_each(|a| *a = 0);
        }
        trajectory
            .push(outcome.delivered_value() - scenario.psi() * outcome.num_transmitters() as f64);
        if config.snapshot_every > 0 && (slot + 1) % config.snapshot_every == 0 {
            let cuts: Vec<f64> = states
                .iter()
                .map(|s| config.grid.thresholds()[s.greedy_arm()])
                .collect();
            snapshots.push((slot + 1, cuts));
        }
    }
    let greedy_thresholds: Vec<f64> = states
        .iter()
        .map(|s| config.grid.thresholds()[s.greedy_arm()])
        .collect();
    let thetas: Vec<f64> = greedy_thresholds
        .iter()
        .enumerate()
        .map(|(k, &t)| scenario.dist(k).cdf(t))
        .collect();
    Ok(TrainResult {
        greedy_reward: expected_reward_cuts(scenario, &greedy_thresholds),
        greedy_profile: ThresholdProfile::new(thetas)?,
        greedy_thresholds,
        trajectory,
        snapshots,
        skipped: states.iter().map(|s| s.skipped_slots).collect(),
        applied: states.iter().map(|s| s.step).collect(),
    })
}

/// Trailing moving average with a warmup ramp (window grows until `window`).
pub fn moving_average(series: &[f64], window: usize) -> Vec<f64> {
    assert!(window > 0);
    let mut out = Vec::with_capacity(series.len());
    let mut sum = 0.0;
    for (i, &x) in series.iter().enumerate() {
        sum += x;
        if i >= window {
            sum -= series[i - window];
        }
        out.push(sum / (i + 1).min(window) as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{ContinuousDist, DiscreteDist, ValueDist};
    use approx::assert_abs_diff_eq;

    fn grid3() -> ArmGrid {
        ArmGrid::new(vec![0.0, 1.0, 2.0]).unwrap()
    }

    fn no_stats() -> StatsView {
        StatsView {
            alpha: 0.0,
            beta: None,
            lambda: None,
            rho_own: 0.0,
            rho_bar: 0.0,
            ready: false,
        }
    }

    #[test]
    fn grid_construction_and_splitting() {
        assert!(ArmGrid::new(vec![]).is_err());
        assert!(ArmGrid::new(vec![0.0, 0.0]).is_err());
        assert!(ArmGrid::new(vec![1.0, 0.5]).is_err());
        let g = ArmGrid::standard();
        assert_eq!(g.len(), 201);
        assert_eq!(g.thresholds()[0], 0.0);
        assert_abs_diff_eq!(g.thresholds()[200], 20.0, epsilon = 1e-12);
        // value 0.25: arms 0.0..0.2 transmit, 0.3.. hold.
        assert_eq!(g.split_at_value(0.25), 3);
        // exact hit: arm 1.0 does not transmit on value 1.0 (strict rule).
        assert_eq!(grid3().split_at_value(1.0), 1);
    }

    #[test]
    fn silence_scores_the_arms_that_would_have_sent() {
        let fb = SlotFeedback { outcome: SlotOutcome::Idle, rho_bar: None };
        let r = counterfactual_rewards(
            &ArmGrid::standard(), 2.0, 5.0, 0.25, &fb, &no_stats(), 10,
            ColliderDenominator::ForeignCollisions,
        )
        .unwrap();
        for (i, t) in ArmGrid::standard().thresholds().iter().enumerate() {
            let want = if *t < 2.0 { 1.75 } else { 0.0 };
            assert_abs_diff_eq!(r[i], want, epsilon = 1e-12);
        }
    }

    #[test]
    fn foreign_success_rewards_restraint() {
        let fb = SlotFeedback {
            outcome: SlotOutcome::Success { transmitter: 3, value: 3.0 },
            rho_bar: None,
        };
        // Own value 1: playing threshold 5 kept us silent.
        let r = counterfactual_rewards(
            &ArmGrid::standard(), 1.0, 5.0, 0.25, &fb, &no_stats(), 10,
            ColliderDenominator::ForeignCollisions,
        )
        .unwrap();
        for (i, t) in ArmGrid::standard().thresholds().iter().enumerate() {
            let want = if *t < 1.0 { -0.5 } else { 2.75 };
            assert_abs_diff_eq!(r[i], want, epsilon = 1e-12);
        }
    }

    #[test]
    fn own_success_scores_like_silence() {
        let fb = SlotFeedback {
            outcome: SlotOutcome::Success { transmitter: 0, value: 2.0 },
            rho_bar: None,
        };
        // own_value 2 > played threshold 1 ⇒ this success is ours.
        let r = counterfactual_rewards(
            &grid3(), 2.0, 1.0, 0.25, &fb, &no_stats(), 10,
            ColliderDenominator::ForeignCollisions,
        )
        .unwrap();
        assert_abs_diff_eq!(r[0], 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn silent_collision_bills_estimated_rivals() {
        let stats = StatsView {
            alpha: 0.4,
            beta: Some(0.2),
            lambda: Some(1.0),
            rho_own: 0.1,
            rho_bar: 0.5,
            ready: true,
        };
        let fb = SlotFeedback {
            outcome: SlotOutcome::Collision { num_transmitters: 2 },
            rho_bar: None,
        };
        // own value below the played threshold: we sat the collision out.
        let r = counterfactual_rewards(
            &grid3(), 0.5, 1.0, 0.25, &fb, &stats, 10,
            ColliderDenominator::ForeignCollisions,
        )
        .unwrap();
        // (0.5−0.1−0.2)/(0.4−0.2) = 1 rival: −0.25, and −0.5 had we joined.
        assert_abs_diff_eq!(r[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r[2], -0.25, epsilon = 1e-12);
        // Same slot under the all-activity normalization: 0.2/0.4 = 0.5 rivals.
        let r = counterfactual_rewards(
            &grid3(), 0.5, 1.0, 0.25, &fb, &stats, 10,
            ColliderDenominator::ForeignActivity,
        )
        .unwrap();
        assert_abs_diff_eq!(r[1], -0.125, epsilon = 1e-12);
    }

    #[test]
    fn joined_collision_credits_the_erased_value() {
        let stats = StatsView {
            alpha: 0.4,
            beta: Some(0.2),
            lambda: Some(2.0),
            rho_own: 0.1,
            rho_bar: 0.5,
            ready: true,
        };
        let fb = SlotFeedback {
            outcome: SlotOutcome::Collision { num_transmitters: 2 },
            rho_bar: None,
        };
        // own value 3 > played threshold 1: we were in the pile-up.  The top
        // arm must sit above the value so some arm actually stays out.
        let grid = ArmGrid::new(vec![0.0, 1.0, 4.0]).unwrap();
        let r = counterfactual_rewards(
            &grid, 3.0, 1.0, 0.25, &fb, &stats, 10,
            ColliderDenominator::ForeignCollisions,
        )
        .unwrap();
        // rivals = 0.4/0.4 = 1. The silent arm recovers λ̂ − ψ·1 = 1.75;
        // transmitting arms pay −ψ·1 − ψ = −0.5.
        assert_abs_diff_eq!(r[2], 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], -0.5, epsilon = 1e-12);
    }

    #[test]
    fn collision_slots_without_statistics_are_skipped() {
        let fb = SlotFeedback {
            outcome: SlotOutcome::Collision { num_transmitters: 2 },
            rho_bar: None,
        };
        for own in [0.5, 3.0] {
            assert!(counterfactual_rewards(
                &grid3(), own, 1.0, 0.25, &fb, &no_stats(), 10,
                ColliderDenominator::ForeignCollisions,
            )
            .is_none());
        }
        // α = β kills the foreign-collision denominator.
        let stats = StatsView {
            alpha: 0.3,
            beta: Some(0.3),
            lambda: Some(1.0),
            rho_own: 0.0,
            rho_bar: 0.5,
            ready: true,
        };
        assert!(counterfactual_rewards(
            &grid3(), 0.5, 1.0, 0.25, &fb, &stats, 10,
            ColliderDenominator::ForeignCollisions,
        )
        .is_none());
        assert!(counterfactual_rewards(
            &grid3(), 0.5, 1.0, 0.25, &fb, &stats, 10,
            ColliderDenominator::ForeignActivity,
        )
        .is_some());
    }

    #[test]
    fn estimates_stay_bounded() {
        let stats = StatsView {
            alpha: 1e-6,
            beta: Some(0.0),
            lambda: Some(4.0),
            rho_own: 0.0,
            rho_bar: 9.0,
            ready: true,
        };
        let fb = SlotFeedback {
            outcome: SlotOutcome::Collision { num_transmitters: 5 },
            rho_bar: None,
        };
        let psi = 0.25;
        let n = 10;
        for own in [0.2, 6.0] {
            let r = counterfactual_rewards(
                &grid3(), own, 1.0, psi, &fb, &stats, n,
                ColliderDenominator::ForeignCollisions,
            )
            .unwrap();
            let bound = own.max(4.0) + (n as f64 + 1.0) * psi;
            for &e in &r {
                assert!(e.is_finite() && e.abs() <= bound, "estimate {e} vs {bound}");
            }
        }
    }

    #[test]
    fn probabilities_mix_floor_and_softmax() {
        let mut state = LearnerState::new(2, 0.0, 0.9, GainSchedule::PowerLaw, 25);
        state.update(&[1.0, 0.0]);
        let p = state.arm_probabilities();
        assert_abs_diff_eq!(p[0], 0.73106, epsilon = 1e-5);
        assert_abs_diff_eq!(p[1], 0.26894, epsilon = 1e-5);
        let state = LearnerState::new(4, 1.0, 0.9, GainSchedule::PowerLaw, 25);
        let p = state.arm_probabilities();
        for &x in &p {
            assert_abs_diff_eq!(x, 0.25, epsilon = 1e-12);
        }
        let mut state = LearnerState::new(3, 0.1, 0.9, GainSchedule::PowerLaw, 25);
        state.update(&[5.0, 1.0, -2.0]);
        for &x in &state.arm_probabilities() {
            assert!(x >= 0.1 / 3.0 - 1e-12);
        }
    }

    #[test]
    fn softmax_is_shift_invariant_and_overflow_proof() {
        let mut a = LearnerState::new(3, 0.2, 0.9, GainSchedule::PowerLaw, 25);
        let mut b = LearnerState::new(3, 0.2, 0.9, GainSchedule::PowerLaw, 25);
        a.update(&[1.0, 2.0, 3.0]);
        b.update(&[1001.0, 1002.0, 1003.0]);
        let pa = a.arm_probabilities();
        let pb = b.arm_probabilities();
        for (x, y) in pa.iter().zip(&pb) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        assert!(pb.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn choose_arm_matches_declared_distribution() {
        let mut state = LearnerState::new(3, 0.3, 0.9, GainSchedule::PowerLaw, 25);
        state.update(&[0.5, 2.0, 1.0]);
        let want = state.arm_probabilities();
        let mut rng = rng::stream(13, 0);
        let trials = 200_000;
        let mut counts = [0u32; 3];
        for _ in 0..trials {
            counts[state.choose_arm(&mut rng)] += 1;
        }
        for (c, w) in counts.iter().zip(&want) {
            let f = *c as f64 / trials as f64;
            assert!((f - w).abs() < 0.005, "freq {f} vs {w}");
        }
    }

    #[test]
    fn update_gains_decay_harmonically() {
        let kappa = 0.75;
        let mut state = LearnerState::new(1, 0.0, kappa, GainSchedule::PowerLaw, 25);
        state.update(&[1.0]);
        assert_abs_diff_eq!(state.weights()[0], 1.0, epsilon = 1e-15);
        state.update(&[1.0]);
        assert_abs_diff_eq!(state.weights()[0], 1.0 + 2f64.powf(-kappa), epsilon = 1e-15);
        let before = state.weights()[0];
        state.update(&[0.0]);
        assert_eq!(state.weights()[0], before);
        assert_eq!(state.step(), 3);
    }

    #[test]
    fn geometric_gains_anneal() {
        let kappa = 0.5;
        let mut state = LearnerState::new(1, 0.0, kappa, GainSchedule::Geometric, 25);
        state.update(&[1.0]);
        assert_abs_diff_eq!(state.weights()[0], 0.5, epsilon = 1e-15);
        state.update(&[1.0]);
        assert_abs_diff_eq!(state.weights()[0], 0.75, epsilon = 1e-15);
        // The whole schedule sums to κ/(1−κ): learning stops on its own.
        assert_abs_diff_eq!(
            GainSchedule::Geometric.gain(1.0 - 5e-5, 20_000),
            (1.0f64 - 5e-5).powi(20_000),
            epsilon = 1e-15
        );
    }

    #[test]
    fn lone_learner_discovers_transmission() {
        let d: ValueDist = DiscreteDist::binary(0.5).unwrap().into();
        let s = Scenario::symmetric(d, 1, 0.0).unwrap();
        let config = BetaConfig {
            train_slots: 20_000,
            grid: ArmGrid::uniform(2.0, 0.5).unwrap(),
            snapshot_every: 0,
            ..BetaConfig::default()
        };
        let result = train(&s, &config, 3).unwrap();
        assert!(
            result.greedy_thresholds[0] < 1.0,
            "learned threshold {}",
            result.greedy_thresholds[0]
        );
        assert_abs_diff_eq!(result.greedy_reward, 0.5, epsilon = 1e-12);
        assert_eq!(result.skipped[0], 0);
    }

    #[test]
    fn training_is_reproducible() {
        let d: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
        let s = Scenario::symmetric(d, 3, 0.25).unwrap();
        let config = BetaConfig { train_slots: 3_000, ..BetaConfig::default() };
        let a = train(&s, &config, 11).unwrap();
        let b = train(&s, &config, 11).unwrap();
        assert_eq!(a.greedy_thresholds, b.greedy_thresholds);
        assert_eq!(a.trajectory[..100], b.trajectory[..100]);
        let c = train(&s, &config, 12).unwrap();
        assert_ne!(a.trajectory[..100], c.trajectory[..100]);
    }

    #[test]
    fn moving_average_smooths_with_warmup() {
        let xs = [1.0, 3.0, 5.0, 7.0];
        let s = moving_average(&xs, 2);
        assert_eq!(s, vec![1.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn analytic_stats_match_hand_computation() {
        let d: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
        let s = Scenario::symmetric(d, 3, 0.0).unwrap();
        let profile = ThresholdProfile::new(vec![0.5, 0.6, 0.8]).unwrap();
        let view = analytic_stats(&s, 0, &profile).unwrap();
        // Rivals transmit with probability 0.4 and 0.2.
        assert_abs_diff_eq!(view.alpha, 1.0 - 0.6 * 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(view.beta.unwrap(), 0.4 * 0.8 + 0.2 * 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(view.rho_bar, 0.6, epsilon = 1e-12);
        assert!(view.lambda.unwrap() > 0.0);
    }
}
