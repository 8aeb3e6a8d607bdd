//! Suite bodies shared between the per-topic test files and the acceptance
//! scoreboard. Each runs its full pinned workload, panics on the first
//! violation, and returns a one-line summary of what it measured.

#![allow(dead_code)]

use goma::beta::{analytic_stats, counterfactual_rewards, ArmGrid, ColliderDenominator};
use goma::channel::{resolve, run_episode, sample_values_into, SlotFeedback};
use goma::dists::{ContinuousDist, DiscreteDist, ValueDist};
use goma::libra::{best_response_discrete, epsilon_ne_certificate, libra};
use goma::oracle::{exhaustive_general_response, hessian_minor_check};
use goma::rng::{derive_seed, node_stream, stream};
use goma::strategy::{
    expected_reward, expected_reward_threshold, GeneralStrategy, Scenario, ThresholdProfile,
};
use rand::Rng;

pub fn random_discrete(rng: &mut impl Rng, max_atoms: usize) -> DiscreteDist {
    let k = rng.gen_range(2..=max_atoms);
    // Positive gaps keep the support strictly increasing; a coin flip decides
    // whether the support starts at zero (a value that never pays to send).
    let mut v = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.1..1.0) };
    let mut values = Vec::with_capacity(k);
    for _ in 0..k {
        values.push(v);
        v += rng.gen_range(0.1..2.0);
    }
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let head: f64 = probs[..k - 1].iter().sum();
    probs[k - 1] = 1.0 - head;
    DiscreteDist::new(values, probs).unwrap()
}

fn random_instance(rng: &mut impl Rng) -> (Scenario, GeneralStrategy) {
    let n = rng.gen_range(2..=3);
    let dists: Vec<_> = (0..n).map(|_| random_discrete(rng, 4).into()).collect();
    let psi = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..0.6) };
    let scenario = Scenario::new(dists, psi).unwrap();
    let x: Vec<Vec<f64>> = (0..n)
        .map(|m| {
            let k = scenario.dist(m).as_discrete().unwrap().values().len();
            (0..k).map(|_| rng.gen::<f64>()).collect()
        })
        .collect();
    let others = GeneralStrategy::new(&scenario, x).unwrap();
    (scenario, others)
}

/// The per-value response implied by a value-space cut.
pub fn threshold_row(scenario: &Scenario, n: usize, cut: f64) -> Vec<f64> {
    scenario
        .dist(n)
        .as_discrete()
        .unwrap()
        .values()
        .iter()
        .map(|&v| if v > cut { 1.0 } else { 0.0 })
        .collect()
}

/// 100 random discrete instances: the closed-form cut ties the exhaustive
/// search over all deterministic per-value responses to 1e-10.
pub fn threshold_exhaustive_suite() -> String {
    let mut rng = stream(1847, 0);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let (scenario, others) = random_instance(&mut rng);
        for node in 0..scenario.num_nodes() {
            let report = best_response_discrete(&scenario, node, &others).unwrap();
            let mut mine = others.clone();
            *mine.probs_mut(node) = threshold_row(&scenario, node, report.value_threshold);
            let closed = expected_reward(&scenario, &mine).unwrap();
            let (_, exhaustive) = exhaustive_general_response(&scenario, node, &others).unwrap();
            let gap = exhaustive - closed;
            assert!(
                gap.abs() <= 1e-10,
                "case {case} node {node}: exhaustive {exhaustive} vs cut {closed} (gap {gap:e})"
            );
            worst = worst.max(gap.abs());
        }
    }
    format!("100 instances, max cut-vs-exhaustive gap {worst:.1e}")
}

/// 100 random support pairs: every probed reward-Hessian minor is negative.
pub fn minors_suite() -> String {
    let mut rng = stream(1848, 0);
    let mut checked = 0;
    let mut closest: f64 = f64::NEG_INFINITY;
    while checked < 100 {
        let a = random_discrete(&mut rng, 4);
        let b = random_discrete(&mut rng, 4);
        let v_idx = rng.gen_range(0..a.values().len());
        let u_idx = rng.gen_range(0..b.values().len());
        if a.values()[v_idx] + b.values()[u_idx] == 0.0 {
            continue;
        }
        let scenario = Scenario::new(vec![a.into(), b.into()], 0.0).unwrap();
        let minor = hessian_minor_check(&scenario, 0, v_idx, 1, u_idx).unwrap();
        assert!(minor < 0.0, "minor {minor} at probe {checked} is not negative");
        closest = closest.max(minor);
        checked += 1;
    }
    format!("100 minors negative, closest to zero {closest:.2e}")
}

fn random_continuous(rng: &mut impl Rng) -> ValueDist {
    match rng.gen_range(0..5) {
        0 => ContinuousDist::exponential(rng.gen_range(0.5..2.0)).unwrap().into(),
        1 => ContinuousDist::uniform(0.0, rng.gen_range(1.0..3.0)).unwrap().into(),
        2 => ContinuousDist::gaussian(rng.gen_range(-0.5..1.0), rng.gen_range(0.5..2.0))
            .unwrap()
            .into(),
        3 => ContinuousDist::pareto(rng.gen_range(0.5..1.0), rng.gen_range(1.8..3.0))
            .unwrap()
            .into(),
        _ => ContinuousDist::chi_square_2_scaled(rng.gen_range(0.5..1.5)).unwrap().into(),
    }
}

/// 50 random scenario/profile pairs: 2·10⁵-slot Monte Carlo means inside
/// four standard errors of the closed-form reward.
pub fn mc_agreement_suite() -> String {
    const SLOTS: u64 = 200_000;
    let mut rng = stream(2205, 0);
    let mut worst_sigmas: f64 = 0.0;
    for case in 0..50u64 {
        let n = rng.gen_range(2..=5);
        let dists: Vec<ValueDist> = (0..n).map(|_| random_continuous(&mut rng)).collect();
        let psi = rng.gen_range(0.0..0.4);
        let scenario = Scenario::new(dists, psi).unwrap();
        let thetas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.98)).collect();
        let profile = ThresholdProfile::new(thetas).unwrap();

        let analytic = expected_reward_threshold(&scenario, &profile).unwrap();
        let stats = run_episode(&scenario, &profile, SLOTS, derive_seed(99, 0x4D, case)).unwrap();
        let gap = (stats.mean_reward - analytic).abs();
        let slack = 4.0 * stats.std_error + 1e-9;
        assert!(
            gap <= slack,
            "case {case}: MC {:.6} vs analytic {analytic:.6}, gap {gap:.2e} > {slack:.2e}",
            stats.mean_reward
        );
        worst_sigmas = worst_sigmas.max(gap / (stats.std_error + 1e-300));
    }
    format!("50 profiles within 4\u{3c3} (worst {worst_sigmas:.2}\u{3c3})")
}

/// E[r̂_a] for a frozen symmetric Exp(1) triple, by enumerating the four
/// feedback branches and integrating each over the value distribution. The
/// estimator itself never sees these formulas; it works from single slots.
fn expected_estimate(
    grid: &ArmGrid,
    cut: f64,
    psi: f64,
    stats: &goma::beta::StatsView,
) -> Vec<f64> {
    let survive = |t: f64| (-t).exp();
    let tail = |t: f64| (t + 1.0) * (-t).exp();
    let q = survive(cut);
    let lone = 2.0 * q * (1.0 - q);
    let both = q * q;
    let w_mean = tail(cut) / q;
    let alpha = stats.alpha;
    let lambda = stats.lambda.unwrap();
    let beta = stats.beta.unwrap();
    let rivals_tx = ((stats.rho_bar - stats.rho_own) / alpha).clamp(0.0, 2.0);
    let rivals_quiet =
        ((stats.rho_bar - stats.rho_own - beta) / (alpha - beta)).clamp(0.0, 2.0);

    grid.thresholds()
        .iter()
        .map(|&t| {
            let p_tx_arm = survive(t);
            // P(t < v ≤ cut): slots where the arm sends but the node held.
            let p_between = (survive(t.min(cut)) - q).max(0.0);
            let quiet_rivals = (1.0 - q) * (1.0 - q);
            let k0 = quiet_rivals * (tail(t) - psi * p_tx_arm);
            let k1_silent = lone * ((1.0 - q) * (w_mean - psi) + p_between * (-w_mean - psi));
            let own_join = alpha
                * (q * (lambda - psi * rivals_tx) + survive(t.max(cut)) * (-lambda - psi));
            let k2_silent = both * ((1.0 - q) * (-psi * rivals_quiet) + p_between * (-psi));
            k0 + k1_silent + own_join + k2_silent
        })
        .collect()
}

/// 3·10⁵ slots over a frozen profile: each arm's empirical estimate mean
/// within four standard errors of its independently derived expectation.
pub fn estimator_unbiasedness_suite() -> String {
    const SLOTS: usize = 300_000;
    let dist: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
    let scenario = Scenario::symmetric(dist, 3, 0.25).unwrap();
    let profile = ThresholdProfile::uniform(3, 0.7).unwrap();
    let cuts = profile.value_thresholds(&scenario).unwrap();
    let grid = ArmGrid::new(vec![0.0, 0.8, 1.6, 2.4]).unwrap();
    let stats = analytic_stats(&scenario, 0, &profile).unwrap();
    let expected = expected_estimate(&grid, cuts[0], scenario.psi(), &stats);

    let mut rngs: Vec<_> = (0..3).map(|n| stream(4242, node_stream(n))).collect();
    let mut values = vec![0.0; 3];
    let mut sums = vec![0.0; grid.len()];
    let mut sqsums = vec![0.0; grid.len()];
    for _ in 0..SLOTS {
        sample_values_into(&scenario, &mut rngs, &mut values);
        let decisions: Vec<bool> = values.iter().zip(&cuts).map(|(v, c)| v > c).collect();
        let feedback = SlotFeedback {
            outcome: resolve(&decisions, &values),
            rho_bar: None,
        };
        let est = counterfactual_rewards(
            &grid,
            values[0],
            cuts[0],
            scenario.psi(),
            &feedback,
            &stats,
            3,
            ColliderDenominator::ForeignCollisions,
        )
        .expect("exact statistics never force a skip");
        for (k, r) in est.iter().enumerate() {
            sums[k] += r;
            sqsums[k] += r * r;
        }
    }

    let m = SLOTS as f64;
    let mut worst_sigmas: f64 = 0.0;
    for (k, t) in grid.thresholds().iter().enumerate() {
        let mean = sums[k] / m;
        let var = (sqsums[k] / m - mean * mean).max(0.0);
        let sem = (var / m).sqrt();
        let gap = (mean - expected[k]).abs();
        assert!(
            gap <= 4.0 * sem + 1e-12,
            "arm {t}: empirical {mean:.6} vs expected {:.6} (gap {gap:.2e}, sem {sem:.2e})",
            expected[k]
        );
        worst_sigmas = worst_sigmas.max(gap / (sem + 1e-300));
    }
    format!("{} arms unbiased within 4\u{3c3} (worst {worst_sigmas:.2}\u{3c3})", grid.len())
}

pub fn random_mixed_scenario(rng: &mut impl Rng) -> Scenario {
    let n = rng.gen_range(2..=6);
    let psi = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..0.5) };
    let dists: Vec<ValueDist> = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => ContinuousDist::exponential(rng.gen_range(0.5..2.0)).unwrap().into(),
            1 => ContinuousDist::chi_square_2_scaled(rng.gen_range(0.5..1.5)).unwrap().into(),
            _ => ContinuousDist::uniform(0.0, rng.gen_range(1.5..3.0)).unwrap().into(),
        })
        .collect();
    Scenario::new(dists, psi).unwrap()
}

/// 40 randomized solver runs: reward never falls along the dynamics and the
/// terminal profile certifies as an equilibrium.
pub fn dynamics_suite() -> String {
    let mut rng = stream(3301, 0);
    let mut worst_cert: f64 = 0.0;
    for case in 0..40 {
        let scenario = random_mixed_scenario(&mut rng);
        let (profile, trace) = libra(&scenario, 1e-9).unwrap();
        assert!(trace.converged, "case {case} did not converge");
        for pair in trace.iterations.windows(2) {
            assert!(
                pair[1].1 >= pair[0].1 - 1e-9,
                "case {case}: reward fell from {} to {}",
                pair[0].1,
                pair[1].1
            );
        }
        let cert = epsilon_ne_certificate(&scenario, &profile).unwrap();
        assert!(cert <= 1e-7, "case {case}: certificate {cert:.2e}");
        worst_cert = worst_cert.max(cert);
    }
    format!("40 runs monotone and certified (worst certificate {worst_cert:.1e})")
}

/// Best single-dominant strategy: every candidate node in turn transmits
/// exactly when its value covers ψ while the rest stay mute.
pub fn best_single_dominant(scenario: &Scenario) -> (ThresholdProfile, f64) {
    let n = scenario.num_nodes();
    let mut best: Option<(ThresholdProfile, f64)> = None;
    for dominant in 0..n {
        let mut thetas = vec![1.0; n];
        thetas[dominant] = scenario.dist(dominant).cdf(scenario.psi());
        let profile = ThresholdProfile::new(thetas).unwrap();
        let reward = expected_reward_threshold(scenario, &profile).unwrap();
        if best.as_ref().map_or(true, |(_, r)| reward > *r) {
            best = Some((profile, reward));
        }
    }
    best.unwrap()
}

/// Per-node means for an asymmetric fleet: iid uniform on [1−ν, 1+ν].
pub fn draw_means(rng: &mut impl Rng, n: usize, nu: f64) -> Vec<f64> {
    (0..n).map(|_| 1.0 - nu + 2.0 * nu * rng.gen::<f64>()).collect()
}
