//! Certification suite: cross-checks every analytic shortcut in the crate
//! against a brute-force or closed-form oracle, one pass/fail line each.

use super::config::ExperimentConfig;
use crate::baseline::{equal_value_init, pareto_equal_value_optimum, uniform_equal_value_optimum};
use crate::beta::{analytic_stats, counterfactual_rewards, ArmGrid, ColliderDenominator, StatsView};
use crate::channel::{resolve, run_episode, sample_values_into, SlotFeedback, SlotOutcome};
use crate::dists::{ContinuousDist, DiscreteDist, ValueDist};
use crate::error::{GomaError, Result};
use crate::libra::{best_response, best_response_discrete};
use crate::oracle::{
    binary_toy_optimum, exhaustive_general_response, grid_best_response, hessian_minor_check,
    tail_above_quadrature, tail_expectation_quadrature,
};
use crate::rng::{self, derive_seed, node_stream};
use crate::strategy::{
    expected_reward, expected_reward_cuts, expected_reward_threshold, GeneralStrategy, Scenario,
    ThresholdProfile,
};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

type Check = std::result::Result<String, String>;

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let seed = cfg.seed();
    let checks: Vec<(&str, Check)> = vec![
        ("closed_form_tails", closed_form_tails()),
        ("best_response_vs_sweep", best_response_vs_sweep(seed)),
        ("threshold_sufficiency", threshold_sufficiency(seed)),
        ("concavity_minors", concavity_minors(seed)),
        ("equal_value_closed_forms", equal_value_closed_forms()),
        ("toy_reference_points", toy_reference_points()),
        ("estimator_worked_examples", estimator_worked_examples()),
        ("estimator_unbiased", estimator_unbiased(seed)),
        ("mc_matches_analytic", mc_matches_analytic(seed)),
        ("unit_exponential_constants", unit_exponential_constants()),
    ];
    let mut failures = 0;
    for (name, outcome) in &checks {
        match outcome {
            Ok(detail) => println!("ok - {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL - {name}: {detail}");
            }
        }
    }
    if failures > 0 {
        Err(GomaError::Config(format!(
            "{failures} of {} verification checks failed",
            checks.len()
        )))
    } else {
        println!("verify: all {} checks passed", checks.len());
        Ok(())
    }
}

fn stock_families() -> Vec<ValueDist> {
    vec![
        ContinuousDist::exponential(1.0).unwrap().into(),
        ContinuousDist::chi_square_2_scaled(1.0).unwrap().into(),
        ContinuousDist::gaussian(0.5, 4.0).unwrap().into(),
        ContinuousDist::uniform(0.0, 2.0).unwrap().into(),
        ContinuousDist::pareto(1.0, 2.0).unwrap().into(),
    ]
}

fn closed_form_tails() -> Check {
    let mut worst = 0.0f64;
    for d in stock_families() {
        for theta in [0.05, 0.25, 0.5, 0.77, 0.9, 0.99] {
            let closed = d.tail_expectation(theta).map_err(|e| e.to_string())?;
            let quad = tail_expectation_quadrature(&d, theta).map_err(|e| e.to_string())?;
            worst = worst.max((closed - quad).abs());
        }
        for p in [0.1, 0.5, 0.9] {
            let t = d.quantile(p).map_err(|e| e.to_string())?;
            let closed = d.tail_above_value(t);
            let quad = tail_above_quadrature(&d, t);
            worst = worst.max((closed - quad).abs());
        }
    }
    bound(worst, 1e-8, "max |closed − quadrature|")
}

fn random_continuous(rng: &mut ChaCha12Rng) -> ValueDist {
    match rng.gen_range(0..3) {
        0 => ContinuousDist::exponential(rng.gen_range(0.5..2.0)).unwrap().into(),
        1 => ContinuousDist::chi_square_2_scaled(rng.gen_range(0.5..2.0)).unwrap().into(),
        _ => ContinuousDist::gaussian(rng.gen_range(0.0..1.0), rng.gen_range(1.0..4.0))
            .unwrap()
            .into(),
    }
}

fn best_response_vs_sweep(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 0xE2);
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..12 {
        let n = 3;
        let dists: Vec<ValueDist> = (0..n).map(|_| random_continuous(&mut rng)).collect();
        let psi = if trial % 2 == 0 { 0.0 } else { 0.25 };
        let s = Scenario::new(dists, psi).map_err(|e| e.to_string())?;
        let profile = ThresholdProfile::new(
            (0..n).map(|_| rng.gen_range(0.05..0.99)).collect(),
        )
        .map_err(|e| e.to_string())?;
        let report = best_response(&s, 0, &profile).map_err(|e| e.to_string())?;
        let mut replied = profile.clone();
        replied.set_theta(0, report.theta_star);
        let analytic = expected_reward_threshold(&s, &replied).map_err(|e| e.to_string())?;
        let sweep = grid_best_response(&s, 0, &profile, 1e-3).map_err(|e| e.to_string())?;
        worst = worst.max(sweep.best_reward - analytic);
    }
    bound(worst, 1e-9, "max (sweep − response) reward gap")
}

fn random_discrete_instance(rng: &mut ChaCha12Rng) -> (Scenario, GeneralStrategy) {
    let n = rng.gen_range(2..=3);
    let dists: Vec<ValueDist> = (0..n)
        .map(|_| {
            let k = rng.gen_range(2..=4);
            let mut v = 0.0;
            let mut values = Vec::with_capacity(k);
            for _ in 0..k {
                v += rng.gen_range(0.05..1.0);
                values.push(v);
            }
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
            DiscreteDist::new(values, probs).unwrap().into()
        })
        .collect();
    let psi = if rng.gen::<bool>() { 0.0 } else { 0.1 };
    let s = Scenario::new(dists, psi).unwrap();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|m| {
            let k = s.dist(m).as_discrete().unwrap().values().len();
            (0..k).map(|_| rng.gen::<f64>()).collect()
        })
        .collect();
    let strategy = GeneralStrategy::new(&s, rows).unwrap();
    (s, strategy)
}

fn threshold_sufficiency(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 0xE3);
    let mut worst = 0.0f64;
    for _ in 0..12 {
        let (s, strategy) = random_discrete_instance(&mut rng);
        let (_, exhaustive) =
            exhaustive_general_response(&s, 0, &strategy).map_err(|e| e.to_string())?;
        let report = best_response_discrete(&s, 0, &strategy).map_err(|e| e.to_string())?;
        let atoms = s.dist(0).as_discrete().unwrap().values().to_vec();
        let row: Vec<f64> = atoms
            .iter()
            .map(|&v| if v > report.value_threshold { 1.0 } else { 0.0 })
            .collect();
        let mut candidate = strategy.clone();
        *candidate.probs_mut(0) = row;
        let threshold = expected_reward(&s, &candidate).map_err(|e| e.to_string())?;
        worst = worst.max((exhaustive - threshold).abs());
    }
    bound(worst, 1e-10, "max |exhaustive − threshold| reward gap")
}

fn concavity_minors(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 0xE4);
    let mut top = f64::NEG_INFINITY;
    let mut witnesses = 0;
    for _ in 0..12 {
        let (s, _) = random_discrete_instance(&mut rng);
        for n in 0..s.num_nodes() {
            for m in 0..s.num_nodes() {
                if m == n {
                    continue;
                }
                let kn = s.dist(n).as_discrete().unwrap().values().len();
                let km = s.dist(m).as_discrete().unwrap().values().len();
                for v in 0..kn {
                    for u in 0..km {
                        match hessian_minor_check(&s, n, v, m, u) {
                            Ok(minor) => {
                                witnesses += 1;
                                top = top.max(minor);
                            }
                            Err(GomaError::Degenerate(_)) => {}
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
            }
        }
    }
    if top < 0.0 {
        Ok(format!("{witnesses} minors, all negative (max {top:.3e})"))
    } else {
        Err(format!("found a non-negative minor: {top:.3e}"))
    }
}

fn equal_value_closed_forms() -> Check {
    let mut worst = 0.0f64;
    for n in [2usize, 3, 5] {
        let s = Scenario::symmetric(
            ContinuousDist::uniform(0.0, 2.0).unwrap().into(),
            n,
            0.0,
        )
        .map_err(|e| e.to_string())?;
        let init = equal_value_init(&s, 1e-3).map_err(|e| e.to_string())?;
        worst = worst.max((init.v_eq - uniform_equal_value_optimum(2.0, n)).abs());
    }
    for n in [2usize, 3] {
        let s = Scenario::symmetric(
            ContinuousDist::pareto(1.0, 2.5).unwrap().into(),
            n,
            0.0,
        )
        .map_err(|e| e.to_string())?;
        let init = equal_value_init(&s, 1e-3).map_err(|e| e.to_string())?;
        worst = worst.max((init.v_eq - pareto_equal_value_optimum(1.0, 2.5, n)).abs());
    }
    bound(worst, 2e-3, "max |search − closed form| over v_eq")
}

fn toy_reference_points() -> Check {
    let (_, r1) = binary_toy_optimum(10, 0.1, 0.0, 1e-3).map_err(|e| e.to_string())?;
    if (r1 - 0.38742).abs() > 1e-4 {
        return Err(format!("N=10 p=0.1 optimum {r1:.6}, expected 0.38742"));
    }
    let (x2, r2) = binary_toy_optimum(2, 0.75, 0.0, 1e-3).map_err(|e| e.to_string())?;
    let active = x2.iter().filter(|&&x| x > 1e-9).count();
    if (r2 - 0.75).abs() > 1e-9 || active != 1 {
        return Err(format!("N=2 p=0.75 gave reward {r2:.6} with {active} active"));
    }
    let (_, r3) = binary_toy_optimum(5, 1.0, 0.25, 1e-3).map_err(|e| e.to_string())?;
    if (r3 - 0.75).abs() > 1e-9 {
        return Err(format!("N=5 p=1 psi=0.25 gave {r3:.6}, expected 0.75"));
    }
    Ok("three hand-checked optima reproduced".into())
}

fn estimator_worked_examples() -> Check {
    let grid = ArmGrid::standard();
    let idle = SlotFeedback { outcome: SlotOutcome::Idle, rho_bar: None };
    let no_stats = StatsView {
        alpha: 0.0,
        beta: None,
        lambda: None,
        rho_own: 0.0,
        rho_bar: 0.0,
        ready: false,
    };
    let r = counterfactual_rewards(
        &grid, 2.0, 5.0, 0.25, &idle, &no_stats, 10, ColliderDenominator::ForeignCollisions,
    )
    .ok_or("silence slot refused an estimate")?;
    for (i, t) in grid.thresholds().iter().enumerate() {
        let want = if *t < 2.0 { 1.75 } else { 0.0 };
        if (r[i] - want).abs() > 1e-12 {
            return Err(format!("silence branch arm {t}: {} ≠ {want}", r[i]));
        }
    }
    let success = SlotFeedback {
        outcome: SlotOutcome::Success { transmitter: 3, value: 3.0 },
        rho_bar: None,
    };
    let r = counterfactual_rewards(
        &grid, 1.0, 5.0, 0.25, &success, &no_stats, 10, ColliderDenominator::ForeignCollisions,
    )
    .ok_or("success slot refused an estimate")?;
    for (i, t) in grid.thresholds().iter().enumerate() {
        let want = if *t < 1.0 { -0.5 } else { 2.75 };
        if (r[i] - want).abs() > 1e-12 {
            return Err(format!("success branch arm {t}: {} ≠ {want}", r[i]));
        }
    }
    let collision = SlotFeedback {
        outcome: SlotOutcome::Collision { num_transmitters: 2 },
        rho_bar: None,
    };
    let stats = StatsView {
        alpha: 0.4,
        beta: Some(0.2),
        lambda: Some(1.0),
        rho_own: 0.1,
        rho_bar: 0.5,
        ready: true,
    };
    let r = counterfactual_rewards(
        &grid, 0.5, 1.0, 0.25, &collision, &stats, 10, ColliderDenominator::ForeignCollisions,
    )
    .ok_or("collision slot refused an estimate")?;
    for (i, t) in grid.thresholds().iter().enumerate() {
        let want = if *t < 0.5 { -0.5 } else { -0.25 };
        if (r[i] - want).abs() > 1e-12 {
            return Err(format!("collision branch arm {t}: {} ≠ {want}", r[i]));
        }
    }
    Ok("all three branch examples exact".into())
}

fn estimator_unbiased(seed: u64) -> Check {
    let s = Scenario::symmetric(
        ContinuousDist::exponential(1.0).unwrap().into(),
        3,
        0.25,
    )
    .map_err(|e| e.to_string())?;
    let profile = ThresholdProfile::new(vec![0.6, 0.7, 0.8]).map_err(|e| e.to_string())?;
    let cuts = profile.value_thresholds(&s).map_err(|e| e.to_string())?;
    let arms = ArmGrid::new(vec![0.0, 0.5, 1.0, 1.5, 2.0]).map_err(|e| e.to_string())?;
    let stats = analytic_stats(&s, 0, &profile).map_err(|e| e.to_string())?;
    let slots = 200_000u64;
    let mut rngs: Vec<ChaCha12Rng> = (0..3)
        .map(|k| rng::stream(derive_seed(seed, 0xE8, 0), node_stream(k)))
        .collect();
    let mut values = vec![0.0; 3];
    let mut sums = vec![0.0; arms.len()];
    let mut sq = vec![0.0; arms.len()];
    let mut skipped = 0u64;
    for _ in 0..slots {
        sample_values_into(&s, &mut rngs, &mut values);
        let decisions: Vec<bool> = values.iter().zip(&cuts).map(|(v, c)| v > c).collect();
        let outcome = resolve(&decisions, &values);
        let feedback = SlotFeedback { outcome, rho_bar: None };
        match counterfactual_rewards(
            &arms,
            values[0],
            cuts[0],
            s.psi(),
            &feedback,
            &stats,
            3,
            ColliderDenominator::ForeignCollisions,
        ) {
            Some(est) => {
                for (i, e) in est.iter().enumerate() {
                    sums[i] += e;
                    sq[i] += e * e;
                }
            }
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        return Err(format!("{skipped} slots skipped despite exact statistics"));
    }
    let mut worst_sigmas = 0.0f64;
    for (i, &arm) in arms.thresholds().iter().enumerate() {
        let mean = sums[i] / slots as f64;
        let var = (sq[i] / slots as f64 - mean * mean).max(0.0);
        let se = (var / slots as f64).sqrt();
        let want = expected_reward_cuts(&s, &[arm, cuts[1], cuts[2]]);
        worst_sigmas = worst_sigmas.max((mean - want).abs() / se.max(1e-12));
    }
    bound(worst_sigmas, 4.0, "max |mean r̂ − analytic| in standard errors")
}

fn mc_matches_analytic(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 0xE9);
    let mut worst = 0.0f64;
    for i in 0..4 {
        let n = [2, 3, 5, 3][i];
        let dists: Vec<ValueDist> = (0..n).map(|_| random_continuous(&mut rng)).collect();
        let s = Scenario::new(dists, 0.25).map_err(|e| e.to_string())?;
        let profile = ThresholdProfile::new(
            (0..n).map(|_| rng.gen_range(0.3..0.95)).collect(),
        )
        .map_err(|e| e.to_string())?;
        let analytic = expected_reward_threshold(&s, &profile).map_err(|e| e.to_string())?;
        let stats = run_episode(&s, &profile, 200_000, derive_seed(seed, 0xEA, i as u64))
            .map_err(|e| e.to_string())?;
        worst = worst.max((stats.mean_reward - analytic).abs() / stats.std_error.max(1e-12));
    }
    bound(worst, 4.0, "max |MC − analytic| in standard errors")
}

fn unit_exponential_constants() -> Check {
    let d: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
    let checks = [
        (d.cdf(0.25), 0.221199216928595, 1e-14, "cdf(0.25)"),
        (
            d.tail_expectation(0.5).unwrap(),
            0.846573590279973,
            1e-12,
            "tail_expectation(0.5)",
        ),
        (d.quantile(0.953).unwrap(), 3.057608, 5e-7, "quantile(0.953)"),
    ];
    for (got, want, tol, name) in checks {
        if (got - want).abs() > tol {
            return Err(format!("{name} = {got:.15} differs from {want}"));
        }
    }
    Ok("unit-exponential reference values reproduced".into())
}

fn bound(got: f64, tol: f64, what: &str) -> Check {
    if got <= tol {
        Ok(format!("{what} = {got:.3e} (tolerance {tol:.1e})"))
    } else {
        Err(format!("{what} = {got:.3e} exceeds {tol:.1e}"))
    }
}
