//! Learning study: fleets of threshold learners trained over the live
//! channel, scored against the negotiated equilibrium they should rediscover.

use super::config::ExperimentConfig;
use super::output::{empirical_cdf, int, num, Table};
use crate::baseline::with_means;
use crate::beta::{moving_average, train, ArmGrid, BetaConfig, TrainResult};
use crate::error::Result;
use crate::libra::libra;
use crate::rng::{derive_seed, substream};
use crate::strategy::Scenario;
use rayon::prelude::*;

const IBR_EPSILON: f64 = 1e-9;
const SMOOTH_WINDOW: usize = 1000;
const TRAIN_LABEL: u64 = 0xB8;
const MEANS_LABEL: u64 = 0xB7;

struct RunOut {
    final_reward: f64,
    normalized: f64,
    reward_cdns: f64,
    reward_libra: f64,
    trajectory: Vec<f64>,
    detail: Option<TrainResult>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let n = cfg.nodes.unwrap_or(10);
    let psi = cfg.psi.unwrap_or(0.25);
    let runs = cfg.runs.unwrap_or(100);
    let nu = cfg.nu.unwrap_or(0.25);
    let template = super::dist_template(cfg, "chi2m(1)")?;
    let seed = cfg.seed();
    let train_cfg = BetaConfig {
        train_slots: cfg.train_slots.unwrap_or(100_000),
        window: cfg.window.unwrap_or(25),
        explore: cfg.explore.unwrap_or(0.01),
        kappa: cfg.kappa.unwrap_or(1.0 - 5e-5),
        gain: cfg.gain_schedule.unwrap_or_default(),
        grid: ArmGrid::uniform(cfg.arm_max.unwrap_or(20.0), cfg.arm_step.unwrap_or(0.1))?,
        collider_denominator: cfg.collider_denominator.unwrap_or_default(),
        snapshot_every: train_snapshot_cadence(cfg),
    };

    for (panel_idx, panel) in ["sym", "asym"].iter().enumerate() {
        let results: Vec<RunOut> = (0..runs)
            .into_par_iter()
            .map(|run| -> Result<RunOut> {
                let scenario = if *panel == "sym" {
                    Scenario::symmetric(template.clone(), n, psi)?
                } else {
                    let mut rng = substream(seed, MEANS_LABEL, run as u64);
                    let means = super::draw_means(&mut rng, n, nu);
                    Scenario::new(with_means(&template, &means)?, psi)?
                };
                let (_, trace) = libra(&scenario, IBR_EPSILON)?;
                let reward_libra = trace.final_reward();
                let (_, reward_cdns) = super::best_cdns(&scenario)?;
                // Only the first run keeps its per-node snapshot trail.
                let mut local = train_cfg.clone();
                if run > 0 {
                    local.snapshot_every = 0;
                }
                let out = train(
                    &scenario,
                    &local,
                    derive_seed(seed, TRAIN_LABEL + panel_idx as u64, run as u64),
                )?;
                Ok(RunOut {
                    final_reward: out.greedy_reward,
                    normalized: out.greedy_reward / reward_libra,
                    reward_cdns,
                    reward_libra,
                    trajectory: out.trajectory.clone(),
                    detail: (run == 0).then_some(out),
                })
            })
            .collect::<Result<_>>()?;

        emit_panel(cfg, &train_cfg, panel, psi, n, nu, runs, seed, &results)?;
    }
    Ok(())
}

fn train_snapshot_cadence(cfg: &ExperimentConfig) -> u64 {
    (cfg.train_slots.unwrap_or(100_000) / 100).max(1)
}

#[allow(clippy::too_many_arguments)]
fn emit_panel(
    cfg: &ExperimentConfig,
    train_cfg: &BetaConfig,
    panel: &str,
    psi: f64,
    n: usize,
    nu: f64,
    runs: usize,
    seed: u64,
    results: &[RunOut],
) -> Result<()> {
    let slots = train_cfg.train_slots as usize;
    let tag = format!("{panel}_psi{}", super::psi_tag(psi));
    let mean_libra = results.iter().map(|r| r.reward_libra).sum::<f64>() / runs as f64;
    let mean_cdns = results.iter().map(|r| r.reward_cdns).sum::<f64>() / runs as f64;
    let stamp = |t: &mut Table| {
        t.meta("experiment", "beta");
        t.meta("scenario", panel);
        t.meta("psi", num(psi));
        t.meta("nodes", n);
        if panel == "asym" {
            t.meta("nu", num(nu));
        }
        t.meta("runs", runs);
        t.meta("train_slots", slots);
        t.meta("window", train_cfg.window);
        t.meta("explore", train_cfg.explore);
        t.meta("kappa", train_cfg.kappa);
        t.meta(
            "gain_schedule",
            match train_cfg.gain {
                crate::beta::GainSchedule::Geometric => "geometric",
                crate::beta::GainSchedule::PowerLaw => "power",
            },
        );
        t.meta("arms", train_cfg.grid.len());
        t.meta("seed", seed);
        t.meta("reward_libra_mean", num(mean_libra));
        t.meta("reward_cdns_mean", num(mean_cdns));
    };

    // Mean training trajectory over runs, thinned to ~1000 rows.
    let mut mean_traj = vec![0.0; slots];
    for r in results {
        for (m, x) in mean_traj.iter_mut().zip(&r.trajectory) {
            *m += x / runs as f64;
        }
    }
    let smoothed = moving_average(&mean_traj, SMOOTH_WINDOW);
    let decim = (slots / 1000).max(1);
    let mut traj = Table::new(
        &format!("beta_trajectory_{tag}"),
        &["step", "reward_mean", "reward_smoothed"],
    );
    stamp(&mut traj);
    traj.meta("smooth_window", SMOOTH_WINDOW);
    for step in (decim..=slots).step_by(decim) {
        traj.row(vec![int(step), num(mean_traj[step - 1]), num(smoothed[step - 1])]);
    }
    traj.emit(cfg.out.as_deref())?;

    // Final evaluated rewards, normalized by each run's equilibrium level.
    let normalized: Vec<f64> = results.iter().map(|r| r.normalized).collect();
    let mut cdf = Table::new(
        &format!("beta_final_cdf_{tag}"),
        &["normalized_reward", "cdf"],
    );
    stamp(&mut cdf);
    let mean_norm = normalized.iter().sum::<f64>() / runs as f64;
    cdf.meta("normalized_mean", num(mean_norm));
    for (x, p) in empirical_cdf(&normalized) {
        cdf.row(vec![num(x), num(p)]);
    }
    cdf.emit(cfg.out.as_deref())?;

    // First run in full: realized reward and each node's greedy threshold.
    if let Some(detail) = results.iter().find_map(|r| r.detail.as_ref()) {
        let run_smoothed = moving_average(&detail.trajectory, SMOOTH_WINDOW);
        let mut columns = vec!["step".to_string(), "reward_instant".into(), "reward_smoothed".into()];
        columns.extend((0..n).map(|k| format!("greedy_t{k}")));
        let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut first = Table::new(&format!("beta_run0_{tag}"), &column_refs);
        stamp(&mut first);
        first.meta("skipped_updates", join(&detail.skipped));
        for (slot, cuts) in &detail.snapshots {
            let idx = *slot as usize - 1;
            let mut cells = vec![
                int(slot),
                num(detail.trajectory[idx]),
                num(run_smoothed[idx]),
            ];
            cells.extend(cuts.iter().map(|t| num(*t)));
            first.row(cells);
        }
        first.emit(cfg.out.as_deref())?;
    }

    println!(
        "beta {panel} psi={psi}: mean final {:.4} = {:.4} of equilibrium \
         (dominant baseline {:.4}) over {} runs",
        results.iter().map(|r| r.final_reward).sum::<f64>() / runs as f64,
        mean_norm,
        mean_cdns,
        runs
    );
    Ok(())
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
