//! Symmetric-fleet sweep: equilibrium reward and energy against the
//! single-dominant baseline as the fleet grows.

use super::config::ExperimentConfig;
use super::output::{int, num, Table};
use crate::baseline::{cdns_profile, cdns_reward};
use crate::channel::run_episode;
use crate::error::Result;
use crate::libra::libra;
use crate::rng::derive_seed;
use crate::strategy::{energy, Scenario};
use rayon::prelude::*;

const STOCK_SWEEP: [usize; 12] = [1, 2, 3, 5, 7, 10, 15, 20, 30, 50, 70, 100];
const IBR_EPSILON: f64 = 1e-9;
const SEED_LABEL: u64 = 0x53;

struct SweepRow {
    n: usize,
    reward_cdns: f64,
    reward_libra: f64,
    reward_mc: f64,
    mc_se: f64,
    energy_cdns: f64,
    energy_libra: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let cap = cfg.nodes.unwrap_or(100);
    let mut sweep: Vec<usize> = STOCK_SWEEP.iter().copied().filter(|&n| n <= cap).collect();
    if !sweep.contains(&cap) {
        sweep.push(cap);
    }
    let template = super::dist_template(cfg, "chi2m(1)")?;
    let slots = cfg.mc_slots.unwrap_or(1_000_000);
    let seed = cfg.seed();

    for psi in cfg.psi_panels() {
        let rows: Vec<SweepRow> = sweep
            .par_iter()
            .map(|&n| -> Result<SweepRow> {
                let scenario = Scenario::symmetric(template.clone(), n, psi)?;
                let (profile, trace) = libra(&scenario, IBR_EPSILON)?;
                let stats = run_episode(
                    &scenario,
                    &profile,
                    slots,
                    derive_seed(seed, SEED_LABEL, n as u64),
                )?;
                Ok(SweepRow {
                    n,
                    reward_cdns: cdns_reward(&scenario)?,
                    reward_libra: trace.final_reward(),
                    reward_mc: stats.mean_reward,
                    mc_se: stats.std_error,
                    energy_cdns: energy(&scenario, &cdns_profile(&scenario)?)?,
                    energy_libra: energy(&scenario, &profile)?,
                })
            })
            .collect::<Result<_>>()?;

        let mut table = Table::new(
            &format!("symmetric_psi{}", super::psi_tag(psi)),
            &[
                "N",
                "reward_cdns",
                "reward_libra_analytic",
                "reward_libra_mc",
                "mc_se",
                "energy_cdns",
                "energy_libra",
            ],
        );
        table.meta("experiment", "symmetric");
        table.meta("dist", template.to_string());
        table.meta("psi", num(psi));
        table.meta("mc_slots", slots);
        table.meta("ibr_epsilon", IBR_EPSILON);
        table.meta("seed", seed);
        for r in &rows {
            table.row(vec![
                int(r.n),
                num(r.reward_cdns),
                num(r.reward_libra),
                num(r.reward_mc),
                num(r.mc_se),
                num(r.energy_cdns),
                num(r.energy_libra),
            ]);
        }
        table.emit(cfg.out.as_deref())?;

        for r in &rows {
            if matches!(r.n, 20 | 100) {
                let gain = 100.0 * (r.reward_libra / r.reward_cdns - 1.0);
                println!(
                    "symmetric psi={psi}: N={} reward {:.4} vs dominant {:.4} (+{gain:.1}%)",
                    r.n, r.reward_libra, r.reward_cdns
                );
            }
        }
    }
    Ok(())
}
