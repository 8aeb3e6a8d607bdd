//! Asymmetric fleets: per-episode comparison of the negotiated equilibrium
//! against the best single-dominant strategy, with fairness tracked through
//! the transmission-rate Jain index.

use super::config::ExperimentConfig;
use super::output::{empirical_cdf, int, num, Table};
use crate::baseline::with_means;
use crate::error::Result;
use crate::libra::libra;
use crate::rng::substream;
use crate::strategy::{energy, profile_jfi, Scenario};
use rayon::prelude::*;

const IBR_EPSILON: f64 = 1e-9;
const SEED_LABEL: u64 = 0xA5;

struct Episode {
    rel_reward: f64,
    rel_energy: f64,
    jfi_libra: f64,
    jfi_cdns: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let n = cfg.nodes.unwrap_or(10);
    let nu = cfg.nu.unwrap_or(0.5);
    let episodes = cfg.episodes.unwrap_or(200);
    let fallback = cfg.fallback.unwrap_or(false);
    let template = super::dist_template(cfg, "chi2m(1)")?;
    let seed = cfg.seed();

    for (panel, psi) in cfg.psi_panels().into_iter().enumerate() {
        let results: Vec<Episode> = (0..episodes)
            .into_par_iter()
            .map(|ep| -> Result<Episode> {
                let mut rng = substream(seed, SEED_LABEL + panel as u64, ep as u64);
                let means = super::draw_means(&mut rng, n, nu);
                let scenario = Scenario::new(with_means(&template, &means)?, psi)?;
                let (profile, trace) = libra(&scenario, IBR_EPSILON)?;
                let (dominant, reward_cdns) = super::best_cdns(&scenario)?;
                let mut rel_reward = trace.final_reward() / reward_cdns;
                let mut rel_energy =
                    energy(&scenario, &profile)? / energy(&scenario, &dominant)?;
                let mut jfi_libra = profile_jfi(&scenario, &profile)?;
                if fallback && rel_reward < 1.0 {
                    rel_reward = 1.0;
                    rel_energy = 1.0;
                    jfi_libra = profile_jfi(&scenario, &dominant)?;
                }
                Ok(Episode {
                    rel_reward,
                    rel_energy,
                    jfi_libra,
                    jfi_cdns: profile_jfi(&scenario, &dominant)?,
                })
            })
            .collect::<Result<_>>()?;

        let tag = super::psi_tag(psi);
        let mut table = Table::new(
            &format!("asymmetric_psi{tag}"),
            &["episode", "rel_reward", "rel_energy", "jfi_libra", "jfi_cdns"],
        );
        table.meta("experiment", "asymmetric");
        table.meta("dist", template.to_string());
        table.meta("psi", num(psi));
        table.meta("nodes", n);
        table.meta("nu", num(nu));
        table.meta("episodes", episodes);
        table.meta("fallback", fallback);
        table.meta("ibr_epsilon", IBR_EPSILON);
        table.meta("seed", seed);
        for (ep, r) in results.iter().enumerate() {
            table.row(vec![
                int(ep),
                num(r.rel_reward),
                num(r.rel_energy),
                num(r.jfi_libra),
                num(r.jfi_cdns),
            ]);
        }
        table.emit(cfg.out.as_deref())?;

        let curves: [(&str, Vec<f64>); 3] = [
            ("reward", results.iter().map(|r| r.rel_reward).collect()),
            ("energy", results.iter().map(|r| r.rel_energy).collect()),
            ("jfi", results.iter().map(|r| r.jfi_libra).collect()),
        ];
        for (name, values) in &curves {
            let mut cdf = Table::new(
                &format!("asymmetric_{name}_cdf_psi{tag}"),
                &[&format!("rel_{name}"), "cdf"],
            );
            cdf.meta("experiment", "asymmetric");
            cdf.meta("psi", num(psi));
            cdf.meta("episodes", episodes);
            cdf.meta("seed", seed);
            if *name == "jfi" {
                let mean_cdns =
                    results.iter().map(|r| r.jfi_cdns).sum::<f64>() / results.len() as f64;
                cdf.meta("jfi_cdns_mean", num(mean_cdns));
            }
            for (x, p) in empirical_cdf(values) {
                cdf.row(vec![num(x), num(p)]);
            }
            cdf.emit(cfg.out.as_deref())?;
        }

        let mean = |f: &dyn Fn(&Episode) -> f64| {
            results.iter().map(|r| f(r)).sum::<f64>() / results.len() as f64
        };
        let beat = results.iter().filter(|r| r.rel_reward > 1.0).count();
        println!(
            "asymmetric psi={psi}: mean rel reward {:.4}, rel energy {:.4}, jfi {:.4}; \
             beats dominant in {}/{} episodes",
            mean(&|r| r.rel_reward),
            mean(&|r| r.rel_energy),
            mean(&|r| r.jfi_libra),
            beat,
            episodes
        );
    }
    Ok(())
}
