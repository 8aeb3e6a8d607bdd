//! Robustness to mis-estimated value distributions: equilibria negotiated
//! from perturbed beliefs, evaluated on the true scenario.
//!
//! Three knowledge models per episode: ideal (true parameters), shared (one
//! perturbed estimate everyone agrees on), individual (every node holds its
//! own private estimates of everyone, solves alone, and plays its own
//! component of the profile it found).
//!
//! The negotiated object is the access probability: a node meters its own
//! transmission rate against the values it actually observes, so the agreed
//! θ is realized exactly and belief errors corrupt only the negotiation.

use super::config::ExperimentConfig;
use super::output::{int, num, Table};
use crate::baseline::with_means;
use crate::dists::ValueDist;
use crate::error::Result;
use crate::libra::libra;
use crate::rng::substream;
use crate::strategy::{expected_reward_threshold, Scenario, ThresholdProfile};
use rand::Rng;
use rayon::prelude::*;

const IBR_EPSILON: f64 = 1e-9;
const SEED_LABEL: u64 = 0xC3;
const MEAN_FLOOR: f64 = 1e-3;

struct Episode {
    ideal: f64,
    shared: f64,
    individual: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let n = cfg.nodes.unwrap_or(10);
    let psi = cfg.psi.unwrap_or(0.25);
    let nu = cfg.nu.unwrap_or(0.25);
    let eta = cfg.eta.unwrap_or(0.25);
    let episodes = cfg.episodes.unwrap_or(100);
    let template = super::dist_template(cfg, "chi2m(1)")?;
    let seed = cfg.seed();

    let results: Vec<Episode> = (0..episodes)
        .into_par_iter()
        .map(|ep| -> Result<Episode> {
            let mut rng = substream(seed, SEED_LABEL, ep as u64);
            let means = super::draw_means(&mut rng, n, nu);
            let shared_noise: Vec<f64> = perturbations(&mut rng, n, eta);
            let private_noise: Vec<Vec<f64>> =
                (0..n).map(|_| perturbations(&mut rng, n, eta)).collect();

            let truth = Scenario::new(with_means(&template, &means)?, psi)?;
            let (_, baseline) = super::best_cdns(&truth)?;

            // Ideal: solved on the truth, played as solved.
            let (_, trace) = libra(&truth, IBR_EPSILON)?;
            let ideal = trace.final_reward();

            // Shared: one believed fleet for everyone; the negotiated access
            // probabilities are what each node meters out on the truth.
            let shared = {
                let believed = believed_scenario(&template, &means, &shared_noise, psi)?;
                let (profile, _) = libra(&believed, IBR_EPSILON)?;
                expected_reward_threshold(&truth, &profile)?
            };

            // Individual: node k trusts only its own estimates and keeps its
            // own component of the profile it negotiated in imagination.
            let mut composite = vec![0.0; n];
            for (k, noise) in private_noise.iter().enumerate() {
                let believed = believed_scenario(&template, &means, noise, psi)?;
                let (profile, _) = libra(&believed, IBR_EPSILON)?;
                composite[k] = profile.theta(k);
            }
            let individual =
                expected_reward_threshold(&truth, &ThresholdProfile::new(composite)?)?;

            Ok(Episode {
                ideal: ideal / baseline,
                shared: shared / baseline,
                individual: individual / baseline,
            })
        })
        .collect::<Result<_>>()?;

    let tag = super::psi_tag(psi);
    let mut table = Table::new(
        &format!("robustness_psi{tag}"),
        &["episode", "gain_ideal", "gain_shared", "gain_individual"],
    );
    let stamp = |t: &mut Table| {
        t.meta("experiment", "robustness");
        t.meta("dist", template.to_string());
        t.meta("psi", num(psi));
        t.meta("nodes", n);
        t.meta("nu", num(nu));
        t.meta("eta", num(eta));
        t.meta("episodes", episodes);
        t.meta("seed", seed);
    };
    stamp(&mut table);
    for (ep, r) in results.iter().enumerate() {
        table.row(vec![int(ep), num(r.ideal), num(r.shared), num(r.individual)]);
    }
    table.emit(cfg.out.as_deref())?;

    // One quantile-aligned CDF table: row k is the k-th order statistic of
    // each curve, so the three curves share the cdf column.
    let mut curves: [(&str, Vec<f64>); 3] = [
        ("ideal", results.iter().map(|r| r.ideal).collect()),
        ("shared", results.iter().map(|r| r.shared).collect()),
        ("individual", results.iter().map(|r| r.individual).collect()),
    ];
    for (_, xs) in curves.iter_mut() {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let mut cdf = Table::new(
        &format!("robustness_cdf_psi{tag}"),
        &["cdf", "gain_ideal", "gain_shared", "gain_individual"],
    );
    stamp(&mut cdf);
    for (name, xs) in &curves {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let below = xs.iter().filter(|&&x| x < 1.0).count();
        cdf.meta(&format!("mean_{name}"), num(mean));
        cdf.meta(&format!("below_one_{name}"), below);
    }
    for k in 0..episodes {
        cdf.row(vec![
            num((k + 1) as f64 / episodes as f64),
            num(curves[0].1[k]),
            num(curves[1].1[k]),
            num(curves[2].1[k]),
        ]);
    }
    cdf.emit(cfg.out.as_deref())?;

    for (name, xs) in &curves {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        println!("robustness psi={psi}: mean gain {name} {mean:.4}");
    }
    Ok(())
}

fn perturbations(rng: &mut impl Rng, n: usize, eta: f64) -> Vec<f64> {
    (0..n).map(|_| -eta + 2.0 * eta * rng.gen::<f64>()).collect()
}

fn believed_scenario(
    template: &ValueDist,
    means: &[f64],
    noise: &[f64],
    psi: f64,
) -> Result<Scenario> {
    let believed: Vec<f64> = means
        .iter()
        .zip(noise)
        .map(|(m, e)| (m + e).max(MEAN_FLOOR))
        .collect();
    Scenario::new(with_means(template, &believed)?, psi)
}
