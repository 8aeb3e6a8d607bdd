//! Binary-value warm-up: polled dominant node vs the best general push
//! strategy, swept over the activation probability p.

use super::config::ExperimentConfig;
use super::output::{num, Table};
use crate::baseline::cdns_reward;
use crate::dists::DiscreteDist;
use crate::error::Result;
use crate::oracle::binary_toy_optimum;
use crate::strategy::Scenario;
use rayon::prelude::*;

const P_STEPS: usize = 100;
const X_STEP: f64 = 1e-3;

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let fleet_sizes: Vec<usize> = match cfg.nodes {
        Some(n) => vec![n],
        None => vec![2, 5, 10, 100],
    };
    for psi in cfg.psi_panels() {
        let mut columns: Vec<String> = vec!["p".into(), "reward_dns".into()];
        columns.extend(fleet_sizes.iter().map(|n| format!("reward_push_n{n}")));
        let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut table = Table::new(&format!("toy_psi{}", super::psi_tag(psi)), &column_refs);
        table.meta("experiment", "toy");
        table.meta("dist", "binary(p)");
        table.meta("psi", num(psi));
        table.meta("fleet_sizes", join(&fleet_sizes));
        table.meta("p_grid", "0.01..1.00 step 0.01");
        table.meta("search_step", X_STEP);

        let rows: Vec<(f64, f64, Vec<f64>)> = (1..=P_STEPS)
            .into_par_iter()
            .map(|k| {
                let p = k as f64 / P_STEPS as f64;
                let polled = Scenario::symmetric(
                    DiscreteDist::binary(p).expect("p in (0,1]").into(),
                    1,
                    psi,
                )
                .expect("valid scenario");
                let dns = cdns_reward(&polled).expect("single node");
                let push: Vec<f64> = fleet_sizes
                    .iter()
                    .map(|&n| binary_toy_optimum(n, p, psi, X_STEP).expect("valid toy").1)
                    .collect();
                (p, dns, push)
            })
            .collect();
        for (p, dns, push) in &rows {
            let mut cells = vec![num(*p), num(*dns)];
            cells.extend(push.iter().map(|r| num(*r)));
            table.row(cells);
        }

        // Largest advantage of coordinated pushing over polling, per fleet.
        for (i, n) in fleet_sizes.iter().enumerate() {
            let (p, gain) = rows
                .iter()
                .map(|(p, dns, push)| (*p, push[i] - dns))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            println!("toy psi={psi}: N={n} push tops polling by {gain:.4} at p={p:.2}");
        }
        table.emit(cfg.out.as_deref())?;
    }
    Ok(())
}

fn join(ns: &[usize]) -> String {
    ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
}
