//! Attraction-region study: a grid of three-node starting profiles, each
//! iterated to its equilibrium and labeled by family.

use super::config::ExperimentConfig;
use super::output::{int, num, Table};
use crate::basins::{map_basins, EquilibriumLabel, CERT_TOL, DEDUP_TOL, DNS_FACTOR};
use crate::error::{GomaError, Result};
use crate::strategy::Scenario;

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    if let Some(n) = cfg.nodes {
        if n != 3 {
            return Err(GomaError::Config(format!(
                "the basin study maps three-node fleets, got nodes = {n}"
            )));
        }
    }
    let step = cfg.basin_step.unwrap_or(0.01);
    let dists: Vec<String> = match &cfg.dist {
        Some(d) => vec![d.clone()],
        None => vec!["exp(1)".into(), "gauss(0.5,4)".into()],
    };
    for spec in &dists {
        let template = crate::dists::parse_dist(spec)?;
        for psi in cfg.psi_panels() {
            let scenario = Scenario::symmetric(template.clone(), 3, psi)?;
            let map = map_basins(&scenario, step)?;
            let tag = format!("{}_psi{}", super::dist_tag(spec), super::psi_tag(psi));

            let mut cells = Table::new(
                &format!("basins_{tag}"),
                &["theta2_0", "theta3_0", "label", "theta1*", "theta2*", "theta3*", "reward"],
            );
            let stamp = |t: &mut Table| {
                t.meta("experiment", "basins");
                t.meta("dist", template.to_string());
                t.meta("psi", num(psi));
                t.meta("grid_step", step);
                t.meta("dedup_tol", DEDUP_TOL);
                t.meta("certificate_tol", CERT_TOL);
                t.meta("dns_rate_factor", DNS_FACTOR);
            };
            stamp(&mut cells);
            let mut counts = [0usize; 4];
            for cell in &map.cells {
                counts[label_bucket(cell.label)] += 1;
                cells.row(vec![
                    num(cell.theta2_0),
                    num(cell.theta3_0),
                    cell.label.to_string(),
                    num(cell.profile.theta(0)),
                    num(cell.profile.theta(1)),
                    num(cell.profile.theta(2)),
                    num(cell.reward),
                ]);
            }
            let total = map.cells.len();
            cells.meta("cells", total);
            cells.meta("share_cdns", num(counts[0] as f64 / total as f64));
            cells.meta("share_dns", num(counts[1] as f64 / total as f64));
            cells.meta("share_symmetric", num(counts[2] as f64 / total as f64));
            cells.meta("share_other", num(counts[3] as f64 / total as f64));
            cells.emit(cfg.out.as_deref())?;

            let mut eqs = Table::new(
                &format!("basins_equilibria_{tag}"),
                &["label", "theta1", "theta2", "theta3", "reward", "certificate", "cells"],
            );
            stamp(&mut eqs);
            for eq in &map.equilibria {
                eqs.row(vec![
                    eq.label.to_string(),
                    num(eq.profile.theta(0)),
                    num(eq.profile.theta(1)),
                    num(eq.profile.theta(2)),
                    num(eq.reward),
                    format!("{:.2e}", eq.certificate),
                    int(eq.cells),
                ]);
            }
            eqs.emit(cfg.out.as_deref())?;

            println!(
                "basins {spec} psi={psi}: {} equilibria; cells cDNS {} / DNS {} / Symm {} / other {}",
                map.equilibria.len(),
                counts[0],
                counts[1],
                counts[2],
                counts[3]
            );
        }
    }
    Ok(())
}

fn label_bucket(label: EquilibriumLabel) -> usize {
    match label {
        EquilibriumLabel::CDns(_) => 0,
        EquilibriumLabel::Dns(_) => 1,
        EquilibriumLabel::Symmetric => 2,
        EquilibriumLabel::Other => 3,
    }
}
