//! Attraction-basin mapping for three-node fleets.
//!
//! The dynamics have one free 2-D slice: node 1 reacts first, so its start
//! is pinned to the best response against `(θ₂⁽⁰⁾, θ₃⁽⁰⁾)` and the map sweeps
//! the rivals' plane. Each cell runs best-response dynamics to convergence and
//! is labeled by the equilibrium it lands on. Dominant-node equilibria sit on
//! unstable manifolds of the sweep, so a scalar root scan over the reduced
//! dominant/quiet response map seeds them directly before certification.

use crate::error::{GomaError, Result};
use crate::libra::{best_response, epsilon_ne_certificate, ibr_from};
use crate::strategy::{
    expected_reward_threshold, tx_probs, Scenario, ThresholdProfile,
};
use rayon::prelude::*;
use std::fmt;

/// Which equilibrium family a converged profile belongs to. Node indices are
/// 1-based to match the table output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumLabel {
    /// One node transmits exactly when its value covers ψ; the rest are mute.
    CDns(usize),
    /// One node's transmission rate is at least 10× every rival's.
    Dns(usize),
    Symmetric,
    Other,
}

impl fmt::Display for EquilibriumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquilibriumLabel::CDns(n) => write!(f, "cDNS({n})"),
            EquilibriumLabel::Dns(n) => write!(f, "DNS({n})"),
            EquilibriumLabel::Symmetric => write!(f, "Symm"),
            EquilibriumLabel::Other => write!(f, "Other"),
        }
    }
}

/// One swept starting point and where it ended up.
#[derive(Debug, Clone)]
pub struct BasinCell {
    pub theta2_0: f64,
    pub theta3_0: f64,
    pub label: EquilibriumLabel,
    pub profile: ThresholdProfile,
    pub reward: f64,
    pub converged: bool,
    pub rounds: usize,
}

/// A certified equilibrium with the number of grid cells attracted to it.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub label: EquilibriumLabel,
    pub profile: ThresholdProfile,
    pub reward: f64,
    pub certificate: f64,
    pub cells: usize,
}

#[derive(Debug, Clone)]
pub struct BasinMap {
    pub axis: Vec<f64>,
    /// Row-major over (θ₂⁽⁰⁾, θ₃⁽⁰⁾).
    pub cells: Vec<BasinCell>,
    pub equilibria: Vec<Equilibrium>,
}

/// Equilibria closer than this in L∞ are treated as the same fixed point.
pub const DEDUP_TOL: f64 = 1e-3;
/// Best-response improvement below which a profile counts as an equilibrium.
pub const CERT_TOL: f64 = 1e-6;
/// Rate dominance ratio that makes a profile a DNS.
pub const DNS_FACTOR: f64 = 10.0;

/// Label a converged profile. The checks run most-specific first: a corner
/// profile is cDNS before it is DNS, and an equal profile is Symmetric.
pub fn classify(scenario: &Scenario, profile: &ThresholdProfile, grid_tol: f64) -> EquilibriumLabel {
    let thetas = profile.thetas();
    let n = thetas.len();
    let active: Vec<usize> = (0..n).filter(|&k| thetas[k] < 1.0 - 1e-9).collect();
    if active.len() == 1 {
        let k = active[0];
        let gate = scenario.dist(k).cdf(scenario.psi());
        if (thetas[k] - gate).abs() < 1e-6 {
            return EquilibriumLabel::CDns(k + 1);
        }
    }
    let mut spread = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            spread = spread.max((thetas[i] - thetas[j]).abs());
        }
    }
    if spread < grid_tol {
        return EquilibriumLabel::Symmetric;
    }
    let rates = tx_probs(scenario, profile).expect("profile thetas are validated");
    let (top, &top_rate) = rates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    if top_rate > 0.0
        && rates
            .iter()
            .enumerate()
            .all(|(k, &r)| k == top || top_rate >= DNS_FACTOR * r)
    {
        return EquilibriumLabel::Dns(top + 1);
    }
    EquilibriumLabel::Other
}

/// Sweep the (θ₂⁽⁰⁾, θ₃⁽⁰⁾) plane on a uniform grid (corners included), run
/// the dynamics from every cell, and collect the certified equilibrium set.
pub fn map_basins(scenario: &Scenario, grid_step: f64) -> Result<BasinMap> {
    if scenario.num_nodes() != 3 {
        return Err(GomaError::InvalidScenario(
            "basin mapping is defined for exactly 3 nodes".into(),
        ));
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(GomaError::InvalidScenario(
            "grid step must lie in (0, 1)".into(),
        ));
    }
    let steps = (1.0 / grid_step).round() as usize;
    let axis: Vec<f64> = (0..=steps).map(|k| (k as f64 * grid_step).min(1.0)).collect();

    let starts: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&t2| axis.iter().map(move |&t3| (t2, t3)))
        .collect();
    let cells: Vec<BasinCell> = starts
        .par_iter()
        .map(|&(t2, t3)| -> Result<BasinCell> {
            let seed = ThresholdProfile::new(vec![1.0, t2, t3])?;
            let first = best_response(scenario, 0, &seed)?;
            let start = ThresholdProfile::new(vec![first.theta_star, t2, t3])?;
            let (end, trace) = ibr_from(scenario, start, 1e-9)?;
            let label = if trace.converged {
                classify(scenario, &end, grid_step)
            } else {
                EquilibriumLabel::Other
            };
            Ok(BasinCell {
                theta2_0: t2,
                theta3_0: t3,
                label,
                reward: trace.final_reward(),
                converged: trace.converged,
                rounds: trace.rounds(),
                profile: end,
            })
        })
        .collect::<Result<_>>()?;

    // Candidate equilibria: every converged cell endpoint plus directly
    // seeded dominant-node fixed points the sweep cannot reach.
    let mut equilibria: Vec<Equilibrium> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for cell in cells.iter().filter(|c| c.converged) {
        match equilibria
            .iter()
            .position(|e| e.profile.linf_distance(&cell.profile) < DEDUP_TOL)
        {
            Some(i) => counts[i] += 1,
            None => {
                let certificate = epsilon_ne_certificate(scenario, &cell.profile)?;
                if certificate < CERT_TOL {
                    equilibria.push(Equilibrium {
                        label: cell.label,
                        profile: cell.profile.clone(),
                        reward: cell.reward,
                        certificate,
                        cells: 0,
                    });
                    counts.push(1);
                }
            }
        }
    }
    for profile in dominant_candidates(scenario)? {
        if equilibria
            .iter()
            .any(|e| e.profile.linf_distance(&profile) < DEDUP_TOL)
        {
            continue;
        }
        let certificate = epsilon_ne_certificate(scenario, &profile)?;
        if certificate < CERT_TOL {
            let reward = expected_reward_threshold(scenario, &profile)?;
            equilibria.push(Equilibrium {
                label: classify(scenario, &profile, grid_step),
                profile,
                reward,
                certificate,
                cells: 0,
            });
            counts.push(0);
        }
    }
    for (e, c) in equilibria.iter_mut().zip(counts) {
        e.cells = c;
    }
    Ok(BasinMap { axis, cells, equilibria })
}

/// Fixed points with one frequent transmitter and two equal quiet rivals.
/// With the quiet level `o` pinned, the dominant reply is explicit,
///   d(o) = F(ψ/o² + 2·T(o)/o),
/// so the family collapses to the scalar equation o = H(o) with
///   H(o) = F(ψ/(d·o) + T(d)/d + T(o)/o).
/// These points repel the reply dynamics even inside the reduced slice, so
/// the roots come from a sign scan plus bisection, never iteration. Each root
/// is instantiated at all three dominant positions; callers filter by the
/// equilibrium certificate. The reduced map assumes exchangeable nodes; it
/// runs on node 0's distribution and rotates afterwards.
fn dominant_candidates(scenario: &Scenario) -> Result<Vec<ThresholdProfile>> {
    let psi = scenario.psi();
    let dist = scenario.dist(0);
    let reply_d = |o: f64| -> Result<f64> {
        Ok(dist.cdf(psi / (o * o) + 2.0 * dist.tail_expectation(o)? / o))
    };
    // H(o) − o; NaN marks a quiet level with no interior dominant reply.
    let residual = |o: f64| -> Result<f64> {
        let d = reply_d(o)?;
        if !(d > 0.0 && d < 1.0) {
            return Ok(f64::NAN);
        }
        let t = psi / (d * o) + dist.tail_expectation(d)? / d + dist.tail_expectation(o)? / o;
        Ok(dist.cdf(t) - o)
    };

    const STEPS: usize = 500;
    const LO: f64 = 0.005;
    const HI: f64 = 0.999;
    let grid: Vec<f64> = (0..=STEPS)
        .map(|k| LO + (HI - LO) * k as f64 / STEPS as f64)
        .collect();
    let mut roots: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &o in &grid {
        let h = residual(o)?;
        if !h.is_finite() {
            prev = None;
            continue;
        }
        if let Some((o_prev, h_prev)) = prev {
            if h_prev == 0.0 {
                roots.push(o_prev);
            } else if h_prev.signum() != h.signum() {
                let (mut a, mut b) = (o_prev, o);
                let mut fa = h_prev;
                for _ in 0..100 {
                    if b - a < 1e-14 {
                        break;
                    }
                    let mid = 0.5 * (a + b);
                    let fm = residual(mid)?;
                    if !fm.is_finite() {
                        break;
                    }
                    if fm == 0.0 || fa.signum() == fm.signum() {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        prev = Some((o, h));
    }

    let mut out = Vec::new();
    for o in roots {
        let d = reply_d(o)?;
        // The symmetric point solves the same equation with d = o; drop it.
        if !(d > 0.0 && d < 1.0) || (d - o).abs() < 1e-6 {
            continue;
        }
        for dominant in 0..3 {
            let mut thetas = vec![o; 3];
            thetas[dominant] = d;
            out.push(ThresholdProfile::new(thetas)?);
        }
    }
    Ok(out)
}
