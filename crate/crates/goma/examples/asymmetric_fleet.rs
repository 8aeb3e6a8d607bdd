//! Heterogeneous fleets: draw random per-node mean values, negotiate
//! thresholds, and compare against polling the single best node.

use goma::baseline::{cdns_profile, cdns_reward, with_means};
use goma::dists::ContinuousDist;
use goma::libra::libra;
use goma::rng::substream;
use goma::strategy::{energy, Scenario};
use rand::Rng;

fn main() {
    let n = 10;
    let psi = 0.25;
    let nu = 0.5; // means drawn uniformly from [1-nu, 1+nu]
    let template = ContinuousDist::chi_square_2_scaled(1.0).unwrap().into();
    let episodes = 20;

    println!("{n} sensors, chi-square-2 values, per-node means U[{:.1}, {:.1}], psi = {psi}\n", 1.0 - nu, 1.0 + nu);
    println!("  episode   poll best   negotiated   ratio   energy ratio");
    let mut ratios = Vec::new();
    for ep in 0..episodes {
        let mut rng = substream(7, 0xA5, ep);
        let means: Vec<f64> = (0..n).map(|_| 1.0 - nu + 2.0 * nu * rng.gen::<f64>()).collect();
        let truth = Scenario::new(with_means(&template, &means).unwrap(), psi).unwrap();
        let baseline = cdns_reward(&truth).unwrap();
        let (profile, trace) = libra(&truth, 1e-9).unwrap();
        let e_push = energy(&truth, &profile).unwrap();
        let e_pull = energy(&truth, &cdns_profile(&truth).unwrap()).unwrap();
        let ratio = trace.final_reward() / baseline;
        ratios.push(ratio);
        println!(
            "  {ep:5}     {baseline:.4}      {:.4}     {ratio:.3}   {:.3}",
            trace.final_reward(),
            e_push / e_pull
        );
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let wins = ratios.iter().filter(|&&r| r > 1.0).count();
    println!("\nmean ratio {mean:.4}; negotiation beats polling in {wins}/{episodes} fleets");
}
