//! One semi-bandit training run: ten sensors learn their thresholds from
//! channel feedback alone and are measured against the negotiated optimum.

use goma::baseline::cdns_reward;
use goma::beta::{moving_average, train, BetaConfig};
use goma::dists::ContinuousDist;
use goma::libra::libra;
use goma::strategy::Scenario;

fn main() {
    let n = 10;
    let psi = 0.25;
    let dist = ContinuousDist::chi_square_2_scaled(1.0).unwrap();
    let scenario = Scenario::symmetric(dist.into(), n, psi).unwrap();

    let (_, trace) = libra(&scenario, 1e-9).unwrap();
    let target = trace.final_reward();
    let baseline = cdns_reward(&scenario).unwrap();

    let config = BetaConfig {
        snapshot_every: 0,
        ..BetaConfig::default()
    };
    println!(
        "{n} sensors, chi-square-2 values, psi = {psi}; training {} slots",
        config.train_slots
    );
    let result = train(&scenario, &config, 11).unwrap();

    // Smoothed realized reward at a few checkpoints.
    let smooth = moving_average(&result.trajectory, 1000);
    println!("\n    slot    realized/target");
    for slot in [2_000usize, 5_000, 10_000, 20_000, 30_000, 50_000, 100_000] {
        println!("  {slot:7}       {:.3}", smooth[slot - 1] / target);
    }

    let tail = &result.trajectory[result.trajectory.len() - 10_000..];
    let tail_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    println!("\nnegotiated optimum    {target:.4}");
    println!("single-speaker        {baseline:.4}");
    println!("learned (greedy)      {:.4}", result.greedy_reward);
    println!("last-10k realized     {tail_mean:.4}");
    let skipped: u64 = result.skipped.iter().sum();
    let applied: u64 = result.applied.iter().sum();
    println!(
        "updates applied {applied}, collision updates skipped before stats warmed up {skipped}"
    );
}
