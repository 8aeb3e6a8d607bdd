//! Anatomy of the shared channel: run one fleet for a while and break the
//! slots down by outcome, comparing every observed rate to its closed form.

use goma::channel::run_episode;
use goma::dists::ContinuousDist;
use goma::strategy::{expected_reward_threshold, Scenario, ThresholdProfile};

fn main() {
    let dist = ContinuousDist::exponential(1.0).unwrap();
    let scenario = Scenario::symmetric(dist.into(), 4, 0.1).unwrap();
    let profile = ThresholdProfile::uniform(4, 0.8).unwrap();
    let slots = 500_000;

    let stats = run_episode(&scenario, &profile, slots, 7).unwrap();

    // Each node transmits on the top 20% of its values: p = 0.2.
    let p: f64 = 0.2;
    let n = 4.0;
    let idle = (1.0 - p).powi(4);
    let success = n * p * (1.0 - p).powi(3);

    println!("{} slots, 4 nodes, each sending its top 20% of values\n", stats.slots);
    println!("outcome      observed    expected");
    println!(
        "idle         {:.4}      {:.4}",
        stats.idle_slots as f64 / slots as f64,
        idle
    );
    println!(
        "success      {:.4}      {:.4}",
        stats.success_slots as f64 / slots as f64,
        success
    );
    println!(
        "collision    {:.4}      {:.4}",
        stats.collision_slots as f64 / slots as f64,
        1.0 - idle - success
    );

    let analytic = expected_reward_threshold(&scenario, &profile).unwrap();
    println!(
        "\nreward/slot  {:.4} ± {:.4}  (analytic {:.4})",
        stats.mean_reward,
        2.0 * stats.std_error,
        analytic
    );
    println!("attempts/slot {:.4}      (expected {:.4})", stats.mean_energy, n * p);
    println!("per-node tx rates: {:?}", stats.tx_rates());
}
