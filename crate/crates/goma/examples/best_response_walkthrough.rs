//! One best-response computation taken apart. A node facing three rivals
//! weighs the cost of the slot against the value rivals would have
//! delivered, and the optimal rule falls out as a single cut.
//!
//! The printed pieces add up: cut = cost term + interference term, where the
//! cost term is ψ marked up by the odds the slot was clear, and the
//! interference term is the expected rival value erased per transmission.

use goma::dists::ContinuousDist;
use goma::libra::best_response;
use goma::oracle::grid_best_response;
use goma::strategy::{Scenario, ThresholdProfile};

fn main() {
    let dist = ContinuousDist::chi_square_2_scaled(1.0).unwrap();
    let scenario = Scenario::symmetric(dist.into(), 4, 0.25).unwrap();
    // Rivals hold their top 30% (theta 0.7); node 0's stance is irrelevant
    // to its own best response.
    let profile = ThresholdProfile::new(vec![0.5, 0.7, 0.7, 0.7]).unwrap();

    let report = best_response(&scenario, 0, &profile).unwrap();
    println!("node 0 vs three rivals at theta = 0.7, psi = 0.25\n");
    println!("cost term          {:.5}", report.cost_term);
    println!("interference term  {:.5}", report.interference_term);
    println!("value cut          {:.5}", report.value_threshold);
    println!("quantile theta*    {:.5}", report.theta_star);

    // The same answer, found the slow way: sweep node 0's quantile over a
    // fine grid and keep the argmax.
    let sweep = grid_best_response(&scenario, 0, &profile, 1e-4).unwrap();
    println!("\ngrid sweep argmax  {:.4} (reward {:.6})", sweep.best, sweep.best_reward);

    let mut played = profile.clone();
    played.set_theta(0, report.theta_star);
    println!(
        "closed form        {:.4} (reward {:.6})",
        report.theta_star,
        goma::strategy::expected_reward_threshold(&scenario, &played).unwrap()
    );
}
