//! Where the best-response dynamics land: sweep a coarse grid of starting
//! profiles for a three-node fleet and tally which equilibrium each start
//! is attracted to.

use goma::basins::map_basins;
use goma::dists::ContinuousDist;
use goma::strategy::Scenario;

fn main() {
    let dist = ContinuousDist::exponential(1.0).unwrap();
    let scenario = Scenario::symmetric(dist.into(), 3, 0.0).unwrap();
    // 21×21 starts over (theta_2, theta_3); node 1 always opens with its
    // best response.
    let map = map_basins(&scenario, 0.05).unwrap();

    println!("certified equilibria (Exp(1) values, 3 nodes, free transmissions):\n");
    println!("label      thetas                        reward    basin cells");
    for eq in &map.equilibria {
        let t: Vec<String> = eq.profile.thetas().iter().map(|x| format!("{x:.3}")).collect();
        println!(
            "{:9} [{}]         {:.4}    {}",
            eq.label.to_string(),
            t.join(", "),
            eq.reward,
            eq.cells
        );
    }

    let total = map.cells.len();
    let converged = map.cells.iter().filter(|c| c.converged).count();
    println!("\n{converged}/{total} starting cells converged;");
    println!("the single-speaker corners are reachable, the symmetric point pays best,");
    println!("and the lopsided duos exist but attract no open region of starts.");
}
