//! What bad parameter estimates cost: equilibria negotiated from noisy
//! beliefs about the fleet's value distributions, scored on the truth.
//!
//! Three knowledge models per fleet: ideal (true means), shared (one noisy
//! estimate everyone agrees on), individual (each node trusts only its own
//! private estimates and plays its own component of the profile it solves).

use goma::baseline::{cdns_reward, with_means};
use goma::dists::{ContinuousDist, ValueDist};
use goma::libra::libra;
use goma::rng::substream;
use goma::strategy::{expected_reward_threshold, Scenario, ThresholdProfile};
use rand::Rng;

fn main() {
    let n = 10;
    let psi = 0.25;
    let nu = 0.25; // spread of the true means
    let eta = 0.25; // estimation error half-width
    let episodes = 30;
    let template: ValueDist = ContinuousDist::chi_square_2_scaled(1.0).unwrap().into();

    let mut sums = [0.0f64; 3];
    let mut below = [0usize; 3];
    println!("{n} sensors, true means U[{:.2}, {:.2}], estimates off by U[-{eta}, {eta}]\n", 1.0 - nu, 1.0 + nu);
    println!("  episode    ideal   shared   individual   (reward / poll-best)");
    for ep in 0..episodes {
        let mut rng = substream(5, 0xC3, ep);
        let means: Vec<f64> = (0..n).map(|_| 1.0 - nu + 2.0 * nu * rng.gen::<f64>()).collect();
        let shared_noise: Vec<f64> = (0..n).map(|_| -eta + 2.0 * eta * rng.gen::<f64>()).collect();
        let private_noise: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| -eta + 2.0 * eta * rng.gen::<f64>()).collect())
            .collect();

        let truth = Scenario::new(with_means(&template, &means).unwrap(), psi).unwrap();
        let baseline = cdns_reward(&truth).unwrap();

        let believe = |noise: &[f64]| {
            let est: Vec<f64> = means.iter().zip(noise).map(|(m, e)| (m + e).max(1e-3)).collect();
            Scenario::new(with_means(&template, &est).unwrap(), psi).unwrap()
        };

        let (_, trace) = libra(&truth, 1e-9).unwrap();
        let ideal = trace.final_reward();
        // The believed solution fixes each node's access probability; the node
        // meters that rate against the values it actually sees.
        let shared = {
            let (profile, _) = libra(&believe(&shared_noise), 1e-9).unwrap();
            expected_reward_threshold(&truth, &profile).unwrap()
        };
        let individual = {
            let mut composite = vec![0.0; n];
            for (k, noise) in private_noise.iter().enumerate() {
                let (profile, _) = libra(&believe(noise), 1e-9).unwrap();
                composite[k] = profile.theta(k);
            }
            expected_reward_threshold(&truth, &ThresholdProfile::new(composite).unwrap()).unwrap()
        };

        let gains = [ideal / baseline, shared / baseline, individual / baseline];
        for (i, g) in gains.iter().enumerate() {
            sums[i] += g;
            below[i] += (*g < 1.0) as usize;
        }
        println!(
            "  {ep:5}      {:.3}    {:.3}     {:.3}",
            gains[0], gains[1], gains[2]
        );
    }
    println!("\n             ideal   shared   individual");
    println!(
        "  mean       {:.3}    {:.3}     {:.3}",
        sums[0] / episodes as f64,
        sums[1] / episodes as f64,
        sums[2] / episodes as f64
    );
    println!("  below 1.0  {:>5}    {:>5}     {:>5}", below[0], below[1], below[2]);
    println!(
        "\nShared errors displace the whole fleet together and cost little; private \
         disagreements break coordination and can fall below the polling baseline."
    );
}
