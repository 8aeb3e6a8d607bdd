//! The anomaly-detection toy: n sensors each see a unit-value anomaly with
//! probability p. Pulling (polling one sensor) earns p per slot; pushing
//! (everyone reports their own anomalies) does better only if the fleet
//! coordinates how many of them speak.

use goma::oracle::binary_toy_optimum;

fn main() {
    let n = 10;
    println!("n = {n} sensors, anomaly value 1, free transmissions\n");
    println!("  p     pull   best push   speakers");
    for p in [0.02, 0.05, 0.1, 0.2, 0.3, 0.5] {
        let (x, push) = binary_toy_optimum(n, p, 0.0, 1e-3).unwrap();
        let speakers = x.iter().filter(|&&v| v > 1e-9).count();
        println!("{p:5.2}   {p:.3}   {push:.5}      {speakers}");
    }
    println!(
        "\nRare anomalies favor the whole fleet pushing; common ones collapse \
         the optimum back to a single speaker."
    );
}
