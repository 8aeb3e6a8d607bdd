//! Randomized certification that nothing is lost by playing thresholds: on
//! any discrete instance the closed-form cut matches an exhaustive search
//! over all deterministic per-value responses, and every probed Hessian
//! minor of the reward is negative, so the gain from thresholds is not an
//! artifact of convexity.

mod common;

use goma::dists::DiscreteDist;
use goma::libra::best_response_discrete;
use goma::strategy::{expected_reward, GeneralStrategy, Scenario};
use proptest::prelude::*;

#[test]
fn closed_form_cut_matches_exhaustive_search_on_100_instances() {
    println!("{}", common::threshold_exhaustive_suite());
}

#[test]
fn probed_hessian_minors_are_negative_on_100_instances() {
    println!("{}", common::minors_suite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Same claim as the exhaustive suite, but with proptest steering the
    // instance: the closed-form cut is never beaten by any per-value mask.
    #[test]
    fn cut_is_never_beaten_by_any_mask(
        gaps in prop::collection::vec(0.05f64..1.5, 2..5),
        raw_probs in prop::collection::vec(0.05f64..1.0, 4),
        rival_x in prop::collection::vec(0.0f64..1.0, 4),
        start in 0.0f64..0.5,
        psi in 0.0f64..0.5,
    ) {
        let k = gaps.len();
        let mut values = Vec::with_capacity(k);
        let mut v = start;
        for g in &gaps {
            values.push(v);
            v += g;
        }
        let total: f64 = raw_probs[..k].iter().sum();
        let mut probs: Vec<f64> = raw_probs[..k].iter().map(|p| p / total).collect();
        let head: f64 = probs[..k - 1].iter().sum();
        probs[k - 1] = 1.0 - head;
        let own = DiscreteDist::new(values, probs).unwrap();
        let rival = DiscreteDist::new(vec![0.5, 1.5], vec![0.4, 0.6]).unwrap();
        let scenario = Scenario::new(vec![own.into(), rival.into()], psi).unwrap();
        let others = GeneralStrategy::new(
            &scenario,
            vec![vec![0.0; k], rival_x[..2].to_vec()],
        ).unwrap();

        let report = best_response_discrete(&scenario, 0, &others).unwrap();
        let mut mine = others.clone();
        *mine.probs_mut(0) = common::threshold_row(&scenario, 0, report.value_threshold);
        let closed = expected_reward(&scenario, &mine).unwrap();
        for mask in 0..(1u32 << k) {
            let row: Vec<f64> = (0..k)
                .map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 })
                .collect();
            *mine.probs_mut(0) = row;
            let reward = expected_reward(&scenario, &mine).unwrap();
            prop_assert!(
                reward <= closed + 1e-10,
                "mask {mask:b} reward {reward} beats cut reward {closed}"
            );
        }
    }
}
