//! Brute-force verifiers: numerical quadrature, grid sweeps, and exhaustive
//! enumeration.
//!
//! Nothing here is fast or clever on purpose. These routines recompute the
//! library's closed forms by independent means so the test suite can certify
//! them, and they double as the reference implementation when a formula is in
//! doubt.

use crate::dists::ValueDist;
use crate::error::{GomaError, Result};
use crate::strategy::{
    expected_reward, expected_reward_threshold, GeneralStrategy, Scenario, ThresholdProfile,
};

/// Adaptive Simpson integration of `f` over `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let err = left + right - whole;
        if depth == 0 || err.abs() <= 15.0 * tol {
            return left + right + err / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 52)
}

/// `E[V·1{V > t}]` by quadrature of the survival function:
/// `t·S(t) + ∫_t^∞ S(v) dv`, with the tail mapped onto a finite interval.
pub fn tail_above_quadrature(d: &ValueDist, t: f64) -> f64 {
    assert!(t.is_finite(), "quadrature needs a finite threshold");
    let survival = |v: f64| d.tx_prob_above(v);
    // v = t + e^x − 1 turns polynomial-tail integrands into decaying
    // exponentials; x = 80 reaches v ≈ 5.5e34.
    let integrand = |x: f64| survival(t + x.exp() - 1.0) * x.exp();
    t * survival(t) + adaptive_simpson(&integrand, 0.0, 80.0, 1e-11)
}

/// `∫_θ^1 Q(p) dp` by quadrature, for θ in (0, 1].
pub fn tail_expectation_quadrature(d: &ValueDist, theta: f64) -> Result<f64> {
    if theta >= 1.0 {
        return Ok(0.0);
    }
    let t = d.quantile(theta)?;
    if !t.is_finite() {
        return Err(GomaError::InvalidDistribution(
            "tail quadrature needs a finite quantile; use theta > 0".into(),
        ));
    }
    Ok(tail_above_quadrature(d, t))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// A 1-D sweep: every evaluated `(point, reward)` pair plus the argmax.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub grid: Vec<(f64, f64)>,
    pub best: f64,
    pub best_reward: f64,
}

/// Sweep node `n`'s threshold over a quantile grid, holding the others fixed.
pub fn grid_best_response(
    scenario: &Scenario,
    n: usize,
    profile: &ThresholdProfile,
    step: f64,
) -> Result<SweepResult> {
    assert!(step > 0.0 && step < 1.0, "grid step must be in (0,1)");
    let steps = (1.0 / step).round() as usize;
    let mut grid = Vec::with_capacity(steps + 1);
    let mut best = 0.0;
    let mut best_reward = f64::NEG_INFINITY;
    let mut candidate = profile.clone();
    for k in 0..=steps {
        let theta = (k as f64 * step).min(1.0);
        candidate.set_theta(n, theta);
        let reward = expected_reward_threshold(scenario, &candidate)?;
        grid.push((theta, reward));
        if reward > best_reward {
            best_reward = reward;
            best = theta;
        }
    }
    Ok(SweepResult { grid, best, best_reward })
}

/// Enumerate all `2^|𝒱|` deterministic per-value responses of node `n` and
/// return the best one with its reward. The objective is affine in node `n`'s
/// probabilities, so deterministic responses contain an optimum.
pub fn exhaustive_general_response(
    scenario: &Scenario,
    n: usize,
    others: &GeneralStrategy,
) -> Result<(Vec<f64>, f64)> {
    const MAX_VALUES: usize = 20;
    let pmf = scenario.dist(n).as_discrete().ok_or_else(|| {
        GomaError::DiscreteRequired("exhaustive response enumeration".into())
    })?;
    let k = pmf.values().len();
    if k > MAX_VALUES {
        return Err(GomaError::EnumerationTooLarge(k, MAX_VALUES));
    }
    let mut best_mask = 0usize;
    let mut best_reward = f64::NEG_INFINITY;
    let mut candidate = others.clone();
    for mask in 0..(1usize << k) {
        let row: Vec<f64> = (0..k)
            .map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 })
            .collect();
        *candidate.probs_mut(n) = row;
        let reward = expected_reward(scenario, &candidate)?;
        if reward > best_reward {
            best_reward = reward;
            best_mask = mask;
        }
    }
    let best_row = (0..k)
        .map(|i| if best_mask & (1 << i) != 0 { 1.0 } else { 0.0 })
        .collect();
    Ok((best_row, best_reward))
}

/// Value of the quadratic form `zᵀMz` at `z = (1, −1)` for the 2×2 reward
/// Hessian minor tied to `(n, v)` and `(m, u)`: always `−2(u+v)·p_{n,v}·p_{m,u}`,
/// which certifies the objective is non-convex whenever `u + v > 0`.
pub fn hessian_minor_check(
    scenario: &Scenario,
    n: usize,
    v_idx: usize,
    m: usize,
    u_idx: usize,
) -> Result<f64> {
    if n == m {
        return Err(GomaError::InvalidScenario(
            "the minor needs two distinct nodes".into(),
        ));
    }
    let dn = scenario.dist(n).as_discrete().ok_or_else(|| {
        GomaError::DiscreteRequired("Hessian minor check".into())
    })?;
    let dm = scenario.dist(m).as_discrete().ok_or_else(|| {
        GomaError::DiscreteRequired("Hessian minor check".into())
    })?;
    let v = dn.values()[v_idx];
    let u = dm.values()[u_idx];
    if u + v == 0.0 {
        return Err(GomaError::Degenerate(
            "u + v = 0 yields a zero minor, no sign witness".into(),
        ));
    }
    Ok(-2.0 * (u + v) * dn.probs()[v_idx] * dm.probs()[u_idx])
}

/// Best push strategy for `n` nodes that each see an anomaly of value 1 with
/// probability `p`: per-node transmit-on-anomaly probabilities plus the
/// expected reward.
///
/// The objective is multilinear in the per-node probabilities, so an optimum
/// sits at a vertex; the search runs over "k nodes transmit with probability
/// x" configurations (grid plus golden-section refinement), and for small
/// fleets an independent coordinate ascent cross-checks it.
pub fn binary_toy_optimum(n: usize, p: f64, psi: f64, step: f64) -> Result<(Vec<f64>, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GomaError::ProbabilityOutOfRange(p));
    }
    assert!(step > 0.0 && step <= 1e-3, "step must be in (0, 1e-3]");
    let group_reward = |k: usize, x: f64| {
        let kf = k as f64;
        kf * p * x * (1.0 - p * x).powi(k as i32 - 1) - psi * kf * p * x
    };
    let mut best = (0usize, 0.0f64);
    let mut best_reward = 0.0;
    for k in 1..=n {
        let f = |x: f64| group_reward(k, x);
        let grid_steps = (1.0 / step) as usize;
        let mut gx = 0.0;
        let mut gr = f64::NEG_INFINITY;
        for i in 0..=grid_steps {
            let x = (i as f64 * step).min(1.0);
            let r = f(x);
            if r > gr {
                gr = r;
                gx = x;
            }
        }
        let (rx, rr) = golden_section_max(
            &f,
            (gx - step).max(0.0),
            (gx + step).min(1.0),
            1e-12,
        );
        let (x, r) = if rr > gr { (rx, rr) } else { (gx, gr) };
        if r > best_reward {
            best_reward = r;
            best = (k, x);
        }
    }
    if n <= 3 {
        let (asc, asc_reward) = binary_coordinate_ascent(n, p, psi);
        if asc_reward > best_reward + 1e-12 {
            return Ok((asc, asc_reward));
        }
    }
    let mut x = vec![0.0; n];
    for slot in x.iter_mut().take(best.0) {
        *slot = best.1;
    }
    Ok((x, best_reward))
}

/// Coordinate ascent over per-node anomaly-transmission probabilities;
/// each coordinate's objective is linear, so it snaps to {0, 1}.
fn binary_coordinate_ascent(n: usize, p: f64, psi: f64) -> (Vec<f64>, f64) {
    let reward = |x: &[f64]| {
        let mut total = 0.0;
        for i in 0..n {
            let zeta: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 - p * x[j])
                .product();
            total += p * x[i] * zeta - psi * p * x[i];
        }
        total
    };
    let mut best = vec![0.0; n];
    let mut best_reward = 0.0;
    // Deterministic multi-start over all {0,1} corners (n ≤ 3 ⇒ at most 8).
    for seed_mask in 0..(1usize << n) {
        let mut x: Vec<f64> = (0..n)
            .map(|i| if seed_mask & (1 << i) != 0 { 1.0 } else { 0.0 })
            .collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut lo = x.clone();
                lo[i] = 0.0;
                let mut hi = x.clone();
                hi[i] = 1.0;
                let (rl, rh) = (reward(&lo), reward(&hi));
                let pick = if rh >= rl { 1.0 } else { 0.0 };
                if (pick - x[i]).abs() > 0.0 {
                    x[i] = pick;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let r = reward(&x);
        if r > best_reward {
            best_reward = r;
            best = x;
        }
    }
    (best, best_reward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{ContinuousDist, DiscreteDist};
    use approx::assert_abs_diff_eq;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        let f = |x: f64| 3.0 * x * x - 2.0 * x + 1.0;
        assert_abs_diff_eq!(adaptive_simpson(&f, 0.0, 2.0, 1e-12), 6.0, epsilon = 1e-10);
    }

    #[test]
    fn simpson_handles_decay() {
        let f = |x: f64| (-x).exp();
        assert_abs_diff_eq!(adaptive_simpson(&f, 0.0, 60.0, 1e-12), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let f = |x: f64| -(x - 0.3).powi(2);
        let (x, fx) = golden_section_max(&f, 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-8);
        assert_abs_diff_eq!(fx, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn tail_quadrature_matches_exponential_closed_form() {
        let d: ValueDist = ContinuousDist::exponential(1.0).unwrap().into();
        for t in [0.0, 0.25, 1.0, 3.0] {
            assert_abs_diff_eq!(
                tail_above_quadrature(&d, t),
                (t + 1.0) * (-t).exp(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn hessian_minor_is_negative() {
        let d = DiscreteDist::binary(0.5).unwrap();
        let s = Scenario::new(vec![d.clone().into(), d.into()], 0.0).unwrap();
        // values[1] = 1 on both nodes, probabilities 0.5 each.
        let z = hessian_minor_check(&s, 0, 1, 1, 1).unwrap();
        assert_abs_diff_eq!(z, -1.0, epsilon = 1e-15);
        // u + v = 0 carries no sign information.
        assert!(hessian_minor_check(&s, 0, 0, 1, 0).is_err());
    }

    #[test]
    fn hessian_minor_general_entry() {
        let dn = DiscreteDist::new(vec![1.0, 2.0], vec![0.7, 0.3]).unwrap();
        let dm = DiscreteDist::new(vec![1.0, 3.0], vec![0.2, 0.8]).unwrap();
        let s = Scenario::new(vec![dn.into(), dm.into()], 0.0).unwrap();
        // v = 2 (p = 0.3), u = 1 (p = 0.2): −2·3·0.3·0.2 = −0.36.
        assert_abs_diff_eq!(
            hessian_minor_check(&s, 0, 1, 1, 0).unwrap(),
            -0.36,
            epsilon = 1e-15
        );
    }

    #[test]
    fn toy_corner_cases() {
        let (_, r) = binary_toy_optimum(5, 1.0, 0.0, 1e-3).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);
        let (_, r) = binary_toy_optimum(10, 0.1, 0.0, 1e-3).unwrap();
        assert_abs_diff_eq!(r, 0.38742, epsilon = 5e-6);
        // Push degenerates to a single transmitter once anomalies are common.
        let (x, r) = binary_toy_optimum(2, 0.75, 0.0, 1e-3).unwrap();
        assert_abs_diff_eq!(r, 0.75, epsilon = 1e-9);
        assert_eq!(x.iter().filter(|&&v| v > 1e-9).count(), 1);
    }

    #[test]
    fn toy_never_loses_to_single_transmitter() {
        for n in [2usize, 3, 10, 100] {
            for p in [0.05, 0.1, 0.3, 0.5, 0.7, 0.95] {
                let (_, r) = binary_toy_optimum(n, p, 0.0, 1e-3).unwrap();
                assert!(r >= p - 1e-9, "n={n} p={p}: {r} < {p}");
            }
        }
    }

    #[test]
    fn exhaustive_response_picks_high_values() {
        // One rival offering expected value 1.5 per silent slot: only v = 2
        // clears the bar.
        let target = DiscreteDist::new(vec![0.0, 1.0, 2.0], vec![0.3, 0.4, 0.3]).unwrap();
        let rival = DiscreteDist::new(vec![1.5], vec![1.0]).unwrap();
        let s = Scenario::new(vec![target.into(), rival.into()], 0.0).unwrap();
        let others = GeneralStrategy::new(&s, vec![vec![0.0, 0.0, 0.0], vec![0.5]]).unwrap();
        let (row, _) = exhaustive_general_response(&s, 0, &others).unwrap();
        assert_eq!(row, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn enumeration_refuses_large_value_sets() {
        let values: Vec<f64> = (0..25).map(|i| i as f64).collect();
        let probs = vec![1.0 / 25.0; 25];
        let d = DiscreteDist::new(values, probs).unwrap();
        let s = Scenario::new(vec![d.clone().into(), d.into()], 0.0).unwrap();
        let others = GeneralStrategy::new(&s, vec![vec![0.0; 25], vec![0.0; 25]]).unwrap();
        assert!(matches!(
            exhaustive_general_response(&s, 0, &others),
            Err(GomaError::EnumerationTooLarge(25, 20))
        ));
    }
}
