//! Value-of-information distributions.
//!
//! Each sensor observes a fresh value per slot, drawn from a per-node
//! distribution. Strategies are thresholds on those values, so everything the
//! optimizer needs reduces to three queries: the CDF, its generalized inverse
//! (quantile), and the tail expectation `E[V · 1{V > t}]`.

mod parse;

pub use parse::parse_dist;

use crate::error::{GomaError, Result};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Finite-support distribution given as an explicit PMF.
///
/// Values are strictly increasing, probabilities are positive and sum to one;
/// values that cannot occur are simply not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    values: Vec<f64>,
    probs: Vec<f64>,
    cum: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(GomaError::InvalidDistribution(format!(
                "pmf needs matching non-empty value/probability lists, got {}/{}",
                values.len(),
                probs.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GomaError::InvalidDistribution("non-finite pmf value".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GomaError::InvalidDistribution(
                "pmf values must be strictly increasing".into(),
            ));
        }
        if probs.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(GomaError::InvalidDistribution(
                "pmf probabilities must be positive".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GomaError::InvalidDistribution(format!(
                "pmf probabilities sum to {total}, expected 1"
            )));
        }
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cum.push(acc);
        }
        // Guard against accumulated rounding so quantile(1.0) always resolves.
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self { values, probs, cum })
    }

    /// Two-point observation model: an anomaly of value 1 with probability `p`,
    /// otherwise 0. Degenerate `p` collapses to a single-point PMF.
    pub fn binary(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GomaError::ProbabilityOutOfRange(p));
        }
        if p == 0.0 {
            Self::new(vec![0.0], vec![1.0])
        } else if p == 1.0 {
            Self::new(vec![1.0], vec![1.0])
        } else {
            Self::new(vec![0.0, 1.0], vec![1.0 - p, p])
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.probs).map(|(v, p)| v * p).sum()
    }

    pub fn cdf(&self, v: f64) -> f64 {
        match self.values.iter().rposition(|&x| x <= v) {
            Some(i) => self.cum[i],
            None => 0.0,
        }
    }

    /// Generalized inverse CDF: the smallest support value whose CDF reaches `p`.
    /// At `p = 0` that infimum is below the whole support, so the strict rule
    /// `v > quantile(0)` must admit every atom; return -inf rather than the
    /// lowest atom, which the strict inequality would exclude.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GomaError::ProbabilityOutOfRange(p));
        }
        if p == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let i = self.cum.partition_point(|&c| c < p);
        Ok(self.values[i.min(self.values.len() - 1)])
    }

    /// `E[V · 1{V > t}]`: mass strictly above the threshold.
    pub fn tail_above_value(&self, t: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.probs)
            .filter(|(v, _)| **v > t)
            .map(|(v, p)| v * p)
            .sum()
    }

    /// Quantile-space tail `∫_θ^1 Q(p) dp` of the piecewise-constant quantile.
    pub fn tail_expectation(&self, theta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(GomaError::ProbabilityOutOfRange(theta));
        }
        let mut acc = 0.0;
        let mut lo = 0.0f64;
        for (v, c) in self.values.iter().zip(&self.cum) {
            let a = lo.max(theta);
            let b: f64 = *c;
            if b > a {
                acc += v * (b - a);
            }
            lo = b;
        }
        Ok(acc)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.gen();
        let i = self.cum.partition_point(|&c| c <= u);
        self.values[i.min(self.values.len() - 1)]
    }
}

/// Continuous family with closed-form CDF, quantile, and tail expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuousDist {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    Gaussian { mean: f64, variance: f64 },
    Pareto { scale: f64, shape: f64 },
    /// Chi-square with 2 degrees of freedom, rescaled to the given mean.
    /// Analytically identical to an exponential with that mean.
    ChiSquare2Scaled { mean: f64 },
}

impl ContinuousDist {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(GomaError::InvalidDistribution(format!(
                "uniform needs lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(GomaError::InvalidDistribution(format!(
                "exponential rate must be positive, got {rate}"
            )));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() || !(variance > 0.0) || !variance.is_finite() {
            return Err(GomaError::InvalidDistribution(format!(
                "gaussian needs finite mean and positive variance, got ({mean}, {variance})"
            )));
        }
        Ok(Self::Gaussian { mean, variance })
    }

    /// Pareto with scale `z > 0` and shape `alpha > 1` (so the mean is finite).
    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !(shape > 1.0) || !shape.is_finite() {
            return Err(GomaError::InvalidDistribution(format!(
                "pareto needs scale > 0 and shape > 1, got ({scale}, {shape})"
            )));
        }
        Ok(Self::Pareto { scale, shape })
    }

    /// Scaled chi-square-2 observation model; `mean <= 0` is rejected.
    pub fn chi_square_2_scaled(mean: f64) -> Result<Self> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(GomaError::InvalidDistribution(format!(
                "chi-square-2 mean must be positive, got {mean}"
            )));
        }
        Ok(Self::ChiSquare2Scaled { mean })
    }

    fn normal(mean: f64, variance: f64) -> Normal {
        Normal::new(mean, variance.sqrt()).expect("validated at construction")
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Gaussian { mean, .. } => mean,
            Self::Pareto { scale, shape } => shape * scale / (shape - 1.0),
            Self::ChiSquare2Scaled { mean } => mean,
        }
    }

    /// Infimum of the support (`-inf` for the Gaussian).
    pub fn support_min(&self) -> f64 {
        match *self {
            Self::Uniform { lo, .. } => lo,
            Self::Exponential { .. } | Self::ChiSquare2Scaled { .. } => 0.0,
            Self::Gaussian { .. } => f64::NEG_INFINITY,
            Self::Pareto { scale, .. } => scale,
        }
    }

    pub fn cdf(&self, v: f64) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => ((v - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if v <= 0.0 {
                    0.0
                } else {
                    -(-rate * v).exp_m1()
                }
            }
            Self::Gaussian { mean, variance } => Self::normal(mean, variance).cdf(v),
            Self::Pareto { scale, shape } => {
                if v <= scale {
                    0.0
                } else {
                    1.0 - (scale / v).powf(shape)
                }
            }
            Self::ChiSquare2Scaled { mean } => {
                if v <= 0.0 {
                    0.0
                } else {
                    -(-v / mean).exp_m1()
                }
            }
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(GomaError::ProbabilityOutOfRange(p));
        }
        if p == 0.0 {
            return Ok(self.support_min());
        }
        Ok(match *self {
            Self::Uniform { lo, hi } => lo + (hi - lo) * p,
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Gaussian { mean, variance } => {
                if p == 1.0 {
                    f64::INFINITY
                } else {
                    Self::normal(mean, variance).inverse_cdf(p)
                }
            }
            Self::Pareto { scale, shape } => scale * (1.0 - p).powf(-1.0 / shape),
            Self::ChiSquare2Scaled { mean } => -mean * (-p).ln_1p(),
        })
    }

    /// `∫_θ^1 Q(p) dp`, the expected value delivered per slot by a node that
    /// transmits exactly when its value exceeds the θ-quantile.
    pub fn tail_expectation(&self, theta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&theta) || theta.is_nan() {
            return Err(GomaError::ProbabilityOutOfRange(theta));
        }
        if theta == 1.0 {
            return Ok(0.0);
        }
        let s = 1.0 - theta;
        Ok(match *self {
            Self::Uniform { lo, hi } => lo * s + 0.5 * (hi - lo) * (1.0 - theta * theta),
            Self::Exponential { rate } => s * (1.0 - s.ln()) / rate,
            Self::Gaussian { mean, variance } => {
                let sd = variance.sqrt();
                let z = if theta == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    Self::normal(0.0, 1.0).inverse_cdf(theta)
                };
                mean * s + sd * std_normal_pdf(z)
            }
            Self::Pareto { scale, shape } => {
                shape * scale / (shape - 1.0) * s.powf((shape - 1.0) / shape)
            }
            Self::ChiSquare2Scaled { mean } => mean * s * (1.0 - s.ln()),
        })
    }

    /// `E[V · 1{V > t}]` for an arbitrary value threshold `t`.
    pub fn tail_above_value(&self, t: f64) -> f64 {
        // Infinite cuts come from θ∈{0,1} quantiles; the closed forms below
        // would turn them into ∞·0.
        if t == f64::INFINITY {
            return 0.0;
        }
        if t == f64::NEG_INFINITY {
            return self.mean();
        }
        match *self {
            Self::Uniform { lo, hi } => {
                if t <= lo {
                    self.mean()
                } else if t >= hi {
                    0.0
                } else {
                    0.5 * (hi * hi - t * t) / (hi - lo)
                }
            }
            Self::Exponential { rate } => {
                if t <= 0.0 {
                    1.0 / rate
                } else {
                    (t + 1.0 / rate) * (-rate * t).exp()
                }
            }
            Self::Gaussian { mean, variance } => {
                let sd = variance.sqrt();
                let z = (t - mean) / sd;
                mean * (1.0 - Self::normal(0.0, 1.0).cdf(z)) + sd * std_normal_pdf(z)
            }
            Self::Pareto { scale, shape } => {
                if t <= scale {
                    self.mean()
                } else {
                    shape * scale.powf(shape) * t.powf(1.0 - shape) / (shape - 1.0)
                }
            }
            Self::ChiSquare2Scaled { mean } => {
                if t <= 0.0 {
                    mean
                } else {
                    (t + mean) * (-t / mean).exp()
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
            Self::Exponential { rate } => {
                let u: f64 = rng.gen();
                -(-u).ln_1p() / rate
            }
            Self::Gaussian { mean, variance } => {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                mean + variance.sqrt() * z
            }
            Self::Pareto { scale, shape } => {
                let u: f64 = rng.gen();
                scale * (1.0 - u).powf(-1.0 / shape)
            }
            Self::ChiSquare2Scaled { mean } => {
                let u: f64 = rng.gen();
                -mean * (-u).ln_1p()
            }
        }
    }
}

/// Per-node observation model: either an explicit PMF or a continuous family.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueDist {
    Discrete(DiscreteDist),
    Continuous(ContinuousDist),
}

impl ValueDist {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Self::Continuous(_))
    }

    pub fn as_discrete(&self) -> Option<&DiscreteDist> {
        match self {
            Self::Discrete(d) => Some(d),
            Self::Continuous(_) => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Discrete(d) => d.mean(),
            Self::Continuous(c) => c.mean(),
        }
    }

    pub fn support_min(&self) -> f64 {
        match self {
            Self::Discrete(d) => d.values()[0],
            Self::Continuous(c) => c.support_min(),
        }
    }

    pub fn cdf(&self, v: f64) -> f64 {
        match self {
            Self::Discrete(d) => d.cdf(v),
            Self::Continuous(c) => c.cdf(v),
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        match self {
            Self::Discrete(d) => d.quantile(p),
            Self::Continuous(c) => c.quantile(p),
        }
    }

    pub fn tail_expectation(&self, theta: f64) -> Result<f64> {
        match self {
            Self::Discrete(d) => d.tail_expectation(theta),
            Self::Continuous(c) => c.tail_expectation(theta),
        }
    }

    pub fn tail_above_value(&self, t: f64) -> f64 {
        match self {
            Self::Discrete(d) => d.tail_above_value(t),
            Self::Continuous(c) => c.tail_above_value(t),
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match self {
            Self::Discrete(d) => d.sample(rng),
            Self::Continuous(c) => c.sample(rng),
        }
    }

    /// Probability of transmitting under value threshold `t`: `P(V > t)`.
    ///
    /// For continuous laws this is `1 - cdf(t)`; for PMFs the distinction
    /// matters because `cdf` has jumps and the transmit rule is strict.
    pub fn tx_prob_above(&self, t: f64) -> f64 {
        match self {
            Self::Discrete(d) => d
                .values()
                .iter()
                .zip(d.probs())
                .filter(|(v, _)| **v > t)
                .map(|(_, p)| *p)
                .sum(),
            Self::Continuous(c) => 1.0 - c.cdf(t),
        }
    }

    /// Same distribution with all values multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(GomaError::InvalidDistribution(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(match self {
            Self::Discrete(d) => Self::Discrete(DiscreteDist::new(
                d.values().iter().map(|v| v * c).collect(),
                d.probs().to_vec(),
            )?),
            Self::Continuous(k) => Self::Continuous(match *k {
                ContinuousDist::Uniform { lo, hi } => ContinuousDist::Uniform { lo: lo * c, hi: hi * c },
                ContinuousDist::Exponential { rate } => ContinuousDist::Exponential { rate: rate / c },
                ContinuousDist::Gaussian { mean, variance } => ContinuousDist::Gaussian {
                    mean: mean * c,
                    variance: variance * c * c,
                },
                ContinuousDist::Pareto { scale, shape } => ContinuousDist::Pareto { scale: scale * c, shape },
                ContinuousDist::ChiSquare2Scaled { mean } => {
                    ContinuousDist::ChiSquare2Scaled { mean: mean * c }
                }
            }),
        })
    }

    /// Quantizes a continuous law onto a value grid of the given step for
    /// exhaustive discrete checks. Grid cells use midpoint CDF differences and
    /// the end bins absorb the tails, so probabilities stay exact.
    pub fn discretize(&self, step: f64) -> Result<DiscreteDist> {
        let c = match self {
            Self::Discrete(d) => return Ok(d.clone()),
            Self::Continuous(c) => c,
        };
        if !(step > 0.0) {
            return Err(GomaError::InvalidDistribution(format!(
                "discretization step must be positive, got {step}"
            )));
        }
        let lo = c.quantile(1e-7)?;
        let hi = c.quantile(1.0 - 1e-7)?;
        let k0 = (lo / step).floor() as i64;
        let k1 = (hi / step).ceil() as i64;
        let mut values = Vec::new();
        let mut probs = Vec::new();
        for k in k0..=k1 {
            let v = k as f64 * step;
            let a = if k == k0 { f64::NEG_INFINITY } else { v - 0.5 * step };
            let b = if k == k1 { f64::INFINITY } else { v + 0.5 * step };
            let p = c.cdf(b) - c.cdf(a);
            if p > 0.0 {
                values.push(v);
                probs.push(p);
            }
        }
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        DiscreteDist::new(values, probs)
    }
}

impl From<ContinuousDist> for ValueDist {
    fn from(c: ContinuousDist) -> Self {
        Self::Continuous(c)
    }
}

impl From<DiscreteDist> for ValueDist {
    fn from(d: DiscreteDist) -> Self {
        Self::Discrete(d)
    }
}

fn std_normal_pdf(z: f64) -> f64 {
    if z.is_infinite() {
        return 0.0;
    }
    (-(z * z) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

impl std::fmt::Display for ContinuousDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Self::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            Self::Exponential { rate } => write!(f, "exp({rate})"),
            Self::Gaussian { mean, variance } => write!(f, "gauss({mean},{variance})"),
            Self::Pareto { scale, shape } => write!(f, "pareto({scale},{shape})"),
            Self::ChiSquare2Scaled { mean } => write!(f, "chi2m({mean})"),
        }
    }
}

impl std::fmt::Display for ValueDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Continuous(c) => c.fmt(f),
            Self::Discrete(d) => {
                // binary(p) round-trips; anything else prints as a raw pmf.
                let v = d.values();
                let p = d.probs();
                if v == [0.0, 1.0] {
                    return write!(f, "binary({})", p[1]);
                }
                if v.len() == 1 && (v[0] == 0.0 || v[0] == 1.0) {
                    return write!(f, "binary({})", v[0]);
                }
                write!(f, "pmf([")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "],[")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "])")
            }
        }
    }
}
