//! Textual distribution specs, e.g. `exp(1)`, `gauss(0.5,4)`, `binary(0.1)`,
//! `pmf([0,1,4],[0.5,0.3,0.2])`. This is the format used by config files and
//! echoed back in output table headers.

use super::{ContinuousDist, DiscreteDist, ValueDist};
use crate::error::{GomaError, Result};

pub fn parse_dist(spec: &str) -> Result<ValueDist> {
    let s = spec.trim();
    let open = s
        .find('(')
        .ok_or_else(|| bad(spec, "expected name(args)"))?;
    if !s.ends_with(')') {
        return Err(bad(spec, "expected closing parenthesis"));
    }
    let name = s[..open].trim();
    let body = &s[open + 1..s.len() - 1];
    match name {
        "exp" => {
            let [rate] = scalars::<1>(spec, body)?;
            Ok(ContinuousDist::exponential(rate)?.into())
        }
        "gauss" => {
            let [mean, variance] = scalars::<2>(spec, body)?;
            Ok(ContinuousDist::gaussian(mean, variance)?.into())
        }
        "uniform" => {
            let [lo, hi] = scalars::<2>(spec, body)?;
            Ok(ContinuousDist::uniform(lo, hi)?.into())
        }
        "pareto" => {
            let [scale, shape] = scalars::<2>(spec, body)?;
            Ok(ContinuousDist::pareto(scale, shape)?.into())
        }
        "chi2m" => {
            let [mean] = scalars::<1>(spec, body)?;
            Ok(ContinuousDist::chi_square_2_scaled(mean)?.into())
        }
        "binary" => {
            let [p] = scalars::<1>(spec, body)?;
            Ok(DiscreteDist::binary(p)?.into())
        }
        "pmf" => {
            let (values, probs) = two_lists(spec, body)?;
            Ok(DiscreteDist::new(values, probs)?.into())
        }
        other => Err(bad(spec, &format!("unknown family '{other}'"))),
    }
}

fn bad(spec: &str, why: &str) -> GomaError {
    GomaError::InvalidDistribution(format!("cannot parse '{spec}': {why}"))
}

fn scalars<const N: usize>(spec: &str, body: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(bad(spec, &format!("expected {N} argument(s), got {}", parts.len())));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| bad(spec, &format!("'{part}' is not a number")))?;
    }
    Ok(out)
}

fn two_lists(spec: &str, body: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let body = body.trim();
    let first_close = body
        .find(']')
        .ok_or_else(|| bad(spec, "expected two bracketed lists"))?;
    let first = body[..=first_close].trim();
    let rest = body[first_close + 1..].trim();
    let rest = rest
        .strip_prefix(',')
        .ok_or_else(|| bad(spec, "expected comma between the lists"))?
        .trim();
    Ok((list(spec, first)?, list(spec, rest)?))
}

fn list(spec: &str, s: &str) -> Result<Vec<f64>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| bad(spec, "expected a bracketed list"))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| bad(spec, &format!("'{t}' is not a number")))
        })
        .collect()
}
