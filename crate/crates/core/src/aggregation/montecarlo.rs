use rayon::prelude::*;
use serde::Serialize;

use super::{AggregateSum, Dependence};
use crate::error::{check_open_unit, Error, Result};
use crate::risk_measures::LossPosition;
use crate::stream::UniformStream;

pub const MC_MIN_SAMPLES: usize = 10_000;

/// Two-sided confidence of the order-statistic interval.
pub const MC_CONFIDENCE: f64 = 0.99;

/// Φ⁻¹(0.995).
const Z_99: f64 = 2.575_829_303_548_900_4;

/// Rows per parallel block. Block `b` reads uniforms `b * BLOCK ..`, so the
/// result does not depend on how blocks are scheduled.
const BLOCK: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub ci_halfwidth: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (value - self.estimate).abs() <= self.ci_halfwidth
    }
}

/// Monte Carlo VaR of an aggregate; see [`mc_var_oracle_components`].
pub fn mc_var_oracle(sum: &AggregateSum, alpha: f64, n: usize, seed: u64) -> Result<McEstimate> {
    mc_var_oracle_components(sum.components(), sum.dependence(), alpha, n, seed)
}

/// Empirical α-quantile of `n` simulated sums with a 99% order-statistic interval.
///
/// Comonotone rows apply every quantile function to one uniform from stream 0;
/// independent rows give component `i` its own stream `i`. Any number of
/// components is accepted here, including independent sums of more than two.
/// The estimate is the `⌈nα⌉`-th order statistic; the interval runs between the
/// order statistics at ranks `nα ∓ z·√(nα(1−α))`, and `ci_halfwidth` is the
/// larger distance from the estimate to either end.
pub fn mc_var_oracle_components(
    components: &[LossPosition],
    dependence: Dependence,
    alpha: f64,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_open_unit("alpha", alpha)?;
    if n < MC_MIN_SAMPLES {
        return Err(Error::Domain(format!("need at least {MC_MIN_SAMPLES} samples, got {n}")));
    }
    if components.is_empty() {
        return Err(Error::Domain("no components to aggregate".into()));
    }

    let mut sums = vec![0.0f64; n];
    sums.par_chunks_mut(BLOCK).enumerate().for_each(|(block, out)| {
        let start = (block * BLOCK) as u64;
        let mut u = vec![0.0; out.len()];
        match dependence {
            Dependence::Comonotone => {
                UniformStream::new(seed, 0).fill(start, &mut u);
                for (slot, &ui) in out.iter_mut().zip(&u) {
                    *slot = components.iter().map(|c| c.dist.quantile_unchecked(ui)).sum();
                }
            }
            Dependence::Independent => {
                for (i, c) in components.iter().enumerate() {
                    UniformStream::new(seed, i as u64).fill(start, &mut u);
                    for (slot, &ui) in out.iter_mut().zip(&u) {
                        *slot += c.dist.quantile_unchecked(ui);
                    }
                }
            }
        }
    });

    let nf = n as f64;
    let centre = nf * alpha;
    let spread = Z_99 * (centre * (1.0 - alpha)).sqrt();
    let rank = |r: f64| -> usize { (r as usize).clamp(1, n) - 1 };
    let k = rank(centre.ceil());
    let lo = rank((centre - spread).floor());
    let hi = rank((centre + spread).ceil() + 1.0);

    let estimate = *sums.select_nth_unstable_by(k, f64::total_cmp).1;
    let ci_lower = *sums[..=k].select_nth_unstable_by(lo.min(k), f64::total_cmp).1;
    let ci_upper = *sums[k..].select_nth_unstable_by(hi.max(k) - k, f64::total_cmp).1;
    Ok(McEstimate {
        estimate,
        ci_halfwidth: (estimate - ci_lower).max(ci_upper - estimate),
        ci_lower,
        ci_upper,
        samples: n,
    })
}
