//! Distribution function and VaR of sums of losses.
//!
//! Two dependence extremes are covered. Comonotone components share one
//! driving uniform, so the VaR of the sum is the sum of the VaRs; the
//! distribution function of `X + g(X)` is also available through the root of
//! `x + g(x) = s` as an independent route to the same number. Independent
//! pairs are combined by convolution, with closed forms for the
//! Pareto(1, 1), equal-rate Exponential and Normal pairs. A seeded Monte Carlo
//! estimator cross-checks both.

mod comonotone;
mod independent;
mod montecarlo;
mod monotone;

use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, TRUNCATION_EPSILON};
use crate::error::{Error, Result};
use crate::risk_measures::LossPosition;

pub use comonotone::{comonotone_quantile_sample, comonotone_sum_cdf, comonotone_var, comonotone_var_by_inversion};
pub use independent::{independent_sum_cdf, independent_sum_sf, independent_var};
pub(crate) use independent::sum_level_gap;
pub use monotone::{MapKind, MonotoneMap};
pub use montecarlo::{mc_var_oracle, mc_var_oracle_components, McEstimate, MC_CONFIDENCE, MC_MIN_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dependence {
    Comonotone,
    Independent,
}

impl Dependence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dependence::Comonotone => "comonotone",
            Dependence::Independent => "independent",
        }
    }
}

impl std::str::FromStr for Dependence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comonotone" => Ok(Dependence::Comonotone),
            "independent" => Ok(Dependence::Independent),
            other => Err(Error::Domain(format!("unknown dependence '{other}'"))),
        }
    }
}

/// Numerical knobs for convolution and root finding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvolutionSettings {
    pub abs_tolerance: f64,
    pub truncation_epsilon: f64,
    pub max_subdivisions: usize,
    /// Use closed forms for the Pareto(1,1), Exponential and Normal pairs.
    pub use_fast_paths: bool,
}

impl Default for ConvolutionSettings {
    fn default() -> Self {
        Self {
            abs_tolerance: 1e-10,
            truncation_epsilon: TRUNCATION_EPSILON,
            max_subdivisions: 2048,
            use_fast_paths: true,
        }
    }
}

impl ConvolutionSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tolerance >= 1e-14
            && self.abs_tolerance.is_finite()
            && self.truncation_epsilon > 0.0
            && self.truncation_epsilon < 0.5
            && self.max_subdivisions > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "convolution settings out of range: abs_tolerance={} (>= 1e-14), truncation_epsilon={} (in (0, 0.5)), max_subdivisions={} (> 0)",
                self.abs_tolerance, self.truncation_epsilon, self.max_subdivisions
            )))
        }
    }

    pub fn without_fast_paths(self) -> Self {
        Self { use_fast_paths: false, ..self }
    }
}

/// `S = X_1 + ... + X_n` under one dependence structure, with
/// `median_sum = Σ M(X_i)` so that the aggregated excess of loss is `S - median_sum`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AggregateSumFile", into = "AggregateSumFile")]
pub struct AggregateSum {
    components: Vec<LossPosition>,
    dependence: Dependence,
    median_sum: f64,
}

impl AggregateSum {
    /// Comonotone sums take any number of components (at least two);
    /// independent sums are pairs.
    pub fn new(components: Vec<LossPosition>, dependence: Dependence) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "an aggregate needs at least 2 components, got {}",
                components.len()
            )));
        }
        if dependence == Dependence::Independent && components.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "independent aggregation is limited to pairs, got {} components",
                components.len()
            )));
        }
        let median_sum = components.iter().map(LossPosition::median).sum();
        Ok(Self { components, dependence, median_sum })
    }

    pub fn comonotone(components: Vec<LossPosition>) -> Result<Self> {
        Self::new(components, Dependence::Comonotone)
    }

    pub fn independent(x: LossPosition, y: LossPosition) -> Result<Self> {
        Self::new(vec![x, y], Dependence::Independent)
    }

    pub fn components(&self) -> &[LossPosition] {
        &self.components
    }

    pub fn dependence(&self) -> Dependence {
        self.dependence
    }

    pub fn median_sum(&self) -> f64 {
        self.median_sum
    }

    /// VaR_α(S) with the computation that matches the dependence mode.
    pub fn value_at_risk(&self, alpha: f64, settings: &ConvolutionSettings) -> Result<f64> {
        match self.dependence {
            Dependence::Comonotone => comonotone_var(self, alpha),
            Dependence::Independent => independent_var(&self.components[0], &self.components[1], alpha, settings),
        }
    }

    /// VaR_α(S) − Σ M(X_i).
    pub fn excess_var(&self, alpha: f64, settings: &ConvolutionSettings) -> Result<f64> {
        Ok(self.value_at_risk(alpha, settings)? - self.median_sum)
    }
}

pub fn excess_aggregate_var(sum: &AggregateSum, alpha: f64, settings: &ConvolutionSettings) -> Result<f64> {
    sum.excess_var(alpha, settings)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AggregateSumFile {
    dependence: Dependence,
    components: Vec<Distribution>,
}

impl TryFrom<AggregateSumFile> for AggregateSum {
    type Error = Error;

    fn try_from(file: AggregateSumFile) -> Result<Self> {
        let components = file
            .components
            .into_iter()
            .enumerate()
            .map(|(i, d)| LossPosition::new(format!("x{}", i + 1), d))
            .collect();
        AggregateSum::new(components, file.dependence)
    }
}

impl From<AggregateSum> for AggregateSumFile {
    fn from(sum: AggregateSum) -> Self {
        AggregateSumFile {
            dependence: sum.dependence,
            components: sum.components.into_iter().map(|p| p.dist).collect(),
        }
    }
}

/// Lower and upper Fréchet–Hoeffding bounds `(max(u + v − 1, 0), min(u, v))`
/// for a joint distribution function with marginal values `u` and `v`.
pub fn frechet_hoeffding_bounds(u: f64, v: f64) -> Result<(f64, f64)> {
    for (name, p) in [("u", u), ("v", v)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("{name} must lie in [0,1], got {p}")));
        }
    }
    Ok(((u + v - 1.0).max(0.0), u.min(v)))
}
