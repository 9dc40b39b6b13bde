//! Median, Value-at-Risk and the excess-of-loss decomposition `L = X - M(X)`.
//!
//! VaR here is the plain quantile of a continuous loss. Monotonicity,
//! translation invariance and positive homogeneity hold by construction and
//! are exercised as properties; subadditivity is never assumed (see
//! [`crate::diversification`], which measures it).

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{check_open_unit, Error, Result};

/// A named loss random variable.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LossPosition {
    pub label: String,
    pub dist: Distribution,
}

impl LossPosition {
    pub fn new(label: impl Into<String>, dist: Distribution) -> Self {
        Self { label: label.into(), dist }
    }

    pub fn median(&self) -> f64 {
        self.dist.median()
    }

    /// VaR_α(X) = F⁻¹(α) for `0 < α < 1`.
    ///
    /// Heavy tails can overflow to `+inf` as α approaches 1; that value is
    /// returned as-is rather than clamped.
    pub fn value_at_risk(&self, alpha: f64) -> Result<f64> {
        check_open_unit("alpha", alpha)?;
        if alpha == 0.5 {
            return Ok(self.median());
        }
        Ok(self.dist.quantile_unchecked(alpha))
    }

    /// Position of `X + c`.
    pub fn shift(&self, c: f64) -> Result<LossPosition> {
        Ok(LossPosition {
            label: format!("{}+{}", self.label, c),
            dist: Distribution::affine(self.dist.clone(), 1.0, c)?,
        })
    }

    /// Position of `λX` for `λ > 0`.
    pub fn scale(&self, lambda: f64) -> Result<LossPosition> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {lambda}")));
        }
        Ok(LossPosition {
            label: format!("{}*{}", lambda, self.label),
            dist: Distribution::affine(self.dist.clone(), lambda, 0.0)?,
        })
    }
}

pub fn value_at_risk(position: &LossPosition, alpha: f64) -> Result<f64> {
    position.value_at_risk(alpha)
}

pub fn shift(position: &LossPosition, c: f64) -> Result<LossPosition> {
    position.shift(c)
}

pub fn scale(position: &LossPosition, lambda: f64) -> Result<LossPosition> {
    position.scale(lambda)
}

/// The excess of loss `X - M(X)` with the median cached at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcessOfLoss {
    position: LossPosition,
    median_offset: f64,
}

impl ExcessOfLoss {
    pub fn new(position: LossPosition) -> Self {
        let median_offset = position.median();
        Self { position, median_offset }
    }

    pub fn position(&self) -> &LossPosition {
        &self.position
    }

    pub fn median_offset(&self) -> f64 {
        self.median_offset
    }

    /// VaR_α(X) − M(X): negative below the median, zero at α = 1/2.
    pub fn excess_var(&self, alpha: f64) -> Result<f64> {
        Ok(self.position.value_at_risk(alpha)? - self.median_offset)
    }
}

impl From<LossPosition> for ExcessOfLoss {
    fn from(position: LossPosition) -> Self {
        Self::new(position)
    }
}

pub fn excess_var(excess: &ExcessOfLoss, alpha: f64) -> Result<f64> {
    excess.excess_var(alpha)
}

/// Outcome of [`check_monotone_pair`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub alphas_checked: usize,
    /// `(alpha, VaR_x, VaR_y)` wherever `VaR_x > VaR_y + 1e-10`.
    pub violations: Vec<(f64, f64, f64)>,
}

impl MonotoneReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

const MONOTONE_SLACK: f64 = 1e-10;
const PREMISE_GRID: usize = 2001;

/// Verifies VaR monotonicity for a pair where `X` is stochastically smaller.
///
/// The premise `F_X(t) >= F_Y(t)` is checked first on a grid spanning both
/// distributions' bulk; if it fails the call returns `PremiseViolated`.
/// Otherwise every α in `alpha_grid` is tested for `VaR_α(X) <= VaR_α(Y)`.
pub fn check_monotone_pair(x: &LossPosition, y: &LossPosition, alpha_grid: &[f64]) -> Result<MonotoneReport> {
    for &a in alpha_grid {
        check_open_unit("alpha", a)?;
    }
    let eps = 1e-9;
    let (xl, xh) = x.dist.truncated_range(eps);
    let (yl, yh) = y.dist.truncated_range(eps);
    let (lo, hi) = (xl.min(yl), xh.max(yh));
    for k in 0..PREMISE_GRID {
        let t = lo + (hi - lo) * k as f64 / (PREMISE_GRID - 1) as f64;
        let (fx, fy) = (x.dist.cdf(t), y.dist.cdf(t));
        if fx + MONOTONE_SLACK < fy {
            return Err(Error::PremiseViolated(format!(
                "F_{}({t}) = {fx} < F_{}({t}) = {fy}",
                x.label, y.label
            )));
        }
    }

    let mut violations = Vec::new();
    for &a in alpha_grid {
        let (vx, vy) = (x.value_at_risk(a)?, y.value_at_risk(a)?);
        if vx > vy + MONOTONE_SLACK * vy.abs().max(1.0) {
            violations.push((a, vx, vy));
        }
    }
    Ok(MonotoneReport { alphas_checked: alpha_grid.len(), violations })
}
