//! Is pooling two risks good for VaR?
//!
//! [`compare`] measures `VaR_α(X + Y) − (VaR_α(X) + VaR_α(Y))` and turns its
//! sign into a verdict. [`crossover_alpha`] finds the levels where the verdict
//! flips for an independent pair, and [`g_curve`] tabulates
//! `g(α) = F_{X+Y}(VaR_α(X) + VaR_α(Y))`, whose fixed points are those levels.
//! [`eggs_analysis`] is the discrete one-basket versus two-baskets problem.

use serde::{Deserialize, Serialize};

use crate::aggregation::{independent_sum_cdf, sum_level_gap, AggregateSum, ConvolutionSettings, Dependence};
use crate::error::{check_open_unit, Error, Result};
use crate::numeric::{brent, Tolerance};
use crate::risk_measures::LossPosition;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Grid resolution for the crossover sign scan.
pub const CROSSOVER_GRID: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// VaR of the sum is below the sum of VaRs.
    Beneficial,
    Neutral,
    /// VaR of the sum exceeds the sum of VaRs.
    Harmful,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Beneficial => "beneficial",
            Verdict::Neutral => "neutral",
            Verdict::Harmful => "harmful",
        }
    }

    /// Neutral band is `tolerance · max(1, |sum_of_vars|)` wide on each side.
    pub fn classify(delta: f64, sum_of_vars: f64, tolerance: f64) -> Verdict {
        let band = tolerance * sum_of_vars.abs().max(1.0);
        if delta < -band {
            Verdict::Beneficial
        } else if delta > band {
            Verdict::Harmful
        } else {
            Verdict::Neutral
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversificationReport {
    pub alpha: f64,
    pub var_of_sum: f64,
    pub sum_of_vars: f64,
    /// `var_of_sum − sum_of_vars`.
    pub delta: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

pub fn compare(
    x: &LossPosition,
    y: &LossPosition,
    dependence: Dependence,
    alpha: f64,
    settings: &ConvolutionSettings,
    tolerance: f64,
) -> Result<DiversificationReport> {
    check_open_unit("alpha", alpha)?;
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let sum = AggregateSum::new(vec![x.clone(), y.clone()], dependence)?;
    let var_of_sum = sum.value_at_risk(alpha, settings)?;
    let sum_of_vars = x.value_at_risk(alpha)? + y.value_at_risk(alpha)?;
    let delta = var_of_sum - sum_of_vars;
    Ok(DiversificationReport {
        alpha,
        var_of_sum,
        sum_of_vars,
        delta,
        verdict: Verdict::classify(delta, sum_of_vars, tolerance),
        tolerance,
    })
}

/// `(i + 1/2) / n` for `i = 0..n`: an even grid strictly inside `(0, 1)`.
pub fn open_unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

/// `g(α) − α` through the tail-appropriate form of the distribution function.
fn fixed_point_gap(x: &LossPosition, y: &LossPosition, alpha: f64, settings: &ConvolutionSettings) -> Result<f64> {
    let s = x.value_at_risk(alpha)? + y.value_at_risk(alpha)?;
    sum_level_gap(x, y, s, alpha, settings)
}

/// Levels α where `VaR_α(X + Y) = VaR_α(X) + VaR_α(Y)` for independent `X`, `Y`.
///
/// Scans `g(α) − α` for sign changes on a [`CROSSOVER_GRID`]-point grid and
/// refines each bracket with Brent's method. Returns an empty list when no
/// sign change is seen.
pub fn crossover_alpha(x: &LossPosition, y: &LossPosition, settings: &ConvolutionSettings) -> Result<Vec<f64>> {
    crossover_alpha_on_grid(x, y, settings, CROSSOVER_GRID)
}

pub fn crossover_alpha_on_grid(
    x: &LossPosition,
    y: &LossPosition,
    settings: &ConvolutionSettings,
    grid_points: usize,
) -> Result<Vec<f64>> {
    if grid_points < 2 {
        return Err(Error::Domain(format!("crossover grid needs at least 2 points, got {grid_points}")));
    }
    let grid = open_unit_grid(grid_points);
    let gaps = grid
        .iter()
        .map(|&a| fixed_point_gap(x, y, a, settings))
        .collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if gaps[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && gaps[i + 1] != 0.0 && gaps[i].signum() != gaps[i + 1].signum() {
            let root = brent(
                |a| fixed_point_gap(x, y, a, settings),
                grid[i],
                grid[i + 1],
                Tolerance::new(1e-13, 0.0),
            )?;
            roots.push(root);
        }
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GPoint {
    pub alpha: f64,
    pub g_alpha: f64,
}

/// `g(α) = F_{X+Y}(VaR_α(X) + VaR_α(Y))` on a strictly increasing grid in `(0, 1)`.
pub fn g_curve(
    x: &LossPosition,
    y: &LossPosition,
    alpha_grid: &[f64],
    settings: &ConvolutionSettings,
) -> Result<Vec<GPoint>> {
    for (i, &a) in alpha_grid.iter().enumerate() {
        check_open_unit("alpha", a)?;
        if i > 0 && a <= alpha_grid[i - 1] {
            return Err(Error::Domain("alpha grid must be strictly increasing".into()));
        }
    }
    alpha_grid
        .iter()
        .map(|&alpha| {
            let s = x.value_at_risk(alpha)? + y.value_at_risk(alpha)?;
            Ok(GPoint { alpha, g_alpha: independent_sum_cdf(x, y, s, settings)? })
        })
        .collect()
}

/// CSV with header `alpha,g_alpha`.
pub fn g_curve_csv(points: &[GPoint]) -> String {
    let mut out = String::from("alpha,g_alpha\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.alpha, p.g_alpha));
    }
    out
}

/// Carrying `2n` eggs in one basket (failure probability `theta1`) versus
/// two independent baskets of `n` (failure probability `theta2` each).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggsReport {
    pub n: u64,
    pub theta1: f64,
    pub theta2: f64,
    /// P(some loss) with one basket: `theta1`.
    pub p_loss_single: f64,
    /// P(some loss) with two baskets: `theta2 (2 − theta2)`.
    pub p_loss_split: f64,
    pub expected_single: f64,
    pub expected_split: f64,
    pub single_trip_prefers_split: bool,
    pub long_run_prefers_split: bool,
}

pub fn eggs_analysis(n: u64, theta1: f64, theta2: f64) -> Result<EggsReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_open_unit("theta1", theta1)?;
    check_open_unit("theta2", theta2)?;
    let eggs = 2.0 * n as f64;
    let p_loss_split = theta2 * (2.0 - theta2);
    Ok(EggsReport {
        n,
        theta1,
        theta2,
        p_loss_single: theta1,
        p_loss_split,
        expected_single: eggs * theta1,
        expected_split: eggs * theta2,
        single_trip_prefers_split: p_loss_split < theta1,
        long_run_prefers_split: theta2 < theta1,
    })
}
