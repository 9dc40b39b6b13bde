use super::ConvolutionSettings;
use crate::distributions::{normal, Distribution, DistributionSpec};
use crate::error::{check_open_unit, Error, Result};
use crate::numeric::{brent, expand_bracket, integrate_piecewise, Tolerance};
use crate::risk_measures::LossPosition;

/// Pairs whose sum has a closed-form distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ClosedForm {
    /// Two unit Pareto(1, 1): F_S(s) = 1 − 2/s − (2/s²)·log(s − 1) for s > 2.
    UnitPareto,
    /// Two Exponential(r): S ~ Gamma(2, r).
    ExponentialPair { rate: f64 },
    /// Two Normals: S ~ Normal(μ₁ + μ₂, √(σ₁² + σ₂²)).
    NormalPair { mu: f64, sigma: f64 },
}

impl ClosedForm {
    fn detect(x: &Distribution, y: &Distribution) -> Option<Self> {
        match (x.spec(), y.spec()) {
            (
                DistributionSpec::Pareto { beta: 1.0, delta: 1.0 },
                DistributionSpec::Pareto { beta: 1.0, delta: 1.0 },
            ) => Some(ClosedForm::UnitPareto),
            (DistributionSpec::Exponential { rate: r1 }, DistributionSpec::Exponential { rate: r2 }) if r1 == r2 => {
                Some(ClosedForm::ExponentialPair { rate: *r1 })
            }
            (DistributionSpec::Normal { mu: m1, sigma: s1 }, DistributionSpec::Normal { mu: m2, sigma: s2 }) => {
                Some(ClosedForm::NormalPair { mu: m1 + m2, sigma: s1.hypot(*s2) })
            }
            _ => None,
        }
    }

    fn cdf(self, s: f64) -> f64 {
        match self {
            ClosedForm::UnitPareto => {
                if s <= 2.0 {
                    0.0
                } else {
                    1.0 - 2.0 / s - 2.0 / (s * s) * (s - 1.0).ln()
                }
            }
            ClosedForm::ExponentialPair { rate } => {
                if s <= 0.0 {
                    0.0
                } else {
                    let t = rate * s;
                    -(-t).exp_m1() - t * (-t).exp()
                }
            }
            ClosedForm::NormalPair { mu, sigma } => normal::std_cdf((s - mu) / sigma),
        }
    }

    fn sf(self, s: f64) -> f64 {
        match self {
            ClosedForm::UnitPareto => {
                if s <= 2.0 {
                    1.0
                } else {
                    2.0 / s + 2.0 / (s * s) * (s - 1.0).ln()
                }
            }
            ClosedForm::ExponentialPair { rate } => {
                if s <= 0.0 {
                    1.0
                } else {
                    let t = rate * s;
                    (-t).exp() * (1.0 + t)
                }
            }
            ClosedForm::NormalPair { mu, sigma } => normal::std_sf((s - mu) / sigma),
        }
    }
}

/// Orders the pair canonically so that `F_{X+Y}` and `F_{Y+X}` run the same
/// arithmetic and agree bit for bit.
fn canonical<'a>(x: &'a Distribution, y: &'a Distribution) -> (&'a Distribution, &'a Distribution) {
    match y.partial_cmp(x) {
        Some(std::cmp::Ordering::Less) => (y, x),
        _ => (x, y),
    }
}

fn closed_form(x: &Distribution, y: &Distribution, settings: &ConvolutionSettings) -> Option<ClosedForm> {
    if settings.use_fast_paths {
        ClosedForm::detect(x, y)
    } else {
        None
    }
}

/// Levels at which the integration range is cut so every piece sees a
/// well-scaled integrand even for heavy tails.
const CUT_LEVELS: [f64; 13] = [
    1e-6, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8, 1.0 - 1e-10,
];

/// Breakpoints of `[lo, hi]`: quantiles of `X` plus the points `t = s − q_Y(u)`
/// where the factor in `Y` changes fastest.
fn breakpoints(x: &Distribution, y: &Distribution, s: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut cuts = vec![lo, hi];
    for u in CUT_LEVELS {
        cuts.push(x.quantile_unchecked(u));
        cuts.push(s - y.quantile_unchecked(u));
    }
    cuts.retain(|c| c.is_finite() && *c >= lo && *c <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Numerical `∫ F_Y(s − t) f_X(t) dt` (or the survival counterpart).
fn convolve(x: &Distribution, y: &Distribution, s: f64, settings: &ConvolutionSettings, upper: bool) -> Result<f64> {
    let (a, b) = x.truncated_range(settings.truncation_epsilon);
    // F_Y(s − t) vanishes once s − t drops below the support of Y
    let cut = s - y.support().lower;
    let stop = b.min(cut);
    let tail = if upper && cut.is_finite() { x.sf(cut.max(a)) } else { 0.0 };
    if stop <= a {
        return Ok(if upper { tail.max(x.sf(a)) } else { 0.0 });
    }
    let cuts = breakpoints(x, y, s, a, stop);
    let integral = if upper {
        integrate_piecewise(|t| y.sf(s - t) * x.pdf(t), &cuts, settings.abs_tolerance, settings.max_subdivisions)?
    } else {
        integrate_piecewise(|t| y.cdf(s - t) * x.pdf(t), &cuts, settings.abs_tolerance, settings.max_subdivisions)?
    };
    Ok((integral + tail).clamp(0.0, 1.0))
}

/// P(X + Y <= s) for independent `X`, `Y`.
///
/// Closed forms are used for the unit Pareto, equal-rate Exponential and
/// Normal pairs unless `settings.use_fast_paths` is off; everything else goes
/// through adaptive quadrature of `F_Y(s − t) f_X(t)` over the truncated
/// support of `X`.
pub fn independent_sum_cdf(x: &LossPosition, y: &LossPosition, s: f64, settings: &ConvolutionSettings) -> Result<f64> {
    settings.validate()?;
    let (x, y) = canonical(&x.dist, &y.dist);
    if let Some(cf) = closed_form(x, y, settings) {
        return Ok(cf.cdf(s));
    }
    convolve(x, y, s, settings, false)
}

/// P(X + Y > s), accurate in the right tail where `1 − cdf` cancels.
pub fn independent_sum_sf(x: &LossPosition, y: &LossPosition, s: f64, settings: &ConvolutionSettings) -> Result<f64> {
    settings.validate()?;
    let (x, y) = canonical(&x.dist, &y.dist);
    if let Some(cf) = closed_form(x, y, settings) {
        return Ok(cf.sf(s));
    }
    convolve(x, y, s, settings, true)
}

/// `F_S(s) − α`, evaluated through the survival function above the median
/// so the sign stays reliable as α approaches 1.
pub(crate) fn sum_level_gap(
    x: &LossPosition,
    y: &LossPosition,
    s: f64,
    alpha: f64,
    settings: &ConvolutionSettings,
) -> Result<f64> {
    if alpha <= 0.5 {
        Ok(independent_sum_cdf(x, y, s, settings)? - alpha)
    } else {
        Ok((1.0 - alpha) - independent_sum_sf(x, y, s, settings)?)
    }
}

/// VaR_α(X + Y) for independent `X`, `Y`: the root of `F_S(s) = α`.
///
/// Normal pairs return `μ₁ + μ₂ + √(σ₁² + σ₂²)·Φ⁻¹(α)` directly. Otherwise the
/// root is bracketed from `[q_X(α) + q_Y(ε), q_X(1−ε) + q_Y(1−ε)]`, widened by
/// doubling if needed, and refined with Brent's method.
pub fn independent_var(x: &LossPosition, y: &LossPosition, alpha: f64, settings: &ConvolutionSettings) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    settings.validate()?;
    if let Some(ClosedForm::NormalPair { mu, sigma }) = closed_form(&x.dist, &y.dist, settings) {
        return Ok(mu + sigma * normal::std_quantile(alpha));
    }
    let eps = settings.truncation_epsilon;
    let (dx, dy) = (&x.dist, &y.dist);
    let lo = dx.quantile_unchecked(alpha) + dy.quantile_unchecked(eps);
    let hi = dx.quantile_unchecked(1.0 - eps) + dy.quantile_unchecked(1.0 - eps);
    let floor = dx.support().lower + dy.support().lower;
    let floor = if floor.is_finite() { floor } else { f64::MIN };
    let gap = |s: f64| sum_level_gap(x, y, s, alpha, settings);
    let (lo, hi) = expand_bracket(gap, lo.max(floor), hi.max(lo), floor, f64::MAX)?;
    let root = brent(gap, lo, hi, Tolerance::new(0.0, 1e-14))?;

    let residual = gap(root)?.abs();
    if residual > 10.0 * settings.abs_tolerance {
        return Err(Error::NonConvergence(format!(
            "VaR root at {root} leaves |F_S - alpha| = {residual:e} above {:e}",
            10.0 * settings.abs_tolerance
        )));
    }
    Ok(root)
}
