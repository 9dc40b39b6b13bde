//! C ABI for `varisk`.
//!
//! Distributions live behind opaque `VariskDistribution` handles created by
//! the `varisk_distribution_*` constructors and released with
//! [`varisk_distribution_free`]. Every fallible call returns a
//! [`VariskStatus`] and writes its result through an out-pointer; on failure
//! [`varisk_last_error_message`] describes what went wrong. Settings pointers
//! may be NULL to mean the defaults.

mod status;

use std::ffi::{c_char, CStr};

use varisk::aggregation::{
    comonotone_var, independent_sum_cdf, independent_var, mc_var_oracle_components, AggregateSum,
    ConvolutionSettings, Dependence,
};
use varisk::diversification::{self, Verdict};
use varisk::{Distribution, ExcessOfLoss, LossPosition};

pub use status::{varisk_last_error_message, varisk_status_name, VariskStatus};
use status::{guard, Failure};

/// Opaque handle to a validated distribution.
pub struct VariskDistribution {
    inner: Distribution,
}

/// Values for the `dependence` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariskDependence {
    Comonotone = 0,
    Independent = 1,
}

/// Values for [`VariskReport::verdict`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariskVerdict {
    Beneficial = 0,
    Neutral = 1,
    Harmful = 2,
}

/// Numerical knobs of the convolution. Start from [`varisk_settings_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariskSettings {
    pub abs_tolerance: f64,
    pub truncation_epsilon: f64,
    pub max_subdivisions: usize,
    /// Use closed forms for the Pareto(1,1), Exponential and Normal pairs.
    pub use_fast_paths: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariskReport {
    pub alpha: f64,
    pub var_of_sum: f64,
    pub sum_of_vars: f64,
    /// `var_of_sum - sum_of_vars`.
    pub delta: f64,
    pub verdict: VariskVerdict,
    pub tolerance: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariskEggsReport {
    pub n: u64,
    pub theta1: f64,
    pub theta2: f64,
    pub p_loss_single: f64,
    pub p_loss_split: f64,
    pub expected_single: f64,
    pub expected_split: f64,
    pub single_trip_prefers_split: bool,
    pub long_run_prefers_split: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariskMcEstimate {
    pub estimate: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub ci_halfwidth: f64,
    pub samples: usize,
}

impl From<ConvolutionSettings> for VariskSettings {
    fn from(s: ConvolutionSettings) -> Self {
        VariskSettings {
            abs_tolerance: s.abs_tolerance,
            truncation_epsilon: s.truncation_epsilon,
            max_subdivisions: s.max_subdivisions,
            use_fast_paths: s.use_fast_paths,
        }
    }
}

impl From<VariskSettings> for ConvolutionSettings {
    fn from(s: VariskSettings) -> Self {
        ConvolutionSettings {
            abs_tolerance: s.abs_tolerance,
            truncation_epsilon: s.truncation_epsilon,
            max_subdivisions: s.max_subdivisions,
            use_fast_paths: s.use_fast_paths,
        }
    }
}

fn verdict(v: Verdict) -> VariskVerdict {
    match v {
        Verdict::Beneficial => VariskVerdict::Beneficial,
        Verdict::Neutral => VariskVerdict::Neutral,
        Verdict::Harmful => VariskVerdict::Harmful,
    }
}

fn dependence(code: i32) -> Result<Dependence, Failure> {
    match code {
        0 => Ok(Dependence::Comonotone),
        1 => Ok(Dependence::Independent),
        other => Err(Failure::new(VariskStatus::InvalidArgument, format!("unknown dependence code {other}"))),
    }
}

/// # Safety
/// `ptr` is NULL or points to a live handle.
unsafe fn handle<'a>(ptr: *const VariskDistribution, name: &str) -> Result<&'a Distribution, Failure> {
    ptr.as_ref().map(|h| &h.inner).ok_or_else(|| Failure::null(name))
}

/// # Safety
/// `ptr` is NULL or points to a writable `T`.
unsafe fn write<T>(ptr: *mut T, name: &str, value: T) -> Result<(), Failure> {
    let slot = ptr.as_mut().ok_or_else(|| Failure::null(name))?;
    *slot = value;
    Ok(())
}

/// # Safety
/// `ptr` is NULL or points to a readable `VariskSettings`.
unsafe fn settings(ptr: *const VariskSettings) -> Result<ConvolutionSettings, Failure> {
    let s = ptr.as_ref().map_or_else(ConvolutionSettings::default, |s| (*s).into());
    s.validate()?;
    Ok(s)
}

fn position(label: &str, d: &Distribution) -> LossPosition {
    LossPosition::new(label, d.clone())
}

/// # Safety
/// `items` points to `count` handle pointers.
unsafe fn positions(items: *const *const VariskDistribution, count: usize) -> Result<Vec<LossPosition>, Failure> {
    if items.is_null() {
        return Err(Failure::null("components"));
    }
    std::slice::from_raw_parts(items, count)
        .iter()
        .enumerate()
        .map(|(i, &p)| Ok(position(&format!("x{}", i + 1), handle(p, "component")?)))
        .collect()
}

fn boxed(d: Distribution) -> *mut VariskDistribution {
    Box::into_raw(Box::new(VariskDistribution { inner: d }))
}

/// # Safety
/// `out` is NULL or writable.
unsafe fn create(out: *mut *mut VariskDistribution, make: impl FnOnce() -> varisk::Result<Distribution>) -> VariskStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        write(out, "out", boxed(make()?))
    })
}

/// Version of the library, e.g. "0.1.0".
#[no_mangle]
pub extern "C" fn varisk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The default convolution settings.
#[no_mangle]
pub extern "C" fn varisk_settings_default() -> VariskSettings {
    ConvolutionSettings::default().into()
}

/// Pareto with scale `beta` and tail index `delta`.
///
/// # Safety
/// `out` must be NULL or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_pareto(beta: f64, delta: f64, out: *mut *mut VariskDistribution) -> VariskStatus {
    create(out, || Distribution::pareto(beta, delta))
}

/// # Safety
/// As for [`varisk_distribution_pareto`].
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_normal(mu: f64, sigma: f64, out: *mut *mut VariskDistribution) -> VariskStatus {
    create(out, || Distribution::normal(mu, sigma))
}

/// # Safety
/// As for [`varisk_distribution_pareto`].
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_exponential(rate: f64, out: *mut *mut VariskDistribution) -> VariskStatus {
    create(out, || Distribution::exponential(rate))
}

/// # Safety
/// As for [`varisk_distribution_pareto`].
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_gamma(shape: f64, rate: f64, out: *mut *mut VariskDistribution) -> VariskStatus {
    create(out, || Distribution::gamma(shape, rate))
}

/// `scale * inner + offset`. `inner` is copied, not consumed.
///
/// # Safety
/// `inner` must be NULL or a live handle; `out` as for [`varisk_distribution_pareto`].
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_affine(
    inner: *const VariskDistribution,
    scale: f64,
    offset: f64,
    out: *mut *mut VariskDistribution,
) -> VariskStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let inner = handle(inner, "inner")?.clone();
        write(out, "out", boxed(Distribution::affine(inner, scale, offset)?))
    })
}

/// Parses `family:p1,p2` (pareto, normal, exp, gamma) or a JSON object.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` as for
/// [`varisk_distribution_pareto`].
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_parse(text: *const c_char, out: *mut *mut VariskDistribution) -> VariskStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        if text.is_null() {
            return Err(Failure::null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure::new(VariskStatus::InvalidArgument, format!("text is not UTF-8: {e}")))?;
        let d: Distribution = text
            .parse()
            .map_err(|e: varisk::Error| Failure::new(VariskStatus::InvalidArgument, e.to_string()))?;
        write(out, "out", boxed(d))
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `d` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn varisk_distribution_free(d: *mut VariskDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` is NULL or a live handle; `out` is NULL or writable.
unsafe fn scalar(
    d: *const VariskDistribution,
    out: *mut f64,
    f: impl FnOnce(&Distribution) -> varisk::Result<f64>,
) -> VariskStatus {
    guard(|| {
        let value = f(handle(d, "d")?)?;
        write(out, "out", value)
    })
}

/// Distribution function at `x`.
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_cdf(d: *const VariskDistribution, x: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| Ok(d.cdf(x)))
}

/// Survival function `1 - F(x)` at `x`.
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_sf(d: *const VariskDistribution, x: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| Ok(d.sf(x)))
}

/// Density at `x`; zero outside the support.
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_pdf(d: *const VariskDistribution, x: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| Ok(d.pdf(x)))
}

/// Quantile at `u` in (0, 1).
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_quantile(d: *const VariskDistribution, u: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| d.quantile(u))
}

/// VaR at level `alpha` in (0, 1).
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_var(d: *const VariskDistribution, alpha: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| position("x", d).value_at_risk(alpha))
}

/// VaR at `alpha` minus the median.
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_excess_var(d: *const VariskDistribution, alpha: f64, out: *mut f64) -> VariskStatus {
    scalar(d, out, |d| ExcessOfLoss::new(position("x", d)).excess_var(alpha))
}

/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_median(d: *const VariskDistribution, out: *mut f64) -> VariskStatus {
    guard(|| write(out, "out", handle(d, "d")?.median()))
}

/// Fails with `Domain` when the mean is infinite.
///
/// # Safety
/// `d` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_mean(d: *const VariskDistribution, out: *mut f64) -> VariskStatus {
    guard(|| {
        let d = handle(d, "d")?;
        let mean = d
            .mean()
            .ok_or_else(|| Failure::new(VariskStatus::Domain, format!("{} has no finite mean", d.spec().family())))?;
        write(out, "out", mean)
    })
}

/// VaR of the comonotone sum of `count >= 2` components.
///
/// # Safety
/// `components` must point to `count` live handles; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_comonotone_var(
    components: *const *const VariskDistribution,
    count: usize,
    alpha: f64,
    out: *mut f64,
) -> VariskStatus {
    guard(|| {
        let sum = AggregateSum::comonotone(positions(components, count)?)?;
        write(out, "out", comonotone_var(&sum, alpha)?)
    })
}

/// `P(X + Y <= s)` for independent `X` and `Y`.
///
/// # Safety
/// `x`, `y` live handles; `settings` NULL or readable; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_independent_cdf(
    x: *const VariskDistribution,
    y: *const VariskDistribution,
    s: f64,
    settings: *const VariskSettings,
    out: *mut f64,
) -> VariskStatus {
    guard(|| {
        let (x, y) = (position("x", handle(x, "x")?), position("y", handle(y, "y")?));
        write(out, "out", independent_sum_cdf(&x, &y, s, &self::settings(settings)?)?)
    })
}

/// VaR of `X + Y` for independent `X` and `Y`.
///
/// # Safety
/// As for [`varisk_independent_cdf`].
#[no_mangle]
pub unsafe extern "C" fn varisk_independent_var(
    x: *const VariskDistribution,
    y: *const VariskDistribution,
    alpha: f64,
    settings: *const VariskSettings,
    out: *mut f64,
) -> VariskStatus {
    guard(|| {
        let (x, y) = (position("x", handle(x, "x")?), position("y", handle(y, "y")?));
        write(out, "out", independent_var(&x, &y, alpha, &self::settings(settings)?)?)
    })
}

/// VaR of the sum against the sum of VaRs. `dependence` is a
/// [`VariskDependence`] value; `tolerance` sets the neutral band.
///
/// # Safety
/// As for [`varisk_independent_cdf`].
#[no_mangle]
pub unsafe extern "C" fn varisk_compare(
    x: *const VariskDistribution,
    y: *const VariskDistribution,
    dependence: i32,
    alpha: f64,
    settings: *const VariskSettings,
    tolerance: f64,
    out: *mut VariskReport,
) -> VariskStatus {
    guard(|| {
        let (x, y) = (position("x", handle(x, "x")?), position("y", handle(y, "y")?));
        let dep = self::dependence(dependence)?;
        let r = diversification::compare(&x, &y, dep, alpha, &self::settings(settings)?, tolerance)?;
        write(
            out,
            "out",
            VariskReport {
                alpha: r.alpha,
                var_of_sum: r.var_of_sum,
                sum_of_vars: r.sum_of_vars,
                delta: r.delta,
                verdict: verdict(r.verdict),
                tolerance: r.tolerance,
            },
        )
    })
}

/// Levels where VaR of the independent sum equals the sum of VaRs.
///
/// Writes up to `capacity` roots to `roots` and the number found to `count`.
/// If more were found than fit, returns `BufferTooSmall` with `count` set.
///
/// # Safety
/// `x`, `y` live handles; `settings` NULL or readable; `roots` writable for
/// `capacity` doubles (may be NULL when `capacity` is 0); `count` writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_crossover(
    x: *const VariskDistribution,
    y: *const VariskDistribution,
    settings: *const VariskSettings,
    roots: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> VariskStatus {
    guard(|| {
        let (x, y) = (position("x", handle(x, "x")?), position("y", handle(y, "y")?));
        let found = diversification::crossover_alpha(&x, &y, &self::settings(settings)?)?;
        write(count, "count", found.len())?;
        if found.len() > capacity {
            return Err(Failure::new(
                VariskStatus::BufferTooSmall,
                format!("{} roots found, capacity {capacity}", found.len()),
            ));
        }
        if !found.is_empty() {
            if roots.is_null() {
                return Err(Failure::null("roots"));
            }
            std::slice::from_raw_parts_mut(roots, found.len()).copy_from_slice(&found);
        }
        Ok(())
    })
}

/// One basket of `2n` eggs (failure probability `theta1`) against two of `n`
/// (failure probability `theta2` each).
///
/// # Safety
/// `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_eggs(n: u64, theta1: f64, theta2: f64, out: *mut VariskEggsReport) -> VariskStatus {
    guard(|| {
        let r = diversification::eggs_analysis(n, theta1, theta2)?;
        write(
            out,
            "out",
            VariskEggsReport {
                n: r.n,
                theta1: r.theta1,
                theta2: r.theta2,
                p_loss_single: r.p_loss_single,
                p_loss_split: r.p_loss_split,
                expected_single: r.expected_single,
                expected_split: r.expected_split,
                single_trip_prefers_split: r.single_trip_prefers_split,
                long_run_prefers_split: r.long_run_prefers_split,
            },
        )
    })
}

/// Monte Carlo VaR of a sum with a 99% order-statistic interval.
/// Deterministic for a given `seed`; `samples` must be at least 10000.
///
/// # Safety
/// `components` must point to `count` live handles; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn varisk_mc_var(
    components: *const *const VariskDistribution,
    count: usize,
    dependence: i32,
    alpha: f64,
    samples: usize,
    seed: u64,
    out: *mut VariskMcEstimate,
) -> VariskStatus {
    guard(|| {
        let comps = positions(components, count)?;
        let est = mc_var_oracle_components(&comps, self::dependence(dependence)?, alpha, samples, seed)?;
        write(
            out,
            "out",
            VariskMcEstimate {
                estimate: est.estimate,
                ci_lower: est.ci_lower,
                ci_upper: est.ci_upper,
                ci_halfwidth: est.ci_halfwidth,
                samples: est.samples,
            },
        )
    })
}
