//! Continuous loss distributions.
//!
//! [`DistributionSpec`] is the plain serializable description; [`Distribution`]
//! is a spec that passed parameter validation and carries every evaluation
//! (distribution function, survival function, density, quantile, median,
//! mean, inverse-transform sampling). All families have a distribution
//! function that is strictly increasing on the interior of their support.

pub mod normal;
mod support;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{check_open_unit, Error, Result};
use crate::numeric::{brent, expand_bracket, Tolerance};
use crate::stream::UniformStream;

pub use support::Support;

/// Mass cut from each infinite tail when a finite interval is required.
pub const TRUNCATION_EPSILON: f64 = 1e-12;

/// Relative nudge off an open lower endpoint with bounded density.
const OPEN_ENDPOINT_NUDGE: f64 = 1e-14;

/// Serializable description of a loss distribution.
///
/// JSON form: `{"family": "pareto", "beta": 1.0, "delta": 1.0}`; the affine
/// wrapper nests its inner description under `"inner"`.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionSpec {
    Pareto { beta: f64, delta: f64 },
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Affine { inner: Box<DistributionSpec>, scale: f64, offset: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        fn positive(what: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be a positive finite number, got {v}")))
            }
        }
        fn finite(what: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be finite, got {v}")))
            }
        }
        match self {
            DistributionSpec::Pareto { beta, delta } => {
                positive("pareto beta", *beta)?;
                positive("pareto delta", *delta)
            }
            DistributionSpec::Normal { mu, sigma } => {
                finite("normal mu", *mu)?;
                positive("normal sigma", *sigma)
            }
            DistributionSpec::Exponential { rate } => positive("exponential rate", *rate),
            DistributionSpec::Gamma { shape, rate } => {
                positive("gamma shape", *shape)?;
                positive("gamma rate", *rate)
            }
            DistributionSpec::Affine { inner, scale, offset } => {
                inner.validate()?;
                positive("affine scale", *scale)?;
                finite("affine offset", *offset)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            DistributionSpec::Pareto { .. } => "pareto",
            DistributionSpec::Normal { .. } => "normal",
            DistributionSpec::Exponential { .. } => "exponential",
            DistributionSpec::Gamma { .. } => "gamma",
            DistributionSpec::Affine { .. } => "affine",
        }
    }
}

/// A validated [`DistributionSpec`]. Immutable; cheap to clone.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub struct Distribution {
    spec: DistributionSpec,
}

impl TryFrom<DistributionSpec> for Distribution {
    type Error = Error;

    fn try_from(spec: DistributionSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Distribution { spec })
    }
}

impl From<Distribution> for DistributionSpec {
    fn from(d: Distribution) -> Self {
        d.spec
    }
}

/// Parses the inline form `family:p1[,p2]` (`pareto:beta,delta`,
/// `normal:mu,sigma`, `exp:rate` or `exponential:rate`, `gamma:shape,rate`)
/// or a JSON object in the [`DistributionSpec`] schema.
impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| Error::InvalidParameter(format!("bad distribution JSON: {e}")));
        }
        let (family, params) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("expected family:p1,p2, got '{text}'")))?;
        let params = params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("'{p}' is not a number in '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{family} takes {n} parameter(s), got {} in '{text}'",
                    params.len()
                )))
            }
        };
        match family.trim().to_ascii_lowercase().as_str() {
            "pareto" => arity(2).and_then(|_| Distribution::pareto(params[0], params[1])),
            "normal" => arity(2).and_then(|_| Distribution::normal(params[0], params[1])),
            "exp" | "exponential" => arity(1).and_then(|_| Distribution::exponential(params[0])),
            "gamma" => arity(2).and_then(|_| Distribution::gamma(params[0], params[1])),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

impl Distribution {
    pub fn new(spec: DistributionSpec) -> Result<Self> {
        Self::try_from(spec)
    }

    pub fn pareto(beta: f64, delta: f64) -> Result<Self> {
        Self::new(DistributionSpec::Pareto { beta, delta })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(DistributionSpec::Normal { mu, sigma })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(DistributionSpec::Exponential { rate })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(DistributionSpec::Gamma { shape, rate })
    }

    /// Distribution of `scale * X + offset`.
    pub fn affine(inner: Distribution, scale: f64, offset: f64) -> Result<Self> {
        Self::new(DistributionSpec::Affine { inner: Box::new(inner.spec), scale, offset })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn support(&self) -> Support {
        support_of(&self.spec)
    }

    /// P(X <= x). Clamps to 0 / 1 outside the support.
    pub fn cdf(&self, x: f64) -> f64 {
        cdf(&self.spec, x)
    }

    /// P(X > x), evaluated without the `1 - cdf` cancellation in the right tail.
    pub fn sf(&self, x: f64) -> f64 {
        sf(&self.spec, x)
    }

    /// Density; zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        pdf(&self.spec, x)
    }

    /// Inverse of the distribution function on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        check_open_unit("u", u)?;
        Ok(quantile(&self.spec, u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        quantile(&self.spec, u)
    }

    pub fn median(&self) -> f64 {
        median(&self.spec)
    }

    /// `None` when the mean does not exist (Pareto with tail index at most 1).
    pub fn mean(&self) -> Option<f64> {
        mean(&self.spec)
    }

    /// Finite interval carrying all but at most `eps` of the mass in each
    /// infinite tail; used wherever quadrature needs finite limits.
    pub fn truncated_range(&self, eps: f64) -> (f64, f64) {
        (self.integration_floor(eps), quantile(&self.spec, 1.0 - eps))
    }

    fn integration_floor(&self, eps: f64) -> f64 {
        floor_of(&self.spec, eps)
    }

    /// `n` draws by inverse transform from uniform stream 0 of `seed`.
    ///
    /// Stream 0 is shared by every family, so two distributions sampled with
    /// the same seed are driven by the same uniforms.
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::Domain("sample size must be at least 1".into()));
        }
        Ok(self.sample_stream(UniformStream::new(seed, 0), n))
    }

    pub(crate) fn sample_stream(&self, stream: UniformStream, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        stream.fill(0, &mut out);
        for v in &mut out {
            *v = quantile(&self.spec, *v);
        }
        out
    }
}

fn support_of(spec: &DistributionSpec) -> Support {
    match spec {
        DistributionSpec::Pareto { beta, .. } => Support::half_line(*beta, false),
        DistributionSpec::Normal { .. } => Support::REAL_LINE,
        DistributionSpec::Exponential { .. } => Support::half_line(0.0, true),
        DistributionSpec::Gamma { .. } => Support::half_line(0.0, false),
        DistributionSpec::Affine { inner, scale, offset } => support_of(inner).affine_image(*scale, *offset),
    }
}

fn cdf(spec: &DistributionSpec, x: f64) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, delta } => {
            if x <= *beta {
                0.0
            } else {
                -((*delta) * (beta / x).ln()).exp_m1()
            }
        }
        DistributionSpec::Normal { mu, sigma } => normal::std_cdf((x - mu) / sigma),
        DistributionSpec::Exponential { rate } => {
            if x <= 0.0 {
                0.0
            } else {
                -(-rate * x).exp_m1()
            }
        }
        DistributionSpec::Gamma { shape, rate } => {
            if x <= 0.0 {
                0.0
            } else if x.is_infinite() {
                1.0
            } else {
                gamma_lr(*shape, rate * x)
            }
        }
        DistributionSpec::Affine { inner, scale, offset } => cdf(inner, (x - offset) / scale),
    }
}

fn sf(spec: &DistributionSpec, x: f64) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, delta } => {
            if x <= *beta {
                1.0
            } else {
                (beta / x).powf(*delta)
            }
        }
        DistributionSpec::Normal { mu, sigma } => normal::std_sf((x - mu) / sigma),
        DistributionSpec::Exponential { rate } => {
            if x <= 0.0 {
                1.0
            } else {
                (-rate * x).exp()
            }
        }
        DistributionSpec::Gamma { shape, rate } => {
            if x <= 0.0 {
                1.0
            } else if x.is_infinite() {
                0.0
            } else {
                gamma_ur(*shape, rate * x)
            }
        }
        DistributionSpec::Affine { inner, scale, offset } => sf(inner, (x - offset) / scale),
    }
}

fn pdf(spec: &DistributionSpec, x: f64) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, delta } => {
            if x <= *beta || x.is_infinite() {
                0.0
            } else {
                delta / x * (beta / x).powf(*delta)
            }
        }
        DistributionSpec::Normal { mu, sigma } => normal::std_pdf((x - mu) / sigma) / sigma,
        DistributionSpec::Exponential { rate } => {
            if x < 0.0 {
                0.0
            } else {
                rate * (-rate * x).exp()
            }
        }
        DistributionSpec::Gamma { shape, rate } => {
            if x <= 0.0 || x.is_infinite() {
                0.0
            } else {
                (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(*shape)).exp()
            }
        }
        DistributionSpec::Affine { inner, scale, offset } => pdf(inner, (x - offset) / scale) / scale,
    }
}

fn quantile(spec: &DistributionSpec, u: f64) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, delta } => beta * (1.0 - u).powf(-1.0 / delta),
        DistributionSpec::Normal { mu, sigma } => mu + sigma * normal::std_quantile(u),
        DistributionSpec::Exponential { rate } => -(-u).ln_1p() / rate,
        DistributionSpec::Gamma { shape, rate } => gamma_quantile(*shape, *rate, u),
        DistributionSpec::Affine { inner, scale, offset } => scale * quantile(inner, u) + offset,
    }
}

/// Inverts the regularized incomplete gamma function. The right half is solved
/// on the survival function so that upper-tail levels keep relative accuracy.
fn gamma_quantile(shape: f64, rate: f64, u: f64) -> f64 {
    let upper = u > 0.5;
    let target = if upper { 1.0 - u } else { u };
    let g = |x: f64| -> Result<f64> {
        if x <= 0.0 {
            return Ok(if upper { target - 1.0 } else { -target });
        }
        Ok(if upper { target - gamma_ur(shape, x) } else { gamma_lr(shape, x) - target })
    };
    let start = shape.max(1.0);
    let solve = || -> Result<f64> {
        let (lo, hi) = expand_bracket(g, 0.0, start, 0.0, f64::MAX)?;
        brent(g, lo, hi, Tolerance::new(1e-300, 4.0 * f64::EPSILON))
    };
    // the bracket is always reachable for a valid shape, so failure means NaN input
    solve().map(|x| x / rate).unwrap_or(f64::NAN)
}

fn median(spec: &DistributionSpec) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, delta } => 2f64.powf(1.0 / delta) * beta,
        DistributionSpec::Normal { mu, .. } => *mu,
        DistributionSpec::Exponential { rate } => std::f64::consts::LN_2 / rate,
        DistributionSpec::Gamma { .. } => quantile(spec, 0.5),
        DistributionSpec::Affine { inner, scale, offset } => scale * median(inner) + offset,
    }
}

fn mean(spec: &DistributionSpec) -> Option<f64> {
    match spec {
        DistributionSpec::Pareto { beta, delta } => (*delta > 1.0).then(|| beta * delta / (delta - 1.0)),
        DistributionSpec::Normal { mu, .. } => Some(*mu),
        DistributionSpec::Exponential { rate } => Some(1.0 / rate),
        DistributionSpec::Gamma { shape, rate } => Some(shape / rate),
        DistributionSpec::Affine { inner, scale, offset } => mean(inner).map(|m| scale * m + offset),
    }
}

fn floor_of(spec: &DistributionSpec, eps: f64) -> f64 {
    match spec {
        DistributionSpec::Pareto { beta, .. } => beta * (1.0 + OPEN_ENDPOINT_NUDGE),
        DistributionSpec::Exponential { .. } => 0.0,
        DistributionSpec::Normal { .. } | DistributionSpec::Gamma { .. } => quantile(spec, eps),
        DistributionSpec::Affine { inner, scale, offset } => scale * floor_of(inner, eps) + offset,
    }
}
