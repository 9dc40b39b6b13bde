use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, DistributionSpec, Support};
use crate::error::{Error, Result};

/// A strictly increasing map `g` with a closed-form inverse. `Y = g(X)` makes
/// `X` and `Y` comonotone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapKind {
    /// `x^exponent` on the positive half-line.
    Power { exponent: f64 },
    /// `slope * x + intercept` on the real line.
    Affine { slope: f64, intercept: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneMap {
    kind: MapKind,
    domain: Support,
}

impl MonotoneMap {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!("power exponent must be positive, got {exponent}")));
        }
        Ok(Self { kind: MapKind::Power { exponent }, domain: Support::half_line(0.0, false) })
    }

    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        if !(slope > 0.0 && slope.is_finite()) || !intercept.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "affine map needs positive slope and finite intercept, got {slope}, {intercept}"
            )));
        }
        Ok(Self { kind: MapKind::Affine { slope, intercept }, domain: Support::REAL_LINE })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn domain(&self) -> Support {
        self.domain
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Power { exponent } => x.powf(exponent),
            MapKind::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match self.kind {
            MapKind::Power { exponent } => y.powf(1.0 / exponent),
            MapKind::Affine { slope, intercept } => (y - intercept) / slope,
        }
    }

    /// Checks that the support of `dist` lies inside the map's domain.
    pub fn check_applicable(&self, dist: &Distribution) -> Result<()> {
        let s = dist.support();
        let inside = match self.kind {
            MapKind::Power { .. } => s.is_positive(),
            MapKind::Affine { .. } => true,
        };
        if inside {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "support [{}, {}] of {} is not inside the map's domain",
                s.lower,
                s.upper,
                dist.spec().family()
            )))
        }
    }

    /// Distribution of `g(X)` when it stays inside the supported families:
    /// affine maps of anything, and powers of a Pareto variable
    /// (`Pareto(β, δ)^k = Pareto(β^k, δ/k)`).
    pub fn image_distribution(&self, dist: &Distribution) -> Option<Distribution> {
        match (self.kind, dist.spec()) {
            (MapKind::Affine { slope, intercept }, _) => Distribution::affine(dist.clone(), slope, intercept).ok(),
            (MapKind::Power { exponent }, DistributionSpec::Pareto { beta, delta }) => {
                Distribution::pareto(beta.powf(exponent), delta / exponent).ok()
            }
            (MapKind::Power { exponent: 1.0 }, _) => Some(dist.clone()),
            _ => None,
        }
    }
}
