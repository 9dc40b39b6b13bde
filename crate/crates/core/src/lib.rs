//! Value-at-Risk for single and aggregated losses.
//!
//! The crate computes VaR of sums `S = X + Y` when the two losses are
//! comonotone (driven by one common uniform) or independent, and classifies
//! whether pooling two risks lowers, keeps or raises VaR at a given level.
//!
//! * [`distributions`]: Pareto, Normal, Exponential, Gamma and affine wrappers.
//! * [`risk_measures`]: VaR, median, excess of loss, and the VaR axioms.
//! * [`aggregation`]: comonotone and independent sums, plus a Monte Carlo oracle.
//! * [`diversification`]: verdicts, crossover levels, the g-curve and the
//!   two-baskets problem.
//! * [`cli`]: the `varisk` command-line front end.

pub mod aggregation;
pub mod cli;
pub mod distributions;
pub mod diversification;
pub mod error;
pub mod numeric;
pub mod risk_measures;
pub mod stream;

pub use aggregation::{AggregateSum, ConvolutionSettings, Dependence, MonotoneMap};
pub use distributions::{Distribution, DistributionSpec, Support};
pub use diversification::{DiversificationReport, EggsReport, Verdict};
pub use error::{Error, Result};
pub use risk_measures::{ExcessOfLoss, LossPosition};
