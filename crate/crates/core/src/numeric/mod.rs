//! Root finding and quadrature used by the aggregation engine.

pub mod quadrature;
pub mod roots;

pub use quadrature::{adaptive_simpson, integrate_piecewise};
pub use roots::{bisect_increasing, brent, expand_bracket, Tolerance, MAX_ITERATIONS};
