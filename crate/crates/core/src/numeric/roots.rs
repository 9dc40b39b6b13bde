//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Iteration cap shared by every solver in the crate.
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn at(&self, x: f64) -> f64 {
        self.abs + self.rel * x.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-14, 4.0 * f64::EPSILON)
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Falls back to bisection whenever the interpolated step leaves the bracket
/// or shrinks too slowly. `f` may itself fail; its error is propagated.
pub fn brent<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "root not bracketed by [{a}, {b}] (f = {fa}, {fb})"
        )));
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 0.5 * tol.at(b) + f64::EPSILON * b.abs();
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b)?;
    }

    Err(Error::NonConvergence(format!(
        "Brent iteration exceeded {MAX_ITERATIONS} steps near {b}"
    )))
}

/// Bisection for a non-decreasing `f` on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
///
/// Stops once the bracket is within `tol` or no representable midpoint remains.
pub fn bisect_increasing<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol.at(mid) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!(
        "bisection exceeded {MAX_ITERATIONS} steps on [{lo}, {hi}]"
    )))
}

/// Widens `[lo, hi]` by doubling its width outward until the non-decreasing
/// `f` satisfies `f(lo) <= 0 <= f(hi)`. `floor`/`ceil` bound the search.
pub fn expand_bracket<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    floor: f64,
    ceil: f64,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut width = (hi - lo).abs().max(1.0);
    for _ in 0..MAX_ITERATIONS {
        let flo = f(lo)?;
        if flo <= 0.0 {
            break;
        }
        if lo <= floor {
            return Err(Error::NonConvergence(format!(
                "cannot bracket root from below (reached {lo})"
            )));
        }
        hi = lo;
        lo = (lo - width).max(floor);
        width *= 2.0;
    }
    let mut width = (hi - lo).abs().max(1.0);
    for _ in 0..MAX_ITERATIONS {
        let fhi = f(hi)?;
        if fhi >= 0.0 {
            return Ok((lo, hi));
        }
        if hi >= ceil {
            return Err(Error::NonConvergence(format!(
                "cannot bracket root from above (reached {hi})"
            )));
        }
        lo = hi;
        hi = (hi + width).min(ceil);
        width *= 2.0;
    }
    Err(Error::NonConvergence("bracket expansion exceeded its cap".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn brent_handles_steep_cubic() {
        let r = brent(|x| Ok((x - 1e3).powi(3)), 0.0, 5e3, Tolerance::default()).unwrap();
        assert!((r - 1e3).abs() < 1e-3);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        let err = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, Tolerance::default()).unwrap_err();
        assert_eq!(err.name(), "DomainError");
    }

    #[test]
    fn brent_propagates_evaluation_errors() {
        let err = brent(
            |_| Err(Error::NonConvergence("inner".into())),
            0.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap_err();
        assert_eq!(err.name(), "NonConvergence");
    }

    #[test]
    fn bisection_solves_monotone_equation() {
        // x + x^2 = 6 has root 2 on the positive axis
        let r = bisect_increasing(|x| x + x * x - 6.0, 0.0, 10.0, Tolerance::default()).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
    }

    #[test]
    fn expansion_reaches_distant_root() {
        let (lo, hi) = expand_bracket(|x| Ok(x - 1e6), 0.0, 1.0, f64::MIN, f64::MAX).unwrap();
        assert!(lo <= 1e6 && 1e6 <= hi);
        let (lo, hi) = expand_bracket(|x| Ok(x + 50.0), 0.0, 1.0, f64::MIN, f64::MAX).unwrap();
        assert!(lo <= -50.0 && -50.0 <= hi);
    }
}
