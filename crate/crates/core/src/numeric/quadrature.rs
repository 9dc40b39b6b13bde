//! Globally adaptive Simpson quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Panels each interval is cut into before adaptation starts, so that narrow
/// peaks are not missed by the first estimate.
const INITIAL_PANELS: usize = 16;

/// A panel with its five equally spaced samples, the Richardson-corrected
/// two-half Simpson value and the size of that correction as error estimate.
struct Panel {
    a: f64,
    b: f64,
    f: [f64; 5],
    value: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let halves = (b - a) / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb);
        let diff = halves - whole;
        let mut error = diff.abs() / 15.0;
        // too narrow to split any further: take what we have
        if 0.5 * (a + m) <= a || 0.5 * (m + b) >= b {
            error = 0.0;
        }
        Panel { a, b, f: [fa, flm, fm, frm, fb], value: halves + diff / 15.0, error }
    }

    fn split<F: Fn(f64) -> f64>(&self, f: &F) -> (Panel, Panel) {
        let m = 0.5 * (self.a + self.b);
        let [fa, flm, fm, frm, fb] = self.f;
        (Panel::new(f, self.a, m, fa, flm, fm), Panel::new(f, m, self.b, fm, frm, fb))
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// The panel with the largest error estimate is bisected until the estimates
/// add up to at most `abs_tol`. Fails with `NonConvergence` after
/// `max_subdivisions` splits.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64, max_subdivisions: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_piecewise(f, &[a, b], abs_tol, max_subdivisions)
}

/// Integrates over consecutive pieces `[cuts[i], cuts[i + 1]]` as one problem:
/// the tolerance and the split budget are shared by all pieces.
pub fn integrate_piecewise<F>(f: F, cuts: &[f64], abs_tol: f64, max_subdivisions: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if let Some(&c) = cuts.iter().find(|c| !c.is_finite()) {
        return Err(Error::Domain(format!("integration bounds must be finite, got {c}")));
    }
    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let step = (b - a) / INITIAL_PANELS as f64;
        let mut left = a;
        let mut f_left = f(a);
        for i in 0..INITIAL_PANELS {
            let right = if i + 1 == INITIAL_PANELS { b } else { a + step * (i + 1) as f64 };
            let f_right = f(right);
            heap.push(Panel::new(&f, left, right, f_left, f(0.5 * (left + right)), f_right));
            left = right;
            f_left = f_right;
        }
    }

    let mut splits = 0;
    loop {
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if !error.is_finite() {
            return Err(Error::NonConvergence("integrand not finite on the integration range".into()));
        }
        if error <= abs_tol {
            break;
        }
        if splits == max_subdivisions {
            let worst = heap.peek().expect("non-empty while error > 0");
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature exceeded {max_subdivisions} subdivisions, estimated error {error:e} > {abs_tol:e}, worst panel [{}, {}]",
                worst.a, worst.b
            )));
        }
        // split a batch before summing again; the sum is linear in the heap size
        let batch = (heap.len() / 8).clamp(1, max_subdivisions - splits);
        for _ in 0..batch {
            let worst = heap.pop().expect("non-empty while error > 0");
            let (l, r) = worst.split(&f);
            heap.push(l);
            heap.push(r);
        }
        splits += batch;
    }
    Ok(heap.iter().map(|p| p.value).sum())
}
