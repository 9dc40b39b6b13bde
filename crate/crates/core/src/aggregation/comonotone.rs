use super::{AggregateSum, Dependence, MonotoneMap};
use crate::error::{check_open_unit, Error, Result};
use crate::numeric::{bisect_increasing, brent, expand_bracket, Tolerance};
use crate::risk_measures::LossPosition;
use crate::stream::UniformStream;

/// VaR of a comonotone sum: the sum of the component VaRs.
///
/// For more than two components this is the same argument applied
/// inductively, every component being a non-decreasing function of one
/// common uniform.
pub fn comonotone_var(sum: &AggregateSum, alpha: f64) -> Result<f64> {
    if sum.dependence() != Dependence::Comonotone {
        return Err(Error::Domain("comonotone_var needs a comonotone aggregate".into()));
    }
    check_open_unit("alpha", alpha)?;
    sum.components().iter().map(|c| c.value_at_risk(alpha)).sum()
}

/// `x + g(x)` evaluated at the lower end of the support of `x`.
fn sum_infimum(x: &LossPosition, g: &MonotoneMap) -> f64 {
    let lower = x.dist.support().lower;
    if lower.is_finite() {
        lower + g.apply(lower)
    } else {
        f64::NEG_INFINITY
    }
}

/// P(X + g(X) <= s) = F_X(x*) where `x*` solves `x + g(x) = s`.
///
/// `x*` is found by bisection on the support of `X`; the left side is strictly
/// increasing, so the root is unique. Below the range of `x + g(x)` the call
/// fails with `OutOfRange`; at its infimum it returns 0.
pub fn comonotone_sum_cdf(x: &LossPosition, g: &MonotoneMap, s: f64) -> Result<f64> {
    g.check_applicable(&x.dist)?;
    if s.is_nan() {
        return Err(Error::Domain("s is NaN".into()));
    }
    let inf = sum_infimum(x, g);
    if s < inf {
        return Err(Error::OutOfRange(format!("s = {s} lies below the infimum {inf} of x + g(x)")));
    }
    if s == inf {
        return Ok(0.0);
    }
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    let root = solve_sum_equation(x, g, s)?;
    Ok(x.dist.cdf(root))
}

/// Root of `x + g(x) = s` inside the support of `X`.
fn solve_sum_equation(x: &LossPosition, g: &MonotoneMap, s: f64) -> Result<f64> {
    let h = |t: f64| t + g.apply(t) - s;
    let support = x.dist.support();
    let anchor = x.median();

    let lo = if support.lower.is_finite() {
        support.lower
    } else {
        let mut lo = anchor - 1.0;
        let mut step = 1.0;
        let mut steps = 0;
        while h(lo) > 0.0 {
            step *= 2.0;
            lo = anchor - step;
            steps += 1;
            if steps > crate::numeric::MAX_ITERATIONS {
                return Err(Error::NonConvergence(format!("cannot bracket x + g(x) = {s} from below")));
            }
        }
        lo
    };
    let mut hi = anchor.max(lo) + 1.0;
    let mut step = 1.0;
    let mut steps = 0;
    while h(hi) < 0.0 {
        step *= 2.0;
        hi = anchor.max(lo) + step;
        steps += 1;
        if steps > crate::numeric::MAX_ITERATIONS {
            return Err(Error::NonConvergence(format!("cannot bracket x + g(x) = {s} from above")));
        }
    }
    bisect_increasing(h, lo, hi, Tolerance::new(0.0, 2.0 * f64::EPSILON))
}

/// VaR_α(X + g(X)) by inverting [`comonotone_sum_cdf`] numerically.
///
/// Does not use quantile additivity, so comparing it with
/// `VaR_α(X) + g(VaR_α(X))` checks the additivity result along a second route.
pub fn comonotone_var_by_inversion(x: &LossPosition, g: &MonotoneMap, alpha: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    g.check_applicable(&x.dist)?;
    let inf = sum_infimum(x, g);
    let m = x.median();
    let centre = m + g.apply(m);
    let lo = if inf.is_finite() { inf } else { centre - 1.0 };
    let f = |s: f64| -> Result<f64> {
        if s <= inf {
            return Ok(-alpha);
        }
        Ok(comonotone_sum_cdf(x, g, s)? - alpha)
    };
    let (lo, hi) = expand_bracket(f, lo, centre.max(lo) + 1.0, inf.max(f64::MIN), f64::MAX)?;
    brent(f, lo, hi, Tolerance::new(0.0, 4.0 * f64::EPSILON))
}

/// `n` rows of `(F_1⁻¹(U_i), ..., F_k⁻¹(U_i))` with one shared uniform per row.
///
/// The joint law of each row attains the Fréchet–Hoeffding upper bound.
pub fn comonotone_quantile_sample(components: &[LossPosition], seed: u64, n: usize) -> Result<Vec<Vec<f64>>> {
    if components.len() < 2 {
        return Err(Error::Domain(format!("need at least 2 components, got {}", components.len())));
    }
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let mut uniforms = vec![0.0; n];
    UniformStream::new(seed, 0).fill(0, &mut uniforms);
    Ok(uniforms
        .into_iter()
        .map(|u| components.iter().map(|c| c.dist.quantile_unchecked(u)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;

    fn pos(d: Distribution) -> LossPosition {
        LossPosition::new("x", d)
    }

    #[test]
    fn var_is_sum_of_component_vars() {
        let x = pos(Distribution::pareto(1.0, 1.5).unwrap());
        let y = pos(Distribution::pareto(1.0, 0.75).unwrap());
        let s = AggregateSum::comonotone(vec![x, y]).unwrap();
        for a in [0.5, 0.9, 0.99] {
            let want = (1.0f64 - a).powf(-1.0 / 1.5) + (1.0f64 - a).powf(-2.0 / 1.5);
            assert!((comonotone_var(&s, a).unwrap() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn identical_copies_scale_var() {
        let x = pos(Distribution::gamma(2.0, 1.0).unwrap());
        let s = AggregateSum::comonotone(vec![x.clone(); 5]).unwrap();
        for a in [0.1, 0.7, 0.99] {
            let v = comonotone_var(&s, a).unwrap();
            assert!((v - 5.0 * x.value_at_risk(a).unwrap()).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn exponential_pair_at_ninety_percent() {
        let e = pos(Distribution::exponential(1.0).unwrap());
        let s = AggregateSum::comonotone(vec![e.clone(), e]).unwrap();
        assert!((comonotone_var(&s, 0.9).unwrap() - 4.605_170_185_988_091).abs() < 1e-13);
    }

    #[test]
    fn var_rejects_independent_aggregate() {
        let e = pos(Distribution::exponential(1.0).unwrap());
        let s = AggregateSum::independent(e.clone(), e).unwrap();
        assert_eq!(comonotone_var(&s, 0.9).unwrap_err().name(), "DomainError");
    }

    #[test]
    fn sum_cdf_pareto_plus_square_closed_form() {
        let g = MonotoneMap::power(2.0).unwrap();
        for delta in [0.5, 1.0, 2.0] {
            let x = pos(Distribution::pareto(1.0, delta).unwrap());
            for s in [2.5, 6.0, 20.0, 1e3, 1e6] {
                let want = 1.0 - (2.0 / ((1.0f64 + 4.0 * s).sqrt() - 1.0)).powf(delta);
                let got = comonotone_sum_cdf(&x, &g, s).unwrap();
                assert!((got - want).abs() < 1e-13, "delta={delta} s={s}");
            }
        }
        let x = pos(Distribution::pareto(1.0, 1.0).unwrap());
        assert!((comonotone_sum_cdf(&x, &g, 6.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sum_cdf_identity_map_doubles() {
        let id = MonotoneMap::affine(1.0, 0.0).unwrap();
        for d in [
            Distribution::normal(1.0, 3.0).unwrap(),
            Distribution::exponential(2.0).unwrap(),
            Distribution::pareto(2.0, 3.0).unwrap(),
        ] {
            let x = pos(d);
            let m = x.median();
            assert!((comonotone_sum_cdf(&x, &id, 2.0 * m).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn sum_cdf_edges() {
        let g = MonotoneMap::power(2.0).unwrap();
        let x = pos(Distribution::pareto(1.0, 1.0).unwrap());
        assert_eq!(comonotone_sum_cdf(&x, &g, 1.5).unwrap_err().name(), "OutOfRange");
        assert_eq!(comonotone_sum_cdf(&x, &g, 2.0).unwrap(), 0.0);
        assert_eq!(comonotone_sum_cdf(&x, &g, f64::INFINITY).unwrap(), 1.0);
        let n = pos(Distribution::normal(0.0, 1.0).unwrap());
        assert_eq!(comonotone_sum_cdf(&n, &g, 1.0).unwrap_err().name(), "DomainError");
    }

    #[test]
    fn inversion_matches_additivity() {
        let cases = [
            (Distribution::pareto(1.0, 1.0).unwrap(), MonotoneMap::power(2.0).unwrap()),
            (Distribution::exponential(0.5).unwrap(), MonotoneMap::power(1.5).unwrap()),
            (Distribution::gamma(2.0, 1.0).unwrap(), MonotoneMap::power(0.5).unwrap()),
            (Distribution::normal(-2.0, 3.0).unwrap(), MonotoneMap::affine(2.0, 1.0).unwrap()),
        ];
        for (d, g) in cases {
            let x = pos(d);
            for a in [0.05, 0.3, 0.5, 0.9, 0.99, 0.995] {
                let q = x.value_at_risk(a).unwrap();
                let want = q + g.apply(q);
                let got = comonotone_var_by_inversion(&x, &g, a).unwrap();
                assert!(
                    (got - want).abs() <= 1e-8 * want.abs().max(1.0),
                    "{:?} a={a} got={got} want={want}",
                    x.dist.spec()
                );
            }
        }
    }

    #[test]
    fn sample_rows_share_one_uniform() {
        let x = pos(Distribution::pareto(1.0, 1.0).unwrap());
        let rows = comonotone_quantile_sample(&[x.clone(), x], 3, 1000).unwrap();
        assert!(rows.iter().all(|r| r[0] == r[1]));

        let a = pos(Distribution::pareto(1.0, 1.0).unwrap());
        let b = pos(Distribution::pareto(1.0, 0.5).unwrap());
        let rows = comonotone_quantile_sample(&[a, b], 4, 2000).unwrap();
        let mut by_first = rows.clone();
        by_first.sort_by(|p, q| p[0].total_cmp(&q[0]));
        // sorting by one column sorts the other: rank correlation 1
        assert!(by_first.windows(2).all(|w| w[0][1] <= w[1][1]));
    }

    #[test]
    fn sample_rejects_bad_arguments() {
        let x = pos(Distribution::pareto(1.0, 1.0).unwrap());
        assert!(comonotone_quantile_sample(std::slice::from_ref(&x), 0, 10).is_err());
        assert!(comonotone_quantile_sample(&[x.clone(), x], 0, 0).is_err());
    }

    #[test]
    fn sample_attains_upper_bound() {
        let x = pos(Distribution::pareto(1.0, 1.0).unwrap());
        let y = pos(Distribution::pareto(1.0, 0.5).unwrap());
        let n = 100_000;
        let rows = comonotone_quantile_sample(&[x, y], 99, n).unwrap();
        let joint = rows.iter().filter(|r| r[0] <= 2.0 && r[1] <= 4.0).count() as f64 / n as f64;
        assert!((joint - 0.5).abs() < 0.006, "joint = {joint}");
    }
}
