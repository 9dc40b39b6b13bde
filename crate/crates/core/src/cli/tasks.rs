//! Resolved jobs and the records they print.

use std::cmp::Ordering;

use serde::Serialize;

use crate::aggregation::{
    comonotone_var, independent_var, mc_var_oracle_components, AggregateSum, ConvolutionSettings, Dependence,
};
use crate::distributions::Distribution;
use crate::diversification::{self, compare, crossover_alpha_on_grid, g_curve, open_unit_grid, EggsReport, GPoint};
use crate::error::Result;
use crate::risk_measures::{ExcessOfLoss, LossPosition};

/// One unit of work with its distributions already in hand.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Var { x: LossPosition, alpha: f64 },
    Aggregate { components: Vec<LossPosition>, dependence: Dependence, alpha: f64 },
    Compare { x: LossPosition, y: LossPosition, dependence: Dependence, alpha: f64, tolerance: f64 },
    Crossover { x: LossPosition, y: LossPosition, grid: usize },
    PlotData { x: LossPosition, y: LossPosition, points: usize },
    Eggs { n: u64, theta1: f64, theta2: f64 },
    Oracle { components: Vec<LossPosition>, dependence: Dependence, alpha: f64, samples: usize },
}

/// Shared inputs that are not part of a job.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub settings: ConvolutionSettings,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Var(VarOutcome),
    Aggregate(AggregateOutcome),
    Compare(CompareOutcome),
    Crossover(CrossoverOutcome),
    PlotData(PlotDataOutcome),
    Eggs(EggsOutcome),
    Oracle(OracleOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarOutcome {
    pub command: &'static str,
    pub label: String,
    pub distribution: Distribution,
    pub alpha: f64,
    pub var: f64,
    pub median: f64,
    pub excess_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateOutcome {
    pub command: &'static str,
    pub dependence: Dependence,
    pub alpha: f64,
    pub components: Vec<Distribution>,
    pub component_vars: Vec<f64>,
    pub var_of_sum: f64,
    pub sum_of_vars: f64,
    pub median_sum: f64,
    pub excess_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareOutcome {
    pub command: &'static str,
    pub dependence: Dependence,
    #[serde(flatten)]
    pub report: diversification::DiversificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverOutcome {
    pub command: &'static str,
    pub dependence: Dependence,
    pub grid_points: usize,
    pub crossovers: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotDataOutcome {
    pub command: &'static str,
    pub points: Vec<GPoint>,
}

/// Which way a comparison leans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preference {
    Split,
    Single,
    Indifferent,
}

impl Preference {
    /// Split wins when its loss measure is smaller.
    fn from_losses(split: f64, single: f64) -> Self {
        match split.partial_cmp(&single) {
            Some(Ordering::Less) => Preference::Split,
            Some(Ordering::Greater) => Preference::Single,
            _ => Preference::Indifferent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EggsOutcome {
    pub command: &'static str,
    #[serde(flatten)]
    pub report: EggsReport,
    pub single_trip: Preference,
    pub long_run: Preference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub command: &'static str,
    pub dependence: Dependence,
    pub alpha: f64,
    pub seed: u64,
    pub samples: usize,
    pub estimate: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub ci_halfwidth: f64,
    pub confidence: f64,
    /// `None` when no deterministic value exists (independent sums of more than two).
    pub analytic_var: Option<f64>,
    pub contains_analytic: Option<bool>,
}

fn dists(components: &[LossPosition]) -> Vec<Distribution> {
    components.iter().map(|c| c.dist.clone()).collect()
}

impl Job {
    pub fn execute(&self, ctx: &Context) -> Result<Outcome> {
        let settings = &ctx.settings;
        Ok(match self {
            Job::Var { x, alpha } => {
                let excess = ExcessOfLoss::new(x.clone());
                Outcome::Var(VarOutcome {
                    command: "var",
                    label: x.label.clone(),
                    distribution: x.dist.clone(),
                    alpha: *alpha,
                    var: x.value_at_risk(*alpha)?,
                    median: excess.median_offset(),
                    excess_var: excess.excess_var(*alpha)?,
                })
            }
            Job::Aggregate { components, dependence, alpha } => {
                let sum = AggregateSum::new(components.clone(), *dependence)?;
                let component_vars = components
                    .iter()
                    .map(|c| c.value_at_risk(*alpha))
                    .collect::<Result<Vec<_>>>()?;
                let var_of_sum = sum.value_at_risk(*alpha, settings)?;
                Outcome::Aggregate(AggregateOutcome {
                    command: "aggregate",
                    dependence: *dependence,
                    alpha: *alpha,
                    components: dists(components),
                    sum_of_vars: component_vars.iter().sum(),
                    component_vars,
                    var_of_sum,
                    median_sum: sum.median_sum(),
                    excess_var: var_of_sum - sum.median_sum(),
                })
            }
            Job::Compare { x, y, dependence, alpha, tolerance } => Outcome::Compare(CompareOutcome {
                command: "compare",
                dependence: *dependence,
                report: compare(x, y, *dependence, *alpha, settings, *tolerance)?,
            }),
            Job::Crossover { x, y, grid } => Outcome::Crossover(CrossoverOutcome {
                command: "crossover",
                dependence: Dependence::Independent,
                grid_points: *grid,
                crossovers: crossover_alpha_on_grid(x, y, settings, *grid)?,
            }),
            Job::PlotData { x, y, points } => Outcome::PlotData(PlotDataOutcome {
                command: "plot-data",
                points: g_curve(x, y, &open_unit_grid(*points), settings)?,
            }),
            Job::Eggs { n, theta1, theta2 } => {
                let report = diversification::eggs_analysis(*n, *theta1, *theta2)?;
                Outcome::Eggs(EggsOutcome {
                    command: "eggs",
                    single_trip: Preference::from_losses(report.p_loss_split, report.p_loss_single),
                    long_run: Preference::from_losses(report.expected_split, report.expected_single),
                    report,
                })
            }
            Job::Oracle { components, dependence, alpha, samples } => {
                let est = mc_var_oracle_components(components, *dependence, *alpha, *samples, ctx.seed)?;
                let analytic_var = match (dependence, components.len()) {
                    (Dependence::Comonotone, n) if n >= 2 => {
                        Some(comonotone_var(&AggregateSum::comonotone(components.clone())?, *alpha)?)
                    }
                    (Dependence::Independent, 2) => {
                        Some(independent_var(&components[0], &components[1], *alpha, settings)?)
                    }
                    _ => None,
                };
                Outcome::Oracle(OracleOutcome {
                    command: "oracle",
                    dependence: *dependence,
                    alpha: *alpha,
                    seed: ctx.seed,
                    samples: est.samples,
                    estimate: est.estimate,
                    ci_lower: est.ci_lower,
                    ci_upper: est.ci_upper,
                    ci_halfwidth: est.ci_halfwidth,
                    confidence: crate::aggregation::MC_CONFIDENCE,
                    contains_analytic: analytic_var.map(|v| est.contains(v)),
                    analytic_var,
                })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_pair() -> (LossPosition, LossPosition) {
        let e = Distribution::exponential(1.0).unwrap();
        (LossPosition::new("x", e.clone()), LossPosition::new("y", e))
    }

    fn ctx() -> Context {
        Context { settings: ConvolutionSettings::default(), seed: 0 }
    }

    #[test]
    fn preference_from_losses() {
        assert_eq!(Preference::from_losses(0.1, 0.2), Preference::Split);
        assert_eq!(Preference::from_losses(0.3, 0.2), Preference::Single);
        assert_eq!(Preference::from_losses(0.2, 0.2), Preference::Indifferent);
    }

    #[test]
    fn eggs_equal_thetas_are_long_run_indifferent() {
        let out = Job::Eggs { n: 10, theta1: 0.2, theta2: 0.2 }.execute(&ctx()).unwrap();
        let Outcome::Eggs(e) = out else { panic!("wrong outcome") };
        assert_eq!(e.long_run, Preference::Indifferent);
        assert_eq!(e.single_trip, Preference::Single);
    }

    #[test]
    fn aggregate_reports_both_sides() {
        let (x, y) = exp_pair();
        let out = Job::Aggregate { components: vec![x, y], dependence: Dependence::Comonotone, alpha: 0.9 }
            .execute(&ctx())
            .unwrap();
        let Outcome::Aggregate(a) = out else { panic!("wrong outcome") };
        assert!((a.var_of_sum - a.sum_of_vars).abs() < 1e-12);
        assert!((a.excess_var - (a.var_of_sum - 2.0 * std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn oracle_has_no_analytic_value_for_three_independent() {
        let (x, y) = exp_pair();
        let job = Job::Oracle {
            components: vec![x.clone(), y, x],
            dependence: Dependence::Independent,
            alpha: 0.5,
            samples: 10_000,
        };
        let Outcome::Oracle(o) = job.execute(&ctx()).unwrap() else { panic!("wrong outcome") };
        assert_eq!(o.analytic_var, None);
        assert_eq!(o.contains_analytic, None);
    }
}
