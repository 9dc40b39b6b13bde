//! JSON scenario files: named positions plus a list of tasks.
//!
//! ```json
//! {
//!   "positions": {
//!     "a": {"family": "exponential", "rate": 1.0},
//!     "b": {"family": "exponential", "rate": 1.0}
//!   },
//!   "tasks": [
//!     {"kind": "var", "position": "a", "alpha": 0.99},
//!     {"kind": "compare", "x": "a", "y": "b", "dependence": "independent", "alpha": 0.9}
//!   ],
//!   "settings": {"abs_tolerance": 1e-10},
//!   "seed": 7
//! }
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tasks::Job;
use crate::aggregation::{ConvolutionSettings, Dependence, MC_MIN_SAMPLES};
use crate::distributions::{Distribution, DistributionSpec};
use crate::diversification::{CROSSOVER_GRID, DEFAULT_TOLERANCE};
use crate::risk_measures::LossPosition;

pub const DEFAULT_PLOT_POINTS: usize = 512;
pub const DEFAULT_ORACLE_SAMPLES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
}

impl ScenarioError {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioError::Io { .. } => "IoError",
            ScenarioError::Parse { .. } => "ParseError",
            ScenarioError::Validation { .. } => "ValidationError",
        }
    }

    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Validation { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    positions: BTreeMap<String, DistributionSpec>,
    tasks: Vec<TaskSpec>,
    #[serde(default)]
    settings: ConvolutionSettings,
    #[serde(default)]
    seed: Option<u64>,
}

fn independent() -> Dependence {
    Dependence::Independent
}

/// A task as written in the file, referring to positions by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    Var {
        position: String,
        alpha: f64,
    },
    Aggregate {
        positions: Vec<String>,
        dependence: Dependence,
        alpha: f64,
    },
    Compare {
        x: String,
        y: String,
        #[serde(default = "independent")]
        dependence: Dependence,
        alpha: f64,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Crossover {
        x: String,
        y: String,
        #[serde(default)]
        grid: Option<usize>,
    },
    PlotData {
        x: String,
        y: String,
        #[serde(default)]
        points: Option<usize>,
    },
    Eggs {
        n: u64,
        theta1: f64,
        theta2: f64,
    },
    Oracle {
        positions: Vec<String>,
        dependence: Dependence,
        alpha: f64,
        #[serde(default)]
        samples: Option<usize>,
    },
}

/// A parsed and validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub positions: BTreeMap<String, Distribution>,
    pub tasks: Vec<TaskSpec>,
    pub settings: ConvolutionSettings,
    pub seed: Option<u64>,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_owned(), source })?;
    parse_scenario(&text, path)
}

/// Parses scenario text; `path` only labels error messages.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(file)
}

fn validate(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
    let mut positions = BTreeMap::new();
    for (name, spec) in file.positions {
        let field = format!("positions.{name}");
        if name.trim().is_empty() {
            return Err(ScenarioError::invalid("positions", "position names must not be empty"));
        }
        let dist = Distribution::new(spec).map_err(|e| ScenarioError::invalid(&field, e.to_string()))?;
        positions.insert(name, dist);
    }
    if file.tasks.is_empty() {
        return Err(ScenarioError::invalid("tasks", "at least one task is required"));
    }
    file.settings
        .validate()
        .map_err(|e| ScenarioError::invalid("settings", e.to_string()))?;

    let scenario = Scenario { positions, tasks: file.tasks, settings: file.settings, seed: file.seed };
    for (i, task) in scenario.tasks.iter().enumerate() {
        scenario.resolve(i, task)?;
    }
    Ok(scenario)
}

fn check_alpha(field: &str, alpha: f64) -> Result<(), ScenarioError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(ScenarioError::invalid(field, "alpha must lie in (0,1)"))
    }
}

fn check_at_least(field: &str, value: usize, min: usize) -> Result<(), ScenarioError> {
    if value >= min {
        Ok(())
    } else {
        Err(ScenarioError::invalid(field, format!("must be at least {min}, got {value}")))
    }
}

impl Scenario {
    /// Turns every task into a runnable [`Job`].
    pub fn jobs(&self) -> Result<Vec<Job>, ScenarioError> {
        self.tasks.iter().enumerate().map(|(i, t)| self.resolve(i, t)).collect()
    }

    fn position(&self, field: &str, name: &str) -> Result<LossPosition, ScenarioError> {
        self.positions
            .get(name)
            .map(|d| LossPosition::new(name, d.clone()))
            .ok_or_else(|| ScenarioError::invalid(field, format!("undefined position '{name}'")))
    }

    fn position_list(&self, field: &str, names: &[String]) -> Result<Vec<LossPosition>, ScenarioError> {
        names
            .iter()
            .enumerate()
            .map(|(j, n)| self.position(&format!("{field}[{j}]"), n))
            .collect()
    }

    fn resolve(&self, index: usize, task: &TaskSpec) -> Result<Job, ScenarioError> {
        let at = |f: &str| format!("tasks[{index}].{f}");
        Ok(match task {
            TaskSpec::Var { position, alpha } => {
                check_alpha(&at("alpha"), *alpha)?;
                Job::Var { x: self.position(&at("position"), position)?, alpha: *alpha }
            }
            TaskSpec::Aggregate { positions, dependence, alpha } => {
                check_alpha(&at("alpha"), *alpha)?;
                check_at_least(&at("positions"), positions.len(), 2)?;
                if *dependence == Dependence::Independent && positions.len() != 2 {
                    return Err(ScenarioError::invalid(
                        at("positions"),
                        format!("independent aggregation takes exactly 2 positions, got {}", positions.len()),
                    ));
                }
                Job::Aggregate {
                    components: self.position_list(&at("positions"), positions)?,
                    dependence: *dependence,
                    alpha: *alpha,
                }
            }
            TaskSpec::Compare { x, y, dependence, alpha, tolerance } => {
                check_alpha(&at("alpha"), *alpha)?;
                let tolerance = tolerance.unwrap_or(DEFAULT_TOLERANCE);
                if !(tolerance > 0.0 && tolerance.is_finite()) {
                    return Err(ScenarioError::invalid(at("tolerance"), "tolerance must be positive"));
                }
                Job::Compare {
                    x: self.position(&at("x"), x)?,
                    y: self.position(&at("y"), y)?,
                    dependence: *dependence,
                    alpha: *alpha,
                    tolerance,
                }
            }
            TaskSpec::Crossover { x, y, grid } => {
                let grid = grid.unwrap_or(CROSSOVER_GRID);
                check_at_least(&at("grid"), grid, 2)?;
                Job::Crossover { x: self.position(&at("x"), x)?, y: self.position(&at("y"), y)?, grid }
            }
            TaskSpec::PlotData { x, y, points } => {
                let points = points.unwrap_or(DEFAULT_PLOT_POINTS);
                check_at_least(&at("points"), points, 2)?;
                Job::PlotData { x: self.position(&at("x"), x)?, y: self.position(&at("y"), y)?, points }
            }
            TaskSpec::Eggs { n, theta1, theta2 } => {
                if *n == 0 {
                    return Err(ScenarioError::invalid(at("n"), "must be at least 1"));
                }
                for (f, t) in [("theta1", theta1), ("theta2", theta2)] {
                    if !(*t > 0.0 && *t < 1.0) {
                        return Err(ScenarioError::invalid(at(f), format!("{f} must lie in (0,1)")));
                    }
                }
                Job::Eggs { n: *n, theta1: *theta1, theta2: *theta2 }
            }
            TaskSpec::Oracle { positions, dependence, alpha, samples } => {
                check_alpha(&at("alpha"), *alpha)?;
                check_at_least(&at("positions"), positions.len(), 2)?;
                let samples = samples.unwrap_or(DEFAULT_ORACLE_SAMPLES);
                check_at_least(&at("samples"), samples, MC_MIN_SAMPLES)?;
                Job::Oracle {
                    components: self.position_list(&at("positions"), positions)?,
                    dependence: *dependence,
                    alpha: *alpha,
                    samples,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        parse_scenario(text, Path::new("test.json"))
    }

    const MINIMAL: &str = r#"{
        "positions": {"a": {"family": "pareto", "beta": 1.0, "delta": 1.0}},
        "tasks": [{"kind": "var", "position": "a", "alpha": 0.99}]
    }"#;

    #[test]
    fn minimal_file_has_one_task() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.tasks.len(), 1);
        assert_eq!(s.seed, None);
        assert_eq!(s.settings, ConvolutionSettings::default());
        assert_eq!(s.jobs().unwrap().len(), 1);
    }

    #[test]
    fn undefined_position_is_a_validation_error() {
        let text = MINIMAL.replace(r#""position": "a""#, r#""position": "b""#);
        let err = parse(&text).unwrap_err();
        assert_eq!(err.name(), "ValidationError");
        assert!(err.to_string().contains("tasks[0].position"), "{err}");
        assert!(err.to_string().contains("'b'"), "{err}");
    }

    #[test]
    fn alpha_of_one_is_rejected() {
        let err = parse(&MINIMAL.replace("0.99", "1.0")).unwrap_err();
        assert_eq!(err.name(), "ValidationError");
        assert_eq!(err.to_string(), "tasks[0].alpha: alpha must lie in (0,1)");
    }

    #[test]
    fn unknown_fields_are_parse_errors_with_location() {
        let text = MINIMAL.replace(r#""alpha": 0.99"#, r#""alpha": 0.99, "level": 3"#);
        let err = parse(&text).unwrap_err();
        assert_eq!(err.name(), "ParseError");
        let msg = err.to_string();
        assert!(msg.contains("level") && msg.starts_with("test.json:3:"), "{msg}");

        let err = parse(&MINIMAL.replace("\"tasks\"", "\"jobs\"")).unwrap_err();
        assert_eq!(err.name(), "ParseError");
        assert!(err.to_string().contains("jobs"));
    }

    #[test]
    fn bad_parameters_name_the_position() {
        let err = parse(&MINIMAL.replace(r#""delta": 1.0"#, r#""delta": -1.0"#)).unwrap_err();
        assert_eq!(err.name(), "ValidationError");
        assert!(err.to_string().starts_with("positions.a:"), "{err}");
    }

    #[test]
    fn structural_checks() {
        let base = r#"{"positions": {"a": {"family": "exponential", "rate": 1.0}}, "tasks": TASKS}"#;
        let cases = [
            ("[]", "tasks"),
            (r#"[{"kind": "aggregate", "positions": ["a"], "dependence": "comonotone", "alpha": 0.5}]"#, "tasks[0].positions"),
            (r#"[{"kind": "aggregate", "positions": ["a", "a", "a"], "dependence": "independent", "alpha": 0.5}]"#, "tasks[0].positions"),
            (r#"[{"kind": "oracle", "positions": ["a", "zz"], "dependence": "independent", "alpha": 0.5}]"#, "tasks[0].positions[1]"),
            (r#"[{"kind": "oracle", "positions": ["a", "a"], "dependence": "independent", "alpha": 0.5, "samples": 10}]"#, "tasks[0].samples"),
            (r#"[{"kind": "plot-data", "x": "a", "y": "a", "points": 1}]"#, "tasks[0].points"),
            (r#"[{"kind": "eggs", "n": 0, "theta1": 0.1, "theta2": 0.1}]"#, "tasks[0].n"),
            (r#"[{"kind": "eggs", "n": 3, "theta1": 0.1, "theta2": 1.5}]"#, "tasks[0].theta2"),
            (r#"[{"kind": "var", "position": "a", "alpha": 0.5}, {"kind": "compare", "x": "a", "y": "a", "alpha": 0.5, "tolerance": 0}]"#, "tasks[1].tolerance"),
        ];
        for (tasks, field) in cases {
            let err = parse(&base.replace("TASKS", tasks)).unwrap_err();
            assert_eq!(err.name(), "ValidationError", "{tasks}");
            assert!(err.to_string().starts_with(&format!("{field}:")), "{tasks}: {err}");
        }
    }

    #[test]
    fn settings_and_seed_are_read() {
        let text = r#"{
            "positions": {"a": {"family": "exponential", "rate": 1.0}},
            "tasks": [{"kind": "crossover", "x": "a", "y": "a"}],
            "settings": {"abs_tolerance": 1e-9, "use_fast_paths": false},
            "seed": 42
        }"#;
        let s = parse(text).unwrap();
        assert_eq!(s.seed, Some(42));
        assert_eq!(s.settings.abs_tolerance, 1e-9);
        assert!(!s.settings.use_fast_paths);
        let bad = text.replace("1e-9", "0.0");
        assert_eq!(parse(&bad).unwrap_err().to_string().split(':').next(), Some("settings"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_scenario("/definitely/not/here.json").unwrap_err();
        assert_eq!(err.name(), "IoError");
    }
}
