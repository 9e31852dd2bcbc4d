use std::path::PathBuf;

use backflow_core::propagator::CLOSED_FORM_MIN_TIME;
use backflow_core::{MomentumAmplitude, QuadratureSpec, WaveEvaluator};

use crate::args::{Cli, Command, CommonArgs, Format, GridArgs};
use crate::error::CliError;
use crate::state::load_state;

pub const BUILTIN_BM94: &str = "builtin:bm94";

/// Largest particle number accepted on the command line.
pub const MAX_N: u32 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Builtin,
    File(PathBuf),
}

impl StateSource {
    pub fn label(&self) -> String {
        match self {
            StateSource::Builtin => BUILTIN_BM94.to_string(),
            StateSource::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Series { n_list: Vec<u32> },
    DeltaMax { n_max: u32 },
    Current,
    Validate,
}

/// A checked command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub state: StateSource,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub spec: QuadratureSpec,
    pub switch_time: f64,
    pub series_order: u32,
    pub t_max: f64,
    pub points: usize,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (task, common, grid) = match cli.command {
            Command::Series { common, grid, n_list } => (Task::Series { n_list }, common, Some(grid)),
            Command::Deltamax { common, n_max } => (Task::DeltaMax { n_max }, common, None),
            Command::Current { common, grid } => (Task::Current, common, Some(grid)),
            Command::Validate { common } => (Task::Validate, common, None),
        };
        let GridArgs { t_max, points } = grid.unwrap_or(GridArgs {
            t_max: 0.1,
            points: 201,
        });
        let CommonArgs {
            state,
            format,
            out,
            rel_tol,
            abs_tol,
            switch_time,
            series_order,
        } = common;
        let state = if state == BUILTIN_BM94 {
            StateSource::Builtin
        } else if state.starts_with("builtin:") {
            return Err(config_err(format!("unknown built-in state `{state}`")));
        } else {
            StateSource::File(PathBuf::from(state))
        };
        let config = Self {
            task,
            state,
            format,
            out,
            spec: QuadratureSpec::with_tolerances(rel_tol, abs_tol),
            switch_time,
            series_order,
            t_max,
            points,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(config_err("--t-max must be positive and finite"));
        }
        if self.points < 2 {
            return Err(config_err("--points must be at least 2"));
        }
        if !(self.spec.rel_tol > 0.0) || !self.spec.rel_tol.is_finite() {
            return Err(config_err("--rel-tol must be positive"));
        }
        if !(self.spec.abs_tol > 0.0) || !self.spec.abs_tol.is_finite() {
            return Err(config_err("--abs-tol must be positive"));
        }
        if !(self.switch_time >= CLOSED_FORM_MIN_TIME) || !self.switch_time.is_finite() {
            return Err(config_err(format!(
                "--switch-time must be at least {CLOSED_FORM_MIN_TIME:e}"
            )));
        }
        if self.series_order == 0 {
            return Err(config_err("--series-order must be at least 1"));
        }
        match &self.task {
            Task::Series { n_list } => {
                if n_list.is_empty() {
                    return Err(config_err("--n-list is empty"));
                }
                if let Some(n) = n_list.iter().find(|&&n| n == 0 || n > MAX_N) {
                    return Err(config_err(format!("particle number {n} outside 1..={MAX_N}")));
                }
            }
            Task::DeltaMax { n_max } if *n_max == 0 || *n_max > MAX_N => {
                return Err(config_err(format!("--n-max must lie in 1..={MAX_N}")));
            }
            _ => {}
        }
        Ok(())
    }

    /// `points` equally spaced times on `[0, t_max]`.
    pub fn time_grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points).map(|k| self.t_max * k as f64 / last).collect()
    }

    pub fn load_state(&self) -> Result<MomentumAmplitude, CliError> {
        match &self.state {
            StateSource::Builtin => Ok(MomentumAmplitude::bm94()),
            StateSource::File(path) => Ok(load_state(path)?),
        }
    }

    /// The built-in state gets the series/closed-form pair, files the
    /// hybrid expansion/quadrature backend.
    pub fn evaluator(&self) -> Result<WaveEvaluator, CliError> {
        let w = match &self.state {
            StateSource::Builtin => WaveEvaluator::bm94_auto(self.switch_time, self.series_order),
            StateSource::File(_) => WaveEvaluator::hybrid(self.load_state()?, self.spec),
        };
        w.map_err(|e| config_err(format!("cannot build evaluator: {e}")))
    }

    pub fn backend_label(&self) -> String {
        match self.state {
            StateSource::Builtin => format!(
                "closed form, series below t={:e} (order {})",
                self.switch_time, self.series_order
            ),
            StateSource::File(_) => "large-|x| expansion, momentum quadrature elsewhere".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["backflow"];
        full.extend_from_slice(args);
        RunConfig::from_cli(Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn defaults() {
        let c = parse(&["series"]).unwrap();
        assert_eq!(
            c.task,
            Task::Series {
                n_list: vec![1, 2, 3, 4, 5, 6]
            }
        );
        assert_eq!(c.state, StateSource::Builtin);
        assert_eq!(c.spec, QuadratureSpec::default());
        let grid = c.time_grid();
        assert_eq!(grid.len(), 201);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[200], 0.1);
    }

    #[test]
    fn rejects_bad_values() {
        for args in [
            &["series", "--t-max", "0"][..],
            &["series", "--t-max", "-1"],
            &["current", "--points", "1"],
            &["series", "--rel-tol", "0"],
            &["deltamax", "--abs-tol", "-1e-12"],
            &["series", "--n-list", "0,2"],
            &["deltamax", "--n-max", "0"],
            &["series", "--switch-time", "1e-9"],
            &["series", "--state", "builtin:gaussian"],
            &["series", "--series-order", "0"],
        ] {
            assert!(matches!(parse(args), Err(CliError::Config(_))), "{args:?}");
        }
    }

    #[test]
    fn missing_state_file_is_a_state_error() {
        let c = parse(&["current", "--state", "some/state.json"]).unwrap();
        assert_eq!(c.state, StateSource::File(PathBuf::from("some/state.json")));
        assert!(matches!(c.evaluator(), Err(CliError::State(_))));
    }
}
