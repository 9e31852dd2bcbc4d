use backflow_core::observables::build_series;
use backflow_core::{build_report, BosonEnsemble};

use crate::config::{RunConfig, Task};
use crate::error::CliError;
use crate::table::{Cell, Table};

fn base_table(config: &RunConfig, command: &str, columns: Vec<String>) -> Table {
    let mut t = Table::new(columns);
    t.meta("command", command)
        .meta("version", env!("CARGO_PKG_VERSION"))
        .meta("state", config.state.label())
        .meta("backend", config.backend_label())
        .meta("rel_tol", config.spec.rel_tol)
        .meta("abs_tol", config.spec.abs_tol)
        .meta("max_subdivisions", config.spec.max_subdivisions);
    t
}

pub fn series(config: &RunConfig) -> Result<Table, CliError> {
    let Task::Series { n_list } = &config.task else {
        unreachable!("series called for {:?}", config.task)
    };
    let w = config.evaluator()?;
    let s = build_series(&w, &config.time_grid(), &config.spec)?;
    let mut columns: Vec<String> = ["t", "P1_1", "P0_1", "J0"].map(String::from).to_vec();
    let mut minus = Vec::with_capacity(n_list.len());
    for &n in n_list {
        columns.push(format!("P_minus_{n}"));
        minus.push(BosonEnsemble::new(n, s.clone())?.prob_minus());
    }
    let mut table = base_table(config, "series", columns);
    table.meta("t_max", config.t_max).meta("points", config.points);
    for i in 0..s.len() {
        let mut row = vec![
            Cell::Float(s.times()[i]),
            Cell::Float(s.p1()[i]),
            Cell::Float(s.p0()[i]),
            Cell::Float(s.j0()[i]),
        ];
        row.extend(minus.iter().map(|col| Cell::Float(col[i])));
        table.push(row);
    }
    Ok(table)
}

pub fn deltamax(config: &RunConfig) -> Result<Table, CliError> {
    let Task::DeltaMax { n_max } = config.task else {
        unreachable!("deltamax called for {:?}", config.task)
    };
    let w = config.evaluator()?;
    let report = build_report(&w, n_max, &config.spec)?;
    let columns = ["N", "delta_n_max", "lower_bound", "upper_bound", "inequality_ok"]
        .map(String::from)
        .to_vec();
    let mut table = base_table(config, "deltamax", columns);
    table
        .meta("t1_prime", report.t1_prime)
        .meta("p0_start", report.p0_start)
        .meta("p0_end", report.p0_end)
        .meta("delta1_max", report.delta1_max)
        .meta("p0_bounds", report.meta.p0_bounds)
        .meta("delta1_bound", report.meta.delta1_bound);
    for row in &report.rows {
        table.push(vec![
            Cell::Int(row.n.into()),
            Cell::Float(row.delta_n_max),
            Cell::Float(row.lower),
            Cell::Float(row.upper),
            Cell::Bool(row.inequality_ok),
        ]);
    }
    Ok(table)
}

pub fn current(config: &RunConfig) -> Result<Table, CliError> {
    let w = config.evaluator()?;
    let mut table = base_table(config, "current", vec!["t".into(), "J0".into()]);
    table.meta("t_max", config.t_max).meta("points", config.points);
    for t in config.time_grid() {
        let j = backflow_core::observables::current(&w, 0.0, t)?;
        table.push(vec![Cell::Float(t), Cell::Float(j)]);
    }
    Ok(table)
}
