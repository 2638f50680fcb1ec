//! The five subcommands.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;

use crate::boundary::{Geometry, PolarizationWeights};
use crate::lindblad_oracle::{validate_all, ValidationReport, VALIDATION_TOL};
use crate::single_qubit::{self, c_l1_trajectory, c_re_trajectory, FreezeReason};
use crate::two_qubit::{freezing_report_bd, trace_bd};

use super::config::{Format, Measure, Mode, RunConfig};
use super::output::{emit, Table};
use super::{CliError, Command};

pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.output.path.as_deref();
    match command {
        Command::Single => emit(&cmd_single(cfg)?.render(cfg.output.format), path),
        Command::Two => emit(&cmd_two(cfg)?.render(cfg.output.format), path),
        Command::Surface => emit(&cmd_surface(cfg)?.render(cfg.output.format), path),
        Command::Freeze => {
            let report = cmd_freeze(cfg)?;
            let twin = serde_json::to_string(&report.json).expect("finite report");
            emit(&format!("{}{twin}\n", report.human), None)?;
            if let Some(p) = path {
                emit(&format!("{twin}\n"), Some(p))?;
            }
            Ok(())
        }
        Command::Validate => {
            let (text, report) = cmd_validate(cfg)?;
            emit(&text, None)?;
            if let Some(p) = path {
                let body = match cfg.output.format {
                    Format::Json => {
                        let mut s = serde_json::to_string_pretty(&report).expect("finite report");
                        s.push('\n');
                        s
                    }
                    Format::Csv => validation_table(&report).to_csv(),
                };
                emit(&body, Some(p))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed(format!(
                    "max error {:e} >= {VALIDATION_TOL:e}",
                    report.max_error
                )))
            }
        }
    }
}

/// `q,c_l1,c_re` for one atom.
pub fn cmd_single(cfg: &RunConfig) -> Result<Table, CliError> {
    let angles = cfg.angles()?;
    let trace = single_qubit::trace(
        angles.theta(),
        &cfg.q_grid()?,
        &cfg.geometry()?,
        &cfg.polarization()?,
    )?;
    let mut table = Table::new(vec!["q", "c_l1", "c_re"]);
    for s in trace.samples {
        table.push(vec![Some(s.q), Some(s.c_l1), Some(s.c_re)]);
    }
    Ok(table)
}

/// `q,c_l1,c_re,c_re_paper_formula` for a Bell-diagonal pair.
pub fn cmd_two(cfg: &RunConfig) -> Result<Table, CliError> {
    let c = cfg.bell_diagonal()?;
    let samples = trace_bd(&c, &cfg.q_grid()?, &cfg.geometry()?, &cfg.polarization()?)?;
    let mut table = Table::new(vec!["q", "c_l1", "c_re", "c_re_paper_formula"]);
    for s in samples {
        table.push(vec![Some(s.q), Some(s.c_l1), Some(s.c_re), s.c_re_paper_formula]);
    }
    Ok(table)
}

/// `u,q,value` for `theta = pi/2` over the `u` and `q` grids.
pub fn cmd_surface(cfg: &RunConfig) -> Result<Table, CliError> {
    let pol = cfg.polarization()?;
    let qs = cfg.q_grid()?.points();
    let measure = cfg.surface.measure;
    let columns: Vec<Vec<Vec<Option<f64>>>> = cfg
        .u_points()?
        .into_par_iter()
        .map(|u| {
            let geometry = Geometry::mirror(u)?;
            qs.iter()
                .map(|&q| {
                    let value = match measure {
                        Measure::L1 => c_l1_trajectory(PI / 2.0, q, &geometry, &pol)?,
                        Measure::Re => c_re_trajectory(PI / 2.0, q, &geometry, &pol)?,
                    };
                    Ok(vec![Some(u), Some(q), Some(value)])
                })
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<_>>()?;
    let mut table = Table::new(vec!["u", "q", "value"]);
    for row in columns.into_iter().flatten() {
        table.push(row);
    }
    Ok(table)
}

pub struct FreezeOutput {
    pub human: String,
    pub json: serde_json::Value,
}

fn describe_environment(g: &Geometry, p: &PolarizationWeights) -> String {
    let geometry = match g {
        Geometry::Unbounded => "unbounded".to_string(),
        Geometry::Mirror { u } => format!("mirror at u = {u}"),
    };
    format!("{geometry}, polarization ({}, {}, {})", p.ax(), p.ay(), p.az())
}

fn measure_line(name: &str, frozen: bool, reason: FreezeReason, slope: f64) -> String {
    let (state, reason) = if frozen {
        ("frozen", reason)
    } else {
        ("not frozen", FreezeReason::None)
    };
    format!("{name:<5} {state} (reason: {reason}), sup |dC/dq| = {slope:.3e}\n")
}

pub fn cmd_freeze(cfg: &RunConfig) -> Result<FreezeOutput, CliError> {
    let geometry = cfg.geometry()?;
    let pol = cfg.polarization()?;
    let mut human = String::new();
    let json = match cfg.freeze.mode {
        Mode::Single => {
            let angles = cfg.angles()?;
            let r = single_qubit::freezing_report(angles.theta(), &geometry, &pol)?;
            let _ = writeln!(human, "system: single atom, theta = {}", angles.theta());
            let _ = writeln!(human, "environment: {}", describe_environment(&geometry, &pol));
            let _ = writeln!(human, "suppression f = {:.12}, gamma_eff = {:.6e}", r.suppression, r.gamma_eff);
            human.push_str(&measure_line("C_l1", r.l1_frozen, r.reason, r.sup_dq_l1));
            human.push_str(&measure_line("C_RE", r.re_frozen, r.reason, r.sup_dq_re));
            json!({
                "mode": "single",
                "theta": angles.theta(),
                "geometry": geometry,
                "polarization": pol,
                "report": r,
            })
        }
        Mode::Two => {
            let c = cfg.bell_diagonal()?;
            let r = freezing_report_bd(&c, &geometry, &pol)?;
            let _ = writeln!(human, "system: Bell-diagonal pair, c = ({}, {}, {})", c.c1, c.c2, c.c3);
            let _ = writeln!(human, "environment: {}", describe_environment(&geometry, &pol));
            let _ = writeln!(human, "suppression f = {:.12}, gamma_eff = {:.6e}", r.suppression, r.gamma_eff);
            human.push_str(&measure_line("C_l1", r.frozen, r.reason, r.sup_dq_l1));
            human.push_str(&measure_line("C_RE", r.frozen, r.reason, r.sup_dq_re));
            json!({
                "mode": "two",
                "c": [c.c1, c.c2, c.c3],
                "geometry": geometry,
                "polarization": pol,
                "report": r,
            })
        }
    };
    let consistent = json["report"]["numerically_consistent"].as_bool().unwrap_or(false);
    let _ = writeln!(
        human,
        "numerical check: {}",
        if consistent { "consistent" } else { "INCONSISTENT" }
    );
    Ok(FreezeOutput { human, json })
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<(String, ValidationReport), CliError> {
    let report = validate_all(cfg.validate.seed, cfg.validate.n_cases)?;
    let mut text = String::new();
    let _ = writeln!(text, "cases: {} (seed {})", report.n_cases, report.seed);
    let _ = writeln!(text, "max error: {:.3e} (tolerance {VALIDATION_TOL:e})", report.max_error);
    let _ = writeln!(text, "worst case: {}", report.worst_case);
    if let Some(frozen) = report.cases.first() {
        let _ = writeln!(text, "frozen case error: {:.3e}", frozen.error);
    }
    let _ = writeln!(
        text,
        "published C_RE formula on c1*c2 != 0 cases: max |exact - formula| = {:.6e}, undefined in {} case(s)",
        report.max_formula_discrepancy, report.formula_undefined
    );
    let _ = writeln!(
        text,
        "published C_RE formula at c = (0.8, 0.4, -0.2): max |exact - formula| = {:.6e} over q' = 0, 0.1, ..., 1 (undefined at {} point(s))",
        report.reference_discrepancy, report.reference_undefined
    );
    let _ = writeln!(text, "status: {}", if report.passed() { "PASS" } else { "FAIL" });
    Ok((text, report))
}

fn validation_table(report: &ValidationReport) -> Table {
    let mut table = Table::new(vec!["index", "q", "error", "formula_discrepancy"]);
    for c in &report.cases {
        table.push(vec![
            Some(c.index as f64),
            Some(c.q),
            Some(c.error),
            c.formula_discrepancy.filter(|d| d.is_finite()),
        ]);
    }
    table
}
