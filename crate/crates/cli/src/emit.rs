//! CSV, JSON and text emitters. Field order is fixed and floats use the
//! shortest round-trip form, so equal inputs give byte-identical output.

use std::fmt::Write as _;
use std::io::Write;

use affectq_core::network::Trajectory;
use affectq_core::paradox::ScenarioReport;
use serde::Serialize;

use crate::error::Result;

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "p1", "p2", "q1", "q2", "M1", "M2"];

/// One row per recorded instant; an empty trajectory gives the header only.
pub fn write_trajectory_csv(tr: &Trajectory, w: &mut dyn Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    for (t, s) in tr.times.iter().zip(&tr.states) {
        out.write_record(
            [*t, s.p[0], s.p[1], s.q[0], s.q[1], s.memory[0], s.memory[1]].map(|x| x.to_string()),
        )?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("summaries serialize");
    text.push('\n');
    w.write_all(text.as_bytes())
        .map_err(|e| crate::error::CliError::io("<output>", e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantitySummary {
    pub label: String,
    pub quantity: String,
    pub predicted: f64,
    pub observed: f64,
    pub experimental: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub description: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub id: String,
    pub passed: bool,
    pub quantities: Vec<QuantitySummary>,
    pub checks: Vec<CheckSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxSummary {
    pub scenarios_total: usize,
    pub scenarios_passed: usize,
    pub quantities_total: usize,
    pub quantities_passed: usize,
    pub checks_total: usize,
    pub checks_passed: usize,
    pub passed: bool,
    pub scenarios: Vec<ScenarioSummary>,
}

pub fn paradox_summary(reports: &[ScenarioReport]) -> ParadoxSummary {
    let scenarios: Vec<ScenarioSummary> = reports
        .iter()
        .map(|r| ScenarioSummary {
            id: r.id.clone(),
            passed: r.passed(),
            quantities: r
                .quantities
                .iter()
                .map(|q| QuantitySummary {
                    label: q.label.clone(),
                    quantity: q.quantity.clone(),
                    predicted: q.predicted,
                    observed: q.computed,
                    experimental: q.experimental,
                    tolerance: q.tolerance,
                    pass: q.pass,
                })
                .collect(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckSummary {
                    description: c.description.clone(),
                    pass: c.pass,
                })
                .collect(),
        })
        .collect();
    let count = |f: &dyn Fn(&ScenarioSummary) -> (usize, usize)| {
        scenarios.iter().map(f).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (quantities_total, quantities_passed) =
        count(&|s| (s.quantities.len(), s.quantities.iter().filter(|q| q.pass).count()));
    let (checks_total, checks_passed) =
        count(&|s| (s.checks.len(), s.checks.iter().filter(|c| c.pass).count()));
    let scenarios_passed = scenarios.iter().filter(|s| s.passed).count();
    ParadoxSummary {
        scenarios_total: scenarios.len(),
        scenarios_passed,
        quantities_total,
        quantities_passed,
        checks_total,
        checks_passed,
        passed: scenarios_passed == scenarios.len(),
        scenarios,
    }
}

pub const PARADOX_HEADER: [&str; 9] = [
    "scenario",
    "row",
    "label",
    "quantity",
    "predicted",
    "observed",
    "experimental",
    "tolerance",
    "pass",
];

/// Quantity rows, then check rows with empty numeric fields.
pub fn write_paradox_csv(summary: &ParadoxSummary, w: &mut dyn Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(PARADOX_HEADER)?;
    for s in &summary.scenarios {
        for q in &s.quantities {
            out.write_record([
                s.id.clone(),
                "quantity".into(),
                q.label.clone(),
                q.quantity.clone(),
                q.predicted.to_string(),
                q.observed.to_string(),
                q.experimental.map(|x| x.to_string()).unwrap_or_default(),
                q.tolerance.to_string(),
                q.pass.to_string(),
            ])?;
        }
        for c in &s.checks {
            out.write_record([
                s.id.as_str(),
                "check",
                c.description.as_str(),
                "",
                "",
                "",
                "",
                "",
                if c.pass { "true" } else { "false" },
            ])?;
        }
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn paradox_table(summary: &ParadoxSummary) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:<22} {:<32} {:>10} {:>10} {:>10} {:>8}  result",
        "scenario", "label", "predicted", "observed", "experiment", "tol"
    );
    for s in &summary.scenarios {
        for q in &s.quantities {
            let exp = q.experimental.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                t,
                "{:<22} {:<32} {:>10.4} {:>10.4} {:>10} {:>8.4}  {}",
                s.id,
                q.label,
                q.predicted,
                q.observed,
                exp,
                q.tolerance,
                mark(q.pass)
            );
        }
        for c in &s.checks {
            let _ = writeln!(t, "{:<22} {:<76}  {}", s.id, c.description, mark(c.pass));
        }
    }
    let _ = writeln!(
        t,
        "scenarios {}/{}, quantities {}/{}, checks {}/{}",
        summary.scenarios_passed,
        summary.scenarios_total,
        summary.quantities_passed,
        summary.quantities_total,
        summary.checks_passed,
        summary.checks_total
    );
    t
}
