//! Command-line surface.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use affectq_core::decision::stochastic_optimum;
use affectq_core::paradox::tables::SESSION_TABLES;
use affectq_core::paradox::{catalog, run_scenario, Scenario, CATALOG_IDS, PREDICTION_TOL};
use affectq_core::qmeasure::run_suite;
use affectq_core::attraction::quarter_law_check;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::emit::{paradox_summary, paradox_table, write_json, write_paradox_csv, write_trajectory_csv};
use crate::error::{CliError, Result};
use crate::network_file::{parse_network_file, run_network, IntegratorDoc, NetworkSummary};
use crate::scenario_file::{
    doc_to_scenario, parse_scenario_file, scenario_to_json, ScenarioDoc, StageDoc, UtilityDoc,
};

/// Environment variable overriding the fixture directory.
pub const FIXTURES_ENV: &str = "AFFECTQ_FIXTURES";

/// Fixture directory: `$AFFECTQ_FIXTURES` or the directory shipped with the crate.
pub fn fixtures_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

#[derive(Debug, Parser)]
#[command(name = "affectq", version, about = "Affective decision theory toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choice paradox scenarios.
    #[command(subcommand)]
    Paradox(ParadoxCmd),
    /// Two-group network dynamics.
    #[command(subcommand)]
    Network(NetworkCmd),
    /// Randomized quantum measurement identities.
    #[command(subcommand)]
    Qmeasure(QmeasureCmd),
    /// Mean absolute attraction factor against the quarter law.
    QuarterLaw(QuarterLawArgs),
    /// Behavioral probabilities for a single decision stage.
    Decide(DecideArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ParadoxCmd {
    /// Run scenarios and compare against their expectations.
    Run(ParadoxRunArgs),
    /// Write the built-in catalog as scenario files.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ParadoxRunArgs {
    /// Every scenario in the fixture directory, or the built-in catalog when it is absent.
    #[arg(long, conflicts_with_all = ["id", "file"])]
    pub all: bool,
    /// One scenario by identifier.
    #[arg(long, conflicts_with = "file")]
    pub id: Option<String>,
    /// One scenario file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Override the belief parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Override the quality base.
    #[arg(long)]
    pub base: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum NetworkCmd {
    /// Simulate a network configuration.
    Simulate(NetworkArgs),
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Network configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Trajectory CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary JSON output.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Override the number of discrete steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Override the continuous horizon.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Override the continuous step.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum QmeasureCmd {
    /// Run the seeded property suite.
    Verify(QmeasureArgs),
}

#[derive(Debug, Args)]
pub struct QmeasureArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuarterLawArgs {
    /// CSV file with columns `p,f`; the built-in tables are used when absent.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Expected mean absolute attraction for `--file`.
    #[arg(long)]
    pub expect: Option<f64>,
    #[arg(long, default_value_t = PREDICTION_TOL)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// JSON decision file.
    #[arg(long)]
    pub file: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Input of `decide`: one stage with the scenario-level parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDoc {
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default)]
    pub utility: UtilityDoc,
    pub stage: StageDoc,
}

fn default_base() -> f64 {
    affectq_core::attraction::QUALITY_BASE
}

/// Parse `args` (including the program name) and run; returns whether every check passed.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write) -> Result<bool>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli, out)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Paradox(ParadoxCmd::Run(a)) => paradox_run(a, out),
        Command::Paradox(ParadoxCmd::Export { dir }) => paradox_export(dir, out),
        Command::Network(NetworkCmd::Simulate(a)) => network_simulate(a, out),
        Command::Qmeasure(QmeasureCmd::Verify(a)) => qmeasure_verify(a, out),
        Command::QuarterLaw(a) => quarter_law(a, out),
        Command::Decide(a) => decide(a, out),
    }
}

fn put(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Send a rendered report to `--out` or to `out`.
fn deliver(
    output: &OutputArgs,
    out: &mut dyn Write,
    render: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            render(&mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => render(out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

/// Scenario files in `dir`, ordered as the catalog with unknown ids last by id.
pub fn load_scenario_dir(dir: &Path) -> Result<Vec<Scenario>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            paths.push(path);
        }
    }
    let mut scenarios = paths
        .iter()
        .map(|p| parse_scenario_file(p))
        .collect::<Result<Vec<_>>>()?;
    let rank = |id: &str| CATALOG_IDS.iter().position(|c| *c == id).unwrap_or(usize::MAX);
    scenarios.sort_by(|a, b| (rank(&a.id), &a.id).cmp(&(rank(&b.id), &b.id)));
    Ok(scenarios)
}

fn select_scenarios(a: &ParadoxRunArgs) -> Result<Vec<Scenario>> {
    let dir = fixtures_dir().join("scenarios");
    if let Some(file) = &a.file {
        return Ok(vec![parse_scenario_file(file)?]);
    }
    if let Some(id) = &a.id {
        let path = dir.join(format!("{id}.json"));
        if path.is_file() {
            return Ok(vec![parse_scenario_file(&path)?]);
        }
        return affectq_core::paradox::scenario(id)
            .map(|s| vec![s])
            .ok_or_else(|| CliError::Usage(format!("unknown scenario `{id}`")));
    }
    if !a.all {
        return Err(CliError::Usage("paradox run needs --all, --id or --file".into()));
    }
    if dir.is_dir() {
        load_scenario_dir(&dir)
    } else {
        Ok(catalog())
    }
}

fn paradox_run(a: &ParadoxRunArgs, out: &mut dyn Write) -> Result<bool> {
    let mut scenarios = select_scenarios(a)?;
    for s in &mut scenarios {
        if let Some(beta) = a.beta {
            s.beta = beta;
        }
        if let Some(base) = a.base {
            if !(base > 1.0) || !base.is_finite() {
                return Err(CliError::Usage("--base must be finite and greater than 1".into()));
            }
            s.base = base;
        }
    }
    let reports = scenarios
        .iter()
        .map(|s| {
            run_scenario(s).map_err(|e| CliError::invalid(&s.id, "run", e))
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = paradox_summary(&reports);
    deliver(&a.output, out, |w| match a.output.format {
        Format::Table => put(w, &paradox_table(&summary)),
        Format::Json => write_json(&summary, w),
        Format::Csv => write_paradox_csv(&summary, w),
    })?;
    Ok(summary.passed)
}

fn paradox_export(dir: &Path, out: &mut dyn Write) -> Result<bool> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for s in catalog() {
        let path = dir.join(format!("{}.json", s.id));
        std::fs::write(&path, scenario_to_json(&s)).map_err(|e| CliError::io(&path, e))?;
        put(out, &format!("{}\n", path.display()))?;
    }
    Ok(true)
}

fn network_simulate(a: &NetworkArgs, out: &mut dyn Write) -> Result<bool> {
    let mut cfg = parse_network_file(&a.config)?;
    let origin = a.config.display().to_string();
    match &mut cfg.integrator {
        IntegratorDoc::Discrete { steps } => {
            if a.horizon.is_some() || a.step.is_some() {
                return Err(CliError::Usage("--horizon and --step apply to continuous runs".into()));
            }
            if let Some(s) = a.steps {
                if s == 0 {
                    return Err(CliError::Usage("--steps must be positive".into()));
                }
                *steps = s;
            }
        }
        IntegratorDoc::Continuous { horizon, step } => {
            if a.steps.is_some() {
                return Err(CliError::Usage("--steps applies to discrete runs".into()));
            }
            *horizon = a.horizon.unwrap_or(*horizon);
            *step = a.step.unwrap_or(*step);
        }
    }
    let run = run_network(&cfg).map_err(|e| match e {
        CliError::Core(c) => CliError::invalid(&origin, "run", c),
        other => other,
    })?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        write_trajectory_csv(&run.trajectory, &mut w)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    if let Some(path) = &a.summary {
        let mut w = create(path)?;
        write_json(&run.summary, &mut w)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    put(out, &network_table(&run.summary))?;
    Ok(run.summary.passed)
}

pub fn network_table(s: &NetworkSummary) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "integrator {}, {} records, {} clamp events", s.integrator, s.records, s.clamp_events);
    for (j, g) in s.groups.iter().enumerate() {
        let regime = match (&g.regime, g.period) {
            (Some(r), Some(k)) => format!("{r} (period {k})"),
            (Some(r), None) => r.clone(),
            (None, _) => "unclassified".into(),
        };
        let _ = writeln!(
            t,
            "group {}: regime {regime}, p = {:.6}, q = {:.6}, M = {:.6}",
            j + 1,
            g.final_p,
            g.final_q,
            g.final_memory
        );
    }
    match (&s.fixed_point.p, &s.fixed_point.error) {
        (Some(p), _) => {
            let _ = writeln!(t, "fixed point: p = ({:.6}, {:.6})", p[0], p[1]);
        }
        (None, Some(e)) => {
            let _ = writeln!(t, "fixed point: {e}");
        }
        _ => {}
    }
    for c in &s.checks {
        let _ = writeln!(t, "{:<60}  {}", c.description, if c.pass { "ok" } else { "FAIL" });
    }
    t
}

#[derive(Debug, Serialize)]
struct QmeasureRow {
    property: &'static str,
    instances: usize,
    passed: usize,
    worst: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct QmeasureSummary {
    seed: u64,
    instances: usize,
    passed: bool,
    rows: Vec<QmeasureRow>,
}

fn qmeasure_verify(a: &QmeasureArgs, out: &mut dyn Write) -> Result<bool> {
    if a.instances == 0 {
        return Err(CliError::Usage("--instances must be positive".into()));
    }
    let report = run_suite(a.seed, a.instances);
    let summary = QmeasureSummary {
        seed: report.seed,
        instances: a.instances,
        passed: report.all_passed(),
        rows: report
            .rows
            .iter()
            .map(|r| QmeasureRow {
                property: r.property,
                instances: r.instances,
                passed: r.passed,
                worst: r.worst,
                pass: r.ok(),
            })
            .collect(),
    };
    deliver(&a.output, out, |w| match a.output.format {
        Format::Json => write_json(&summary, w),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["property", "instances", "passed", "worst", "pass"])?;
            for r in &summary.rows {
                c.write_record([
                    r.property.to_string(),
                    r.instances.to_string(),
                    r.passed.to_string(),
                    format!("{:e}", r.worst),
                    r.pass.to_string(),
                ])?;
            }
            c.flush().map_err(csv::Error::from)?;
            Ok(())
        }
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "seed {}, {} instances per property", summary.seed, summary.instances);
            for r in &summary.rows {
                let _ = writeln!(
                    t,
                    "{:<46} {:>5}/{:<5} worst {:>10.3e}  {}",
                    r.property,
                    r.passed,
                    r.instances,
                    r.worst,
                    if r.pass { "ok" } else { "FAIL" }
                );
            }
            put(w, &t)
        }
    })?;
    Ok(summary.passed)
}

#[derive(Debug, Serialize)]
struct QuarterRow {
    table: String,
    session: Option<usize>,
    records: usize,
    mean_abs_q: f64,
    expected: Option<f64>,
    tolerance: f64,
    pass: bool,
}

#[derive(Debug, Deserialize)]
struct QuarterRecord {
    p: f64,
    f: f64,
}

fn quarter_law(a: &QuarterLawArgs, out: &mut dyn Write) -> Result<bool> {
    if !(a.tolerance > 0.0) {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    let mut rows = Vec::new();
    match &a.file {
        Some(path) => {
            let origin = path.display().to_string();
            let mut reader = csv::Reader::from_path(path)?;
            let records = reader
                .deserialize::<QuarterRecord>()
                .map(|r| r.map(|x| (x.p, x.f)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let rep = quarter_law_check(&records).map_err(|e| CliError::invalid(&origin, "records", e))?;
            rows.push(QuarterRow {
                table: origin,
                session: None,
                records: records.len(),
                mean_abs_q: rep.mean_abs_q,
                expected: a.expect,
                tolerance: a.tolerance,
                pass: a.expect.is_none_or(|e| (rep.mean_abs_q - e).abs() <= a.tolerance),
            });
        }
        None => {
            if a.expect.is_some() {
                return Err(CliError::Usage("--expect applies to --file".into()));
            }
            for t in &SESSION_TABLES {
                for session in [1, 2] {
                    let rep = t.session(session)?;
                    let expected = t.printed_mean_q(session);
                    rows.push(QuarterRow {
                        table: t.name.to_string(),
                        session: Some(session),
                        records: t.rows.len(),
                        mean_abs_q: rep.mean_abs_q,
                        expected: Some(expected),
                        tolerance: a.tolerance,
                        pass: (rep.mean_abs_q - expected).abs() <= a.tolerance,
                    });
                }
            }
        }
    }
    let passed = rows.iter().all(|r| r.pass);
    deliver(&a.output, out, |w| match a.output.format {
        Format::Json => write_json(&rows, w),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["table", "session", "records", "mean_abs_q", "expected", "tolerance", "pass"])?;
            for r in &rows {
                c.write_record([
                    r.table.clone(),
                    r.session.map(|s| s.to_string()).unwrap_or_default(),
                    r.records.to_string(),
                    r.mean_abs_q.to_string(),
                    r.expected.map(|x| x.to_string()).unwrap_or_default(),
                    r.tolerance.to_string(),
                    r.pass.to_string(),
                ])?;
            }
            c.flush().map_err(csv::Error::from)?;
            Ok(())
        }
        Format::Table => {
            let mut t = String::new();
            for r in &rows {
                let session = r.session.map(|s| format!(" session {s}")).unwrap_or_default();
                let expected = r.expected.map(|e| format!(" vs {e:.2}")).unwrap_or_default();
                let _ = writeln!(
                    t,
                    "{}{session}: {} records, mean |q| = {:.4}{expected}  {}",
                    r.table,
                    r.records,
                    r.mean_abs_q,
                    if r.pass { "ok" } else { "FAIL" }
                );
            }
            put(w, &t)
        }
    })?;
    Ok(passed)
}

#[derive(Debug, Serialize)]
struct DecisionRow {
    alternative: String,
    utility: Option<f64>,
    quality: Option<f64>,
    f: f64,
    q: f64,
    p: f64,
}

#[derive(Debug, Serialize)]
struct DecisionSummary {
    stage: String,
    optimum: String,
    ties: Vec<String>,
    clamped: bool,
    alternatives: Vec<DecisionRow>,
}

pub fn parse_decision_str(text: &str, origin: &str) -> Result<Scenario> {
    let doc: DecisionDoc = serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))?;
    let scenario = ScenarioDoc {
        id: "decision".into(),
        title: String::new(),
        note: None,
        beta: doc.beta,
        base: doc.base,
        utility: doc.utility,
        stages: vec![doc.stage],
        expected: Vec::new(),
        checks: Vec::new(),
    };
    doc_to_scenario(&scenario, origin)
}

fn decide(a: &DecideArgs, out: &mut dyn Write) -> Result<bool> {
    let text = std::fs::read_to_string(&a.file).map_err(|e| CliError::io(&a.file, e))?;
    let origin = a.file.display().to_string();
    let scenario = parse_decision_str(&text, &origin)?;
    let report = run_scenario(&scenario).map_err(|e| CliError::invalid(&origin, "stage", e))?;
    let st = &report.stages[0];
    let opt = stochastic_optimum(&st.problem);
    let summary = DecisionSummary {
        stage: st.name.clone(),
        optimum: st.alternatives[opt.index].clone(),
        ties: opt.ties.iter().map(|&i| st.alternatives[i].clone()).collect(),
        clamped: st.problem.clamped(),
        alternatives: st
            .alternatives
            .iter()
            .enumerate()
            .map(|(i, label)| DecisionRow {
                alternative: label.clone(),
                utility: st.utilities.as_ref().map(|u| u[i]),
                quality: st.quality.as_ref().map(|q| q[i]),
                f: st.problem.f()[i],
                q: st.problem.q()[i],
                p: st.problem.p()[i],
            })
            .collect(),
    };
    deliver(&a.output, out, |w| match a.output.format {
        Format::Json => write_json(&summary, w),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["alternative", "utility", "quality", "f", "q", "p"])?;
            for r in &summary.alternatives {
                let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                c.write_record([
                    r.alternative.clone(),
                    opt(r.utility),
                    opt(r.quality),
                    r.f.to_string(),
                    r.q.to_string(),
                    r.p.to_string(),
                ])?;
            }
            c.flush().map_err(csv::Error::from)?;
            Ok(())
        }
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "{:<16} {:>10} {:>10} {:>10}", "alternative", "f", "q", "p");
            for r in &summary.alternatives {
                let _ = writeln!(t, "{:<16} {:>10.4} {:>10.4} {:>10.4}", r.alternative, r.f, r.q, r.p);
            }
            let _ = writeln!(t, "stochastic optimum: {}", summary.optimum);
            put(w, &t)
        }
    })?;
    Ok(true)
}
