//! JSON scenario files.
//!
//! A file holds one scenario. Parsing goes through plain serde documents and a
//! validating conversion, so malformed JSON reports a line and column while
//! well-formed but invalid content names the stage, lottery or expectation
//! at fault.

use std::collections::HashSet;
use std::path::Path;

use affectq_core::attraction::QUALITY_BASE;
use affectq_core::lottery::validate_lottery;
use affectq_core::paradox::{
    AttractionSource, Check, ConditionalTable, Expectation, Kind, Quantity, Scenario, Stage,
    UtilitySource,
};
use affectq_core::{Lottery, Utility};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default)]
    pub utility: UtilityDoc,
    #[serde(default)]
    pub stages: Vec<StageDoc>,
    #[serde(default)]
    pub expected: Vec<ExpectationDoc>,
    #[serde(default)]
    pub checks: Vec<CheckDoc>,
}

fn default_base() -> f64 {
    QUALITY_BASE
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilityDoc {
    #[default]
    Linear,
    Log {
        #[serde(default)]
        wealth: f64,
    },
    Sqrt,
    Table {
        points: Vec<[f64; 2]>,
    },
    Scaled {
        factor: f64,
        inner: Box<UtilityDoc>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub name: String,
    pub alternatives: Vec<String>,
    pub utility: StageUtilityDoc,
    /// Required; kept optional here so that its absence is reported with the
    /// stage name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attraction: Option<AttractionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum StageUtilityDoc {
    /// One lottery per alternative, each a list of `[payoff, probability]`.
    Lotteries { lotteries: Vec<Vec<[f64; 2]>> },
    Utilities { values: Vec<f64> },
    Conditional {
        conditional: Vec<Vec<f64>>,
        prior: Vec<f64>,
    },
    Fractions { values: Vec<f64> },
    Inferred { observed: Vec<f64> },
    SameAs { stage: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AttractionDoc {
    Quality,
    Declared { ranking: Vec<Vec<String>> },
    Neutral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationDoc {
    pub label: String,
    pub quantity: String,
    pub predicted: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experimental: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckDoc {
    Preferred { stage: String, alternative: String },
    Indifferent { stage: String },
    Interior { stage: String },
    Divergence { max_n: u32 },
    EllsbergGap { points: usize },
}

/// Parse a scenario from JSON text; `origin` names the source in errors.
pub fn parse_scenario_str(text: &str, origin: &str) -> Result<Scenario> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))?;
    doc_to_scenario(&doc, origin)
}

pub fn parse_scenario_file(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario_str(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline.
pub fn scenario_to_json(s: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(&scenario_to_doc(s)).expect("documents serialize");
    out.push('\n');
    out
}

fn utility_to_doc(u: &Utility) -> UtilityDoc {
    match u {
        Utility::Linear => UtilityDoc::Linear,
        Utility::Log { wealth } => UtilityDoc::Log { wealth: *wealth },
        Utility::Sqrt => UtilityDoc::Sqrt,
        Utility::Table(t) => UtilityDoc::Table {
            points: t.points().iter().map(|&(x, y)| [x, y]).collect(),
        },
        Utility::Scaled(a, inner) => UtilityDoc::Scaled {
            factor: *a,
            inner: Box::new(utility_to_doc(inner)),
        },
    }
}

pub fn scenario_to_doc(s: &Scenario) -> ScenarioDoc {
    ScenarioDoc {
        id: s.id.clone(),
        title: s.title.clone(),
        note: s.note.clone(),
        beta: s.beta,
        base: s.base,
        utility: utility_to_doc(&s.utility),
        stages: s
            .stages
            .iter()
            .map(|st| StageDoc {
                name: st.name.clone(),
                alternatives: st.alternatives.clone(),
                utility: match &st.utility {
                    UtilitySource::Lotteries(ls) => StageUtilityDoc::Lotteries {
                        lotteries: ls
                            .iter()
                            .map(|l| l.entries().map(|(x, p)| [x, p]).collect())
                            .collect(),
                    },
                    UtilitySource::Utilities(v) => StageUtilityDoc::Utilities { values: v.clone() },
                    UtilitySource::Conditional(t) => StageUtilityDoc::Conditional {
                        conditional: t.conditional.clone(),
                        prior: t.prior.clone(),
                    },
                    UtilitySource::Fractions(v) => StageUtilityDoc::Fractions { values: v.clone() },
                    UtilitySource::Inferred(v) => StageUtilityDoc::Inferred { observed: v.clone() },
                    UtilitySource::SameAs(name) => StageUtilityDoc::SameAs { stage: name.clone() },
                },
                attraction: Some(match &st.attraction {
                    AttractionSource::Quality => AttractionDoc::Quality,
                    AttractionSource::Declared(r) => AttractionDoc::Declared { ranking: r.clone() },
                    AttractionSource::Neutral => AttractionDoc::Neutral,
                }),
            })
            .collect(),
        expected: s
            .expectations
            .iter()
            .map(|e| ExpectationDoc {
                label: e.label.clone(),
                quantity: e.quantity.to_string(),
                predicted: e.predicted,
                experimental: e.experimental,
                tolerance: e.tolerance,
            })
            .collect(),
        checks: s
            .checks
            .iter()
            .map(|c| match c {
                Check::Preferred { stage, alternative } => CheckDoc::Preferred {
                    stage: stage.clone(),
                    alternative: alternative.clone(),
                },
                Check::Indifferent { stage } => CheckDoc::Indifferent { stage: stage.clone() },
                Check::Interior { stage } => CheckDoc::Interior { stage: stage.clone() },
                Check::Divergence { max_n } => CheckDoc::Divergence { max_n: *max_n },
                Check::EllsbergGap { points } => CheckDoc::EllsbergGap { points: *points },
            })
            .collect(),
    }
}

fn doc_to_utility(d: &UtilityDoc, origin: &str) -> Result<Utility> {
    let bad = |e: affectq_core::Error| CliError::invalid(origin, "utility", e);
    Ok(match d {
        UtilityDoc::Linear => Utility::Linear,
        UtilityDoc::Log { wealth } => {
            if !wealth.is_finite() {
                return Err(CliError::invalid(origin, "utility", "wealth must be finite"));
            }
            Utility::Log { wealth: *wealth }
        }
        UtilityDoc::Sqrt => Utility::Sqrt,
        UtilityDoc::Table { points } => {
            Utility::table(points.iter().map(|&[x, y]| (x, y)).collect()).map_err(bad)?
        }
        UtilityDoc::Scaled { factor, inner } => {
            doc_to_utility(inner, origin)?.scaled(*factor).map_err(bad)?
        }
    })
}

fn check_len(origin: &str, context: &str, what: &str, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(CliError::invalid(
            origin,
            context,
            format!("{found} {what} for {expected} alternatives"),
        ));
    }
    Ok(())
}

fn check_finite(origin: &str, context: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::invalid(origin, context, "values must be finite"));
    }
    Ok(())
}

fn quantity_refs<'a>(q: &'a Quantity, out: &mut Vec<(Kind, &'a str, &'a str)>) {
    match q {
        Quantity::Value {
            kind,
            stage,
            alternative,
        } => out.push((*kind, stage, alternative)),
        Quantity::Difference(a, b) => {
            quantity_refs(a, out);
            quantity_refs(b, out);
        }
        Quantity::Mean(items) => items.iter().for_each(|i| quantity_refs(i, out)),
    }
}

/// Validate a document and build the scenario it describes.
pub fn doc_to_scenario(doc: &ScenarioDoc, origin: &str) -> Result<Scenario> {
    let origin = if origin.is_empty() { doc.id.as_str() } else { origin };
    if doc.id.trim().is_empty() {
        return Err(CliError::invalid(origin, "id", "must not be empty"));
    }
    if !doc.beta.is_finite() {
        return Err(CliError::invalid(origin, "beta", "must be finite"));
    }
    if !(doc.base > 1.0) || !doc.base.is_finite() {
        return Err(CliError::invalid(origin, "base", "must be finite and greater than 1"));
    }
    let mut scenario = Scenario::new(&doc.id, &doc.title);
    scenario.note = doc.note.clone();
    scenario.beta = doc.beta;
    scenario.base = doc.base;
    scenario.utility = doc_to_utility(&doc.utility, origin)?;

    let mut seen: Vec<&StageDoc> = Vec::new();
    for st in &doc.stages {
        let ctx = format!("stage `{}`", st.name);
        if st.name.is_empty() {
            return Err(CliError::invalid(origin, "stage", "name must not be empty"));
        }
        if seen.iter().any(|s| s.name == st.name) {
            return Err(CliError::invalid(origin, ctx, "duplicate stage name"));
        }
        let n = st.alternatives.len();
        if n == 0 {
            return Err(CliError::invalid(origin, ctx, "no alternatives"));
        }
        let mut labels = HashSet::new();
        for a in &st.alternatives {
            if a.is_empty() || a.contains('/') || !labels.insert(a.as_str()) {
                return Err(CliError::invalid(
                    origin,
                    ctx,
                    format!("alternative `{a}` is empty, contains `/` or repeats"),
                ));
            }
        }
        let utility = match &st.utility {
            StageUtilityDoc::Lotteries { lotteries } => {
                check_len(origin, &ctx, "lotteries", lotteries.len(), n)?;
                let mut out = Vec::with_capacity(n);
                for (label, entries) in st.alternatives.iter().zip(lotteries) {
                    let (payoffs, probs): (Vec<f64>, Vec<f64>) =
                        entries.iter().map(|&[x, p]| (x, p)).unzip();
                    if let Some(issue) = validate_lottery(&payoffs, &probs).into_iter().next() {
                        return Err(CliError::invalid(
                            origin,
                            format!("{ctx}, lottery `{label}`"),
                            format!("invalid lottery: {issue}"),
                        ));
                    }
                    out.push(Lottery::new(payoffs, probs).map_err(CliError::Core)?);
                }
                UtilitySource::Lotteries(out)
            }
            StageUtilityDoc::Utilities { values } => {
                check_len(origin, &ctx, "utilities", values.len(), n)?;
                check_finite(origin, &ctx, values)?;
                UtilitySource::Utilities(values.clone())
            }
            StageUtilityDoc::Conditional { conditional, prior } => {
                for row in conditional {
                    check_len(origin, &ctx, "conditional fractions", row.len(), n)?;
                    check_finite(origin, &ctx, row)?;
                }
                check_finite(origin, &ctx, prior)?;
                let table = ConditionalTable {
                    conditional: conditional.clone(),
                    prior: prior.clone(),
                };
                affectq_core::paradox::compose_conditional(&table)
                    .map_err(|e| CliError::invalid(origin, &ctx, e))?;
                UtilitySource::Conditional(table)
            }
            StageUtilityDoc::Fractions { values } => {
                check_len(origin, &ctx, "fractions", values.len(), n)?;
                check_probabilities(origin, &ctx, values)?;
                UtilitySource::Fractions(values.clone())
            }
            StageUtilityDoc::Inferred { observed } => {
                check_len(origin, &ctx, "observed fractions", observed.len(), n)?;
                check_probabilities(origin, &ctx, observed)?;
                UtilitySource::Inferred(observed.clone())
            }
            StageUtilityDoc::SameAs { stage } => {
                let Some(earlier) = seen.iter().find(|s| &s.name == stage) else {
                    return Err(CliError::invalid(
                        origin,
                        ctx,
                        format!("same_as refers to `{stage}`, which is not an earlier stage"),
                    ));
                };
                check_len(origin, &ctx, "alternatives in the referenced stage", earlier.alternatives.len(), n)?;
                UtilitySource::SameAs(stage.clone())
            }
        };
        let attraction = match &st.attraction {
            None => {
                return Err(CliError::invalid(origin, ctx, "missing field `attraction`"));
            }
            Some(AttractionDoc::Quality) => {
                if !matches!(utility, UtilitySource::Lotteries(_)) {
                    return Err(CliError::invalid(
                        origin,
                        ctx,
                        "quality attraction needs lotteries as the utility source",
                    ));
                }
                AttractionSource::Quality
            }
            Some(AttractionDoc::Neutral) => AttractionSource::Neutral,
            Some(AttractionDoc::Declared { ranking }) => {
                let mut listed = HashSet::new();
                for label in ranking.iter().flatten() {
                    if !labels.contains(label.as_str()) {
                        return Err(CliError::invalid(
                            origin,
                            ctx,
                            format!("ranking names unknown alternative `{label}`"),
                        ));
                    }
                    if !listed.insert(label.as_str()) {
                        return Err(CliError::invalid(origin, ctx, format!("ranking repeats `{label}`")));
                    }
                }
                if listed.len() != n || ranking.iter().any(|b| b.is_empty()) {
                    return Err(CliError::invalid(
                        origin,
                        ctx,
                        "ranking must list every alternative once in nonempty blocks",
                    ));
                }
                AttractionSource::Declared(ranking.clone())
            }
        };
        scenario.stages.push(Stage {
            name: st.name.clone(),
            alternatives: st.alternatives.clone(),
            utility,
            attraction,
        });
        seen.push(st);
    }

    let find = |stage: &str, alt: Option<&str>| -> bool {
        doc.stages
            .iter()
            .any(|s| s.name == stage && alt.is_none_or(|a| s.alternatives.iter().any(|x| x == a)))
    };

    for e in &doc.expected {
        let ctx = format!("expectation `{}`", e.label);
        let quantity: Quantity = e
            .quantity
            .parse()
            .map_err(|err| CliError::invalid(origin, &ctx, err))?;
        let mut refs = Vec::new();
        quantity_refs(&quantity, &mut refs);
        for (_, stage, alt) in &refs {
            if !find(stage, Some(alt)) {
                return Err(CliError::invalid(
                    origin,
                    ctx,
                    format!("`{stage}/{alt}` is not a stage alternative"),
                ));
            }
        }
        if !(e.tolerance > 0.0) || !e.tolerance.is_finite() {
            return Err(CliError::invalid(origin, ctx, "tolerance must be positive"));
        }
        if !e.predicted.is_finite() || e.experimental.is_some_and(|x| !x.is_finite()) {
            return Err(CliError::invalid(origin, ctx, "values must be finite"));
        }
        let is_probability = matches!(
            quantity,
            Quantity::Value {
                kind: Kind::Probability | Kind::UtilityFactor | Kind::Retracted,
                ..
            }
        );
        if is_probability
            && (!(0.0..=1.0).contains(&e.predicted)
                || e.experimental.is_some_and(|x| !(0.0..=1.0).contains(&x)))
        {
            return Err(CliError::invalid(origin, ctx, "probabilities must lie in [0, 1]"));
        }
        scenario.expectations.push(Expectation {
            label: e.label.clone(),
            quantity,
            predicted: e.predicted,
            experimental: e.experimental,
            tolerance: e.tolerance,
        });
    }

    for c in &doc.checks {
        let check = match c {
            CheckDoc::Preferred { stage, alternative } => {
                if !find(stage, Some(alternative)) {
                    return Err(CliError::invalid(
                        origin,
                        "checks",
                        format!("`{stage}/{alternative}` is not a stage alternative"),
                    ));
                }
                Check::Preferred {
                    stage: stage.clone(),
                    alternative: alternative.clone(),
                }
            }
            CheckDoc::Indifferent { stage } | CheckDoc::Interior { stage } => {
                if !find(stage, None) {
                    return Err(CliError::invalid(origin, "checks", format!("unknown stage `{stage}`")));
                }
                if matches!(c, CheckDoc::Indifferent { .. }) {
                    Check::Indifferent { stage: stage.clone() }
                } else {
                    Check::Interior { stage: stage.clone() }
                }
            }
            CheckDoc::Divergence { max_n } => {
                if *max_n == 0 {
                    return Err(CliError::invalid(origin, "checks", "max_n must be positive"));
                }
                Check::Divergence { max_n: *max_n }
            }
            CheckDoc::EllsbergGap { points } => {
                if *points < 2 {
                    return Err(CliError::invalid(origin, "checks", "points must be at least 2"));
                }
                Check::EllsbergGap { points: *points }
            }
        };
        scenario.checks.push(check);
    }
    Ok(scenario)
}

fn check_probabilities(origin: &str, context: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::invalid(origin, context, "fractions must lie in [0, 1]"));
    }
    Ok(())
}
