//! Choice paradoxes as executable scenarios.
//!
//! A [`Scenario`] is a list of decision stages. Each stage builds utility
//! factors from lotteries, expected utilities, conditional tables or observed
//! fractions; takes attraction factors from the ladder priors under a quality
//! ranking or a declared ranking; and assembles `p = f + q`. Expectations
//! compare computed quantities against printed predictions and record the
//! observed values next to them.

mod catalog;
pub mod tables;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::attraction::{ladder_priors, lottery_quality, rank_lotteries, Ranking, QUALITY_BASE};
use crate::decision::{assemble, stochastic_optimum, DecisionProblem};
use crate::lottery::{expected_utility, gain_loss_number, Lottery, Utility};
use crate::utility::{stpetersburg_analysis, utility_factor, Belief};
use crate::{Error, Result};

pub use catalog::{catalog, scenario, CATALOG_IDS};

/// Slack added to every tolerance comparison so that boundary values printed
/// to fewer digits are accepted.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Tolerance for matching printed predictions.
pub const PREDICTION_TOL: f64 = 0.005;

/// Conditional choice fractions `f(A_i | B_a)` with priors `f(B_a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    /// `conditional[a][i] = f(A_i | B_a)`.
    pub conditional: Vec<Vec<f64>>,
    pub prior: Vec<f64>,
}

fn check_distribution(v: &[f64], what: &str) -> Result<()> {
    if v.iter().any(|x| !(0.0..=1.0).contains(x)) || (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::MissingInput(format!("{what} must be a probability vector")));
    }
    Ok(())
}

/// Total probability `f(A_i) = sum_a f(A_i | B_a) f(B_a)`.
pub fn compose_conditional(table: &ConditionalTable) -> Result<Vec<f64>> {
    if table.conditional.len() != table.prior.len() || table.prior.is_empty() {
        return Err(Error::LengthMismatch {
            expected: table.prior.len(),
            found: table.conditional.len(),
        });
    }
    check_distribution(&table.prior, "condition prior")?;
    let n = table.conditional[0].len();
    for row in &table.conditional {
        if row.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: row.len(),
            });
        }
        check_distribution(row, "conditional row")?;
    }
    Ok((0..n)
        .map(|i| table.conditional.iter().zip(&table.prior).map(|(row, w)| row[i] * w).sum())
        .collect())
}

/// Where a stage gets its utility factors.
#[derive(Debug, Clone, PartialEq)]
pub enum UtilitySource {
    /// Expected utilities of lotteries, then the utility factor at the
    /// scenario belief.
    Lotteries(Vec<Lottery>),
    /// Expected utilities given directly.
    Utilities(Vec<f64>),
    /// Composition over an unknown condition.
    Conditional(ConditionalTable),
    /// Utility factors given directly.
    Fractions(Vec<f64>),
    /// `f = p_observed - q`, with `q` from the stage's own ranking.
    Inferred(Vec<f64>),
    /// The utility factors of an earlier stage.
    SameAs(String),
}

/// Where a stage gets its attractiveness ranking.
#[derive(Debug, Clone, PartialEq)]
pub enum AttractionSource {
    /// Lottery quality, ties broken by the gain-loss number.
    Quality,
    /// Blocks of alternative labels, most attractive first.
    Declared(Vec<Vec<String>>),
    /// All alternatives equally attractive.
    Neutral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: String,
    pub alternatives: Vec<String>,
    pub utility: UtilitySource,
    pub attraction: AttractionSource,
}

/// Quantity kinds that a stage reports per alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    UtilityFactor,
    Attraction,
    Probability,
    /// `f + q` retracted to `[0, 1]` without renormalization; equals the
    /// probability whenever no retraction fired in the stage.
    Retracted,
    ExpectedUtility,
    Quality,
    GainLoss,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::UtilityFactor => "f",
            Kind::Attraction => "q",
            Kind::Probability => "p",
            Kind::Retracted => "r",
            Kind::ExpectedUtility => "U",
            Kind::Quality => "Q",
            Kind::GainLoss => "N",
        }
    }

    fn from_symbol(s: &str) -> Option<Kind> {
        Some(match s {
            "f" => Kind::UtilityFactor,
            "q" => Kind::Attraction,
            "p" => Kind::Probability,
            "r" => Kind::Retracted,
            "U" => Kind::ExpectedUtility,
            "Q" => Kind::Quality,
            "N" => Kind::GainLoss,
            _ => return None,
        })
    }
}

/// A computed quantity, written `p(stage/alt)` (kinds `f q p r U Q N`), `a - b` or `mean(a, b, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Value {
        kind: Kind,
        stage: String,
        alternative: String,
    },
    Difference(alloc::boxed::Box<Quantity>, alloc::boxed::Box<Quantity>),
    Mean(Vec<Quantity>),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Value {
                kind,
                stage,
                alternative,
            } => write!(f, "{}({stage}/{alternative})", kind.symbol()),
            Quantity::Difference(a, b) => write!(f, "{a} - {b}"),
            Quantity::Mean(items) => {
                f.write_str("mean(")?;
                for (i, q) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{q}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Split at top-level occurrences of `sep` (outside parentheses).
fn split_top(s: &str, sep: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            parts.push(s[start..i].to_string());
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    parts.push(s[start..].to_string());
    parts
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(text: &str) -> Result<Quantity> {
        let bad = || Error::UnknownQuantity(text.to_string());
        let s = text.trim();
        let terms = split_top(s, " - ");
        if terms.len() == 2 {
            return Ok(Quantity::Difference(
                alloc::boxed::Box::new(terms[0].parse()?),
                alloc::boxed::Box::new(terms[1].parse()?),
            ));
        }
        if terms.len() > 2 {
            return Err(bad());
        }
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let head = &s[..open];
        if head == "mean" {
            let items = split_top(inner, ",")
                .iter()
                .map(|t| t.parse())
                .collect::<Result<Vec<Quantity>>>()?;
            return if items.is_empty() {
                Err(bad())
            } else {
                Ok(Quantity::Mean(items))
            };
        }
        let kind = Kind::from_symbol(head).ok_or_else(bad)?;
        let (stage, alternative) = inner.split_once('/').ok_or_else(bad)?;
        if stage.is_empty() || alternative.is_empty() || alternative.contains('/') {
            return Err(bad());
        }
        Ok(Quantity::Value {
            kind,
            stage: stage.to_string(),
            alternative: alternative.to_string(),
        })
    }
}

/// A printed prediction with its observed counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub label: String,
    pub quantity: Quantity,
    pub predicted: f64,
    pub experimental: Option<f64>,
    pub tolerance: f64,
}

/// Qualitative properties a scenario must show.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    /// The alternative is the stochastic optimum of the stage.
    Preferred { stage: String, alternative: String },
    /// All alternatives of the stage have equal probability.
    Indifferent { stage: String },
    /// Every alternative of the stage keeps a probability strictly inside `(0, 1)`.
    Interior { stage: String },
    /// The doubling game diverges, forces negative belief and an optimal
    /// number of tosses of order one.
    Divergence { max_n: u32 },
    /// Both two-urn preference gaps stay positive on a uniform grid.
    EllsbergGap { points: usize },
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Preferred { stage, alternative } => write!(f, "{alternative} preferred in {stage}"),
            Check::Indifferent { stage } => write!(f, "indifference in {stage}"),
            Check::Interior { stage } => write!(f, "all choices keep positive probability in {stage}"),
            Check::Divergence { max_n } => write!(f, "divergence with negative belief over {max_n} tosses"),
            Check::EllsbergGap { points } => write!(f, "positive urn preference gaps on {points} points"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub title: String,
    pub note: Option<String>,
    /// Belief parameter for utility factors.
    pub beta: f64,
    /// Base of the lottery quality functional.
    pub base: f64,
    pub utility: Utility,
    pub stages: Vec<Stage>,
    pub expectations: Vec<Expectation>,
    pub checks: Vec<Check>,
}

impl Scenario {
    pub fn new(id: &str, title: &str) -> Self {
        Scenario {
            id: id.to_string(),
            title: title.to_string(),
            note: None,
            beta: 0.0,
            base: QUALITY_BASE,
            utility: Utility::Linear,
            stages: Vec::new(),
            expectations: Vec::new(),
            checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageOutcome {
    pub name: String,
    pub alternatives: Vec<String>,
    pub utilities: Option<Vec<f64>>,
    pub quality: Option<Vec<f64>>,
    pub gain_loss: Option<Vec<i32>>,
    pub ranking: Ranking,
    pub problem: DecisionProblem,
}

impl StageOutcome {
    fn index(&self, label: &str) -> Result<usize> {
        self.alternatives
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownQuantity(format!("{}/{label}", self.name)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantityRow {
    pub label: String,
    pub quantity: String,
    pub computed: f64,
    pub predicted: f64,
    pub experimental: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub description: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub id: String,
    pub stages: Vec<StageOutcome>,
    pub quantities: Vec<QuantityRow>,
    pub checks: Vec<CheckRow>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.quantities.iter().all(|r| r.pass) && self.checks.iter().all(|c| c.pass)
    }

    pub fn stage(&self, name: &str) -> Option<&StageOutcome> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn resolve_ranking(stage: &Stage, blocks: &[Vec<String>]) -> Result<Ranking> {
    let index = |label: &String| {
        stage
            .alternatives
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::MissingInput(format!("{}: ranking names unknown alternative {label}", stage.name)))
    };
    let blocks = blocks
        .iter()
        .map(|b| b.iter().map(index).collect::<Result<Vec<usize>>>())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ranking::from_blocks(blocks)
        .map_err(|_| Error::MissingInput(format!("{}: ranking must list every alternative once", stage.name)))
}

fn expect_len(stage: &Stage, found: usize) -> Result<()> {
    if found != stage.alternatives.len() {
        return Err(Error::LengthMismatch {
            expected: stage.alternatives.len(),
            found,
        });
    }
    Ok(())
}

fn run_stage(s: &Scenario, stage: &Stage, done: &[StageOutcome]) -> Result<StageOutcome> {
    let n = stage.alternatives.len();
    if n < 2 {
        return Err(Error::MissingInput(format!("{}: at least two alternatives", stage.name)));
    }
    for (i, a) in stage.alternatives.iter().enumerate() {
        if stage.alternatives[..i].contains(a) {
            return Err(Error::MissingInput(format!("{}: duplicate alternative {a}", stage.name)));
        }
    }
    let ranking = match &stage.attraction {
        AttractionSource::Quality => match &stage.utility {
            UtilitySource::Lotteries(ls) => rank_lotteries(ls, &s.utility, s.base)?,
            _ => {
                return Err(Error::MissingInput(format!(
                    "{}: quality ranking needs lotteries",
                    stage.name
                )))
            }
        },
        AttractionSource::Declared(blocks) => resolve_ranking(stage, blocks)?,
        AttractionSource::Neutral => Ranking::neutral(n),
    };
    if ranking.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: ranking.len(),
        });
    }
    let q = ladder_priors(n, &ranking)?;
    let belief = Belief::Finite(s.beta);
    let (mut utilities, mut quality, mut gain_loss) = (None, None, None);
    let f = match &stage.utility {
        UtilitySource::Lotteries(ls) => {
            expect_len(stage, ls.len())?;
            let u: Vec<f64> = ls.iter().map(|l| expected_utility(l, &s.utility)).collect();
            quality = Some(
                ls.iter()
                    .map(|l| lottery_quality(l, &s.utility, s.base))
                    .collect::<Result<Vec<f64>>>()?,
            );
            gain_loss = Some(ls.iter().map(gain_loss_number).collect());
            let f = utility_factor(&u, belief, None)?;
            utilities = Some(u);
            f
        }
        UtilitySource::Utilities(u) => {
            expect_len(stage, u.len())?;
            utilities = Some(u.clone());
            utility_factor(u, belief, None)?
        }
        UtilitySource::Conditional(t) => {
            let f = compose_conditional(t)?;
            expect_len(stage, f.len())?;
            f
        }
        UtilitySource::Fractions(f) => {
            expect_len(stage, f.len())?;
            check_distribution(f, &format!("{}: utility factors", stage.name))?;
            f.clone()
        }
        UtilitySource::Inferred(observed) => {
            expect_len(stage, observed.len())?;
            check_distribution(observed, &format!("{}: observed fractions", stage.name))?;
            let f: Vec<f64> = observed.iter().zip(&q).map(|(p, q)| p - q).collect();
            if f.iter().any(|x| !(-1e-12..=1.0 + 1e-12).contains(x)) {
                return Err(Error::Domain("observed fractions imply utility factors outside [0, 1]"));
            }
            f.into_iter().map(|x| x.clamp(0.0, 1.0)).collect()
        }
        UtilitySource::SameAs(name) => {
            let prior = done
                .iter()
                .find(|o| &o.name == name)
                .ok_or_else(|| Error::MissingInput(format!("{}: no earlier stage {name}", stage.name)))?;
            expect_len(stage, prior.problem.len())?;
            prior.problem.f().to_vec()
        }
    };
    Ok(StageOutcome {
        name: stage.name.clone(),
        alternatives: stage.alternatives.clone(),
        utilities,
        quality,
        gain_loss,
        ranking,
        problem: assemble(&f, &q)?,
    })
}

fn evaluate(q: &Quantity, stages: &[StageOutcome]) -> Result<f64> {
    match q {
        Quantity::Value {
            kind,
            stage,
            alternative,
        } => {
            let missing = || Error::UnknownQuantity(q.to_string());
            let o = stages.iter().find(|o| &o.name == stage).ok_or_else(missing)?;
            let i = o.index(alternative)?;
            Ok(match kind {
                Kind::UtilityFactor => o.problem.f()[i],
                Kind::Attraction => o.problem.q()[i],
                Kind::Probability => o.problem.p()[i],
                Kind::Retracted => (o.problem.f()[i] + o.problem.q()[i]).clamp(0.0, 1.0),
                Kind::ExpectedUtility => o.utilities.as_ref().ok_or_else(missing)?[i],
                Kind::Quality => o.quality.as_ref().ok_or_else(missing)?[i],
                Kind::GainLoss => o.gain_loss.as_ref().ok_or_else(missing)?[i] as f64,
            })
        }
        Quantity::Difference(a, b) => Ok(evaluate(a, stages)? - evaluate(b, stages)?),
        Quantity::Mean(items) => {
            let total = items.iter().map(|x| evaluate(x, stages)).sum::<Result<f64>>()?;
            Ok(total / items.len() as f64)
        }
    }
}

fn stage_of<'a>(stages: &'a [StageOutcome], name: &str) -> Result<&'a StageOutcome> {
    stages
        .iter()
        .find(|o| o.name == name)
        .ok_or_else(|| Error::MissingInput(format!("check refers to unknown stage {name}")))
}

fn run_check(check: &Check, stages: &[StageOutcome]) -> Result<bool> {
    Ok(match check {
        Check::Preferred { stage, alternative } => {
            let o = stage_of(stages, stage)?;
            let opt = stochastic_optimum(&o.problem);
            opt.ties.len() <= 1 && opt.index == o.index(alternative)?
        }
        Check::Indifferent { stage } => {
            let p = stage_of(stages, stage)?.problem.p();
            p.iter().all(|x| (x - p[0]).abs() <= 1e-12)
        }
        Check::Interior { stage } => stage_of(stages, stage)?
            .problem
            .p()
            .iter()
            .all(|&x| x > 0.0 && x < 1.0),
        Check::Divergence { max_n } => {
            let r = stpetersburg_analysis(*max_n)?;
            let beta = r.beta_estimate.unwrap_or(0.0);
            r.divergent && r.admits(beta) && !r.admits(-beta) && r.n_opt > 0.5 && r.n_opt < 1.5
        }
        Check::EllsbergGap { points } => {
            if *points < 2 {
                return Err(Error::Domain("grid needs at least two points"));
            }
            let grid: Vec<f64> = (0..*points).map(|i| i as f64 / (*points - 1) as f64).collect();
            ellsberg_curves(&grid)?
                .iter()
                .all(|pt| pt.gap_first > 0.0 && pt.gap_second > 0.0)
        }
    })
}

/// Run every stage, expectation and check of a scenario.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let mut stages: Vec<StageOutcome> = Vec::with_capacity(s.stages.len());
    for stage in &s.stages {
        if stages.iter().any(|o| o.name == stage.name) {
            return Err(Error::MissingInput(format!("duplicate stage name {}", stage.name)));
        }
        let outcome = run_stage(s, stage, &stages)?;
        stages.push(outcome);
    }
    let quantities = s
        .expectations
        .iter()
        .map(|e| {
            let computed = evaluate(&e.quantity, &stages)?;
            Ok(QuantityRow {
                label: e.label.clone(),
                quantity: e.quantity.to_string(),
                computed,
                predicted: e.predicted,
                experimental: e.experimental,
                tolerance: e.tolerance,
                pass: (computed - e.predicted).abs() <= e.tolerance + BOUNDARY_SLACK,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = s
        .checks
        .iter()
        .map(|c| {
            Ok(CheckRow {
                description: c.to_string(),
                pass: run_check(c, &stages)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioReport {
        id: s.id.clone(),
        stages,
        quantities,
        checks,
    })
}

/// Run the whole built-in catalog.
pub fn run_catalog() -> Result<Vec<ScenarioReport>> {
    catalog().iter().map(run_scenario).collect()
}

/// Two-urn choice probabilities at one urn composition.
#[derive(Debug, Clone, PartialEq)]
pub struct EllsbergPoint {
    /// Share of red balls in the unknown urn.
    pub urn: f64,
    /// Unretracted `p(L_1..L_4)` from the closed forms.
    pub closed_form: [f64; 4],
    /// `p(L_1..L_4)` assembled with retraction.
    pub assembled: [f64; 4],
    /// Whether retraction fired for the red and the black choice.
    pub clamped: [bool; 2],
    /// `p(L_1) - p(L_2) = (3 - 2u) / (2 (1 + 2u))`.
    pub gap_first: f64,
    /// `p(L_3) - p(L_4) = (1 + 2u) / (2 (3 - 2u))`.
    pub gap_second: f64,
}

/// Evaluate the two-urn choices on a grid of urn compositions in `[0, 1]`.
pub fn ellsberg_curves(grid: &[f64]) -> Result<Vec<EllsbergPoint>> {
    grid.iter()
        .map(|&u| {
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::Domain("urn composition must lie in [0, 1]"));
            }
            let known = Lottery::from_pairs(&[(1.0, 0.5), (0.0, 0.5)])?;
            let red = Lottery::from_pairs(&[(1.0, u), (0.0, 1.0 - u)])?;
            let black = Lottery::from_pairs(&[(0.0, u), (1.0, 1.0 - u)])?;
            let certain_first = [0.25, -0.25];
            let first = assemble(
                &utility_factor(
                    &[expected_utility(&known, &Utility::Linear), expected_utility(&red, &Utility::Linear)],
                    Belief::Finite(0.0),
                    None,
                )?,
                &certain_first,
            )?;
            let second = assemble(
                &utility_factor(
                    &[expected_utility(&known, &Utility::Linear), expected_utility(&black, &Utility::Linear)],
                    Belief::Finite(0.0),
                    None,
                )?,
                &certain_first,
            )?;
            let closed_form = [
                (5.0 + 2.0 * u) / (4.0 * (1.0 + 2.0 * u)),
                (6.0 * u - 1.0) / (4.0 * (1.0 + 2.0 * u)),
                (7.0 - 2.0 * u) / (4.0 * (3.0 - 2.0 * u)),
                (5.0 - 6.0 * u) / (4.0 * (3.0 - 2.0 * u)),
            ];
            Ok(EllsbergPoint {
                urn: u,
                closed_form,
                assembled: [first.p()[0], first.p()[1], second.p()[0], second.p()[1]],
                clamped: [first.clamped(), second.clamped()],
                gap_first: (3.0 - 2.0 * u) / (2.0 * (1.0 + 2.0 * u)),
                gap_second: (1.0 + 2.0 * u) / (2.0 * (3.0 - 2.0 * u)),
            })
        })
        .collect()
}
