//! Built-in scenarios with their printed predictions and observed values.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::tables::{CONJUNCTION_AVERAGES, CONJUNCTION_ROWS, KT_AVERAGES, KT_ROWS};
use super::{
    AttractionSource, Check, ConditionalTable, Expectation, Quantity, Scenario, Stage, UtilitySource,
    PREDICTION_TOL,
};
use crate::Lottery;

/// Identifiers of the built-in scenarios, in catalog order.
pub const CATALOG_IDS: [&str; 17] = [
    "st_petersburg",
    "martingale",
    "allais",
    "independence",
    "ellsberg",
    "prisoner",
    "disjunction_gamble",
    "disjunction_vacation",
    "conjunction",
    "disposition",
    "ariely",
    "decoy_ovens",
    "decoy_frogs",
    "planning",
    "preference_reversal",
    "intransitivity",
    "kt_buridan",
];

/// Relative tolerance for printed lottery qualities.
const QUALITY_REL_TOL: f64 = 0.005;

fn lottery(pairs: &[(f64, f64)]) -> Lottery {
    Lottery::from_pairs(pairs).expect("catalog lotteries are valid")
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn declared(blocks: &[&[&str]]) -> AttractionSource {
    AttractionSource::Declared(blocks.iter().map(|b| labels(b)).collect())
}

fn stage(name: &str, alternatives: &[&str], utility: UtilitySource, attraction: AttractionSource) -> Stage {
    Stage {
        name: name.to_string(),
        alternatives: labels(alternatives),
        utility,
        attraction,
    }
}

fn quantity(text: &str) -> Quantity {
    text.parse().expect("catalog quantities parse")
}

fn expect(label: &str, q: &str, predicted: f64, experimental: Option<f64>) -> Expectation {
    Expectation {
        label: label.to_string(),
        quantity: quantity(q),
        predicted,
        experimental,
        tolerance: PREDICTION_TOL,
    }
}

fn expect_quality(label: &str, q: &str, predicted: f64) -> Expectation {
    Expectation {
        tolerance: QUALITY_REL_TOL * predicted.abs(),
        ..expect(label, q, predicted, None)
    }
}

fn preferred(stage: &str, alternative: &str) -> Check {
    Check::Preferred {
        stage: stage.to_string(),
        alternative: alternative.to_string(),
    }
}

fn st_petersburg() -> Scenario {
    let mut s = Scenario::new("st_petersburg", "St. Petersburg doubling game");
    s.note = Some("Expected utility of the n-toss lottery grows without bound; only disbelief keeps the optimum finite.".into());
    s.checks.push(Check::Divergence { max_n: 60 });
    s
}

fn martingale() -> Scenario {
    let mut s = Scenario::new("martingale", "Martingale illusion");
    s.note = Some("Qualitative: at every step the gambler only compares stopping with playing on.".into());
    s.stages.push(stage(
        "step",
        &["stop", "play"],
        UtilitySource::Fractions(vec![0.5, 0.5]),
        AttractionSource::Neutral,
    ));
    s.checks.push(Check::Interior { stage: "step".into() });
    s
}

fn allais_lotteries() -> [Lottery; 4] {
    [
        lottery(&[(1.0, 1.0)]),
        lottery(&[(1.0, 0.89), (5.0, 0.10), (0.0, 0.01)]),
        lottery(&[(5.0, 0.1), (0.0, 0.9)]),
        lottery(&[(1.0, 0.11), (0.0, 0.89)]),
    ]
}

fn allais() -> Scenario {
    let [l1, l2, l3, l4] = allais_lotteries();
    let mut s = Scenario::new("allais", "Allais paradox");
    s.stages.push(stage(
        "first",
        &["L1", "L2"],
        UtilitySource::Lotteries(vec![l1, l2]),
        AttractionSource::Quality,
    ));
    s.stages.push(stage(
        "second",
        &["L3", "L4"],
        UtilitySource::Lotteries(vec![l3, l4]),
        AttractionSource::Quality,
    ));
    s.expectations = vec![
        expect("f(L1)", "f(first/L1)", 0.418, None),
        expect("f(L2)", "f(first/L2)", 0.582, None),
        expect_quality("Q(L1)", "Q(first/L1)", 30.0),
        expect_quality("Q(L2)", "Q(first/L2)", 27.7),
        expect("p(L1)", "p(first/L1)", 0.67, None),
        expect("p(L2)", "p(first/L2)", 0.33, None),
        expect("f(L3)", "f(second/L3)", 0.82, None),
        expect("f(L4)", "f(second/L4)", 0.18, None),
        expect_quality("Q(L3)", "Q(second/L3)", 7.03),
        expect_quality("Q(L4)", "Q(second/L4)", 1.45),
    ];
    s.checks = vec![preferred("first", "L1"), preferred("second", "L3")];
    s
}

fn independence() -> Scenario {
    let [l1, l2, l3, l4] = allais_lotteries();
    let l5 = l1.mix(&l3, 0.5).expect("valid mixture");
    let l6 = l2.mix(&l4, 0.5).expect("valid mixture");
    let mut s = Scenario::new("independence", "Independence paradox");
    s.note = Some("Equal-weight mixtures of the Allais pairs coincide, so they are chosen equally often.".into());
    s.stages.push(stage(
        "mixed",
        &["L5", "L6"],
        UtilitySource::Lotteries(vec![l5, l6]),
        AttractionSource::Quality,
    ));
    s.expectations = vec![
        Expectation {
            tolerance: 1e-12,
            ..expect("U(L5) - U(L6)", "U(mixed/L5) - U(mixed/L6)", 0.0, None)
        },
        expect("p(L5)", "p(mixed/L5)", 0.5, None),
    ];
    s.checks = vec![Check::Indifferent { stage: "mixed".into() }];
    s
}

fn ellsberg() -> Scenario {
    let mut s = Scenario::new("ellsberg", "Ellsberg two-urn paradox");
    s.note = Some("Unknown urn with half red balls; uncertainty aversion favours the known urn.".into());
    let known = lottery(&[(1.0, 0.5), (0.0, 0.5)]);
    let unknown = lottery(&[(1.0, 0.5), (0.0, 0.5)]);
    let known_black = lottery(&[(0.0, 0.5), (1.0, 0.5)]);
    let unknown_black = lottery(&[(0.0, 0.5), (1.0, 0.5)]);
    s.stages.push(stage(
        "red",
        &["L1", "L2"],
        UtilitySource::Lotteries(vec![known, unknown]),
        declared(&[&["L1"], &["L2"]]),
    ));
    s.stages.push(stage(
        "black",
        &["L3", "L4"],
        UtilitySource::Lotteries(vec![known_black, unknown_black]),
        declared(&[&["L3"], &["L4"]]),
    ));
    s.expectations = vec![
        expect("p(L1)", "p(red/L1)", 0.75, None),
        expect("p(L2)", "p(red/L2)", 0.25, None),
        expect("p(L3)", "p(black/L3)", 0.75, None),
        expect("p(L4)", "p(black/L4)", 0.25, None),
    ];
    s.checks = vec![
        preferred("red", "L1"),
        preferred("black", "L3"),
        Check::EllsbergGap { points: 101 },
    ];
    s
}

fn conditional_scenario(
    id: &str,
    title: &str,
    rows: [[f64; 2]; 2],
    attractive: &str,
    f1: f64,
    p: [f64; 2],
    p_exp: [f64; 2],
) -> Scenario {
    let other = if attractive == "A1" { "A2" } else { "A1" };
    let mut s = Scenario::new(id, title);
    s.stages.push(stage(
        "unknown",
        &["A1", "A2"],
        UtilitySource::Conditional(ConditionalTable {
            conditional: rows.iter().map(|r| r.to_vec()).collect(),
            prior: vec![0.5, 0.5],
        }),
        declared(&[&[attractive], &[other]]),
    ));
    s.expectations = vec![
        expect("f(A1)", "f(unknown/A1)", f1, None),
        expect("p(A1)", "p(unknown/A1)", p[0], Some(p_exp[0])),
        expect("p(A2)", "p(unknown/A2)", p[1], Some(p_exp[1])),
    ];
    let winner = if p[0] > p[1] { "A1" } else { "A2" };
    s.checks = vec![preferred("unknown", winner)];
    s
}

fn prisoner() -> Scenario {
    let mut s = conditional_scenario(
        "prisoner",
        "Prisoner dilemma under an unknown opponent move",
        [[0.16, 0.84], [0.03, 0.97]],
        "A1",
        0.095,
        [0.35, 0.65],
        [0.37, 0.63],
    );
    s.note = Some("A1 cooperates, A2 betrays; cooperation is the more attractive action.".into());
    s
}

fn disjunction_gamble() -> Scenario {
    let mut s = conditional_scenario(
        "disjunction_gamble",
        "Disjunction effect: second gamble after an unknown outcome",
        [[0.69, 0.31], [0.59, 0.41]],
        "A2",
        0.64,
        [0.39, 0.61],
        [0.36, 0.64],
    );
    s.note = Some("A1 accepts the second gamble, A2 declines; passive waiting is more attractive under uncertainty.".into());
    s
}

fn disjunction_vacation() -> Scenario {
    let mut s = conditional_scenario(
        "disjunction_vacation",
        "Disjunction effect: vacation before exam results",
        [[0.54, 0.46], [0.57, 0.43]],
        "A2",
        0.555,
        [0.31, 0.69],
        [0.32, 0.68],
    );
    s.note = Some("A1 books the vacation, A2 declines.".into());
    s
}

fn conjunction() -> Scenario {
    let mut s = Scenario::new("conjunction", "Conjunction fallacy for incompatible features");
    s.note = Some(
        "A1 is the primary feature, B1 the secondary one; alternatives are ranked by certainty. \
         f + q for A1B2 is negative, so the conjunction value is read before renormalization."
            .into(),
    );
    s.stages.push(stage(
        "primary",
        &["A1", "A2"],
        UtilitySource::Fractions(vec![0.5, 0.5]),
        declared(&[&["A2"], &["A1"]]),
    ));
    s.stages.push(stage(
        "conjunction",
        &["A1B1", "A1B2", "A2B1", "A2B2"],
        UtilitySource::Fractions(vec![0.25; 4]),
        declared(&[&["A2B1"], &["A1B1"], &["A2B2"], &["A1B2"]]),
    ));
    let error = "r(conjunction/A1B1) - p(primary/A1)";
    let (avg_joint, avg_primary, avg_error) = CONJUNCTION_AVERAGES;
    s.expectations = vec![
        expect("p(A1)", "p(primary/A1)", 0.25, Some(avg_primary)),
        expect("p(A1B1)", "r(conjunction/A1B1)", 0.375, Some(avg_joint)),
        expect("conjunction error", error, 0.125, Some(avg_error)),
        expect("q(A2B1)", "q(conjunction/A2B1)", 0.375, None),
        expect("q(A1B1)", "q(conjunction/A1B1)", 0.125, None),
        expect("q(A2B2)", "q(conjunction/A2B2)", -0.125, None),
        expect("q(A1B2)", "q(conjunction/A1B2)", -0.375, None),
    ];
    for (a, b, joint, primary, err) in CONJUNCTION_ROWS {
        let pair = format!("{a} & {b}");
        s.expectations.push(expect(&format!("{pair}: p(A1B1)"), "r(conjunction/A1B1)", 0.375, Some(joint)));
        s.expectations.push(expect(&format!("{pair}: p(A1)"), "p(primary/A1)", 0.25, Some(primary)));
        s.expectations.push(expect(&format!("{pair}: error"), error, 0.125, Some(err)));
    }
    s
}

fn disposition() -> Scenario {
    let mut s = Scenario::new("disposition", "Disposition effect with unit stake");
    s.stages.push(stage(
        "gains",
        &["L1", "L2"],
        UtilitySource::Lotteries(vec![
            lottery(&[(1.0, 0.5), (0.0, 0.5)]),
            lottery(&[(0.5, 1.0), (0.0, 0.0)]),
        ]),
        AttractionSource::Quality,
    ));
    s.stages.push(stage(
        "losses",
        &["L3", "L4"],
        UtilitySource::Lotteries(vec![
            lottery(&[(-1.0, 0.5), (0.0, 0.5)]),
            lottery(&[(-0.5, 1.0), (0.0, 0.0)]),
        ]),
        AttractionSource::Quality,
    ));
    s.expectations = vec![
        expect_quality("Q(L1)", "Q(gains/L1)", 5.5),
        expect_quality("Q(L2)", "Q(gains/L2)", 15.0),
        expect_quality("Q(L3)", "Q(losses/L3)", -5.5),
        expect_quality("Q(L4)", "Q(losses/L4)", -15.0),
        expect("f(L1)", "f(gains/L1)", 0.5, None),
        expect("f(L3)", "f(losses/L3)", 0.5, None),
        expect("p(L2)", "p(gains/L2)", 0.75, Some(0.77)),
        expect("p(L3)", "p(losses/L3)", 0.75, Some(0.77)),
    ];
    s.checks = vec![preferred("gains", "L2"), preferred("losses", "L3")];
    s
}

fn ariely() -> Scenario {
    let mut s = Scenario::new("ariely", "Free-item choice reversal");
    s.note = Some("Equal utilities; the better item attracts first, the free item attracts second.".into());
    s.stages.push(stage(
        "priced",
        &["L1", "L2"],
        UtilitySource::Utilities(vec![1.0, 1.0]),
        declared(&[&["L1"], &["L2"]]),
    ));
    s.stages.push(stage(
        "free",
        &["L3", "L4"],
        UtilitySource::Utilities(vec![1.0, 1.0]),
        declared(&[&["L4"], &["L3"]]),
    ));
    s.expectations = vec![
        expect("p(L1)", "p(priced/L1)", 0.75, Some(0.73)),
        expect("p(L2)", "p(priced/L2)", 0.25, Some(0.27)),
        expect("p(L3)", "p(free/L3)", 0.25, Some(0.31)),
        expect("p(L4)", "p(free/L4)", 0.75, Some(0.69)),
    ];
    s.checks = vec![preferred("priced", "L1"), preferred("free", "L4")];
    s
}

fn decoy(id: &str, title: &str, f_a: f64, p_a: f64, exp_a: f64) -> Scenario {
    let mut s = Scenario::new(id, title);
    s.note = Some("The decoy draws attention to the feature in which A excels.".into());
    s.stages.push(stage(
        "with_decoy",
        &["A", "B"],
        UtilitySource::Fractions(vec![f_a, 1.0 - f_a]),
        declared(&[&["A"], &["B"]]),
    ));
    s.expectations = vec![
        expect("p(A)", "p(with_decoy/A)", p_a, Some(exp_a)),
        expect("p(B)", "p(with_decoy/B)", 1.0 - p_a, Some(1.0 - exp_a)),
    ];
    s.checks = vec![preferred("with_decoy", "A")];
    s
}

fn planning() -> Scenario {
    let mut s = Scenario::new("planning", "Planning paradox: quitting smoking");
    s.note = Some("A1 plans to quit, B1 actually quits; utility factors carry over from planning to acting.".into());
    s.stages.push(stage(
        "plan",
        &["A1", "A2"],
        UtilitySource::Inferred(vec![0.85, 0.15]),
        declared(&[&["A1"], &["A2"]]),
    ));
    s.stages.push(stage(
        "act",
        &["B1", "B2"],
        UtilitySource::SameAs("plan".into()),
        declared(&[&["B2"], &["B1"]]),
    ));
    s.expectations = vec![
        expect("f(A1)", "f(plan/A1)", 0.6, None),
        expect("p(B1)", "p(act/B1)", 0.35, Some(0.36)),
        expect("p(B2)", "p(act/B2)", 0.65, Some(0.64)),
    ];
    s.checks = vec![preferred("plan", "A1"), preferred("act", "B2")];
    s
}

fn preference_reversal() -> Scenario {
    let l1 = lottery(&[(4.0, 8.0 / 9.0), (0.0, 1.0 / 9.0)]);
    let l2 = lottery(&[(40.0, 1.0 / 9.0), (0.0, 8.0 / 9.0)]);
    let mut s = Scenario::new("preference_reversal", "Preference reversal between choosing and pricing");
    s.note = Some("Pricing is treated as emotionally neutral.".into());
    s.stages.push(stage(
        "choice",
        &["L1", "L2"],
        UtilitySource::Lotteries(vec![l1.clone(), l2.clone()]),
        AttractionSource::Quality,
    ));
    s.stages.push(stage(
        "pricing",
        &["L3", "L4"],
        UtilitySource::Lotteries(vec![l1, l2]),
        AttractionSource::Neutral,
    ));
    s.expectations = vec![
        expect("f(L1)", "f(choice/L1)", 0.444, None),
        expect("f(L2)", "f(choice/L2)", 0.556, None),
        expect_quality("Q(L1)", "Q(choice/L1)", 82.2),
        expect_quality("Q(L2)", "Q(choice/L2)", 58.4),
        expect("p(L1)", "p(choice/L1)", 0.694, Some(0.71)),
        expect("p(L2)", "p(choice/L2)", 0.306, Some(0.29)),
    ];
    s.checks = vec![preferred("choice", "L1"), preferred("pricing", "L4")];
    s
}

fn intransitivity() -> Scenario {
    let mut s = Scenario::new("intransitivity", "Intransitive job choice");
    s.note = Some("Salaries 65, 58 and 50 thousand; prestige only matters in the last comparison.".into());
    s.stages.push(stage(
        "AB",
        &["A", "B"],
        UtilitySource::Utilities(vec![65.0, 58.0]),
        AttractionSource::Neutral,
    ));
    s.stages.push(stage(
        "BC",
        &["B", "C"],
        UtilitySource::Utilities(vec![58.0, 50.0]),
        AttractionSource::Neutral,
    ));
    s.stages.push(stage(
        "CA",
        &["C", "A"],
        UtilitySource::Utilities(vec![50.0, 65.0]),
        declared(&[&["C"], &["A"]]),
    ));
    s.expectations = vec![
        expect("f1(A)", "f(AB/A)", 0.528, None),
        expect("p1(A)", "p(AB/A)", 0.528, None),
        expect("f2(B)", "f(BC/B)", 0.537, None),
        expect("p2(B)", "p(BC/B)", 0.537, None),
        expect("f3(C)", "f(CA/C)", 0.435, None),
        expect("p3(C)", "p(CA/C)", 0.685, None),
    ];
    s.checks = vec![preferred("AB", "A"), preferred("BC", "B"), preferred("CA", "C")];
    s
}

fn kt_buridan() -> Scenario {
    let mut s = Scenario::new("kt_buridan", "Binary lottery pairs with near-equal utilities");
    s.note = Some("The first pair is computed from its lotteries; the others use the printed utility factors.".into());
    let mut f_terms = Vec::new();
    let mut p_terms = Vec::new();
    let mut q_terms = Vec::new();
    for (k, &(opt, f, p, p_exp, _)) in KT_ROWS.iter().enumerate() {
        let name = format!("pair{:02}", k + 1);
        let best = ["L1", "L2"][opt];
        let worst = ["L1", "L2"][1 - opt];
        let utility = if k == 0 {
            UtilitySource::Lotteries(vec![
                lottery(&[(2.5, 0.33), (2.4, 0.66), (0.0, 0.01)]),
                lottery(&[(2.4, 1.0)]),
            ])
        } else {
            let mut fs = vec![1.0 - f; 2];
            fs[opt] = f;
            UtilitySource::Fractions(fs)
        };
        let attraction = if k == 0 {
            AttractionSource::Quality
        } else {
            declared(&[&[best], &[worst]])
        };
        s.stages.push(stage(&name, &["L1", "L2"], utility, attraction));
        let fq = format!("f({name}/{best})");
        let pq = format!("p({name}/{best})");
        s.expectations.push(expect(&format!("{name}: f(Lopt)"), &fq, f, None));
        s.expectations.push(expect(&format!("{name}: p(Lopt)"), &pq, p, Some(p_exp)));
        s.checks.push(preferred(&name, best));
        f_terms.push(quantity(&fq));
        p_terms.push(quantity(&pq));
        q_terms.push(quantity(&format!("q({name}/{best})")));
    }
    s.expectations.push(expect_quality("pair01: Q(L1)", "Q(pair01/L1)", 30.3));
    s.expectations.push(expect_quality("pair01: Q(L2)", "Q(pair01/L2)", 72.0));
    let (f_avg, p_avg, p_exp_avg, q_exp_avg) = KT_AVERAGES;
    s.expectations.push(Expectation {
        label: "mean f(Lopt)".into(),
        quantity: Quantity::Mean(f_terms),
        predicted: f_avg,
        experimental: None,
        tolerance: PREDICTION_TOL,
    });
    s.expectations.push(Expectation {
        label: "mean p(Lopt)".into(),
        quantity: Quantity::Mean(p_terms),
        predicted: p_avg,
        experimental: Some(p_exp_avg),
        tolerance: PREDICTION_TOL,
    });
    s.expectations.push(Expectation {
        label: "mean q(Lopt)".into(),
        quantity: Quantity::Mean(q_terms),
        predicted: 0.25,
        experimental: Some(q_exp_avg),
        tolerance: PREDICTION_TOL,
    });
    s
}

/// Every built-in scenario, in [`CATALOG_IDS`] order.
pub fn catalog() -> Vec<Scenario> {
    vec![
        st_petersburg(),
        martingale(),
        allais(),
        independence(),
        ellsberg(),
        prisoner(),
        disjunction_gamble(),
        disjunction_vacation(),
        conjunction(),
        disposition(),
        ariely(),
        decoy("decoy_ovens", "Decoy effect: microwave ovens", 0.4, 0.65, 0.61),
        decoy("decoy_frogs", "Decoy effect: frog mate choice", 0.35, 0.6, 0.6),
        planning(),
        preference_reversal(),
        intransitivity(),
        kt_buridan(),
    ]
}

/// Built-in scenario by identifier.
pub fn scenario(id: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.id == id)
}
