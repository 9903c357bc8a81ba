use std::path::{Path, PathBuf};
use std::process::Command;

use affectq::commands::{load_scenario_dir, parse_decision_str, run_from_args};
use affectq::emit::write_trajectory_csv;
use affectq::network_file::{parse_network_str, run_network};
use affectq::scenario_file::{doc_to_scenario, scenario_to_doc};
use affectq::{parse_scenario_file, parse_scenario_str, scenario_to_json, CliError, FIXTURES_ENV};
use affectq_core::network::Trajectory;
use affectq_core::paradox::{catalog, CATALOG_IDS};
use proptest::prelude::*;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affectq"))
}

const SIMPLE: &str = r#"{
  "id": "simple",
  "title": "Two lotteries",
  "stages": [
    {
      "name": "first",
      "alternatives": ["L1", "L2"],
      "utility": {"source": "lotteries", "lotteries": [[[1.0, 1.0]], [[5.0, 0.5], [0.0, 0.5]]]},
      "attraction": {"kind": "quality"}
    }
  ],
  "expected": [
    {"label": "f(L1)", "quantity": "f(first/L1)", "predicted": 0.2857, "tolerance": 0.005}
  ]
}"#;

#[test]
fn shipped_fixtures_match_the_catalog() {
    let dir = fixtures().join("scenarios");
    for s in catalog() {
        let path = dir.join(format!("{}.json", s.id));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, scenario_to_json(&s), "{} differs from the catalog", s.id);
        assert_eq!(parse_scenario_file(&path).unwrap(), s);
    }
    let loaded = load_scenario_dir(&dir).unwrap();
    let ids: Vec<&str> = loaded.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, CATALOG_IDS);
}

#[test]
fn shipped_fixtures_round_trip() {
    for s in load_scenario_dir(&fixtures().join("scenarios")).unwrap() {
        let text = scenario_to_json(&s);
        let again = parse_scenario_str(&text, "round trip").unwrap();
        assert_eq!(again, s);
        assert_eq!(scenario_to_json(&again), text);
    }
}

#[test]
fn allais_file_gives_allais() {
    let s = parse_scenario_file(&fixtures().join("scenarios/allais.json")).unwrap();
    assert_eq!(s.id, "allais");
    assert_eq!(s.stages.len(), 2);
    assert_eq!(s.stages[0].alternatives, ["L1", "L2"]);
}

#[test]
fn probability_sum_error_names_the_lottery() {
    let text = SIMPLE.replace("[[5.0, 0.5], [0.0, 0.5]]", "[[5.0, 0.6], [0.0, 0.5]]");
    let err = parse_scenario_str(&text, "bad.json").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, CliError::Invalid { .. }));
    assert!(msg.contains("bad.json"), "{msg}");
    assert!(msg.contains("stage `first`, lottery `L2`"), "{msg}");
    assert!(msg.contains("sum to 1.1"), "{msg}");
}

#[test]
fn missing_ranking_is_a_missing_field_error() {
    let text = SIMPLE.replace(r#"{"kind": "quality"}"#, r#"{"kind": "declared"}"#);
    let err = parse_scenario_str(&text, "verbal.json").unwrap_err();
    assert!(matches!(err, CliError::Parse { .. }));
    assert!(err.to_string().contains("missing field `ranking`"), "{err}");
}

#[test]
fn missing_attraction_names_the_stage() {
    let text = SIMPLE.replace(r#",
      "attraction": {"kind": "quality"}"#, "");
    let err = parse_scenario_str(&text, "x.json").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("stage `first`") && msg.contains("missing field `attraction`"), "{msg}");
}

#[test]
fn malformed_json_reports_position() {
    let err = parse_scenario_str("{\n  \"id\": \"x\",\n  \"title\": \n}", "broken.json").unwrap_err();
    match err {
        CliError::Parse { line, column, .. } => {
            assert_eq!(line, 4);
            assert!(column >= 1);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn invariant_violations_are_named() {
    let cases = [
        (SIMPLE.replace("\"L1\", \"L2\"", "\"L1\", \"L1\""), "repeats"),
        (SIMPLE.replace("f(first/L1)", "f(first/L9)"), "`first/L9` is not a stage alternative"),
        (SIMPLE.replace("f(first/L1)", "z(first/L1)"), "expectation `f(L1)`"),
        (SIMPLE.replace("\"tolerance\": 0.005", "\"tolerance\": 0.0"), "tolerance must be positive"),
        (SIMPLE.replace("\"predicted\": 0.2857", "\"predicted\": 1.5"), "[0, 1]"),
        (SIMPLE.replace(r#"[[1.0, 1.0]], "#, ""), "1 lotteries for 2 alternatives"),
        (SIMPLE.replace("\"title\"", "\"base\": 1.0, \"title\""), "base"),
    ];
    for (text, needle) in cases {
        let msg = parse_scenario_str(&text, "case.json").unwrap_err().to_string();
        assert!(msg.contains(needle), "`{msg}` lacks `{needle}`");
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = SIMPLE.replace("\"title\"", "\"titel\": 1, \"title\"");
    let msg = parse_scenario_str(&text, "x.json").unwrap_err().to_string();
    assert!(msg.contains("unknown field `titel`"), "{msg}");
}

#[test]
fn same_as_must_follow_its_source() {
    let text = SIMPLE.replace(
        r#"{"source": "lotteries", "lotteries": [[[1.0, 1.0]], [[5.0, 0.5], [0.0, 0.5]]]}"#,
        r#"{"source": "same_as", "stage": "later"}"#,
    );
    let msg = parse_scenario_str(&text, "x.json").unwrap_err().to_string();
    assert!(msg.contains("not an earlier stage"), "{msg}");
}

#[test]
fn empty_trajectory_gives_header_only() {
    let mut out = Vec::new();
    let empty = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    write_trajectory_csv(&empty, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "t,p1,p2,q1,q2,M1,M2\n");
}

#[test]
fn figure_one_trajectory_csv() {
    let text = std::fs::read_to_string(fixtures().join("networks/fig1.json")).unwrap();
    let run = run_network(&parse_network_str(&text, "fig1.json").unwrap()).unwrap();
    let mut out = Vec::new();
    write_trajectory_csv(&run.trajectory, &mut out).unwrap();
    let csv = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,p1,p2,q1,q2,M1,M2");
    assert_eq!(lines.len(), 2002);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    let s = run.trajectory.states[0];
    assert_eq!(first, [0.0, s.p[0], s.p[1], s.q[0], s.q[1], s.memory[0], s.memory[1]]);
    assert_eq!(run.summary.groups[0].regime.as_deref(), Some("fixed_point"));
}

#[test]
fn network_config_errors() {
    let base = std::fs::read_to_string(fixtures().join("networks/fig1.json")).unwrap();
    let cases = [
        (base.replace("\"f\": 0.8", "\"f\": 1.8"), "group 1"),
        (base.replace("\"steps\": 2000", "\"steps\": 0"), "steps must be positive"),
        (base.replace("\"fraction\": 0.5", "\"fraction\": 0.7"), "fractions must sum to 1"),
        (base.replace("\"short_term\"", "\"medium_term\""), "unknown variant `medium_term`"),
        (base.replace("\"fixed_point\",", "\"stable\","), "unknown regime `stable`"),
    ];
    for (text, needle) in cases {
        let msg = parse_network_str(&text, "net.json").unwrap_err().to_string();
        assert!(msg.contains(needle), "`{msg}` lacks `{needle}`");
    }
}

#[test]
fn decision_file() {
    let text = r#"{
      "stage": {
        "name": "choice",
        "alternatives": ["safe", "risky"],
        "utility": {"source": "utilities", "values": [1.0, 2.0]},
        "attraction": {"kind": "declared", "ranking": [["safe"], ["risky"]]}
      }
    }"#;
    let s = parse_decision_str(text, "d.json").unwrap();
    let r = affectq_core::paradox::run_scenario(&s).unwrap();
    let p = r.stages[0].problem.p();
    assert!((p[0] - (1.0 / 3.0 + 0.25)).abs() < 1e-12);
    assert!((p[1] - (2.0 / 3.0 - 0.25)).abs() < 1e-12);
}

#[test]
fn paradox_run_exit_codes() {
    let out = bin().args(["paradox", "run", "--all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("scenarios 17/17"));

    let dir = tempfile::tempdir().unwrap();
    let failing = dir.path().join("failing.json");
    std::fs::write(&failing, SIMPLE.replace("\"predicted\": 0.2857", "\"predicted\": 0.9")).unwrap();
    let out = bin().args(["paradox", "run", "--file"]).arg(&failing).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{").unwrap();
    let out = bin().args(["paradox", "run", "--file"]).arg(&broken).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.json"));
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("scenarios")).unwrap();
    std::fs::write(dir.path().join("scenarios/simple.json"), SIMPLE).unwrap();
    let out = bin()
        .env(FIXTURES_ENV, dir.path())
        .args(["paradox", "run", "--all", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["scenarios_total"], 1);
    assert_eq!(summary["scenarios"][0]["id"], "simple");

    let missing = dir.path().join("nowhere");
    let out = bin()
        .env(FIXTURES_ENV, &missing)
        .args(["paradox", "run", "--all", "--format", "json"])
        .output()
        .unwrap();
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["scenarios_total"], 17);
}

#[test]
fn network_simulate_prints_regime() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig4.csv");
    let out = bin()
        .args(["network", "simulate", "--config"])
        .arg(fixtures().join("networks/fig4.json"))
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("group 1: regime periodic"), "{text}");
    assert!(text.contains("group 2: regime periodic"), "{text}");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2002);
}

#[test]
fn quarter_law_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    std::fs::write(&path, "p,f\n0.75,0.5\n0.25,0.5\n").unwrap();
    let mut out = Vec::new();
    let args = ["affectq", "quarter-law", "--file", path.to_str().unwrap(), "--expect", "0.25"];
    assert!(run_from_args(args, &mut out).unwrap());
    assert!(String::from_utf8(out).unwrap().contains("mean |q| = 0.2500"));
}

#[test]
fn usage_errors() {
    let mut out = Vec::new();
    assert!(matches!(
        run_from_args(["affectq", "paradox", "run"], &mut out),
        Err(CliError::Usage(_))
    ));
    assert!(matches!(
        run_from_args(["affectq", "paradox", "run", "--id", "nothing"], &mut out),
        Err(CliError::Usage(_))
    ));
    assert!(matches!(run_from_args(["affectq", "bogus"], &mut out), Err(CliError::Usage(_))));
}

fn label() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,6}"
}

proptest! {
    #[test]
    fn stage_documents_round_trip(
        alts in prop::collection::hash_set(label(), 2..5),
        weights in prop::collection::vec(0.01..1.0f64, 5),
        beta in -3.0..3.0f64,
        base in 1.5..100.0f64,
    ) {
        let alts: Vec<String> = alts.into_iter().collect();
        let n = alts.len();
        let total: f64 = weights[..n].iter().sum();
        let fractions: Vec<f64> = weights[..n].iter().map(|w| w / total).collect();
        let doc = serde_json::json!({
            "id": "generated",
            "title": "generated",
            "beta": beta,
            "base": base,
            "stages": [{
                "name": "s",
                "alternatives": alts,
                "utility": {"source": "fractions", "values": fractions},
                "attraction": {"kind": "declared", "ranking": alts.iter().map(|a| vec![a]).collect::<Vec<_>>()}
            }],
            "expected": [{"label": "x", "quantity": format!("p(s/{})", alts[0]), "predicted": 0.5, "tolerance": 1.0}]
        });
        let s = parse_scenario_str(&doc.to_string(), "generated").unwrap();
        let again = parse_scenario_str(&scenario_to_json(&s), "again").unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(doc_to_scenario(&scenario_to_doc(&s), "doc").unwrap(), s);
    }
}
