//! JSON network configurations and their runs.

use std::path::Path;

use affectq_core::network::{
    classify_regime, classify_series, fixed_point_solve, simulate_continuous, simulate_discrete,
    AgentGroup, MemoryKind, Network, Regime, RegimeConfig, SolverConfig, Trajectory,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub groups: Vec<GroupDoc>,
    #[serde(default = "one")]
    pub intensity: f64,
    pub integrator: IntegratorDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<NetworkExpect>,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub f: f64,
    pub q0: f64,
    pub epsilon: f64,
    pub memory: MemoryDoc,
    #[serde(default = "half")]
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryDoc {
    LongTerm,
    ShortTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegratorDoc {
    Discrete { steps: usize },
    Continuous { horizon: f64, step: f64 },
}

/// Regime classifier thresholds; omitted fields keep their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierDoc {
    pub amplitude_tol: f64,
    pub period_tol: f64,
    pub max_period: usize,
    pub min_len: usize,
    pub perturbation: f64,
    pub divergence_min: f64,
}

impl Default for ClassifierDoc {
    fn default() -> Self {
        let c = RegimeConfig::default();
        ClassifierDoc {
            amplitude_tol: c.amplitude_tol,
            period_tol: c.period_tol,
            max_period: c.max_period,
            min_len: c.min_len,
            perturbation: c.perturbation,
            divergence_min: c.divergence_min,
        }
    }
}

impl From<ClassifierDoc> for RegimeConfig {
    fn from(c: ClassifierDoc) -> Self {
        RegimeConfig {
            amplitude_tol: c.amplitude_tol,
            period_tol: c.period_tol,
            max_period: c.max_period,
            min_len: c.min_len,
            perturbation: c.perturbation,
            divergence_min: c.divergence_min,
        }
    }
}

/// Expected outcome of a run; every listed item becomes a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_p: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_q: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regimes: Option<[String; 2]>,
    pub tolerance: f64,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRunConfig {
    pub network: Network,
    pub integrator: IntegratorDoc,
    pub classifier: RegimeConfig,
    pub expect: Option<NetworkExpect>,
}

const REGIME_LABELS: [&str; 4] = ["fixed_point", "periodic", "chaotic", NOT_CONVERGED];

/// Label of a continuous series whose tail has not settled; period detection
/// applies to discrete runs only.
pub const NOT_CONVERGED: &str = "not_converged";

pub fn parse_network_str(text: &str, origin: &str) -> Result<NetworkRunConfig> {
    let doc: NetworkConfig = serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))?;
    config_from_doc(&doc, origin)
}

pub fn parse_network_file(path: &Path) -> Result<NetworkRunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_network_str(&text, &path.display().to_string())
}

pub fn config_from_doc(doc: &NetworkConfig, origin: &str) -> Result<NetworkRunConfig> {
    if doc.groups.len() != 2 {
        return Err(CliError::invalid(
            origin,
            "groups",
            format!("expected 2 groups, found {}", doc.groups.len()),
        ));
    }
    let mut groups = Vec::with_capacity(2);
    for (j, g) in doc.groups.iter().enumerate() {
        let memory = match g.memory {
            MemoryDoc::LongTerm => MemoryKind::LongTerm,
            MemoryDoc::ShortTerm => MemoryKind::ShortTerm,
        };
        let group = AgentGroup::new(g.f, g.q0, g.epsilon, memory)
            .and_then(|a| a.with_fraction(g.fraction))
            .map_err(|e| CliError::invalid(origin, format!("group {}", j + 1), e))?;
        groups.push(group);
    }
    let network = Network::new(groups[0], groups[1])
        .and_then(|n| n.with_intensity(doc.intensity))
        .map_err(|e| CliError::invalid(origin, "intensity", e))?;
    network
        .check_fractions()
        .map_err(|e| CliError::invalid(origin, "groups", e))?;
    match doc.integrator {
        IntegratorDoc::Discrete { steps: 0 } => {
            return Err(CliError::invalid(origin, "integrator", "steps must be positive"));
        }
        IntegratorDoc::Continuous { horizon, step } => {
            if !(step > 0.0) || !step.is_finite() {
                return Err(CliError::invalid(origin, "integrator", "step must be positive"));
            }
            if !(horizon >= 0.0) || !horizon.is_finite() {
                return Err(CliError::invalid(
                    origin,
                    "integrator",
                    "horizon must be finite and nonnegative",
                ));
            }
        }
        _ => {}
    }
    let c = doc.classifier.unwrap_or_default();
    if !(c.amplitude_tol > 0.0) || !(c.period_tol > 0.0) || c.min_len < 2 || c.max_period < 2 {
        return Err(CliError::invalid(origin, "classifier", "thresholds out of range"));
    }
    if let Some(e) = &doc.expect {
        if !(e.tolerance > 0.0) || !e.tolerance.is_finite() {
            return Err(CliError::invalid(origin, "expect", "tolerance must be positive"));
        }
        if let Some(r) = &e.regimes {
            if let Some(bad) = r.iter().find(|x| !REGIME_LABELS.contains(&x.as_str())) {
                return Err(CliError::invalid(origin, "expect", format!("unknown regime `{bad}`")));
            }
        }
    }
    Ok(NetworkRunConfig {
        network,
        integrator: doc.integrator,
        classifier: c.into(),
        expect: doc.expect.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub regime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub amplitude: Option<f64>,
    pub final_p: f64,
    pub final_q: f64,
    pub final_memory: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointSummary {
    pub p: Option<[f64; 2]>,
    pub q: Option<[f64; 2]>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    pub degenerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub description: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSummary {
    pub integrator: &'static str,
    pub records: usize,
    pub groups: Vec<GroupSummary>,
    pub divergence: Option<f64>,
    pub chaos_certified: Option<bool>,
    pub fixed_point: FixedPointSummary,
    pub clamp_events: usize,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

pub struct NetworkRun {
    pub trajectory: Trajectory,
    pub summary: NetworkSummary,
}

fn regime_parts(r: Regime) -> (String, Option<usize>) {
    let period = match r {
        Regime::Periodic { period } => Some(period),
        _ => None,
    };
    (r.label().to_string(), period)
}

/// Simulate, classify, solve for the fixed point and evaluate expectations.
pub fn run_network(cfg: &NetworkRunConfig) -> Result<NetworkRun> {
    let net = &cfg.network;
    let (trajectory, integrator) = match cfg.integrator {
        IntegratorDoc::Discrete { steps } => (simulate_discrete(net, steps)?, "discrete"),
        IntegratorDoc::Continuous { horizon, step } => {
            (simulate_continuous(net, horizon, step)?, "continuous")
        }
    };
    let mut regimes: [Option<(Regime, f64)>; 2] = [None, None];
    let mut divergence = None;
    let mut chaos_certified = None;
    let mut continuous = false;
    if trajectory.len() >= cfg.classifier.min_len {
        if integrator == "discrete" {
            let rep = classify_regime(net, &trajectory, &cfg.classifier)?;
            for (slot, g) in regimes.iter_mut().zip(&rep.groups) {
                *slot = Some((g.regime, g.amplitude));
            }
            divergence = rep.divergence;
            chaos_certified = Some(rep.chaos_certified);
        } else {
            for (j, slot) in regimes.iter_mut().enumerate() {
                let g = classify_series(&trajectory.series(j), &cfg.classifier)?;
                *slot = Some((g.regime, g.amplitude));
            }
            continuous = true;
        }
    }
    let last = trajectory.last().copied();
    let groups: Vec<GroupSummary> = (0..2)
        .map(|j| {
            let (regime, period) = match regimes[j] {
                Some((r, _)) if continuous && r != Regime::FixedPoint => {
                    (Some(NOT_CONVERGED.to_string()), None)
                }
                Some((r, _)) => {
                    let (l, p) = regime_parts(r);
                    (Some(l), p)
                }
                None => (None, None),
            };
            GroupSummary {
                regime,
                period,
                amplitude: regimes[j].map(|(_, a)| a),
                final_p: last.map_or(f64::NAN, |s| s.p[j]),
                final_q: last.map_or(f64::NAN, |s| s.q[j]),
                final_memory: last.map_or(f64::NAN, |s| s.memory[j]),
            }
        })
        .collect();
    let fixed_point = match fixed_point_solve(net, &SolverConfig::default()) {
        Ok(fp) => FixedPointSummary {
            p: Some(fp.p),
            q: Some(fp.q),
            residual: Some(fp.residual),
            iterations: Some(fp.iterations),
            degenerate: Some(fp.degenerate),
            error: None,
        },
        Err(e) => FixedPointSummary {
            p: None,
            q: None,
            residual: None,
            iterations: None,
            degenerate: None,
            error: Some(e.to_string()),
        },
    };

    let mut checks = Vec::new();
    if let Some(e) = &cfg.expect {
        let close = |x: f64, y: f64| (x - y).abs() <= e.tolerance;
        if let Some(want) = e.final_p {
            for j in 0..2 {
                checks.push(CheckSummary {
                    description: format!("final p{} = {} within {}", j + 1, want[j], e.tolerance),
                    pass: close(groups[j].final_p, want[j]),
                });
            }
        }
        if let Some(want) = e.final_q {
            for j in 0..2 {
                checks.push(CheckSummary {
                    description: format!("final q{} = {} within {}", j + 1, want[j], e.tolerance),
                    pass: close(groups[j].final_q, want[j]),
                });
            }
        }
        if let Some(want) = &e.regimes {
            for j in 0..2 {
                checks.push(CheckSummary {
                    description: format!("group {} regime {}", j + 1, want[j]),
                    pass: groups[j].regime.as_deref() == Some(want[j].as_str()),
                });
            }
            if want.iter().any(|r| r == "chaotic") {
                checks.push(CheckSummary {
                    description: "chaos certified by sensitivity".into(),
                    pass: chaos_certified == Some(true),
                });
            }
        }
    }
    let passed = checks.iter().all(|c| c.pass);
    Ok(NetworkRun {
        summary: NetworkSummary {
            integrator,
            records: trajectory.len(),
            groups,
            divergence,
            chaos_certified,
            fixed_point,
            clamp_events: trajectory.clamp_events(),
            checks,
            passed,
        },
        trajectory,
    })
}
