use alloc::vec::Vec;

use super::{simulate_discrete, Network, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConfig {
    /// Tail amplitude below which a series counts as converged.
    pub amplitude_tol: f64,
    /// Largest deviation allowed between successive periods.
    pub period_tol: f64,
    pub max_period: usize,
    pub min_len: usize,
    /// Shift applied to the second group's bare attraction in the chaos check.
    pub perturbation: f64,
    /// Divergence required to certify chaos.
    pub divergence_min: f64,
}

impl Default for RegimeConfig {
    fn default() -> Self {
        RegimeConfig {
            amplitude_tol: 1e-6,
            period_tol: 1e-6,
            max_period: 50,
            min_len: 200,
            perturbation: 1e-9,
            divergence_min: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    FixedPoint,
    Periodic { period: usize },
    Chaotic,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::FixedPoint => "fixed_point",
            Regime::Periodic { .. } => "periodic",
            Regime::Chaotic => "chaotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupRegime {
    pub regime: Regime,
    /// Final value when the series converged.
    pub fixed_value: Option<f64>,
    /// Max minus min over the tail half.
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub groups: [GroupRegime; 2],
    /// Largest trajectory separation under the perturbation, when computed.
    pub divergence: Option<f64>,
    /// Whether every chaotic label is backed by sensitive dependence.
    pub chaos_certified: bool,
}

impl RegimeReport {
    pub fn any_chaotic(&self) -> bool {
        self.groups.iter().any(|g| g.regime == Regime::Chaotic)
    }
}

/// Classify the tail half of a series. Period one is the fixed-point case, so
/// the period search starts at two.
pub fn classify_series(series: &[f64], cfg: &RegimeConfig) -> Result<GroupRegime> {
    if series.len() < cfg.min_len {
        return Err(Error::TooShort {
            needed: cfg.min_len,
            found: series.len(),
        });
    }
    let tail = &series[series.len() / 2..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let amplitude = hi - lo;
    if amplitude < cfg.amplitude_tol {
        return Ok(GroupRegime {
            regime: Regime::FixedPoint,
            fixed_value: tail.last().copied(),
            amplitude,
        });
    }
    for k in 2..=cfg.max_period.min(tail.len() - 1) {
        let dev = (0..tail.len() - k)
            .map(|i| (tail[i] - tail[i + k]).abs())
            .fold(0.0, f64::max);
        if dev < cfg.period_tol {
            return Ok(GroupRegime {
                regime: Regime::Periodic { period: k },
                fixed_value: None,
                amplitude,
            });
        }
    }
    Ok(GroupRegime {
        regime: Regime::Chaotic,
        fixed_value: None,
        amplitude,
    })
}

/// Largest separation between the run of `net` and a run with the second
/// group's bare attraction shifted by `perturbation`.
pub fn chaos_divergence(net: &Network, steps: usize, perturbation: f64) -> Result<f64> {
    let mut shifted = *net;
    let q = &mut shifted.groups[1].q0;
    *q = if *q + perturbation <= 1.0 { *q + perturbation } else { *q - perturbation };
    let a = simulate_discrete(net, steps)?;
    let b = simulate_discrete(&shifted, steps)?;
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| (x.p[0] - y.p[0]).abs().max((x.p[1] - y.p[1]).abs()))
        .fold(0.0, f64::max))
}

/// Classify both groups of a discrete trajectory of `net`; chaotic labels are
/// checked by rerunning with a perturbed attraction.
pub fn classify_regime(
    net: &Network,
    trajectory: &Trajectory,
    cfg: &RegimeConfig,
) -> Result<RegimeReport> {
    let series: Vec<Vec<f64>> = (0..2).map(|j| trajectory.series(j)).collect();
    let groups = [
        classify_series(&series[0], cfg)?,
        classify_series(&series[1], cfg)?,
    ];
    let mut report = RegimeReport {
        groups,
        divergence: None,
        chaos_certified: true,
    };
    if report.any_chaotic() {
        let d = chaos_divergence(net, trajectory.len() - 1, cfg.perturbation)?;
        report.divergence = Some(d);
        report.chaos_certified = d > cfg.divergence_min;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn synthetic_series() {
        let cfg = RegimeConfig::default();
        let flat = vec![0.4; 300];
        assert_eq!(classify_series(&flat, &cfg).unwrap().regime, Regime::FixedPoint);
        let two: Vec<f64> = (0..300).map(|i| if i % 2 == 0 { 0.2 } else { 0.7 }).collect();
        assert_eq!(
            classify_series(&two, &cfg).unwrap().regime,
            Regime::Periodic { period: 2 }
        );
        let three: Vec<f64> = (0..300).map(|i| [0.1, 0.5, 0.9][i % 3]).collect();
        assert_eq!(
            classify_series(&three, &cfg).unwrap().regime,
            Regime::Periodic { period: 3 }
        );
        let mut x = 0.3;
        let logistic: Vec<f64> = (0..400)
            .map(|_| {
                x = 4.0 * x * (1.0 - x);
                x
            })
            .collect();
        assert_eq!(classify_series(&logistic, &cfg).unwrap().regime, Regime::Chaotic);
        assert!(classify_series(&flat[..100], &cfg).is_err());
    }
}
