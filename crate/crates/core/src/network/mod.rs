//! Two groups of interacting agents choosing between two alternatives, with
//! information-gain memory and herding.
//!
//! Probabilities, attraction factors and herding terms refer to the first
//! alternative; the second follows from normalization and alternation.

mod continuous;
mod fixed;
mod general;
mod regime;

pub use continuous::simulate_continuous;
pub use fixed::{fixed_point_solve, FixedPoint, SolverConfig};
pub use general::{simulate_general, GeneralGroup, GeneralNetwork, GeneralState};
pub use regime::{
    chaos_divergence, classify_regime, classify_series, GroupRegime, Regime, RegimeConfig,
    RegimeReport,
};

use alloc::vec::Vec;

use crate::{Error, Result};

/// Probabilities are clamped to `[KL_CLAMP, 1 - KL_CLAMP]` before logs.
pub const KL_CLAMP: f64 = 1e-12;

const FRACTION_TOL: f64 = 1e-9;

/// Binary information gain `p ln(p/r) + (1-p) ln((1-p)/(1-r))`.
pub fn kl_gain(p: f64, r: f64) -> f64 {
    let p = p.clamp(KL_CLAMP, 1.0 - KL_CLAMP);
    let r = r.clamp(KL_CLAMP, 1.0 - KL_CLAMP);
    let v = p * libm::log(p / r) + (1.0 - p) * libm::log((1.0 - p) / (1.0 - r));
    v.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoryKind {
    /// Memory accumulates every information gain received.
    LongTerm,
    /// Memory holds only the current information gain.
    ShortTerm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentGroup {
    /// Utility factor of the first alternative.
    pub f: f64,
    /// Attraction factor before any information is received.
    pub q0: f64,
    /// Herding strength.
    pub epsilon: f64,
    pub memory: MemoryKind,
    /// Share of the whole society.
    pub fraction: f64,
}

impl AgentGroup {
    /// Group with fraction 1/2.
    pub fn new(f: f64, q0: f64, epsilon: f64, memory: MemoryKind) -> Result<Self> {
        let g = AgentGroup {
            f,
            q0,
            epsilon,
            memory,
            fraction: 0.5,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_fraction(mut self, fraction: f64) -> Result<Self> {
        self.fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.f) {
            return Err(Error::Domain("utility factor must lie in [0, 1]"));
        }
        if !(-1.0..=1.0).contains(&self.q0) {
            return Err(Error::Domain("attraction factor must lie in [-1, 1]"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Domain("herding strength must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::Domain("group fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Network {
    pub groups: [AgentGroup; 2],
    /// Information-transfer intensity `J`.
    pub intensity: f64,
}

/// Record at one instant: `p(t)`, `q(t) = q0 exp(-M(t))`, `M(t)` and the
/// herding term `h(t)` that, with `q(t)`, produces `p(t+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub memory: [f64; 2],
    pub herding: [f64; 2],
    /// True when producing `p` required clamping into `[0, 1]`.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Time series of `p_j`.
    pub fn series(&self, group: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.p[group]).collect()
    }

    pub fn last(&self) -> Option<&State> {
        self.states.last()
    }

    pub fn clamp_events(&self) -> usize {
        self.states.iter().filter(|s| s.clamped).count()
    }
}

impl Network {
    pub fn new(first: AgentGroup, second: AgentGroup) -> Result<Self> {
        first.validate()?;
        second.validate()?;
        Ok(Network {
            groups: [first, second],
            intensity: 1.0,
        })
    }

    pub fn with_intensity(mut self, intensity: f64) -> Result<Self> {
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::Domain("intensity must be finite and nonnegative"));
        }
        self.intensity = intensity;
        Ok(self)
    }

    /// Check that the group fractions sum to one.
    pub fn check_fractions(&self) -> Result<()> {
        let total = self.groups[0].fraction + self.groups[1].fraction;
        if (total - 1.0).abs() > FRACTION_TOL {
            return Err(Error::Domain("group fractions must sum to 1"));
        }
        Ok(())
    }

    /// `(1 - eps_j)(f_j + q_j) + eps_j (f_i + q_i)` for both groups, evaluated
    /// as `(f_j + q_j) + h_j`.
    pub(crate) fn mix(&self, q: [f64; 2]) -> [f64; 2] {
        let [a, b] = self.groups;
        let h = self.herding(q);
        [a.f + q[0] + h[0], b.f + q[1] + h[1]]
    }

    fn herding(&self, q: [f64; 2]) -> [f64; 2] {
        let [a, b] = self.groups;
        let gap = (b.f + q[1]) - (a.f + q[0]);
        [a.epsilon * gap, -b.epsilon * gap]
    }

    pub(crate) fn attraction(&self, memory: [f64; 2]) -> [f64; 2] {
        [
            self.groups[0].q0 * libm::exp(-memory[0]),
            self.groups[1].q0 * libm::exp(-memory[1]),
        ]
    }

    pub(crate) fn gains(p: [f64; 2]) -> [f64; 2] {
        [kl_gain(p[0], p[1]), kl_gain(p[1], p[0])]
    }

    fn state_at(&self, p: [f64; 2], previous: Option<[f64; 2]>, clamped: bool) -> State {
        let mu = Self::gains(p);
        let mut memory = [0.0; 2];
        for j in 0..2 {
            let now = self.intensity * mu[j];
            memory[j] = match (self.groups[j].memory, previous) {
                (MemoryKind::LongTerm, Some(m)) => m[j] + now,
                _ => now,
            };
        }
        let q = self.attraction(memory);
        State {
            p,
            q,
            memory,
            herding: self.herding(q),
            clamped,
        }
    }

    /// State at `t = 0`, built from the bare attraction factors.
    pub fn initial_state(&self) -> State {
        let (p, clamped) = clamp_pair(self.mix([self.groups[0].q0, self.groups[1].q0]));
        self.state_at(p, None, clamped)
    }
}

fn clamp_pair(p: [f64; 2]) -> ([f64; 2], bool) {
    let c = [p[0].clamp(0.0, 1.0), p[1].clamp(0.0, 1.0)];
    (c, c != p)
}

/// One step of the delayed evolution.
pub fn step_discrete(state: &State, net: &Network) -> State {
    let (p, clamped) = clamp_pair(net.mix(state.q));
    net.state_at(p, Some(state.memory), clamped)
}

/// Records for `t = 0, 1, ..., steps`.
pub fn simulate_discrete(net: &Network, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::Domain("need at least one step"));
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = net.initial_state();
    states.push(s);
    for _ in 0..steps {
        s = step_discrete(&s, net);
        states.push(s);
    }
    Ok(Trajectory {
        times: (0..=steps).map(|t| t as f64).collect(),
        states,
    })
}

/// `p(A_1, t) = sum_j c_j p_j(A_1, t)`.
pub fn collective_probability(net: &Network, trajectory: &Trajectory) -> Result<Vec<f64>> {
    net.check_fractions()?;
    let c = [net.groups[0].fraction, net.groups[1].fraction];
    Ok(trajectory
        .states
        .iter()
        .map(|s| c[0] * s.p[0] + c[1] * s.p[1])
        .collect())
}
