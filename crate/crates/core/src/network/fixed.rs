use super::{kl_gain, MemoryKind, Network};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Weight of the new iterate in each damped update.
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            damping: 0.5,
            tolerance: 1e-10,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub residual: f64,
    pub iterations: usize,
    /// A long-term group sees zero stationary gain, so its memory need not
    /// diverge and its limiting attraction depends on the history.
    pub degenerate: bool,
}

fn limiting_attraction(net: &Network, p: [f64; 2]) -> [f64; 2] {
    let mu = [kl_gain(p[0], p[1]), kl_gain(p[1], p[0])];
    let mut q = [0.0; 2];
    for j in 0..2 {
        let g = net.groups[j];
        q[j] = match g.memory {
            MemoryKind::LongTerm => 0.0,
            MemoryKind::ShortTerm => g.q0 * libm::exp(-net.intensity * mu[j]),
        };
    }
    q
}

fn image(net: &Network, p: [f64; 2]) -> [f64; 2] {
    let t = net.mix(limiting_attraction(net, p));
    [t[0].clamp(0.0, 1.0), t[1].clamp(0.0, 1.0)]
}

/// Damped iteration of the stationary equations. Long-term groups take zero
/// limiting attraction; short-term groups take `q0 exp(-J mu*)`.
pub fn fixed_point_solve(net: &Network, cfg: &SolverConfig) -> Result<FixedPoint> {
    if !(cfg.damping > 0.0 && cfg.damping <= 1.0) {
        return Err(Error::Domain("damping must lie in (0, 1]"));
    }
    let mut p = net.initial_state().p;
    let mut residual = f64::INFINITY;
    for it in 1..=cfg.max_iterations {
        let g = image(net, p);
        residual = (g[0] - p[0]).abs().max((g[1] - p[1]).abs());
        if residual < cfg.tolerance {
            let degenerate = (0..2).any(|j| {
                net.groups[j].memory == MemoryKind::LongTerm
                    && kl_gain(p[j], p[1 - j]) <= 1e-12
            });
            return Ok(FixedPoint {
                p,
                q: limiting_attraction(net, p),
                residual,
                iterations: it,
                degenerate,
            });
        }
        for j in 0..2 {
            p[j] += cfg.damping * (g[j] - p[j]);
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::super::AgentGroup;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_groups() {
        let g = AgentGroup::new(0.37, 0.0, 0.3, MemoryKind::ShortTerm).unwrap();
        let fp = fixed_point_solve(&Network::new(g, g).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(fp.p, [0.37, 0.37]);
    }

    #[test]
    fn self_consistency_holds() {
        let net = Network::new(
            AgentGroup::new(0.8, 0.19, 0.05, MemoryKind::LongTerm).unwrap(),
            AgentGroup::new(0.9, -0.8, 0.0, MemoryKind::ShortTerm).unwrap(),
        )
        .unwrap();
        let fp = fixed_point_solve(&net, &SolverConfig::default()).unwrap();
        assert!(!fp.degenerate);
        assert_eq!(fp.q[0], 0.0);
        assert_abs_diff_eq!(fp.q[1], -0.8 * libm::exp(-kl_gain(fp.p[1], fp.p[0])), epsilon = 1e-12);
        assert_abs_diff_eq!(fp.p[1], 0.9 + fp.q[1], epsilon = 1e-9);
    }
}
