use alloc::vec::Vec;

use super::{MemoryKind, Network, State, Trajectory};
use crate::{Error, Result};

/// Integrated state: probabilities and the running integrals of the gains.
type Y = [f64; 4];

fn memory(net: &Network, y: &Y, mu0: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let mu = Network::gains([y[0], y[1]]);
    let mut m = [0.0; 2];
    for j in 0..2 {
        m[j] = net.intensity
            * match net.groups[j].memory {
                MemoryKind::LongTerm => y[2 + j] + 0.5 * (mu0[j] + mu[j]),
                MemoryKind::ShortTerm => mu[j],
            };
    }
    (m, mu)
}

fn rhs(net: &Network, y: &Y, mu0: [f64; 2]) -> Y {
    let (m, mu) = memory(net, y, mu0);
    let target = net.mix(net.attraction(m));
    [target[0] - y[0], target[1] - y[1], mu[0], mu[1]]
}

fn axpy(y: &Y, h: f64, k: &Y) -> Y {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

fn record(net: &Network, y: &Y, mu0: [f64; 2]) -> State {
    let (m, _) = memory(net, y, mu0);
    let q = net.attraction(m);
    let [a, b] = net.groups;
    let gap = (b.f + q[1]) - (a.f + q[0]);
    State {
        p: [y[0], y[1]],
        q,
        memory: m,
        herding: [a.epsilon * gap, -b.epsilon * gap],
        clamped: false,
    }
}

/// Fourth-order Runge-Kutta integration of the continuous evolution up to
/// time `horizon` with fixed step `step`, recording every step.
///
/// Long-term memory is `J [ int_0^t mu + (mu(0) + mu(t)) / 2 ]`, with the
/// integral carried as extra state components.
pub fn simulate_continuous(net: &Network, horizon: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain("step must be positive"));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::Domain("horizon must be finite and nonnegative"));
    }
    let n = libm::round(horizon / step) as usize;
    let p0 = net.mix([net.groups[0].q0, net.groups[1].q0]);
    let mu0 = Network::gains(p0);
    let mut y: Y = [p0[0], p0[1], 0.0, 0.0];
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(record(net, &y, mu0));
    for k in 0..n {
        let k1 = rhs(net, &y, mu0);
        let k2 = rhs(net, &axpy(&y, 0.5 * step, &k1), mu0);
        let k3 = rhs(net, &axpy(&y, 0.5 * step, &k2), mu0);
        let k4 = rhs(net, &axpy(&y, step, &k3), mu0);
        for i in 0..4 {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push((k + 1) as f64 * step);
        states.push(record(net, &y, mu0));
    }
    Ok(Trajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::super::{kl_gain, AgentGroup};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn memory_at_zero_is_the_initial_gain() {
        let net = Network::new(
            AgentGroup::new(0.8, 0.19, 0.05, MemoryKind::LongTerm).unwrap(),
            AgentGroup::new(0.9, -0.8, 0.0, MemoryKind::ShortTerm).unwrap(),
        )
        .unwrap();
        let tr = simulate_continuous(&net, 1.0, 0.01).unwrap();
        assert_eq!(tr.len(), 101);
        let s = tr.states[0];
        assert_abs_diff_eq!(s.memory[0], kl_gain(s.p[0], s.p[1]), epsilon = 1e-15);
        assert_abs_diff_eq!(tr.times[100], 1.0, epsilon = 1e-12);
        assert!(simulate_continuous(&net, 1.0, 0.0).is_err());
    }

    #[test]
    fn exponential_relaxation_without_memory() {
        let net = Network::new(
            AgentGroup::new(0.7, 0.0, 0.0, MemoryKind::ShortTerm).unwrap(),
            AgentGroup::new(0.2, 0.0, 0.0, MemoryKind::ShortTerm).unwrap(),
        )
        .unwrap();
        let tr = simulate_continuous(&net, 5.0, 0.01).unwrap();
        for s in &tr.states {
            assert_abs_diff_eq!(s.p[0], 0.7, epsilon = 1e-14);
        }
    }
}
