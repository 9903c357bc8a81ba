use alloc::vec;
use alloc::vec::Vec;

use super::{MemoryKind, KL_CLAMP};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-9;

/// Group with a full row of factors over the alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralGroup {
    pub f: Vec<f64>,
    pub q0: Vec<f64>,
    pub epsilon: f64,
    pub memory: MemoryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralNetwork {
    groups: Vec<GeneralGroup>,
    alternatives: usize,
    intensity: f64,
}

impl GeneralNetwork {
    pub fn new(groups: Vec<GeneralGroup>, intensity: f64) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::Domain("need at least two groups"));
        }
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::Domain("intensity must be finite and nonnegative"));
        }
        let alternatives = groups[0].f.len();
        if alternatives < 2 {
            return Err(Error::Domain("need at least two alternatives"));
        }
        for g in &groups {
            for row in [&g.f, &g.q0] {
                if row.len() != alternatives {
                    return Err(Error::LengthMismatch {
                        expected: alternatives,
                        found: row.len(),
                    });
                }
            }
            if g.f.iter().any(|x| !(0.0..=1.0).contains(x))
                || (g.f.iter().sum::<f64>() - 1.0).abs() > NORM_TOL
            {
                return Err(Error::Domain("utility factors must form a probability row"));
            }
            if g.q0.iter().any(|x| !(-1.0..=1.0).contains(x)) || g.q0.iter().sum::<f64>().abs() > NORM_TOL {
                return Err(Error::Domain("attraction factors must lie in [-1, 1] and sum to 0"));
            }
            if !(0.0..=1.0).contains(&g.epsilon) {
                return Err(Error::Domain("herding strength must lie in [0, 1]"));
            }
        }
        Ok(GeneralNetwork {
            groups,
            alternatives,
            intensity,
        })
    }

    pub fn groups(&self) -> &[GeneralGroup] {
        &self.groups
    }

    pub fn alternatives(&self) -> usize {
        self.alternatives
    }

    /// `(1 - eps_j)(f_j + q_j) + eps_j/(N-1) sum_{i != j} (f_i + q_i)`, with
    /// the herding term returned separately.
    fn propose(&self, q: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = self.groups.len();
        let own: Vec<Vec<f64>> = self
            .groups
            .iter()
            .zip(q)
            .map(|(g, qj)| g.f.iter().zip(qj).map(|(f, q)| f + q).collect())
            .collect();
        let mut p = vec![vec![0.0; self.alternatives]; n];
        let mut h = vec![vec![0.0; self.alternatives]; n];
        for j in 0..n {
            for a in 0..self.alternatives {
                let others: f64 = (0..n).filter(|&i| i != j).map(|i| own[i][a]).sum::<f64>()
                    / (n - 1) as f64;
                let eps = self.groups[j].epsilon;
                h[j][a] = eps * (others - own[j][a]);
                p[j][a] = own[j][a] + h[j][a];
            }
        }
        (p, h)
    }

    fn mean_field_gain(&self, p: &[Vec<f64>]) -> Vec<f64> {
        let n = self.groups.len();
        (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| i != j)
                    .map(|i| divergence(&p[j], &p[i]))
                    .sum::<f64>()
                    * self.intensity
                    / (n - 1) as f64
            })
            .collect()
    }
}

fn divergence(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let x = x.clamp(KL_CLAMP, 1.0 - KL_CLAMP);
            let y = y.clamp(KL_CLAMP, 1.0 - KL_CLAMP);
            x * libm::log(x / y)
        })
        .sum::<f64>()
        .max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralState {
    /// `p[j][n]`: probability that group `j` chooses alternative `n`.
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub memory: Vec<f64>,
    pub herding: Vec<Vec<f64>>,
    pub clamped: bool,
}

fn retract(rows: &mut [Vec<f64>]) -> bool {
    let mut clamped = false;
    for row in rows.iter_mut() {
        if row.iter().any(|x| !(0.0..=1.0).contains(x)) {
            clamped = true;
            row.iter_mut().for_each(|x| *x = x.clamp(0.0, 1.0));
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                row.iter_mut().for_each(|x| *x /= total);
            }
        }
    }
    clamped
}

fn settle(net: &GeneralNetwork, mut p: Vec<Vec<f64>>, previous: Option<&[f64]>) -> GeneralState {
    let clamped = retract(&mut p);
    let mu = net.mean_field_gain(&p);
    let memory: Vec<f64> = net
        .groups
        .iter()
        .enumerate()
        .map(|(j, g)| match (g.memory, previous) {
            (MemoryKind::LongTerm, Some(m)) => m[j] + mu[j],
            _ => mu[j],
        })
        .collect();
    let q: Vec<Vec<f64>> = net
        .groups
        .iter()
        .zip(&memory)
        .map(|(g, &m)| g.q0.iter().map(|q| q * libm::exp(-m)).collect())
        .collect();
    let (_, herding) = net.propose(&q);
    GeneralState {
        p,
        q,
        memory,
        herding,
        clamped,
    }
}

/// Records for `t = 0, 1, ..., steps` of the mean-field delayed evolution.
pub fn simulate_general(net: &GeneralNetwork, steps: usize) -> Result<Vec<GeneralState>> {
    if steps == 0 {
        return Err(Error::Domain("need at least one step"));
    }
    let bare: Vec<Vec<f64>> = net.groups.iter().map(|g| g.q0.clone()).collect();
    let mut s = settle(net, net.propose(&bare).0, None);
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..steps {
        let next = settle(net, net.propose(&s.q).0, Some(&s.memory));
        out.push(core::mem::replace(&mut s, next));
    }
    out.push(s);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn group(f: &[f64], q: &[f64], eps: f64, memory: MemoryKind) -> GeneralGroup {
        GeneralGroup {
            f: f.to_vec(),
            q0: q.to_vec(),
            epsilon: eps,
            memory,
        }
    }

    #[test]
    fn full_herding_hand_iteration() {
        let net = GeneralNetwork::new(
            vec![
                group(&[0.6, 0.4], &[0.2, -0.2], 1.0, MemoryKind::ShortTerm),
                group(&[0.3, 0.7], &[-0.1, 0.1], 1.0, MemoryKind::ShortTerm),
            ],
            1.0,
        )
        .unwrap();
        let tr = simulate_general(&net, 3).unwrap();
        assert_abs_diff_eq!(tr[0].p[0][0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(tr[0].p[1][0], 0.8, epsilon = 1e-15);
        let mut p = [0.2, 0.8];
        for state in &tr[1..=3] {
            let m1 = divergence(&[p[0], 1.0 - p[0]], &[p[1], 1.0 - p[1]]);
            let m2 = divergence(&[p[1], 1.0 - p[1]], &[p[0], 1.0 - p[0]]);
            p = [0.3 - 0.1 * libm::exp(-m2), 0.6 + 0.2 * libm::exp(-m1)];
            assert_abs_diff_eq!(state.p[0][0], p[0], epsilon = 1e-12);
            assert_abs_diff_eq!(state.p[1][0], p[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_rows() {
        let bad = group(&[0.6, 0.5], &[0.0, 0.0], 0.0, MemoryKind::LongTerm);
        let ok = group(&[0.5, 0.5], &[0.0, 0.0], 0.0, MemoryKind::LongTerm);
        assert!(GeneralNetwork::new(vec![bad, ok.clone()], 1.0).is_err());
        let skew = group(&[0.5, 0.5], &[0.1, 0.0], 0.0, MemoryKind::LongTerm);
        assert!(GeneralNetwork::new(vec![skew, ok.clone()], 1.0).is_err());
        assert!(GeneralNetwork::new(vec![ok], 1.0).is_err());
    }
}
