//! Finite lotteries, utility functions and expected utility.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Tolerance on the probability sum of a lottery.
pub const PROB_TOL: f64 = 1e-9;

/// One problem found by [`validate_lottery`].
#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    Empty,
    LengthMismatch { payoffs: usize, probs: usize },
    NonFinite { index: usize },
    NegativeProb { index: usize, value: f64 },
    ProbAboveOne { index: usize, value: f64 },
    SumViolation { sum: f64 },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Empty => f.write_str("no entries"),
            Issue::LengthMismatch { payoffs, probs } => {
                write!(f, "{payoffs} payoffs but {probs} probabilities")
            }
            Issue::NonFinite { index } => write!(f, "entry {index} is not finite"),
            Issue::NegativeProb { index, value } => {
                write!(f, "probability {value} at entry {index} is negative")
            }
            Issue::ProbAboveOne { index, value } => {
                write!(f, "probability {value} at entry {index} exceeds 1")
            }
            Issue::SumViolation { sum } => write!(f, "probabilities sum to {sum}"),
        }
    }
}

/// Collect every problem with a candidate lottery. An empty result means valid.
pub fn validate_lottery(payoffs: &[f64], probs: &[f64]) -> Vec<Issue> {
    let mut issues = Vec::new();
    if payoffs.is_empty() {
        issues.push(Issue::Empty);
    }
    if payoffs.len() != probs.len() {
        issues.push(Issue::LengthMismatch {
            payoffs: payoffs.len(),
            probs: probs.len(),
        });
    }
    for (index, (&x, &p)) in payoffs.iter().zip(probs).enumerate() {
        if !x.is_finite() || !p.is_finite() {
            issues.push(Issue::NonFinite { index });
        } else if p < 0.0 {
            issues.push(Issue::NegativeProb { index, value: p });
        } else if p > 1.0 {
            issues.push(Issue::ProbAboveOne { index, value: p });
        }
    }
    let sum: f64 = probs.iter().sum();
    if !probs.is_empty() && (sum - 1.0).abs() > PROB_TOL {
        issues.push(Issue::SumViolation { sum });
    }
    issues
}

/// A finite lottery `{x_1, p_1 | x_2, p_2 | ...}`.
///
/// Construction validates; a `Lottery` value always has matching lengths,
/// probabilities in `[0, 1]` and a unit probability sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery {
    payoffs: Vec<f64>,
    probs: Vec<f64>,
}

impl Lottery {
    pub fn new(payoffs: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        match validate_lottery(&payoffs, &probs).into_iter().next() {
            Some(issue) => Err(Error::Lottery(issue)),
            None => Ok(Lottery { payoffs, probs }),
        }
    }

    /// Build from `(payoff, probability)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let (payoffs, probs) = pairs.iter().copied().unzip();
        Lottery::new(payoffs, probs)
    }

    /// The sure payoff `{x, 1}`.
    pub fn certain(x: f64) -> Self {
        Lottery {
            payoffs: alloc::vec![x],
            probs: alloc::vec![1.0],
        }
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoffs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.payoffs.iter().copied().zip(self.probs.iter().copied())
    }

    /// Compound lottery `alpha * self + (1 - alpha) * other`. Equal payoffs are
    /// merged into one entry, in order of first appearance.
    pub fn mix(&self, other: &Lottery, alpha: f64) -> Result<Lottery> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain("mixing weight must lie in [0, 1]"));
        }
        let weighted = self
            .entries()
            .map(|(x, p)| (x, alpha * p))
            .chain(other.entries().map(|(x, p)| (x, (1.0 - alpha) * p)));
        let mut payoffs: Vec<f64> = Vec::new();
        let mut probs: Vec<f64> = Vec::new();
        for (x, p) in weighted {
            match payoffs.iter().position(|&y| y == x) {
                Some(i) => probs[i] += p,
                None => {
                    payoffs.push(x);
                    probs.push(p);
                }
            }
        }
        Lottery::new(payoffs, probs)
    }
}

/// Piecewise-linear utility through sorted sample points, flat beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable {
    points: Vec<(f64, f64)>,
}

impl UtilityTable {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                if x1 == x0 {
                    return y1;
                }
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        pts[pts.len() - 1].1
    }
}

/// Utility function `u(x)` mapping payoffs to utiles.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Utility {
    /// `u(x) = x`.
    #[default]
    Linear,
    /// `u(x) = ln(w + x)`; `-inf` at or below `-w`.
    Log { wealth: f64 },
    /// Odd square root, `sign(x) * sqrt(|x|)`.
    Sqrt,
    Table(UtilityTable),
    /// `a * u(x)` with `a >= 0`.
    Scaled(f64, Box<Utility>),
}

impl Utility {
    /// Bernoulli's logarithm `ln(x)`.
    pub fn log() -> Self {
        Utility::Log { wealth: 0.0 }
    }

    /// Tabulated utility; abscissae must increase and values must not decrease.
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("utility table needs at least one point"));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Domain("utility table abscissae must increase"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::Domain("utility table must be nondecreasing"));
            }
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Domain("utility table entries must be finite"));
        }
        Ok(Utility::Table(UtilityTable { points }))
    }

    pub fn scaled(self, a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain("utility scale must be finite and nonnegative"));
        }
        Ok(Utility::Scaled(a, Box::new(self)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Utility::Linear => x,
            Utility::Log { wealth } => {
                let w = wealth + x;
                if w > 0.0 {
                    libm::log(w)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Utility::Sqrt => {
                if x >= 0.0 {
                    libm::sqrt(x)
                } else {
                    -libm::sqrt(-x)
                }
            }
            Utility::Table(t) => t.eval(x),
            Utility::Scaled(a, inner) => a * inner.eval(x),
        }
    }
}

/// `U(L) = sum_i u(x_i) p_i`. Entries with zero probability contribute nothing.
pub fn expected_utility(lottery: &Lottery, u: &Utility) -> f64 {
    lottery
        .entries()
        .filter(|&(_, p)| p > 0.0)
        .map(|(x, p)| u.eval(x) * p)
        .sum()
}

/// Number of possible gains minus number of possible losses.
pub fn gain_loss_number(lottery: &Lottery) -> i32 {
    lottery
        .entries()
        .filter(|&(_, p)| p > 0.0)
        .map(|(x, _)| {
            if x > 0.0 {
                1
            } else if x < 0.0 {
                -1
            } else {
                0
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn certain_payoff() {
        assert_eq!(expected_utility(&Lottery::certain(1.0), &Utility::Linear), 1.0);
    }

    #[test]
    fn allais_second_lottery() {
        let l = Lottery::from_pairs(&[(1.0, 0.89), (5.0, 0.10), (0.0, 0.01)]).unwrap();
        assert_abs_diff_eq!(expected_utility(&l, &Utility::Linear), 1.39, epsilon = 1e-12);
    }

    #[test]
    fn doubling_game_utility_equals_length() {
        for n in 1..=30u32 {
            let mut pairs: Vec<(f64, f64)> = (1..=n)
                .map(|m| (libm::pow(2.0, m as f64), libm::pow(0.5, m as f64)))
                .collect();
            pairs.push((0.0, libm::pow(0.5, n as f64)));
            let l = Lottery::from_pairs(&pairs).unwrap();
            assert_abs_diff_eq!(expected_utility(&l, &Utility::Linear), n as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn gain_loss_counts() {
        let one = Lottery::from_pairs(&[(3.0, 0.4), (0.0, 0.6)]).unwrap();
        let two = Lottery::from_pairs(&[(1.0, 0.4), (2.0, 0.4), (0.0, 0.2)]).unwrap();
        let zero = Lottery::from_pairs(&[(0.0, 0.5), (0.0, 0.5)]).unwrap();
        let mixed = Lottery::from_pairs(&[(-1.0, 0.5), (2.0, 0.3), (5.0, 0.0), (0.0, 0.2)]).unwrap();
        assert_eq!(gain_loss_number(&one), 1);
        assert_eq!(gain_loss_number(&two), 2);
        assert_eq!(gain_loss_number(&zero), 0);
        assert_eq!(gain_loss_number(&mixed), 0);
    }

    #[test]
    fn validation_reports() {
        assert!(validate_lottery(&[1.0, 2.0], &[0.5, 0.5]).is_empty());
        let sum = validate_lottery(&[1.0, 2.0], &[0.5, 0.6]);
        match sum.as_slice() {
            [Issue::SumViolation { sum }] => assert_abs_diff_eq!(*sum, 1.1, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let len = validate_lottery(&[1.0, 2.0], &[1.0]);
        assert!(len.contains(&Issue::LengthMismatch { payoffs: 2, probs: 1 }));
        assert!(validate_lottery(&[], &[]).contains(&Issue::Empty));
        assert!(matches!(
            Lottery::new(vec![1.0, 2.0], vec![-0.5, 1.5]),
            Err(Error::Lottery(Issue::NegativeProb { index: 0, .. }))
        ));
    }

    #[test]
    fn utility_kinds() {
        assert_abs_diff_eq!(Utility::Sqrt.eval(-4.0), -2.0);
        assert_abs_diff_eq!(Utility::log().eval(libm::exp(3.0)), 3.0, epsilon = 1e-12);
        assert_eq!(Utility::log().eval(0.0), f64::NEG_INFINITY);
        let t = Utility::table(vec![(0.0, 0.0), (10.0, 5.0), (20.0, 6.0)]).unwrap();
        assert_abs_diff_eq!(t.eval(5.0), 2.5);
        assert_abs_diff_eq!(t.eval(15.0), 5.5);
        assert_abs_diff_eq!(t.eval(-1.0), 0.0);
        assert_abs_diff_eq!(t.eval(99.0), 6.0);
        assert!(Utility::table(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(Utility::Linear.scaled(-1.0).is_err());
    }

    #[test]
    fn mixing_preserves_expectation() {
        let a = Lottery::certain(1.0);
        let b = Lottery::from_pairs(&[(5.0, 0.1), (0.0, 0.9)]).unwrap();
        let m = a.mix(&b, 0.3).unwrap();
        let expect = 0.3 * 1.0 + 0.7 * 0.5;
        assert_abs_diff_eq!(expected_utility(&m, &Utility::Linear), expect, epsilon = 1e-12);
    }
}
