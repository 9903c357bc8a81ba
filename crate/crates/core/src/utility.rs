//! Utility factors: Luce prior, belief posterior, discounting and the
//! doubling-game belief estimate.

use alloc::vec;
use alloc::vec::Vec;

use crate::lottery::{expected_utility, Lottery, Utility};
use crate::{Error, Result};

const SUM_TOL: f64 = 1e-9;

/// Belief parameter `beta`, possibly one of its infinite limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Belief {
    Finite(f64),
    /// Deterministic maximization of utility.
    PlusInfinity,
    /// Deterministic minimization of utility.
    MinusInfinity,
}

impl Default for Belief {
    fn default() -> Self {
        Belief::Finite(0.0)
    }
}

impl From<f64> for Belief {
    fn from(beta: f64) -> Self {
        Belief::Finite(beta)
    }
}

fn check_utilities(utilities: &[f64]) -> Result<()> {
    if utilities.is_empty() {
        return Err(Error::Domain("need at least one utility"));
    }
    if utilities.iter().any(|u| !u.is_finite()) {
        return Err(Error::Domain("utilities must be finite"));
    }
    Ok(())
}

/// Luce attribute of one utility: `U` when nonnegative, `1/|U|` otherwise.
pub fn luce_attribute(u: f64) -> f64 {
    if u >= 0.0 {
        u
    } else {
        1.0 / -u
    }
}

/// Prior `f0_n = a_n / sum_k a_k` from Luce attributes.
pub fn luce_prior(utilities: &[f64]) -> Result<Vec<f64>> {
    check_utilities(utilities)?;
    let attrs: Vec<f64> = utilities.iter().map(|&u| luce_attribute(u)).collect();
    let total: f64 = attrs.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegeneratePrior);
    }
    Ok(attrs.into_iter().map(|a| a / total).collect())
}

fn indicator(utilities: &[f64], best: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let mut target = utilities[0];
    for &u in &utilities[1..] {
        if best(u, target) {
            target = u;
        }
    }
    let tol = 1e-12 * target.abs().max(1.0);
    let hits: Vec<bool> = utilities.iter().map(|&u| (u - target).abs() <= tol).collect();
    let count = hits.iter().filter(|&&h| h).count() as f64;
    hits.into_iter().map(|h| if h { 1.0 / count } else { 0.0 }).collect()
}

/// Posterior `f_n ∝ prior_n * exp(beta * U_n)`.
///
/// The prior defaults to [`luce_prior`]. Infinite beliefs return the indicator
/// of the largest (or smallest) utility, split evenly over ties.
pub fn utility_factor(utilities: &[f64], beta: Belief, prior: Option<&[f64]>) -> Result<Vec<f64>> {
    check_utilities(utilities)?;
    let beta = match beta {
        Belief::PlusInfinity => return Ok(indicator(utilities, |a, b| a > b)),
        Belief::MinusInfinity => return Ok(indicator(utilities, |a, b| a < b)),
        Belief::Finite(b) if b.is_finite() => b,
        Belief::Finite(_) => return Err(Error::Domain("finite belief must be finite")),
    };
    let owned;
    let prior = match prior {
        Some(p) => {
            if p.len() != utilities.len() {
                return Err(Error::LengthMismatch {
                    expected: utilities.len(),
                    found: p.len(),
                });
            }
            if p.iter().any(|&x| !(0.0..=1.0).contains(&x))
                || (p.iter().sum::<f64>() - 1.0).abs() > SUM_TOL
            {
                return Err(Error::Domain("prior must be a probability vector"));
            }
            p
        }
        None => {
            owned = luce_prior(utilities)?;
            &owned
        }
    };
    let shift = utilities
        .iter()
        .zip(prior)
        .filter(|&(_, &w)| w > 0.0)
        .map(|(&u, _)| beta * u)
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Err(Error::DegeneratePrior);
    }
    let weights: Vec<f64> = utilities
        .iter()
        .zip(prior)
        .map(|(&u, &w)| if w > 0.0 { w * libm::exp(beta * u - shift) } else { 0.0 })
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Utility factors of lotteries under utility `u`.
pub fn lottery_factors(lotteries: &[Lottery], u: &Utility, beta: Belief) -> Result<Vec<f64>> {
    let us: Vec<f64> = lotteries.iter().map(|l| expected_utility(l, u)).collect();
    utility_factor(&us, beta, None)
}

/// Global mean `sum_n f_n U_n`.
pub fn global_mean(factors: &[f64], utilities: &[f64]) -> f64 {
    factors.iter().zip(utilities).map(|(f, u)| f * u).sum()
}

/// Discount `D(t) = (1 + r)^(-t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discount {
    rate: f64,
}

impl Discount {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::Domain("discount rate must be finite and nonnegative"));
        }
        Ok(Discount { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn factor(&self, t: f64) -> f64 {
        if self.rate == 0.0 {
            1.0
        } else {
            libm::pow(1.0 + self.rate, -t)
        }
    }
}

/// [`utility_factor`] at the time-dependent belief `beta * D(t)`.
pub fn discounted_utility_factor(
    utilities: &[f64],
    beta: f64,
    discount: &Discount,
    t: f64,
) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::Domain("time must be nonnegative"));
    }
    utility_factor(utilities, Belief::Finite(beta * discount.factor(t)), None)
}

/// Ratio-test slack for terms that are equal up to rounding.
const RATIO_SLACK: f64 = 1e-12;

/// First index `m*` (1-based) after which every ratio `t[m+1]/t[m]` is at
/// least one. The onset must fall in the first half of the series so the
/// condition is seen over a stretch of terms, not just the last pair.
pub fn ratio_test_onset(terms: &[f64]) -> Option<usize> {
    if terms.len() < 3 {
        return None;
    }
    let mut onset = terms.len();
    for m in (0..terms.len() - 1).rev() {
        let (a, b) = (terms[m], terms[m + 1]);
        if a > 0.0 && b.is_finite() && b / a >= 1.0 - RATIO_SLACK {
            onset = m;
        } else {
            break;
        }
    }
    (onset < terms.len() / 2).then_some(onset + 1)
}

/// Root of `n = sqrt(2) sinh(1 / (2n))` by bisection.
pub fn doubling_game_n_opt() -> f64 {
    let g = |n: f64| n - core::f64::consts::SQRT_2 * libm::sinh(0.5 / n);
    let (mut lo, mut hi) = (0.1_f64, 10.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StPetersburgReport {
    /// Expected utilities `U(L_1..L_max_n)`.
    pub utilities: Vec<f64>,
    pub divergent: bool,
    /// Ratio-test onset `m*`, when divergent.
    pub onset: Option<usize>,
    /// Order-of-magnitude belief estimate; negative whenever divergent.
    pub beta_estimate: Option<f64>,
    /// Preferred number of tosses from the self-consistency equation.
    pub n_opt: f64,
    /// Utility of the stochastically optimal lottery, `1/|beta|`.
    pub optimal_utility: Option<f64>,
}

impl StPetersburgReport {
    /// Divergent games only admit disbelief, `beta < 0`.
    pub fn admits(&self, beta: f64) -> bool {
        !self.divergent || beta < 0.0
    }
}

/// The doubling game `L_n = {2, 1/2 | 4, 1/4 | ... | 2^n, 2^-n | 0, 2^-n}`.
pub fn doubling_lottery(n: u32, payoff: impl Fn(u32) -> f64) -> Result<Lottery> {
    let mut pairs: Vec<(f64, f64)> = (1..=n).map(|m| (payoff(m), libm::pow(0.5, m as f64))).collect();
    pairs.push((0.0, libm::pow(0.5, n as f64)));
    Lottery::from_pairs(&pairs)
}

/// Divergence analysis of the classic game with linear utility.
pub fn stpetersburg_analysis(max_n: u32) -> Result<StPetersburgReport> {
    stpetersburg_analysis_with(max_n, &Utility::Linear, |m| libm::pow(2.0, m as f64))
}

/// Divergence analysis for payoffs `payoff(m)` at probabilities `2^-m`.
pub fn stpetersburg_analysis_with(
    max_n: u32,
    u: &Utility,
    payoff: impl Fn(u32) -> f64,
) -> Result<StPetersburgReport> {
    if max_n < 4 {
        return Err(Error::Domain("need at least four tosses"));
    }
    let terms: Vec<f64> = (1..=max_n)
        .map(|m| u.eval(payoff(m)) * libm::pow(0.5, m as f64))
        .collect();
    let mut utilities = vec![0.0; terms.len()];
    let mut acc = 0.0;
    for (slot, t) in utilities.iter_mut().zip(&terms) {
        acc += t;
        *slot = acc;
    }
    let onset = ratio_test_onset(&terms);
    let divergent = onset.is_some();
    let n_opt = doubling_game_n_opt();
    Ok(StPetersburgReport {
        utilities,
        divergent,
        onset,
        beta_estimate: divergent.then(|| -1.0 / n_opt),
        n_opt,
        optimal_utility: divergent.then_some(n_opt),
    })
}
