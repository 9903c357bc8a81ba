//! Behavioral probabilities `p = f + q`, preference relations, the
//! stochastic optimum and bundled alternatives.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::attraction::{ladder_priors, Ranking};
use crate::utility::{utility_factor, Belief};
use crate::{Error, Result};

/// Tolerance used when comparing probabilities, factors and sums.
pub const PROB_EPS: f64 = 1e-9;

/// Tolerance under which two factors count as equal in a comparison.
pub const COMPARE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    f: Vec<f64>,
    q: Vec<f64>,
    p: Vec<f64>,
    clamped: bool,
}

impl DecisionProblem {
    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// True when at least one `f + q` fell outside `[0, 1]`.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Assemble `p_n = Ret[0,1](f_n + q_n)`, renormalizing if any entry was clamped.
pub fn assemble(f: &[f64], q: &[f64]) -> Result<DecisionProblem> {
    if f.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: q.len(),
        });
    }
    if f.is_empty() {
        return Err(Error::Domain("decision problem needs an alternative"));
    }
    if f.iter().chain(q).any(|x| !x.is_finite()) {
        return Err(Error::Domain("factors must be finite"));
    }
    let mut clamped = false;
    let mut p: Vec<f64> = f
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let raw = a + b;
            let r = raw.clamp(0.0, 1.0);
            if r != raw {
                clamped = true;
            }
            r
        })
        .collect();
    if clamped {
        let total: f64 = p.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("every probability retracted to zero"));
        }
        p.iter_mut().for_each(|x| *x /= total);
    }
    Ok(DecisionProblem {
        f: f.to_vec(),
        q: q.to_vec(),
        p,
        clamped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub index: usize,
    /// Every index sharing the maximal probability, when more than one does.
    pub ties: Vec<usize>,
}

/// Index of the largest behavioral probability, lowest index on ties.
pub fn stochastic_optimum(problem: &DecisionProblem) -> Optimum {
    let p = problem.p();
    let best = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hits: Vec<usize> = (0..p.len()).filter(|&i| best - p[i] <= COMPARE_EPS).collect();
    Optimum {
        index: hits[0],
        ties: if hits.len() > 1 { hits } else { Vec::new() },
    }
}

fn compare(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= COMPARE_EPS {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Comparison of alternative `i` against `j` on `p`, `f` and `q`.
/// `Greater` reads as preferred, more useful and more attractive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preference {
    pub preference: Ordering,
    pub usefulness: Ordering,
    pub attractiveness: Ordering,
}

pub fn preference_relation(problem: &DecisionProblem, i: usize, j: usize) -> Result<Preference> {
    let n = problem.len();
    if i >= n || j >= n {
        return Err(Error::Domain("alternative index out of range"));
    }
    Ok(Preference {
        preference: compare(problem.p[i], problem.p[j]),
        usefulness: compare(problem.f[i], problem.f[j]),
        attractiveness: compare(problem.q[i], problem.q[j]),
    })
}

/// A package of alternatives, each with its expected utility, together with
/// the decision problem over its members.
#[derive(Debug, Clone, PartialEq)]
pub struct Package {
    pub utilities: Vec<f64>,
    pub problem: DecisionProblem,
}

impl Package {
    pub fn new(utilities: Vec<f64>, problem: DecisionProblem) -> Result<Self> {
        if utilities.len() != problem.len() {
            return Err(Error::LengthMismatch {
                expected: problem.len(),
                found: utilities.len(),
            });
        }
        Ok(Package { utilities, problem })
    }

    /// `U = sum_n U(A_n) p(A_n)`.
    pub fn utility(&self) -> f64 {
        self.utilities.iter().zip(self.problem.p()).map(|(u, p)| u * p).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleOutcome {
    pub package_utilities: Vec<f64>,
    pub problem: DecisionProblem,
    pub optimum: Optimum,
}

/// Decision over packages: package utilities, utility factors at `beta`,
/// ladder attraction from `ranking` (neutral when `None`), then `p`.
pub fn evaluate_bundle(
    packages: &[Package],
    beta: Belief,
    ranking: Option<&Ranking>,
) -> Result<BundleOutcome> {
    if packages.is_empty() {
        return Err(Error::Domain("empty bundle"));
    }
    let package_utilities: Vec<f64> = packages.iter().map(Package::utility).collect();
    let f = utility_factor(&package_utilities, beta, None)?;
    let n = packages.len();
    let q = match ranking {
        Some(r) if n >= 2 => ladder_priors(n, r)?,
        Some(r) if r.len() != n => {
            return Err(Error::LengthMismatch {
                expected: n,
                found: r.len(),
            })
        }
        _ => vec![0.0; n],
    };
    let problem = assemble(&f, &q)?;
    let optimum = stochastic_optimum(&problem);
    Ok(BundleOutcome {
        package_utilities,
        problem,
        optimum,
    })
}
