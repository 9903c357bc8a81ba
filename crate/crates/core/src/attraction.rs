//! Attraction factors: ladder priors, lottery quality, attractiveness
//! ranking, the tanh model and the quarter-law check.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::lottery::{gain_loss_number, Lottery, Utility};
use crate::{Error, Result};

/// Default base of the quality functional.
pub const QUALITY_BASE: f64 = 30.0;

/// Magnitude of the binary non-informative prior.
pub const QUARTER: f64 = 0.25;

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn abs(self) -> Self {
        Ratio::new(self.num.abs(), self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl core::ops::Add for Ratio {
    type Output = Ratio;
    fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
}

impl core::ops::Sub for Ratio {
    type Output = Ratio;
    fn sub(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }
}

impl core::ops::Div<i64> for Ratio {
    type Output = Ratio;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, k: i64) -> Ratio {
        Ratio::new(self.num, self.den * k)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Alternatives ordered from most to least attractive, in blocks of equals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    blocks: Vec<Vec<usize>>,
    len: usize,
}

impl Ranking {
    /// Validate that `blocks` partition `0..n` with no empty block.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let len: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; len];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Domain("ranking blocks must be nonempty"));
            }
            for &i in block {
                if i >= len || seen[i] {
                    return Err(Error::Domain("ranking must be a permutation"));
                }
                seen[i] = true;
            }
        }
        Ok(Ranking { blocks, len })
    }

    /// Strict order, most attractive first.
    pub fn strict(order: &[usize]) -> Result<Self> {
        Ranking::from_blocks(order.iter().map(|&i| vec![i]).collect())
    }

    /// Every alternative equally attractive.
    pub fn neutral(n: usize) -> Self {
        Ranking {
            blocks: if n == 0 { Vec::new() } else { vec![(0..n).collect()] },
            len: n,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// True when there is more than one alternative and all are tied.
    pub fn is_neutral(&self) -> bool {
        self.len > 1 && self.blocks.len() == 1
    }

    /// Flattened order, ties in stored order.
    pub fn order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

fn check_n(n: usize) -> Result<i64> {
    if n < 2 {
        return Err(Error::Domain("ladder needs at least two alternatives"));
    }
    i64::try_from(n).map_err(|_| Error::Domain("too many alternatives"))
}

/// Ladder value of rank `r` (1-based) among `n` alternatives.
pub fn ladder_value(n: usize, r: usize) -> Result<Ratio> {
    let nn = check_n(n)?;
    if r == 0 || r > n {
        return Err(Error::Domain("rank out of range"));
    }
    let r = r as i64;
    Ok(if nn % 2 == 0 {
        Ratio::new(nn - 2 * r + 1, 2 * nn)
    } else {
        Ratio::new(nn * (nn - 2 * r + 1), 2 * (nn * nn - 1))
    })
}

/// Exact ladder by rank, most attractive first.
pub fn ladder_exact(n: usize) -> Result<Vec<Ratio>> {
    (1..=n).map(|r| ladder_value(n, r)).collect()
}

/// Gap between neighbouring ladder values.
pub fn ladder_gap(n: usize) -> Result<Ratio> {
    let nn = check_n(n)?;
    Ok(if nn % 2 == 0 {
        Ratio::new(1, nn)
    } else {
        Ratio::new(nn, nn * nn - 1)
    })
}

/// Exact priors per alternative. Tied blocks share the mean of their rungs.
pub fn ladder_priors_exact(n: usize, ranking: &Ranking) -> Result<Vec<Ratio>> {
    let rungs = ladder_exact(n)?;
    if ranking.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: ranking.len(),
        });
    }
    let mut out = vec![Ratio::zero(); n];
    let mut rank = 0;
    for block in ranking.blocks() {
        let k = block.len();
        let total = rungs[rank..rank + k].iter().fold(Ratio::zero(), |a, &b| a + b);
        let value = total / k as i64;
        for &i in block {
            out[i] = value;
        }
        rank += k;
    }
    Ok(out)
}

/// Non-informative attraction priors per alternative.
pub fn ladder_priors(n: usize, ranking: &Ranking) -> Result<Vec<f64>> {
    Ok(ladder_priors_exact(n, ranking)?.into_iter().map(Ratio::to_f64).collect())
}

/// Quality `Q(L) = sum_i u(x_i) * base^p_i`, over every listed entry.
pub fn lottery_quality(lottery: &Lottery, u: &Utility, base: f64) -> Result<f64> {
    if !(base > 1.0) || !base.is_finite() {
        return Err(Error::Domain("quality base must exceed 1"));
    }
    Ok(lottery.entries().map(|(x, p)| u.eval(x) * libm::pow(base, p)).sum())
}

/// Base at which `{u, p}` and `{lambda u, p / lambda}` have equal quality.
pub fn base_from_scaling(lambda: f64, p: f64) -> Result<f64> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::Domain("scaling must exceed 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain("probability must lie in (0, 1]"));
    }
    Ok(libm::pow(lambda, lambda / ((lambda - 1.0) * p)))
}

const QUALITY_TIE: f64 = 1e-9;

fn same_quality(a: f64, b: f64) -> bool {
    (a - b).abs() <= QUALITY_TIE * a.abs().max(b.abs()).max(1.0)
}

/// Rank lotteries by quality, breaking quality ties by gain-loss number.
/// Lotteries equal on both keys share a block.
pub fn rank_lotteries(lotteries: &[Lottery], u: &Utility, base: f64) -> Result<Ranking> {
    if lotteries.len() < 2 {
        return Err(Error::Domain("ranking needs at least two lotteries"));
    }
    let keys: Vec<(f64, i32)> = lotteries
        .iter()
        .map(|l| Ok((lottery_quality(l, u, base)?, gain_loss_number(l))))
        .collect::<Result<_>>()?;
    let cmp = |a: &(f64, i32), b: &(f64, i32)| -> Ordering {
        if same_quality(a.0, b.0) {
            b.1.cmp(&a.1)
        } else {
            b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal)
        }
    };
    let mut idx: Vec<usize> = (0..lotteries.len()).collect();
    idx.sort_by(|&i, &j| cmp(&keys[i], &keys[j]).then(i.cmp(&j)));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match blocks.last_mut() {
            Some(block) if cmp(&keys[block[0]], &keys[i]) == Ordering::Equal => block.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    Ranking::from_blocks(blocks)
}

/// `q(A) = min(phi_A, phi_B) * tanh(a (U_A - U_B))`, `q(B) = -q(A)`,
/// where `phi` is the two-point softmax of the utilities at `beta`.
pub fn tanh_attraction(u_a: f64, u_b: f64, a: f64, beta: f64) -> Result<(f64, f64)> {
    if !(u_a.is_finite() && u_b.is_finite() && beta.is_finite()) || !(a >= 0.0) {
        return Err(Error::Domain("tanh model needs finite inputs and a >= 0"));
    }
    let phi_a = 1.0 / (1.0 + libm::exp(beta * (u_b - u_a)));
    let weight = phi_a.min(1.0 - phi_a);
    let q = if a == 0.0 { 0.0 } else { weight * libm::tanh(a * (u_a - u_b)) };
    Ok((q, -q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarterLawReport {
    pub per_record_q: Vec<f64>,
    pub mean_abs_q: f64,
    /// `mean_abs_q - 1/4`.
    pub deviation: f64,
}

/// Empirical attraction factors `q_i = p_i - f_i` from `(p_observed, f)` records.
pub fn quarter_law_check(records: &[(f64, f64)]) -> Result<QuarterLawReport> {
    if records.is_empty() {
        return Err(Error::Domain("no records"));
    }
    if records.iter().any(|&(p, f)| !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&f)) {
        return Err(Error::Domain("records must lie in [0, 1]"));
    }
    let per_record_q: Vec<f64> = records.iter().map(|&(p, f)| p - f).collect();
    let mean_abs_q = per_record_q.iter().map(|q| q.abs()).sum::<f64>() / records.len() as f64;
    Ok(QuarterLawReport {
        per_record_q,
        mean_abs_q,
        deviation: mean_abs_q - QUARTER,
    })
}
