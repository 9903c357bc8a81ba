//! Noise-decorated events on `H_A ⊗ H_E`, their probabilities and the
//! entanglement-production measure.
//!
//! The basis vector `|A_n e_mu>` sits at index `n * d_E + mu`.

use alloc::vec::Vec;

use super::matrix::{check_dim, inner, kron_vec, CMatrix, C, ZERO};
use crate::{Error, Result};

/// Tolerance for state and noise-profile invariants.
pub const STATE_TOL: f64 = 1e-12;

const NORM_TOL: f64 = 1e-9;

/// Coefficients `a_{n mu}` of the noise vectors `|z_n> = sum_mu a_{n mu} |e_mu>`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile {
    rows: Vec<Vec<C>>,
}

impl NoiseProfile {
    /// Rows must share a length and have unit norm.
    pub fn new(rows: Vec<Vec<C>>) -> Result<Self> {
        let modes = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || modes == 0 {
            return Err(Error::Dimension("noise profile must be nonempty"));
        }
        if rows.iter().any(|r| r.len() != modes) {
            return Err(Error::Dimension("noise rows must share a length"));
        }
        check_dim(rows.len() * modes)?;
        for r in &rows {
            let norm: f64 = r.iter().map(|a| a.norm_sqr()).sum();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::Domain("noise rows must have unit norm"));
            }
        }
        Ok(NoiseProfile { rows })
    }

    /// Every alternative carries the single mode `e_0`.
    pub fn single_mode(alternatives: usize, modes: usize) -> Result<Self> {
        let mut row = alloc::vec![ZERO; modes.max(1)];
        row[0] = C::new(1.0, 0.0);
        Self::new(alloc::vec![row; alternatives])
    }

    /// Every alternative carries the same noise vector.
    pub fn common(z: Vec<C>, alternatives: usize) -> Result<Self> {
        Self::new(alloc::vec![z; alternatives])
    }

    pub fn alternatives(&self) -> usize {
        self.rows.len()
    }

    pub fn modes(&self) -> usize {
        self.rows[0].len()
    }

    pub fn dim(&self) -> usize {
        self.alternatives() * self.modes()
    }

    pub fn noise_vector(&self, n: usize) -> &[C] {
        &self.rows[n]
    }

    pub fn coefficient(&self, n: usize, mu: usize) -> C {
        self.rows[n][mu]
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.alternatives() {
            return Err(Error::Dimension("alternative index out of range"));
        }
        Ok(())
    }

    fn check_state(&self, rho: &CMatrix) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::Dimension("state does not match the noise profile"));
        }
        Ok(())
    }
}

/// Invariant defects of a candidate state operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCheck {
    pub hermitian_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl StateCheck {
    pub fn is_valid(&self) -> bool {
        self.hermitian_defect <= STATE_TOL
            && self.trace_defect <= STATE_TOL
            && self.min_eigenvalue >= -STATE_TOL
    }
}

pub fn check_state(rho: &CMatrix) -> StateCheck {
    let herm = rho.hermitian_defect();
    let sym = (rho + &rho.adjoint()).scale_real(0.5);
    StateCheck {
        hermitian_defect: herm,
        trace_defect: (rho.trace() - C::new(1.0, 0.0)).norm(),
        min_eigenvalue: sym.eigenvalues_hermitian().first().copied().unwrap_or(0.0),
    }
}

/// `|alt> ⊗ |z>`.
pub fn decorated_vector(alt: &[C], z: &[C]) -> Vec<C> {
    kron_vec(alt, z)
}

/// `|A_n z_n>` in the standard alternative basis.
pub fn decorated_basis_vector(n: usize, noise: &NoiseProfile) -> Result<Vec<C>> {
    noise.check_index(n)?;
    Ok(decorated_vector(
        &super::matrix::basis(noise.alternatives(), n),
        noise.noise_vector(n),
    ))
}

/// `P(A_n z_n) = P(A_n) ⊗ P(z_n)`.
pub fn decorated_projector(n: usize, noise: &NoiseProfile) -> Result<CMatrix> {
    let v = decorated_basis_vector(n, noise)?;
    Ok(CMatrix::outer(&v, &v))
}

/// Decorated projector for alternative `k` of the basis given by the columns
/// of `alternatives`.
pub fn decorated_projector_in(alternatives: &CMatrix, k: usize, noise: &NoiseProfile) -> Result<CMatrix> {
    if alternatives.dim() != noise.alternatives() {
        return Err(Error::Dimension("basis does not match the noise profile"));
    }
    noise.check_index(k)?;
    let col: Vec<C> = (0..alternatives.dim()).map(|i| alternatives[(i, k)]).collect();
    let v = decorated_vector(&col, noise.noise_vector(k));
    Ok(CMatrix::outer(&v, &v))
}

/// `rho^{mu nu}_{mn}`.
pub fn element(rho: &CMatrix, modes: usize, m: usize, n: usize, mu: usize, nu: usize) -> C {
    rho[(m * modes + mu, n * modes + nu)]
}

/// `p(A_n z_n) = Tr(rho P(A_n z_n))`.
pub fn event_probability(rho: &CMatrix, n: usize, noise: &NoiseProfile) -> Result<f64> {
    noise.check_state(rho)?;
    Ok(rho.trace_product(&decorated_projector(n, noise)?).re)
}

/// `sum_{mu nu} conj(a_{n mu}) a_{n nu} rho^{mu nu}_{nn}`.
pub fn event_probability_explicit(rho: &CMatrix, n: usize, noise: &NoiseProfile) -> Result<f64> {
    noise.check_state(rho)?;
    noise.check_index(n)?;
    let d = noise.modes();
    let mut s = ZERO;
    for mu in 0..d {
        for nu in 0..d {
            s += noise.coefficient(n, mu).conj() * noise.coefficient(n, nu) * element(rho, d, n, n, mu, nu);
        }
    }
    Ok(s.re)
}

/// `sum_n p(A_n z_n)`; equals one exactly when the decorated projectors are
/// complete on average for `rho`.
pub fn completeness(rho: &CMatrix, noise: &NoiseProfile) -> Result<f64> {
    (0..noise.alternatives()).map(|n| event_probability(rho, n, noise)).sum()
}

/// Diagonal part `f` and noise-interference part `q = p - f`.
pub fn split_fq(rho: &CMatrix, n: usize, noise: &NoiseProfile) -> Result<(f64, f64)> {
    let p = event_probability_explicit(rho, n, noise)?;
    let d = noise.modes();
    let f: f64 = (0..d)
        .map(|mu| noise.coefficient(n, mu).norm_sqr() * element(rho, d, n, n, mu, mu).re)
        .sum();
    Ok((f, p - f))
}

/// Zero every element off-diagonal in the noise indices.
pub fn decohere(rho: &CMatrix, modes: usize) -> CMatrix {
    let mut out = rho.clone();
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            if i % modes != j % modes {
                out[(i, j)] = ZERO;
            }
        }
    }
    out
}

fn check_pair(m: usize, n: usize, cm: C, cn: C, noise: &NoiseProfile) -> Result<()> {
    noise.check_index(m)?;
    noise.check_index(n)?;
    if m == n {
        return Err(Error::Domain("superposition needs two distinct alternatives"));
    }
    if (cm.norm_sqr() + cn.norm_sqr() - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain("superposition amplitudes must be normalized"));
    }
    Ok(())
}

/// Probability of `c_m |A_m z_m> + c_n |A_n z_n>` from its expansion into
/// event probabilities and the interference term.
pub fn superposition_probability(
    rho: &CMatrix,
    (m, cm): (usize, C),
    (n, cn): (usize, C),
    noise: &NoiseProfile,
) -> Result<f64> {
    noise.check_state(rho)?;
    check_pair(m, n, cm, cn, noise)?;
    let d = noise.modes();
    let mut cross = ZERO;
    for mu in 0..d {
        for nu in 0..d {
            cross += noise.coefficient(m, mu).conj() * noise.coefficient(n, nu) * element(rho, d, m, n, mu, nu);
        }
    }
    Ok(cm.norm_sqr() * event_probability_explicit(rho, m, noise)?
        + cn.norm_sqr() * event_probability_explicit(rho, n, noise)?
        + 2.0 * (cm.conj() * cn * cross).re)
}

/// Projector onto `c_m |A_m z_m> + c_n |A_n z_n>`.
pub fn superposition_projector(
    (m, cm): (usize, C),
    (n, cn): (usize, C),
    noise: &NoiseProfile,
) -> Result<CMatrix> {
    check_pair(m, n, cm, cn, noise)?;
    let a = decorated_basis_vector(m, noise)?;
    let b = decorated_basis_vector(n, noise)?;
    let v: Vec<C> = a.iter().zip(&b).map(|(x, y)| cm * x + cn * y).collect();
    Ok(CMatrix::outer(&v, &v))
}

/// Natural-log entanglement production from the diagonal elements:
/// `ln( max rho_nn^mumu / (max_n sum_mu rho_nn^mumu * max_mu sum_n rho_nn^mumu) )`.
pub fn entanglement_production(rho: &CMatrix, d_a: usize, d_e: usize) -> Result<f64> {
    if rho.dim() != d_a * d_e || d_a == 0 || d_e == 0 {
        return Err(Error::Dimension("state does not match d_A * d_E"));
    }
    let diag = |n: usize, mu: usize| rho[(n * d_e + mu, n * d_e + mu)].re;
    let top = (0..d_a)
        .flat_map(|n| (0..d_e).map(move |mu| (n, mu)))
        .map(|(n, mu)| diag(n, mu))
        .fold(f64::NEG_INFINITY, f64::max);
    let a_norm = (0..d_a)
        .map(|n| (0..d_e).map(|mu| diag(n, mu)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let e_norm = (0..d_e)
        .map(|mu| (0..d_a).map(|n| diag(n, mu)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    if !(top > 0.0 && a_norm > 0.0 && e_norm > 0.0) {
        return Err(Error::Domain("diagonal must be positive somewhere"));
    }
    Ok(libm::log(top / (a_norm * e_norm)))
}

/// `sum_i lambda_i rho_A^i ⊗ rho_E^i`.
pub fn separable_state(terms: &[(f64, CMatrix, CMatrix)]) -> Result<CMatrix> {
    let (_, a0, e0) = terms.first().ok_or(Error::Domain("need at least one term"))?;
    let dim = a0.dim() * e0.dim();
    check_dim(dim)?;
    let weight: f64 = terms.iter().map(|t| t.0).sum();
    if terms.iter().any(|t| !(0.0..=1.0).contains(&t.0)) || (weight - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain("weights must form a probability vector"));
    }
    let mut out = CMatrix::zeros(dim);
    for (lambda, a, e) in terms {
        if a.dim() != a0.dim() || e.dim() != e0.dim() {
            return Err(Error::Dimension("factor dimensions differ between terms"));
        }
        out = &out + &a.kron(e).scale_real(*lambda);
    }
    Ok(out)
}

/// Number of Schmidt coefficients above `tol` times the largest one.
pub fn schmidt_rank(v: &[C], d_a: usize, d_e: usize, tol: f64) -> Result<usize> {
    if v.len() != d_a * d_e {
        return Err(Error::Dimension("vector does not match d_A * d_E"));
    }
    let rows: Vec<Vec<C>> = (0..d_a)
        .map(|i| (0..d_a).map(|j| inner(&v[j * d_e..(j + 1) * d_e], &v[i * d_e..(i + 1) * d_e])).collect())
        .collect();
    let gram = CMatrix::from_rows(&rows)?;
    let ev = gram.eigenvalues_hermitian();
    let top = ev.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(0);
    }
    Ok(ev.iter().filter(|&&x| x > tol * top).count())
}
