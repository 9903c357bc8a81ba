//! State reduction, consecutive and synchronous probabilities, the swap
//! function and the classical two-state master equation.

use alloc::vec::Vec;

use super::matrix::{CMatrix, C};
use crate::{Error, Result};

/// Smallest event probability accepted for conditioning.
pub const MIN_PROB: f64 = 1e-12;

/// `P rho P / Tr(rho P)`.
pub fn luders_reduce(rho: &CMatrix, projector: &CMatrix) -> Result<CMatrix> {
    if rho.dim() != projector.dim() {
        return Err(Error::Dimension("projector does not match the state"));
    }
    let p = rho.trace_product(projector).re;
    if !(p > MIN_PROB) {
        return Err(Error::ZeroProbability);
    }
    Ok((&(projector * rho) * projector).scale_real(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Consecutive {
    /// `Tr(U P1 rho P1 U^dagger P2)`.
    pub joint: f64,
    /// `joint / Tr(rho P1)`.
    pub conditional: f64,
}

/// First event measured on `rho0`, evolution `u`, then the second event.
pub fn consecutive_probabilities(
    rho0: &CMatrix,
    u: &CMatrix,
    first: &CMatrix,
    second: &CMatrix,
) -> Result<Consecutive> {
    let d = rho0.dim();
    if [u.dim(), first.dim(), second.dim()].iter().any(|&x| x != d) {
        return Err(Error::Dimension("operators must share the state dimension"));
    }
    let p_first = rho0.trace_product(first).re;
    if !(p_first > MIN_PROB) {
        return Err(Error::ZeroProbability);
    }
    let reduced = &(first * rho0) * first;
    let evolved = &(u * &reduced) * &u.adjoint();
    let joint = evolved.trace_product(second).re;
    Ok(Consecutive {
        joint,
        conditional: joint / p_first,
    })
}

/// `Tr(rho (P_A ⊗ P_B))`.
pub fn synchronous_probability(rho: &CMatrix, pa: &CMatrix, pb: &CMatrix) -> Result<f64> {
    if rho.dim() != pa.dim() * pb.dim() {
        return Err(Error::Dimension("state does not match the product space"));
    }
    Ok(rho.trace_product(&pa.kron(pb)).re)
}

/// Reorder a state on `H_1 ⊗ H_2` as a state on `H_2 ⊗ H_1`.
pub fn swap_factors(rho: &CMatrix, d1: usize, d2: usize) -> Result<CMatrix> {
    if rho.dim() != d1 * d2 {
        return Err(Error::Dimension("state does not match d1 * d2"));
    }
    let mut out = CMatrix::zeros(rho.dim());
    for a in 0..d1 {
        for b in 0..d2 {
            for c in 0..d1 {
                for d in 0..d2 {
                    out[(b * d1 + a, d * d1 + c)] = rho[(a * d2 + b, c * d2 + d)];
                }
            }
        }
    }
    Ok(out)
}

/// `S = p(A_1,B_2) - p(B_2,A_1) + p(A_2,B_1) - p(B_1,A_2)`, where
/// `ab[n][k] = p(A_n, B_k)` and `ba[k][n] = p(B_k, A_n)`.
pub fn swap_function(ab: &[[f64; 2]; 2], ba: &[[f64; 2]; 2]) -> f64 {
    ab[0][1] - ba[1][0] + ab[1][0] - ba[0][1]
}

/// Swap function of an order-symmetric family given by one table.
pub fn swap_function_symmetric(table: &[[f64; 2]; 2]) -> f64 {
    let t = [[table[0][0], table[1][0]], [table[0][1], table[1][1]]];
    swap_function(table, &t)
}

/// Conditional table `out[k][n] = f(B_k, t | A_n, t0)` of the two-state
/// master equation with rates `gamma1` (into `B_1`) and `gamma2` (into `B_2`),
/// at elapsed time `dt = t - t0`, from `f0[k][n]`. With both rates zero or
/// `dt = 0` the table is `f0` exactly.
pub fn master_equation_2x2(gamma1: f64, gamma2: f64, f0: &[[f64; 2]; 2], dt: f64) -> Result<[[f64; 2]; 2]> {
    if !(gamma1 >= 0.0 && gamma2 >= 0.0) || !gamma1.is_finite() || !gamma2.is_finite() {
        return Err(Error::Domain("rates must be finite and nonnegative"));
    }
    if !(dt >= 0.0) {
        return Err(Error::Domain("elapsed time must be nonnegative"));
    }
    for n in 0..2 {
        if f0.iter().any(|row| !(0.0..=1.0).contains(&row[n])) || (f0[0][n] + f0[1][n] - 1.0).abs() > 1e-9 {
            return Err(Error::Domain("initial table columns must be probability vectors"));
        }
    }
    let total = gamma1 + gamma2;
    if total == 0.0 || dt == 0.0 {
        return Ok(*f0);
    }
    let limit = [gamma1 / total, gamma2 / total];
    let decay = if dt.is_infinite() { 0.0 } else { libm::exp(-total * dt) };
    let mut out = [[0.0; 2]; 2];
    for k in 0..2 {
        for n in 0..2 {
            out[k][n] = (f0[k][n] - limit[k]) * decay + limit[k];
        }
    }
    Ok(out)
}

/// Column `k` of `m`.
pub fn column(m: &CMatrix, k: usize) -> Vec<C> {
    (0..m.dim()).map(|i| m[(i, k)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn master_examples() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(master_equation_2x2(1.0, 1.0, &id, 0.0).unwrap(), id);
        let t1 = master_equation_2x2(1.0, 1.0, &id, 1.0).unwrap();
        assert_abs_diff_eq!(t1[0][0], 0.5 * (1.0 + libm::exp(-2.0)), epsilon = 1e-15);
        let inf = master_equation_2x2(0.3, 0.9, &id, f64::INFINITY).unwrap();
        assert_eq!(inf, [[0.25, 0.25], [0.75, 0.75]]);
        assert_eq!(master_equation_2x2(0.0, 0.0, &id, 5.0).unwrap(), id);
        assert!(master_equation_2x2(1.0, 1.0, &[[0.5, 0.5], [0.4, 0.5]], 1.0).is_err());
    }

    #[test]
    fn swap_symmetric_table() {
        assert_eq!(swap_function_symmetric(&[[0.1, 0.2], [0.3, 0.4]]), 0.0);
        let ab = [[0.1, 0.2], [0.3, 0.4]];
        let ba = [[0.1, 0.25], [0.2, 0.45]];
        assert_abs_diff_eq!(swap_function(&ab, &ba), 0.2 - 0.2 + 0.3 - 0.25, epsilon = 1e-15);
    }

    #[test]
    fn factor_swap_round_trip() {
        let a = CMatrix::from_real_diagonal(&[0.2, 0.8]);
        let b = CMatrix::from_real_diagonal(&[0.1, 0.3, 0.6]);
        let ab = a.kron(&b);
        assert_eq!(swap_factors(&ab, 2, 3).unwrap(), b.kron(&a));
        assert!(luders_reduce(&ab, &CMatrix::zeros(6)).is_err());
        let p = CMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let red = luders_reduce(&ab, &p).unwrap();
        assert_abs_diff_eq!(red.trace_product(&p).re, 1.0, epsilon = 1e-15);
    }
}
