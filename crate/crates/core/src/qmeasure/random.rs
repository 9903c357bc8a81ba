//! Seeded random instances: Gaussian amplitudes, density matrices, unitaries
//! and states satisfying average completeness.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::events::NoiseProfile;
use super::matrix::{inner, CMatrix, C, ZERO};
use crate::Result;

/// Deterministic generator for one instance of one property.
#[derive(Debug, Clone)]
pub struct InstanceRng {
    inner: ChaCha8Rng,
}

impl InstanceRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        InstanceRng { inner }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.uniform() * (hi - lo + 1) as f64) as usize
    }

    /// Standard normal by Box-Muller.
    pub fn gauss(&mut self) -> f64 {
        let u = 1.0 - self.uniform();
        let v = self.uniform();
        libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * core::f64::consts::PI * v)
    }

    pub fn complex_gauss(&mut self) -> C {
        C::new(self.gauss(), self.gauss())
    }

    pub fn unit_vector(&mut self, dim: usize) -> Vec<C> {
        let v: Vec<C> = (0..dim).map(|_| self.complex_gauss()).collect();
        let norm = libm::sqrt(v.iter().map(|a| a.norm_sqr()).sum::<f64>());
        v.into_iter().map(|a| a / norm).collect()
    }

    /// Point of the probability simplex.
    pub fn simplex(&mut self, dim: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..dim).map(|_| -libm::log(1.0 - self.uniform())).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    }
}

/// `G G^dagger / Tr` with complex Gaussian `G`.
pub fn random_density(rng: &mut InstanceRng, dim: usize) -> CMatrix {
    let rows: Vec<Vec<C>> = (0..dim).map(|_| (0..dim).map(|_| rng.complex_gauss()).collect()).collect();
    let g = CMatrix::from_rows(&rows).expect("square by construction");
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    hermitize(&m.scale_real(1.0 / t))
}

/// Gram-Schmidt orthonormalization of a complex Gaussian matrix; columns
/// form the new basis.
pub fn random_unitary(rng: &mut InstanceRng, dim: usize) -> CMatrix {
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C> = (0..dim).map(|_| rng.complex_gauss()).collect();
        for c in &cols {
            let proj = inner(c, &v);
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = libm::sqrt(v.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let mut u = CMatrix::zeros(dim);
    for (k, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            u[(i, k)] = x;
        }
    }
    u
}

pub fn random_noise(rng: &mut InstanceRng, alternatives: usize, modes: usize) -> Result<NoiseProfile> {
    NoiseProfile::new((0..alternatives).map(|_| rng.unit_vector(modes)).collect())
}

/// `sum_{mn} c_mn |A_m z_m><A_n z_n|` with random density `c`. Every such
/// state makes the decorated projectors complete on average, and every state
/// with that property has this form.
pub fn random_complete_state(rng: &mut InstanceRng, noise: &NoiseProfile) -> CMatrix {
    let c = random_density(rng, noise.alternatives());
    state_in_decorated_span(&c, noise)
}

/// Embed a density matrix over alternatives into the decorated span.
pub fn state_in_decorated_span(c: &CMatrix, noise: &NoiseProfile) -> CMatrix {
    let d_e = noise.modes();
    let mut rho = CMatrix::zeros(noise.dim());
    for m in 0..noise.alternatives() {
        for n in 0..noise.alternatives() {
            let cmn = c[(m, n)];
            if cmn == ZERO {
                continue;
            }
            for mu in 0..d_e {
                for nu in 0..d_e {
                    rho[(m * d_e + mu, n * d_e + nu)] +=
                        cmn * noise.coefficient(m, mu) * noise.coefficient(n, nu).conj();
                }
            }
        }
    }
    hermitize(&rho)
}

/// `(M + M^dagger) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::super::events::{check_state, completeness};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let mut a = InstanceRng::new(7, 3);
        let mut b = InstanceRng::new(7, 3);
        assert_eq!(a.gauss(), b.gauss());
        let rho = random_density(&mut a, 4);
        assert!(check_state(&rho).is_valid());
        let u = random_unitary(&mut a, 3);
        assert!((&u * &u.adjoint()).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        let noise = random_noise(&mut a, 3, 2).unwrap();
        let s = random_complete_state(&mut a, &noise);
        assert!(check_state(&s).is_valid());
        assert_abs_diff_eq!(completeness(&s, &noise).unwrap(), 1.0, epsilon = 1e-12);
        let w = a.simplex(5);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        let k = a.range(2, 4);
        assert!((2..=4).contains(&k));
    }
}
