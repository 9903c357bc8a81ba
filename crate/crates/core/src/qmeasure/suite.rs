//! Randomized property suite over seeded instances.

use alloc::vec::Vec;

use super::dynamics::{
    consecutive_probabilities, luders_reduce, master_equation_2x2, swap_factors, swap_function,
    swap_function_symmetric, synchronous_probability,
};
use super::events::{
    check_state, decohere, decorated_basis_vector, decorated_projector, decorated_projector_in,
    entanglement_production, event_probability, event_probability_explicit, schmidt_rank,
    separable_state, split_fq, superposition_probability, superposition_projector, NoiseProfile,
};
use super::matrix::{basis, kron_vec, CMatrix, C};
use super::random::{
    hermitize, random_complete_state, random_density, random_noise, random_unitary, InstanceRng,
};

/// Tolerance for identities checked by the suite.
pub const SUITE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub property: &'static str,
    pub instances: usize,
    pub passed: usize,
    /// Largest defect seen, or the smallest margin for separation checks.
    pub worst: f64,
}

impl SuiteRow {
    pub fn ok(&self) -> bool {
        self.passed == self.instances
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(SuiteRow::ok)
    }
}

/// Outcome of one instance: pass flag and the measured defect.
type Check = (bool, f64);

/// Fold of defects where larger is worse.
fn defect(d: f64) -> Check {
    (d <= SUITE_TOL, d)
}

type Property = (&'static str, fn(&mut InstanceRng) -> Check, bool);

const PROPERTIES: [Property; 17] = [
    ("normalization under average completeness", normalization, false),
    ("trace and explicit probability agree", two_routes, false),
    ("f + q split within bounds", split_bounds, false),
    ("single-mode noise gives q = 0", single_mode, false),
    ("decoherence sends q to 0", decoherence, false),
    ("swap: immediate consecutive", swap_consecutive, false),
    ("swap: synchronous with noise", swap_synchronous_noisy, false),
    ("swap: synchronous noiseless", swap_synchronous_noiseless, false),
    ("swap: symmetric classical", swap_classical, false),
    ("conditional symmetry without evolution", conditional_symmetry, false),
    ("order asymmetry under evolution", order_asymmetry, true),
    ("Luders reproducibility", luders, false),
    ("entanglement production limits", entanglement, false),
    ("separable state entangles a product vector", separable_entangles, true),
    ("master equation limits", master_limits, false),
    ("classical consecutive asymmetry", classical_asymmetry, true),
    ("superposition expansion", superposition, false),
];

/// Run every property on `instances` seeded instances. Instance `i` of
/// property `k` uses stream `k * 2^32 + i` of the seeded generator.
pub fn run_suite(seed: u64, instances: usize) -> SuiteReport {
    let rows = PROPERTIES
        .iter()
        .enumerate()
        .map(|(k, &(property, check, separation))| {
            let mut passed = 0;
            let mut worst = if separation { f64::INFINITY } else { 0.0 };
            for i in 0..instances {
                let mut rng = InstanceRng::new(seed, ((k as u64) << 32) + i as u64);
                let (ok, value) = check(&mut rng);
                passed += ok as usize;
                worst = if separation { worst.min(value) } else { worst.max(value) };
            }
            SuiteRow {
                property,
                instances,
                passed,
                worst,
            }
        })
        .collect();
    SuiteReport { seed, rows }
}

fn dims(rng: &mut InstanceRng) -> (usize, usize) {
    (rng.range(2, 4), rng.range(1, 4))
}

fn normalization(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = random_complete_state(rng, &noise);
    let ps: Vec<f64> = (0..da).map(|n| event_probability(&rho, n, &noise).unwrap()).collect();
    let range_ok = ps.iter().all(|&p| (-SUITE_TOL..=1.0 + SUITE_TOL).contains(&p));
    let (ok, d) = defect((ps.iter().sum::<f64>() - 1.0).abs());
    (ok && range_ok && check_state(&rho).is_valid(), d)
}

fn two_routes(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = random_density(rng, da * de);
    defect(
        (0..da)
            .map(|n| {
                (event_probability(&rho, n, &noise).unwrap()
                    - event_probability_explicit(&rho, n, &noise).unwrap())
                .abs()
            })
            .fold(0.0, f64::max),
    )
}

fn split_bounds(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = random_complete_state(rng, &noise);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for n in 0..da {
        let p = event_probability(&rho, n, &noise).unwrap();
        let (f, q) = split_fq(&rho, n, &noise).unwrap();
        worst = worst.max((p - f - q).abs());
        ok &= f >= -SUITE_TOL && q >= -f - SUITE_TOL && q <= 1.0 - f + SUITE_TOL;
    }
    (ok && worst <= SUITE_TOL, worst)
}

fn single_mode(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = NoiseProfile::single_mode(da, de).unwrap();
    let rho = random_density(rng, da * de);
    let worst = (0..da)
        .map(|n| split_fq(&rho, n, &noise).unwrap().1.abs())
        .fold(0.0, f64::max);
    (worst == 0.0, worst)
}

fn decoherence(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = decohere(&random_complete_state(rng, &noise), de);
    defect(
        (0..da)
            .map(|n| {
                let (f, q) = split_fq(&rho, n, &noise).unwrap();
                let p = event_probability(&rho, n, &noise).unwrap();
                q.abs().max((p - f).abs())
            })
            .fold(0.0, f64::max),
    )
}

/// Joint probability of `first` then `second` with no evolution in between.
fn immediate(rho: &CMatrix, first: &CMatrix, second: &CMatrix) -> f64 {
    consecutive_probabilities(rho, &CMatrix::identity(rho.dim()), first, second)
        .map(|c| c.joint)
        .unwrap_or(0.0)
}

fn swap_consecutive(rng: &mut InstanceRng) -> Check {
    let de = rng.range(1, 3);
    let z = rng.unit_vector(de);
    let noise = NoiseProfile::common(z, 2).unwrap();
    let rho = random_complete_state(rng, &noise);
    let w = random_unitary(rng, 2);
    let pa: Vec<CMatrix> = (0..2).map(|n| decorated_projector(n, &noise).unwrap()).collect();
    let pb: Vec<CMatrix> = (0..2).map(|k| decorated_projector_in(&w, k, &noise).unwrap()).collect();
    let mut ab = [[0.0; 2]; 2];
    let mut ba = [[0.0; 2]; 2];
    for n in 0..2 {
        for k in 0..2 {
            ab[n][k] = immediate(&rho, &pb[k], &pa[n]);
            ba[k][n] = immediate(&rho, &pa[n], &pb[k]);
        }
    }
    defect(swap_function(&ab, &ba).abs())
}

fn swap_synchronous_noisy(rng: &mut InstanceRng) -> Check {
    let de = rng.range(1, 2);
    let na = random_noise(rng, 2, de).unwrap();
    let nb = random_noise(rng, 2, de).unwrap();
    let side = 2 * de;
    let vectors: Vec<Vec<C>> = (0..2)
        .flat_map(|n| (0..2).map(move |k| (n, k)))
        .map(|(n, k)| {
            kron_vec(
                &decorated_basis_vector(n, &na).unwrap(),
                &decorated_basis_vector(k, &nb).unwrap(),
            )
        })
        .collect();
    let c = random_density(rng, 4);
    let mut rho = CMatrix::zeros(side * side);
    for i in 0..4 {
        for j in 0..4 {
            rho = &rho + &CMatrix::outer(&vectors[i], &vectors[j]).scale(c[(i, j)]);
        }
    }
    let rho = hermitize(&rho);
    let swapped = swap_factors(&rho, side, side).unwrap();
    let pa: Vec<CMatrix> = (0..2).map(|n| decorated_projector(n, &na).unwrap()).collect();
    let pb: Vec<CMatrix> = (0..2).map(|k| decorated_projector(k, &nb).unwrap()).collect();
    let mut ab = [[0.0; 2]; 2];
    let mut ba = [[0.0; 2]; 2];
    for n in 0..2 {
        for k in 0..2 {
            ab[n][k] = synchronous_probability(&rho, &pa[n], &pb[k]).unwrap();
            ba[k][n] = synchronous_probability(&swapped, &pb[k], &pa[n]).unwrap();
        }
    }
    let total: f64 = ab.iter().flatten().sum();
    defect(swap_function(&ab, &ba).abs().max((total - 1.0).abs()))
}

fn projectors_of(u: &CMatrix) -> Vec<CMatrix> {
    (0..u.dim())
        .map(|k| {
            let col: Vec<C> = (0..u.dim()).map(|i| u[(i, k)]).collect();
            CMatrix::outer(&col, &col)
        })
        .collect()
}

fn swap_synchronous_noiseless(rng: &mut InstanceRng) -> Check {
    let pa = projectors_of(&random_unitary(rng, 2));
    let pb = projectors_of(&random_unitary(rng, 2));
    let rho = random_density(rng, 4);
    let swapped = swap_factors(&rho, 2, 2).unwrap();
    let mut ab = [[0.0; 2]; 2];
    let mut ba = [[0.0; 2]; 2];
    for n in 0..2 {
        for k in 0..2 {
            ab[n][k] = synchronous_probability(&rho, &pa[n], &pb[k]).unwrap();
            ba[k][n] = synchronous_probability(&swapped, &pb[k], &pa[n]).unwrap();
        }
    }
    let marginal_a: f64 = (0..2).map(|n| ab[n][0] + ab[n][1]).sum();
    let ra = random_density(rng, 2);
    let rb = random_density(rng, 2);
    let product = ra.kron(&rb);
    let factor = (0..2)
        .flat_map(|n| (0..2).map(move |k| (n, k)))
        .map(|(n, k)| {
            let joint = synchronous_probability(&product, &pa[n], &pb[k]).unwrap();
            (joint - ra.trace_product(&pa[n]).re * rb.trace_product(&pb[k]).re).abs()
        })
        .fold(0.0, f64::max);
    defect(swap_function(&ab, &ba).abs().max((marginal_a - 1.0).abs()).max(factor))
}

fn swap_classical(rng: &mut InstanceRng) -> Check {
    let w = rng.simplex(4);
    defect(swap_function_symmetric(&[[w[0], w[1]], [w[2], w[3]]]).abs())
}

fn conditional_symmetry(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let na = random_noise(rng, da, de).unwrap();
    let nb = random_noise(rng, da, de).unwrap();
    let w = random_unitary(rng, da);
    let rho = random_density(rng, da * de);
    let id = CMatrix::identity(da * de);
    let mut worst: f64 = 0.0;
    for n in 0..da {
        for k in 0..da {
            let pa = decorated_projector(n, &na).unwrap();
            let pb = decorated_projector_in(&w, k, &nb).unwrap();
            let ba = consecutive_probabilities(&rho, &id, &pa, &pb).unwrap().conditional;
            let ab = consecutive_probabilities(&rho, &id, &pb, &pa).unwrap().conditional;
            worst = worst.max((ba - ab).abs());
        }
    }
    defect(worst)
}

fn order_asymmetry(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let na = random_noise(rng, da, de).unwrap();
    let nb = random_noise(rng, da, de).unwrap();
    let w = random_unitary(rng, da);
    let u = random_unitary(rng, da * de);
    let rho = random_density(rng, da * de);
    let pa = decorated_projector(0, &na).unwrap();
    let pb = decorated_projector_in(&w, 0, &nb).unwrap();
    let ab = consecutive_probabilities(&rho, &u, &pa, &pb).unwrap().joint;
    let ba = consecutive_probabilities(&rho, &u, &pb, &pa).unwrap().joint;
    let gap = (ab - ba).abs();
    (gap > 1e-9, gap)
}

fn luders(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = random_complete_state(rng, &noise);
    let mut worst: f64 = 0.0;
    let mut valid = true;
    for n in 0..da {
        let pn = decorated_projector(n, &noise).unwrap();
        let Ok(reduced) = luders_reduce(&rho, &pn) else {
            continue;
        };
        valid &= check_state(&reduced).is_valid();
        for k in 0..da {
            let p = event_probability(&reduced, k, &noise).unwrap();
            let target = if k == n { 1.0 } else { 0.0 };
            worst = worst.max((p - target).abs());
        }
    }
    (valid && worst <= SUITE_TOL, worst)
}

fn entanglement(rng: &mut InstanceRng) -> Check {
    let (da, de) = (rng.range(2, 5), rng.range(2, 5));
    let a = rng.simplex(da);
    let b = rng.simplex(de);
    let diag: Vec<f64> = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect();
    let product = entanglement_production(&CMatrix::from_real_diagonal(&diag), da, de).unwrap();
    let d = rng.range(2, 5);
    let corr: Vec<f64> = (0..d * d)
        .map(|i| if i / d == i % d { 1.0 / d as f64 } else { 0.0 })
        .collect();
    let maximal = entanglement_production(&CMatrix::from_real_diagonal(&corr), d, d).unwrap();
    defect(product.abs().max((maximal - libm::log(d as f64)).abs()))
}

fn separable_entangles(rng: &mut InstanceRng) -> Check {
    let (da, de) = (rng.range(2, 3), rng.range(2, 3));
    let lambda = 0.1 + 0.8 * rng.uniform();
    let terms = [
        (lambda, random_density(rng, da), random_density(rng, de)),
        (1.0 - lambda, random_density(rng, da), random_density(rng, de)),
    ];
    let rho = separable_state(&terms).unwrap();
    let v = rho.apply(&kron_vec(&basis(da, rng.range(0, da - 1)), &basis(de, rng.range(0, de - 1))));
    let rank = schmidt_rank(&v, da, de, 1e-9).unwrap();
    (rank > 1, rank as f64)
}

fn random_column_table(rng: &mut InstanceRng) -> [[f64; 2]; 2] {
    let (x, y) = (rng.uniform(), rng.uniform());
    [[x, y], [1.0 - x, 1.0 - y]]
}

fn master_limits(rng: &mut InstanceRng) -> Check {
    let (g1, g2) = (0.01 + 2.0 * rng.uniform(), 0.01 + 2.0 * rng.uniform());
    let f0 = random_column_table(rng);
    let start = master_equation_2x2(g1, g2, &f0, 0.0).unwrap();
    let end = master_equation_2x2(g1, g2, &f0, f64::INFINITY).unwrap();
    let limit = [g1 / (g1 + g2), g2 / (g1 + g2)];
    let exact = start == f0 && (0..2).all(|k| end[k] == [limit[k]; 2]);
    let mid = master_equation_2x2(g1, g2, &f0, 5.0 * rng.uniform()).unwrap();
    let norm = (0..2).map(|n| (mid[0][n] + mid[1][n] - 1.0).abs()).fold(0.0, f64::max);
    (exact && norm <= SUITE_TOL, norm)
}

fn classical_asymmetry(rng: &mut InstanceRng) -> Check {
    let rates: Vec<f64> = (0..4).map(|_| 0.05 + 2.0 * rng.uniform()).collect();
    let f0 = random_column_table(rng);
    let g0 = random_column_table(rng);
    let t = 0.1 + 3.0 * rng.uniform();
    let fa = rng.uniform();
    let gb = rng.uniform();
    let b_given_a = master_equation_2x2(rates[0], rates[1], &f0, t).unwrap();
    let a_given_b = master_equation_2x2(rates[2], rates[3], &g0, t).unwrap();
    let pa = [fa, 1.0 - fa];
    let pb = [gb, 1.0 - gb];
    let mut cond: f64 = 0.0;
    let mut joint: f64 = 0.0;
    for k in 0..2 {
        for n in 0..2 {
            cond = cond.max((b_given_a[k][n] - a_given_b[n][k]).abs());
            joint = joint.max((b_given_a[k][n] * pa[n] - a_given_b[n][k] * pb[k]).abs());
        }
    }
    let gap = cond.min(joint);
    (gap > 1e-9, gap)
}

fn superposition(rng: &mut InstanceRng) -> Check {
    let (da, de) = dims(rng);
    let noise = random_noise(rng, da, de).unwrap();
    let rho = random_complete_state(rng, &noise);
    let m = rng.range(0, da - 1);
    let n = (m + rng.range(1, da - 1)) % da;
    let amp = rng.unit_vector(2);
    let via_terms = superposition_probability(&rho, (m, amp[0]), (n, amp[1]), &noise).unwrap();
    let proj = superposition_projector((m, amp[0]), (n, amp[1]), &noise).unwrap();
    defect((via_terms - rho.trace_product(&proj).re).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let a = run_suite(42, 10);
        for row in &a.rows {
            assert!(row.ok(), "{row:?}");
        }
        assert_eq!(a, run_suite(42, 10));
    }
}
