use affectq_core::qmeasure::random::{random_complete_state, random_density, random_noise, InstanceRng};
use affectq_core::qmeasure::{
    check_state, completeness, consecutive_probabilities, decohere, decorated_projector, entanglement_production,
    event_probability, event_probability_explicit, luders_reduce, master_equation_2x2, run_suite, schmidt_rank,
    separable_state, split_fq, superposition_probability, swap_function, swap_function_symmetric,
    synchronous_probability, CMatrix, NoiseProfile, C,
};
use approx::assert_abs_diff_eq;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

const EXACT: f64 = 1e-12;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn hadamard_noise() -> NoiseProfile {
    let s = FRAC_1_SQRT_2;
    NoiseProfile::new(vec![vec![c(s), c(s)], vec![c(s), c(-s)]]).unwrap()
}

#[test]
fn projectors_for_explicit_noise() {
    let noise = hadamard_noise();
    let p0 = decorated_projector(0, &noise).unwrap();
    let p1 = decorated_projector(1, &noise).unwrap();
    let half = |v: [f64; 4]| v.map(c).to_vec();
    let oracle0 = CMatrix::from_rows(&[
        half([0.5, 0.5, 0.0, 0.0]),
        half([0.5, 0.5, 0.0, 0.0]),
        half([0.0; 4]),
        half([0.0; 4]),
    ])
    .unwrap();
    let oracle1 = CMatrix::from_rows(&[
        half([0.0; 4]),
        half([0.0; 4]),
        half([0.0, 0.0, 0.5, -0.5]),
        half([0.0, 0.0, -0.5, 0.5]),
    ])
    .unwrap();
    assert!(p0.max_abs_diff(&oracle0) <= EXACT);
    assert!(p1.max_abs_diff(&oracle1) <= EXACT);
    assert!((&p0 * &p0).max_abs_diff(&p0) <= EXACT);
    assert!((&p0 * &p1).max_abs_diff(&CMatrix::zeros(4)) <= EXACT);

    let single = NoiseProfile::single_mode(2, 3).unwrap();
    let e0 = CMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
    let a1 = CMatrix::from_real_diagonal(&[0.0, 1.0]);
    assert_eq!(decorated_projector(1, &single).unwrap(), a1.kron(&e0));
}

#[test]
fn event_probability_values() {
    let noise = hadamard_noise();
    let own = decorated_projector(1, &noise).unwrap();
    assert_abs_diff_eq!(event_probability(&own, 1, &noise).unwrap(), 1.0, epsilon = EXACT);
    let mixed = CMatrix::identity(4).scale_real(0.25);
    assert_abs_diff_eq!(event_probability(&mixed, 0, &noise).unwrap(), 0.25, epsilon = EXACT);
    let mut rng = InstanceRng::new(3, 0);
    for _ in 0..20 {
        let noise = random_noise(&mut rng, 2, 3).unwrap();
        let rho = random_complete_state(&mut rng, &noise);
        assert_abs_diff_eq!(completeness(&rho, &noise).unwrap(), 1.0, epsilon = 1e-9);
        let total = event_probability(&rho, 0, &noise).unwrap() + event_probability(&rho, 1, &noise).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = EXACT);
        for n in 0..2 {
            assert_abs_diff_eq!(
                event_probability(&rho, n, &noise).unwrap(),
                event_probability_explicit(&rho, n, &noise).unwrap(),
                epsilon = EXACT
            );
        }
    }
}

#[test]
fn split_values() {
    let mut rng = InstanceRng::new(5, 1);
    let rho = random_density(&mut rng, 6);
    let single = NoiseProfile::single_mode(2, 3).unwrap();
    for n in 0..2 {
        assert_eq!(split_fq(&rho, n, &single).unwrap().1, 0.0);
    }
    let noise = random_noise(&mut rng, 2, 3).unwrap();
    let diag = decohere(&rho, 3);
    for n in 0..2 {
        let (f, q) = split_fq(&diag, n, &noise).unwrap();
        assert!(f >= 0.0);
        assert_abs_diff_eq!(q, 0.0, epsilon = EXACT);
    }

    let a = [CMatrix::from_real_diagonal(&[0.7, 0.3]), CMatrix::from_real_diagonal(&[0.2, 0.8])];
    let e_vec = |x: f64, y: f64| {
        let v = [c(x), c(y)];
        CMatrix::outer(&v, &v)
    };
    let e = [e_vec(0.6, 0.8), e_vec(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)];
    let rho = separable_state(&[(0.4, a[0].clone(), e[0].clone()), (0.6, a[1].clone(), e[1].clone())]).unwrap();
    assert!(check_state(&rho).is_valid());
    let noise = hadamard_noise();
    for n in 0..2 {
        let z = noise.noise_vector(n);
        let mut f = 0.0;
        let mut p = 0.0;
        for (lambda, (ai, ei)) in [0.4, 0.6].iter().zip(a.iter().zip(&e)) {
            let an = ai[(n, n)].re;
            for mu in 0..2 {
                f += lambda * an * z[mu].norm_sqr() * ei[(mu, mu)].re;
                for nu in 0..2 {
                    p += lambda * an * (z[mu].conj() * ei[(mu, nu)] * z[nu]).re;
                }
            }
        }
        let (fs, qs) = split_fq(&rho, n, &noise).unwrap();
        assert_abs_diff_eq!(fs, f, epsilon = EXACT);
        assert_abs_diff_eq!(fs + qs, p, epsilon = EXACT);
    }
}

#[test]
fn entanglement_values() {
    let product: Vec<f64> = [0.2, 0.3, 0.5]
        .iter()
        .flat_map(|a| [0.6, 0.4].map(|b| a * b))
        .collect();
    let rho = CMatrix::from_real_diagonal(&product);
    assert_abs_diff_eq!(entanglement_production(&rho, 3, 2).unwrap(), 0.0, epsilon = EXACT);
    for d in 2..=5usize {
        let diag: Vec<f64> = (0..d * d).map(|i| if i / d == i % d { 1.0 / d as f64 } else { 0.0 }).collect();
        let rho = CMatrix::from_real_diagonal(&diag);
        assert_abs_diff_eq!(entanglement_production(&rho, d, d).unwrap(), (d as f64).ln(), epsilon = EXACT);
    }

    let p = |i: usize| {
        let mut m = CMatrix::zeros(2);
        m[(i, i)] = c(1.0);
        m
    };
    let sep = separable_state(&[(0.5, p(0), p(0)), (0.5, p(1), p(1))]).unwrap();
    let s = FRAC_1_SQRT_2;
    let v = vec![c(0.5), c(0.5), c(0.5), c(0.5)];
    let out = sep.apply(&v);
    assert_eq!(schmidt_rank(&out, 2, 2, 1e-9).unwrap(), 2);
    assert_eq!(schmidt_rank(&[c(s), c(0.0), c(s), c(0.0)], 2, 2, 1e-9).unwrap(), 1);
}

#[test]
fn luders_values() {
    let noise = hadamard_noise();
    let pk = decorated_projector(0, &noise).unwrap();
    assert!(luders_reduce(&pk, &pk).unwrap().max_abs_diff(&pk) <= EXACT);
    let mut rng = InstanceRng::new(9, 2);
    for _ in 0..20 {
        let rho = random_density(&mut rng, 4);
        let red = luders_reduce(&rho, &pk).unwrap();
        assert!(check_state(&red).is_valid());
        assert_abs_diff_eq!(red.trace_product(&pk).re, 1.0, epsilon = EXACT);
        let other = decorated_projector(1, &noise).unwrap();
        assert_abs_diff_eq!(red.trace_product(&other).re, 0.0, epsilon = EXACT);
    }
    assert!(luders_reduce(&CMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 0.0]), &pk).is_err());
}

#[test]
fn consecutive_values() {
    let id = CMatrix::identity(2);
    let p = |v: &[C]| CMatrix::outer(v, v);
    let a = [p(&[c(1.0), c(0.0)]), p(&[c(0.0), c(1.0)])];
    let rho = CMatrix::from_real_diagonal(&[0.4, 0.6]);
    for n in 0..2 {
        for k in 0..2 {
            let cons = consecutive_probabilities(&rho, &id, &a[n], &a[k]).unwrap();
            assert_abs_diff_eq!(cons.conditional, if n == k { 1.0 } else { 0.0 }, epsilon = EXACT);
        }
    }
    let th: f64 = 0.3;
    let b = [p(&[c(th.cos()), c(th.sin())]), p(&[c(-th.sin()), c(th.cos())])];
    let pure = p(&[c(0.8), c(0.6)]);
    for an in &a[..2] {
        for bk in &b {
            let ab = consecutive_probabilities(&pure, &id, an, bk).unwrap().conditional;
            let ba = consecutive_probabilities(&pure, &id, bk, an).unwrap().conditional;
            assert_abs_diff_eq!(ab, ba, epsilon = EXACT);
        }
    }
    let u = CMatrix::from_rows(&[vec![c(0.6), c(-0.8)], vec![c(0.8), c(0.6)]]).unwrap();
    let ab = consecutive_probabilities(&pure, &u, &a[0], &b[1]).unwrap().joint;
    let ba = consecutive_probabilities(&pure, &u, &b[1], &a[0]).unwrap().joint;
    assert!((ab - ba).abs() > 1e-6);
}

#[test]
fn synchronous_values() {
    let ra = CMatrix::from_real_diagonal(&[0.3, 0.7]);
    let rb = CMatrix::from_real_diagonal(&[0.1, 0.5, 0.4]);
    let pa = CMatrix::from_real_diagonal(&[1.0, 0.0]);
    let pb = CMatrix::from_real_diagonal(&[0.0, 1.0, 0.0]);
    let joint = synchronous_probability(&ra.kron(&rb), &pa, &pb).unwrap();
    assert_abs_diff_eq!(joint, 0.3 * 0.5, epsilon = EXACT);
    let mixed = CMatrix::identity(6).scale_real(1.0 / 6.0);
    assert_abs_diff_eq!(synchronous_probability(&mixed, &pa, &pb).unwrap(), 1.0 / 6.0, epsilon = EXACT);
    assert!(synchronous_probability(&mixed, &pa, &pa).is_err());
}

#[test]
fn swap_values() {
    let t = [[0.1, 0.2], [0.3, 0.4]];
    assert_eq!(swap_function_symmetric(&t), 0.0);
    let mut rng = InstanceRng::new(11, 4);
    let rho = random_density(&mut rng, 4);
    let proj = |i: usize| {
        let mut m = CMatrix::zeros(2);
        m[(i, i)] = c(1.0);
        m
    };
    let mut ab = [[0.0; 2]; 2];
    let mut ba = [[0.0; 2]; 2];
    let swapped = affectq_core::qmeasure::dynamics::swap_factors(&rho, 2, 2).unwrap();
    for n in 0..2 {
        for k in 0..2 {
            ab[n][k] = synchronous_probability(&rho, &proj(n), &proj(k)).unwrap();
            ba[k][n] = synchronous_probability(&swapped, &proj(k), &proj(n)).unwrap();
        }
    }
    assert_abs_diff_eq!(swap_function(&ab, &ba), 0.0, epsilon = EXACT);
}

#[test]
fn master_values() {
    let id = [[1.0, 0.0], [0.0, 1.0]];
    assert_eq!(master_equation_2x2(0.7, 0.2, &id, 0.0).unwrap(), id);
    let t = master_equation_2x2(1.0, 1.0, &id, 1.0).unwrap();
    assert_abs_diff_eq!(t[0][0], 0.5 * (1.0 + (-2.0f64).exp()), epsilon = 1e-15);
    assert_abs_diff_eq!(t[0][0], 0.5677, epsilon = 5e-5);
    let inf = master_equation_2x2(1.0, 3.0, &id, f64::INFINITY).unwrap();
    assert_eq!(inf, [[0.25, 0.25], [0.75, 0.75]]);
    assert_eq!(master_equation_2x2(0.0, 0.0, &id, 4.0).unwrap(), id);
    assert!(master_equation_2x2(-1.0, 1.0, &id, 1.0).is_err());
}

#[test]
fn superposition_values() {
    let mut rng = InstanceRng::new(13, 5);
    let noise = random_noise(&mut rng, 3, 2).unwrap();
    let rho = random_complete_state(&mut rng, &noise);
    let first = superposition_probability(&rho, (0, c(1.0)), (2, c(0.0)), &noise).unwrap();
    assert_abs_diff_eq!(first, event_probability(&rho, 0, &noise).unwrap(), epsilon = EXACT);

    let single = NoiseProfile::single_mode(2, 1).unwrap();
    let real = CMatrix::from_rows(&[vec![c(0.6), c(0.2)], vec![c(0.2), c(0.4)]]).unwrap();
    let s = FRAC_1_SQRT_2;
    let plus = superposition_probability(&real, (0, c(s)), (1, c(s)), &single).unwrap();
    let minus = superposition_probability(&real, (0, c(s)), (1, c(-s)), &single).unwrap();
    assert_abs_diff_eq!(plus, 0.5 * 0.6 + 0.5 * 0.4 + 0.2, epsilon = EXACT);
    assert_abs_diff_eq!(plus - minus, 4.0 * 0.2 / 2.0, epsilon = EXACT);
    assert!(superposition_probability(&real, (0, c(1.0)), (1, c(1.0)), &single).is_err());
}

#[test]
fn full_suite_is_green_fast_and_deterministic() {
    let start = Instant::now();
    let a = run_suite(42, 100);
    let elapsed = start.elapsed();
    assert!(a.all_passed(), "{:?}", a.rows.iter().filter(|r| !r.ok()).collect::<Vec<_>>());
    assert!(a.rows.iter().all(|r| r.instances == 100));
    assert!(elapsed.as_secs_f64() < 5.0, "{elapsed:?}");
    let b = run_suite(42, 100);
    assert_eq!(a, b);
    assert!(run_suite(0, 100).all_passed());
}
