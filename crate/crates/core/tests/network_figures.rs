use affectq_core::network::{
    classify_regime, classify_series, collective_probability, fixed_point_solve, kl_gain,
    simulate_continuous, simulate_discrete, simulate_general, AgentGroup, GeneralGroup, GeneralNetwork,
    MemoryKind, Network, Regime, RegimeConfig, SolverConfig,
};
use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use MemoryKind::{LongTerm, ShortTerm};

const TOL: f64 = 0.005;

fn net(g1: (f64, f64, f64), g2: (f64, f64, f64), m2: MemoryKind) -> Network {
    Network::new(
        AgentGroup::new(g1.0, g1.1, g1.2, LongTerm).unwrap(),
        AgentGroup::new(g2.0, g2.1, g2.2, m2).unwrap(),
    )
    .unwrap()
}

fn figure(k: u32) -> Network {
    match k {
        1 => net((0.8, 0.19, 0.05), (0.9, -0.8, 0.0), ShortTerm),
        2 => net((0.8, 0.19, 0.1), (0.9, -0.8, 0.85), ShortTerm),
        3 => net((0.3, 0.699, 0.0), (0.0, 0.98, 0.0), ShortTerm),
        4 => net((0.6, 0.39, 1.0), (1.0, -0.9, 0.9), ShortTerm),
        5 => net((0.3, 0.699, 1.0), (0.0, 0.99, 1.0), ShortTerm),
        6 => net((0.6, 0.3, 1.0), (1.0, -0.999, 0.8), ShortTerm),
        7 => net((0.64, 0.3, 0.0), (0.64, -0.2, 0.0), LongTerm),
        8 => net((0.64, 0.35, 0.1), (0.64, 0.15, 0.05), LongTerm),
        _ => unreachable!(),
    }
}

fn regimes(k: u32, steps: usize) -> [Regime; 2] {
    let n = figure(k);
    let tr = simulate_discrete(&n, steps).unwrap();
    let rep = classify_regime(&n, &tr, &RegimeConfig::default()).unwrap();
    assert!(rep.chaos_certified, "figure {k}: chaos not certified");
    [rep.groups[0].regime, rep.groups[1].regime]
}

fn is_periodic(r: Regime) -> bool {
    matches!(r, Regime::Periodic { .. })
}

#[test]
fn kl_values() {
    assert_eq!(kl_gain(0.3, 0.3), 0.0);
    let oracle = 0.362 * (0.362f64 / 0.778).ln() + 0.638 * (0.638f64 / 0.222).ln();
    assert_abs_diff_eq!(kl_gain(0.362, 0.778), oracle, epsilon = 1e-12);
    assert_abs_diff_eq!(kl_gain(0.362, 0.778), 0.397, epsilon = 5e-4);
    let oracle = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    assert_abs_diff_eq!(kl_gain(0.5, 0.25), oracle, epsilon = 1e-15);
    assert_abs_diff_eq!(kl_gain(0.5, 0.25), 0.1438, epsilon = 5e-5);
    assert!(kl_gain(0.0, 1.0).is_finite());
}

#[test]
fn no_emotion_is_constant() {
    let n = net((0.7, 0.0, 0.3), (0.2, 0.0, 0.6), ShortTerm);
    let tr = simulate_discrete(&n, 100).unwrap();
    let expect = [0.7 * 0.7 + 0.3 * 0.2, 0.4 * 0.2 + 0.6 * 0.7];
    for s in &tr.states {
        assert_abs_diff_eq!(s.p[0], expect[0], epsilon = 1e-15);
        assert_abs_diff_eq!(s.p[1], expect[1], epsilon = 1e-15);
    }
    let ct = simulate_continuous(&n, 10.0, 0.01).unwrap();
    assert!(ct.states.iter().all(|s| s.p[0] == ct.states[0].p[0] && s.p[1] == ct.states[0].p[1]));
}

#[test]
fn fixed_point_figures() {
    let p = simulate_discrete(&figure(1), 2000).unwrap().last().unwrap().p;
    assert_abs_diff_eq!(p[0], 0.778, epsilon = TOL);
    assert_abs_diff_eq!(p[1], 0.362, epsilon = TOL);
    assert_eq!(regimes(1, 2000), [Regime::FixedPoint; 2]);

    let p = simulate_discrete(&figure(2), 20_000).unwrap().last().unwrap().p;
    assert_abs_diff_eq!(p[0], 0.730, epsilon = TOL);
    assert_abs_diff_eq!(p[1], 0.695, epsilon = TOL);
    assert_eq!(regimes(2, 20_000), [Regime::FixedPoint; 2]);
}

#[test]
fn oscillating_figures() {
    let r3 = regimes(3, 2000);
    assert_eq!(r3[0], Regime::FixedPoint);
    assert!(is_periodic(r3[1]));
    let last = simulate_discrete(&figure(3), 2000).unwrap();
    assert_abs_diff_eq!(last.last().unwrap().p[0], 0.3, epsilon = 1e-6);

    let r4 = regimes(4, 2000);
    assert!(is_periodic(r4[0]) && is_periodic(r4[1]));

    let r5 = regimes(5, 2000);
    assert_eq!(r5, [Regime::Chaotic, Regime::FixedPoint]);
    let p2 = simulate_discrete(&figure(5), 2000).unwrap().last().unwrap().p[1];
    assert_abs_diff_eq!(p2, 0.3, epsilon = TOL);

    assert_eq!(regimes(6, 2000), [Regime::Chaotic; 2]);
}

#[test]
fn consensus_figures() {
    for k in [7, 8] {
        let tr = simulate_discrete(&figure(k), 100_000).unwrap();
        let s = tr.last().unwrap();
        for j in 0..2 {
            assert_abs_diff_eq!(s.p[j], 0.64, epsilon = TOL);
            assert_abs_diff_eq!(s.q[j], 0.0, epsilon = TOL);
        }
    }
}

#[test]
fn continuous_figures() {
    let h = 0.01;
    let last = |k| simulate_continuous(&figure(k), 300.0, h).unwrap().last().unwrap().p;
    let p = last(1);
    assert_abs_diff_eq!(p[0], 0.778, epsilon = TOL);
    assert_abs_diff_eq!(p[1], 0.362, epsilon = TOL);
    let p = last(4);
    assert_abs_diff_eq!(p[0], 0.265, epsilon = TOL);
    assert_abs_diff_eq!(p[1], 0.566, epsilon = TOL);
    let p = last(5);
    assert_abs_diff_eq!(p[0], 0.99, epsilon = TOL);
    assert_abs_diff_eq!(p[1], 0.99, epsilon = TOL);
    assert!(simulate_continuous(&figure(1), 1.0, 0.0).is_err());
}

#[test]
fn continuous_tracks_discrete_on_smooth_figures() {
    let n = figure(2);
    let d = simulate_discrete(&n, 50).unwrap();
    let c = simulate_continuous(&n, 50.0, 0.01).unwrap();
    let mut worst: f64 = 0.0;
    for (t, s) in d.states.iter().enumerate() {
        let cs = &c.states[t * 100];
        assert_abs_diff_eq!(c.times[t * 100], t as f64, epsilon = 1e-9);
        worst = worst.max((cs.p[0] - s.p[0]).abs()).max((cs.p[1] - s.p[1]).abs());
    }
    assert!(worst <= 0.05, "max gap {worst}");
}

#[test]
fn solver_matches_long_runs() {
    let cfg = SolverConfig::default();
    for (k, steps) in [(1u32, 2000usize), (2, 20_000)] {
        let n = figure(k);
        let fp = fixed_point_solve(&n, &cfg).unwrap();
        let sim = simulate_discrete(&n, steps).unwrap().last().unwrap().p;
        assert_abs_diff_eq!(fp.p[0], sim[0], epsilon = 1e-3);
        assert_abs_diff_eq!(fp.p[1], sim[1], epsilon = 1e-3);
        assert!(fp.residual <= 1e-10);
    }
    let fp = fixed_point_solve(&figure(1), &cfg).unwrap();
    assert_abs_diff_eq!(fp.q[1], -0.8 * (-kl_gain(fp.p[1], fp.p[0])).exp(), epsilon = 1e-9);
    assert_abs_diff_eq!(fp.q[1], -0.54, epsilon = TOL);

    for k in [7u32, 8] {
        let n = figure(k);
        let fp = fixed_point_solve(&n, &cfg).unwrap();
        let sim = simulate_discrete(&n, 1_000_000).unwrap().last().unwrap().p;
        assert!(fp.degenerate);
        assert_eq!(fp.q, [0.0, 0.0]);
        assert_abs_diff_eq!(fp.p[0], 0.64, epsilon = 1e-9);
        for (solved, run) in fp.p.iter().zip(sim) {
            assert_abs_diff_eq!(*solved, run, epsilon = 1e-3);
        }
    }

    let sym = net((0.4, 0.0, 0.3), (0.4, 0.0, 0.7), ShortTerm);
    assert_eq!(fixed_point_solve(&sym, &cfg).unwrap().p, [0.4, 0.4]);
}

#[test]
fn herding_smooths_oscillations() {
    let cfg = RegimeConfig::default();
    let (from, to) = ((1.0, 0.9), (0.1, 0.85));
    let mut prev = f64::INFINITY;
    for i in 0..5 {
        let s = i as f64 / 4.0;
        let e1 = from.0 + s * (to.0 - from.0);
        let e2 = from.1 + s * (to.1 - from.1);
        let n = net((0.6, 0.39, e1), (1.0, -0.9, e2), ShortTerm);
        let tr = simulate_discrete(&n, 20_000).unwrap();
        let amp = (0..2)
            .map(|j| classify_series(&tr.series(j), &cfg).unwrap().amplitude)
            .fold(0.0, f64::max);
        assert!(amp <= prev + 1e-6, "amplitude rose at ({e1}, {e2}): {amp} > {prev}");
        prev = amp;
    }
}

#[test]
fn collective_values() {
    let n = figure(1);
    let tr = simulate_discrete(&n, 10).unwrap();
    let c = collective_probability(&n, &tr).unwrap();
    for (x, s) in c.iter().zip(&tr.states) {
        assert_abs_diff_eq!(*x, 0.5 * (s.p[0] + s.p[1]), epsilon = 1e-15);
    }
    let mut skew = n;
    skew.groups[0] = skew.groups[0].with_fraction(1.0).unwrap();
    skew.groups[1] = skew.groups[1].with_fraction(0.0).unwrap();
    assert_eq!(collective_probability(&skew, &tr).unwrap(), tr.series(0));
    skew.groups[1] = skew.groups[1].with_fraction(0.5).unwrap();
    assert!(collective_probability(&skew, &tr).is_err());
}

fn general_from(n: &Network) -> GeneralNetwork {
    GeneralNetwork::new(
        n.groups
            .iter()
            .map(|g| GeneralGroup {
                f: vec![g.f, 1.0 - g.f],
                q0: vec![g.q0, -g.q0],
                epsilon: g.epsilon,
                memory: g.memory,
            })
            .collect(),
        n.intensity,
    )
    .unwrap()
}

#[test]
fn general_reduces_to_two_groups() {
    // The general model carries both alternatives separately, so agreement is
    // up to accumulated rounding.
    for k in [1u32, 2, 3, 4] {
        let n = figure(k);
        let two = simulate_discrete(&n, 200).unwrap();
        let gen = simulate_general(&general_from(&n), 200).unwrap();
        assert_eq!(gen.len(), two.len());
        for (g, s) in gen.iter().zip(&two.states) {
            for j in 0..2 {
                assert_abs_diff_eq!(g.p[j][0], s.p[j], epsilon = 1e-9);
                assert_abs_diff_eq!(g.q[j][0], s.q[j], epsilon = 1e-9);
                assert_abs_diff_eq!(g.memory[j], s.memory[j], epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn identical_general_groups_move_together() {
    let g = GeneralGroup {
        f: vec![0.5, 0.3, 0.2],
        q0: vec![0.2, -0.05, -0.15],
        epsilon: 0.4,
        memory: LongTerm,
    };
    let net = GeneralNetwork::new(vec![g.clone(), g.clone(), g], 1.0).unwrap();
    for s in simulate_general(&net, 50).unwrap() {
        assert_eq!(s.p[0], s.p[1]);
        assert_eq!(s.p[1], s.p[2]);
    }
}

fn group_strategy() -> impl Strategy<Value = (f64, f64, f64, bool)> {
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..=1.0f64, any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectory_invariants(a in group_strategy(), b in group_strategy()) {
        let mk = |(f, q, e, long): (f64, f64, f64, bool)| {
            let q = q.clamp(-f, 1.0 - f);
            AgentGroup::new(f, q, e, if long { LongTerm } else { ShortTerm }).unwrap()
        };
        let (ga, gb) = (mk(a), mk(b));
        let n = Network::new(ga, gb).unwrap();
        let tr = simulate_discrete(&n, 300).unwrap();
        let mut prev_m = [0.0f64; 2];
        for (t, s) in tr.states.iter().enumerate() {
            for (j, g) in n.groups.iter().enumerate() {
                prop_assert!((0.0..=1.0).contains(&s.p[j]));
                prop_assert!((s.q[j] - g.q0 * (-s.memory[j]).exp()).abs() <= 1e-12);
                prop_assert!(s.memory[j] >= 0.0);
                if g.memory == LongTerm && t > 0 {
                    prop_assert!(s.memory[j] >= prev_m[j]);
                }
                prev_m[j] = s.memory[j];
            }
        }
    }

    #[test]
    fn kl_is_nonnegative(p in 0.0..=1.0f64, r in 0.0..=1.0f64) {
        let g = kl_gain(p, r);
        prop_assert!(g >= 0.0);
        prop_assert_eq!(kl_gain(p, p), 0.0);
        if (p - r).abs() > 1e-6 {
            prop_assert!(g > 0.0);
        }
    }

    #[test]
    fn general_rows_stay_normalized(
        f0 in 0.05..0.95f64,
        f1 in 0.05..0.95f64,
        q in -0.04..0.04f64,
        eps in 0.0..=1.0f64,
        long in any::<bool>(),
    ) {
        let mk = |f: f64| GeneralGroup {
            f: vec![f * 0.5, f * 0.5, 1.0 - f],
            q0: vec![q, q, -2.0 * q],
            epsilon: eps,
            memory: if long { LongTerm } else { ShortTerm },
        };
        let net = GeneralNetwork::new(vec![mk(f0), mk(f1), mk(0.5)], 1.0).unwrap();
        for s in simulate_general(&net, 40).unwrap() {
            for j in 0..3 {
                prop_assert!((s.p[j].iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                prop_assert!(s.q[j].iter().sum::<f64>().abs() <= 1e-9);
                prop_assert!(s.herding[j].iter().sum::<f64>().abs() <= 1e-9);
            }
        }
    }
}
