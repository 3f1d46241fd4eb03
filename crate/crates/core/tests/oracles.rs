//! Exact routines against brute-force oracles, plus the inequalities every
//! variation functional has to satisfy.

use lbv_core::variation::CutPolicy;
use lbv_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(rng: &mut impl Rng, max_points: usize) -> PiecewiseLinearPeriodic {
    let n = rng.gen_range(1..=max_points);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    PiecewiseLinearPeriodic::new(
        xs.into_iter()
            .map(|x| (x, rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

fn random_lambda(rng: &mut impl Rng, len: usize) -> LambdaSequence {
    let mut t = rng.gen_range(0.2..2.0);
    let terms = (0..len)
        .map(|_| {
            t += rng.gen_range(0.0..1.5);
            t
        })
        .collect();
    LambdaSequence::explicit(terms).unwrap()
}

fn with_midpoints(f: &PiecewiseLinearPeriodic) -> Vec<f64> {
    f.segments()
        .flat_map(|s| [s.x0, (0.5 * (s.x0 + s.x1)).rem_euclid(1.0)])
        .collect()
}

#[test]
fn p_variation_matches_dp_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..200 {
        let f = random_function(&mut rng, 8);
        let p = [1.0, 1.5, 2.0, 3.0][trial % 4];
        let exact = p_variation(&f, p).unwrap().powf(p);
        let oracle = brute_p_variation(&f, p, &with_midpoints(&f)).unwrap();
        assert!(
            (exact - oracle).abs() < 1e-9,
            "trial {trial}: {exact} vs {oracle}"
        );
    }
}

#[test]
fn lambda_variation_matches_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut uncertified = 0;
    for trial in 0..200 {
        let f = random_function(&mut rng, 5);
        let lam = random_lambda(&mut rng, 16);
        if !variation::arc_formula_certified(&f.monotone_arcs()) {
            uncertified += 1;
        }
        let exact = lambda_variation(&f, &lam).unwrap();
        let oracle = brute_lambda_variation(&f, &lam, &with_midpoints(&f)).unwrap();
        assert!(
            (exact - oracle).abs() < 1e-9,
            "trial {trial}: {exact} vs {oracle}"
        );
    }
    // both code paths are exercised
    assert!(uncertified > 0);
}

#[test]
fn explicit_systems_never_exceed_the_suprema() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let f = random_function(&mut rng, 8);
        let k = rng.gen_range(1..6);
        let mut cuts: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(0.0..1.0)).collect();
        cuts.sort_by(f64::total_cmp);
        let offset = rng.gen_range(0.0..1.0);
        let intervals: Vec<Interval> = cuts
            .chunks(2)
            .filter(|c| c[1] > c[0])
            .map(|c| Interval::from_endpoints(c[0] + offset, c[1] + offset).unwrap())
            .collect();
        let sys = IntervalSystem::new(intervals).unwrap();
        let p = 2.0;
        assert!(sys.p_sum(&f, p) <= p_variation(&f, p).unwrap() + 1e-12);
        let lam = LambdaSequence::power(0.5).unwrap();
        let weights = lam.terms(sys.len()).unwrap();
        assert!(sys.lambda_sum(&f, &weights) <= lambda_variation(&f, &lam).unwrap() + 1e-12);
        let q = ModulusQuery::new(sys.mesh().max(1e-9), 0).unwrap();
        // grid moduli are lower bounds; the exact supremum over all systems dominates them
        assert!(modulus_p_continuity(&f, p, q).unwrap() <= p_variation(&f, p).unwrap() + 1e-12);
    }
}

#[test]
fn modulus_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..100 {
        let f = random_function(&mut rng, 8);
        let p = [1.5, 2.0, 3.0][trial % 3];
        let pc = p / (p - 1.0);
        let dnorm = f.derivative_lp_norm(p).unwrap();
        let mut prev = 0.0;
        for j in (0..=6).rev() {
            let delta = 0.5f64.powi(j);
            let q = ModulusQuery::new(delta, 2).unwrap();
            let m = modulus_p_continuity(&f, p, q).unwrap();
            assert!(
                m <= dnorm * delta.powf(1.0 / pc) + 1e-9,
                "Hölder bound, trial {trial}"
            );
            assert!(m + 1e-12 >= prev, "monotone in delta, trial {trial}");
            prev = m;
        }
        let one = ModulusQuery::new(1.0, 0).unwrap();
        assert_eq!(
            modulus_p_continuity(&f, p, one).unwrap(),
            p_variation(&f, p).unwrap()
        );
        let q = ModulusQuery::new(0.125, 0).unwrap();
        let mut last = 0.0;
        for m in 0..4 {
            let q = ModulusQuery::new(q.delta, m).unwrap();
            let v = modulus_p_continuity(&f, p, q).unwrap();
            assert!(v + 1e-12 >= last, "refinement monotonicity, trial {trial}");
            last = v;
        }
    }
}

#[test]
fn cut_policy_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let f = random_function(&mut rng, 6);
        let q = ModulusQuery::new(rng.gen_range(0.05..0.9), 1).unwrap();
        let a = modulus_p_continuity(&f, 2.0, q).unwrap();
        let b = modulus_p_continuity(&f, 2.0, q.with_cut(CutPolicy::AllGridPoints)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn windowed_brute_force_for_triangle_modulus() {
    // every system of windows of length <= 1/4 with endpoints on the quarter grid
    let f = PiecewiseLinearPeriodic::new(vec![(0.0, 0.0), (0.5, 1.0)]).unwrap();
    let grid: Vec<f64> = (0..=4).map(|k| k as f64 / 4.0).collect();
    let mut best = 0.0_f64;
    for mask in 0u32..16 {
        let s: f64 = (0..4)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (f.eval(grid[i + 1]) - f.eval(grid[i])).powi(2))
            .sum();
        best = best.max(s);
    }
    let q = ModulusQuery::new(0.25, 1).unwrap();
    assert_eq!(modulus_p_continuity(&f, 2.0, q).unwrap(), best.sqrt());
    assert_eq!(best.sqrt(), 1.0);
}

#[test]
fn lp_modulus_matches_riemann_sum() {
    let f = PiecewiseLinearPeriodic::new(vec![(0.0, 0.0), (0.5, 1.0)]).unwrap();
    let delta = 0.1;
    let n = 1_000_000;
    let riemann = |h: f64| -> f64 {
        (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) / n as f64;
                (f.eval(x + h) - f.eval(x)).abs()
            })
            .sum::<f64>()
            / n as f64
    };
    // the shift norm grows with h here, so the sup sits at h = delta
    let oracle = riemann(delta);
    let v = lp_modulus(&f, 1.0, delta, 32).unwrap();
    assert!((v - oracle).abs() < 1e-6, "{v} vs {oracle}");
}

#[test]
fn lp_modulus_random_functions_against_riemann() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let f = random_function(&mut rng, 6);
        let h = rng.gen_range(0.0..0.5);
        let p = 2.0;
        let n = 200_000;
        let oracle = ((0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) / n as f64;
                (f.eval(x + h) - f.eval(x)).abs().powf(p)
            })
            .sum::<f64>()
            / n as f64)
            .powf(1.0 / p);
        let exact = variation::shift_difference_norm(&f, h, p);
        assert!((exact - oracle).abs() < 1e-4, "{exact} vs {oracle}");
    }
}

#[test]
fn holder_comparison_lambda_vs_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let f = random_function(&mut rng, 8);
        let s = rng.gen_range(0.55..1.0);
        let lam = LambdaSequence::power(s).unwrap();
        // sum n^{-2s} with integral tail bound
        let n = 10_000usize;
        let head: f64 = (1..=n).map(|k| (k as f64).powf(-2.0 * s)).sum();
        let tail = (n as f64).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
        let bound = p_variation(&f, 2.0).unwrap() * (head + tail).sqrt();
        let extrema = f.monotone_arcs().len();
        if extrema <= variation::LAMBDA_ENUMERATION_LIMIT {
            assert!(lambda_variation(&f, &lam).unwrap() <= bound + 1e-9);
        }
    }
}

fn arb_function() -> impl Strategy<Value = PiecewiseLinearPeriodic> {
    prop::collection::btree_map(0u32..1 << 20, -10.0f64..10.0, 1..12).prop_map(|m| {
        PiecewiseLinearPeriodic::new(
            m.into_iter()
                .map(|(k, y)| (k as f64 / (1u32 << 20) as f64, y))
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn periodic_evaluation(f in arb_function(), k in 0u64..1 << 30) {
        // dyadic x so that x + 1 is exact
        let x = k as f64 / (1u64 << 30) as f64;
        prop_assert_eq!(f.eval(x), f.eval(x + 1.0));
        prop_assert_eq!(f.increment(Interval::new(x.min(0.999), 1.0).unwrap()), 0.0);
    }

    #[test]
    fn arcs_alternate_and_close(f in arb_function()) {
        let arcs = f.monotone_arcs();
        let inc: Vec<f64> = arcs.increments().collect();
        for i in 0..inc.len() {
            let j = (i + 1) % inc.len();
            prop_assert!(inc[i] != 0.0);
            prop_assert!(inc[i].signum() != inc[j].signum());
        }
        let scale = f.sup_norm().max(1.0);
        prop_assert!(inc.iter().sum::<f64>().abs() <= 1e-12 * scale);
        for a in &arcs.arcs {
            prop_assert!(f.positions().contains(&a.start));
            prop_assert!(f.positions().contains(&(a.end - a.end.floor())));
        }
    }

    #[test]
    fn superpose_commutes_and_associates(
        f in arb_function(), g in arb_function(), h in arb_function()
    ) {
        let fg_h = superpose(&[superpose(&[f.clone(), g.clone()]).unwrap(), h.clone()]).unwrap();
        let f_gh = superpose(&[f.clone(), superpose(&[g.clone(), h.clone()]).unwrap()]).unwrap();
        let gf = superpose(&[g.clone(), f.clone()]).unwrap();
        let fg = superpose(&[f.clone(), g.clone()]).unwrap();
        for i in 0..1000 {
            let x = (i as f64 + 0.37) / 1000.0;
            prop_assert!((fg_h.eval(x) - f_gh.eval(x)).abs() < 1e-12);
            prop_assert!((fg.eval(x) - gf.eval(x)).abs() < 1e-12);
            prop_assert!((fg.eval(x) - f.eval(x) - g.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_and_p_variation_are_homogeneous(f in arb_function(), c in 0.1f64..10.0) {
        let lam = LambdaSequence::power(1.0).unwrap();
        let cf = f.scaled(c);
        let v = p_variation(&f, 2.0).unwrap();
        prop_assert!((p_variation(&cf, 2.0).unwrap() - c * v).abs() <= 1e-9 * (1.0 + c * v));
        if f.monotone_arcs().len() <= variation::LAMBDA_ENUMERATION_LIMIT {
            let l = lambda_variation(&f, &lam).unwrap();
            prop_assert!((lambda_variation(&cf, &lam).unwrap() - c * l).abs() <= 1e-9 * (1.0 + c * l));
        }
    }
}
