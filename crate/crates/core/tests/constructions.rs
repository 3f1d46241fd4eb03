use lbv_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_comb(rng: &mut impl Rng) -> TriangleCombSpec {
    let n = rng.gen_range(1..=64);
    let start = rng.gen_range(0.0..1.0);
    let length = rng.gen_range(0.05..=1.0);
    let heights = (0..n)
        .map(|_| {
            if rng.gen_bool(0.1) {
                0.0
            } else {
                rng.gen_range(0.0..3.0)
            }
        })
        .collect();
    TriangleCombSpec::new(Interval::new(start, length).unwrap(), heights).unwrap()
}

#[test]
fn comb_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..200 {
        let spec = random_comb(&mut rng);
        let f = triangle_comb(&spec);
        let p = [1.0, 1.5, 2.0, 3.0][trial % 4];
        let vp = p_variation(&f, p).unwrap();
        let cf = spec.closed_form_p_variation(p);
        assert!(
            (vp - cf).abs() <= 1e-12 * cf.max(1e-300),
            "v_p trial {trial}"
        );
        let dn = f.derivative_lp_norm(p).unwrap();
        let cd = spec.closed_form_derivative_norm(p);
        // relative error in the slope-length products is bounded by the rounding of positions
        assert!(
            (dn - cd).abs() <= 1e-11 * cd.max(1e-300),
            "||F'|| trial {trial}: {dn} vs {cd}"
        );
    }
}

#[test]
fn comb_arc_multiset() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..50 {
        let spec = random_comb(&mut rng);
        let f = triangle_comb(&spec);
        let nonzero: Vec<f64> = spec.heights.iter().copied().filter(|&h| h > 0.0).collect();
        let arcs = f.monotone_arcs();
        assert_eq!(arcs.len(), 2 * nonzero.len());
        let mut expected: Vec<f64> = nonzero.iter().flat_map(|&h| [h, h]).collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        let got = arcs.sorted_magnitudes();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(lbv_core::variation::arc_formula_certified(&arcs));
    }
}

#[test]
fn disjoint_combs_superpose_to_union_of_arcs() {
    let a = TriangleCombSpec::new(Interval::new(0.0, 0.3).unwrap(), vec![1.0, 2.0]).unwrap();
    let b = TriangleCombSpec::new(Interval::new(0.5, 0.4).unwrap(), vec![3.0]).unwrap();
    let s = superpose(&[triangle_comb(&a), triangle_comb(&b)]).unwrap();
    assert_eq!(
        s.monotone_arcs().sorted_magnitudes(),
        vec![3.0, 3.0, 2.0, 2.0, 1.0, 1.0]
    );
}

#[test]
fn duality_weights_reach_half_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..200 {
        let (p, alpha) = (2.0, rng.gen_range(0.55..0.95));
        let ex = Exponents::new(p, alpha).unwrap();
        let l: Vec<f64> = (0..rng.gen_range(1..20))
            .map(|_| rng.gen_range(0.01..3.0))
            .collect();
        let d = duality_weights(&l, p, alpha).unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let lhs: f64 = d.iter().zip(&l).map(|(d, l)| d.powf(ex.gap()) * l).sum();
        let norm = sequence::lp_norm(&l, ex.r_conj);
        assert!(lhs >= 0.5 * norm);
        assert!((lhs - norm).abs() < 1e-12 * norm);
    }
}

#[test]
fn witness_identities() {
    let (p, alpha) = (2.0, 0.75);
    let lam = LambdaSequence::power(0.25).unwrap();
    let mut spec = WitnessSpec::new(lam.clone(), p, alpha, 6);
    spec.ratio_depth = None;
    let (g, rep) = extremal_function(&spec).unwrap();
    let ex = Exponents::new(p, alpha).unwrap();

    let widths: f64 = rep.per_level.iter().map(|l| l.width).sum();
    assert!((widths - 1.0).abs() < 1e-12);
    assert!((rep.beta_sum - rep.beta().iter().sum::<f64>()).abs() < 1e-15);
    for w in rep.beta().windows(2) {
        let q = w[1] / w[0];
        assert!(q > 2.0 / 3.0 - 1e-15 && q <= 1.5 + 1e-15);
    }
    assert!(rep.beta_sum <= 9.0);

    for lvl in &rep.per_level {
        assert!(lvl.beta >= lvl.delta);
        let expected = (lvl.beta / 2f64.powi(lvl.n as i32)).powf(ex.gap()) * lvl.s;
        assert!((lvl.weighted_height_sum - expected).abs() < 1e-12 * expected);
    }
    // per-level p-th power sums of the heights, read back from the function
    let mut start = 0.0;
    for lvl in &rep.per_level {
        let count = 1usize << lvl.n;
        let h = lvl.width / count as f64;
        let sum_hp: f64 = (0..count)
            .map(|j| g.eval(start + (j as f64 + 0.5) * h).powf(p))
            .sum();
        let target = (lvl.beta / count as f64).powf(p * ex.gap());
        assert!((sum_hp - target).abs() < 1e-9 * target, "level {}", lvl.n);
        start += lvl.width;
    }

    assert!(rep.measured_lambda_variation + 1e-9 >= rep.indexed_pairing_sum);
    assert!(rep.measured_lambda_variation + 1e-9 >= rep.analytic_lower_bound);
    assert!((lambda_variation(&g, &lam).unwrap() - rep.measured_lambda_variation).abs() < 1e-12);
}

#[test]
fn witness_with_explicit_deltas() {
    let lam = LambdaSequence::power(1.0).unwrap();
    let mut spec = WitnessSpec::new(lam, 2.0, 0.75, 4);
    spec.delta = DeltaSource::Explicit(vec![0.4, 0.3, 0.2, 0.1]);
    spec.ratio_depth = Some(6);
    let (_, rep) = extremal_function(&spec).unwrap();
    let d: Vec<f64> = rep.per_level.iter().map(|l| l.delta).collect();
    assert_eq!(d, vec![0.4, 0.3, 0.2, 0.1]);
    assert!(rep.p_cont_ratio.unwrap().value > 0.0);
}

#[test]
fn witness_export_shape() {
    let lam = LambdaSequence::power(0.5).unwrap();
    let spec = WitnessSpec::new(lam, 2.0, 0.75, 3);
    let (g, rep) = extremal_function(&spec).unwrap();
    let v: serde_json::Value = serde_json::to_value(rep.export()).unwrap();
    for key in [
        "levels",
        "beta",
        "S",
        "measured_lambda_variation",
        "analytic_lower_bound",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["beta"].as_array().unwrap().len(), 3);
    let f: PiecewiseLinearPeriodic =
        serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(f, g);
}

#[test]
fn embedding_check_is_homogeneous_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let (p, alpha) = (2.0, 0.75);
    let lam = LambdaSequence::power(0.6).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let spec = random_comb(&mut rng);
        let f = triangle_comb(&spec);
        if f.monotone_arcs().is_empty() {
            continue;
        }
        let chk = theorem31_check(&f, &lam, p, alpha, 24, 10, 1).unwrap();
        assert!(chk.ratio.is_finite() && chk.ratio > 0.0);
        worst = worst.max(chk.ratio);
    }
    assert!(worst < 50.0, "empirical constant {worst}");

    let spec = random_comb(&mut rng);
    let f = triangle_comb(&spec);
    let a = theorem31_check(&f, &lam, p, alpha, 16, 8, 1).unwrap();
    let b = theorem31_check(&f.scaled(2.0), &lam, p, alpha, 16, 8, 1).unwrap();
    assert!((b.lhs - 2.0 * a.lhs).abs() < 1e-9 * b.lhs);
    assert!((b.rhs_core - 2.0 * a.rhs_core).abs() < 1e-9 * b.rhs_core);
    assert!((a.ratio - b.ratio).abs() < 1e-9);
}

#[test]
fn perlman_witness_signatures() {
    let p = 2.0;
    let n = 1_000_000;
    let d: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-1.0 / p)).collect();
    let lam = perlman_witness(&d, p).unwrap();
    let terms = lam.terms(n).unwrap();
    let mut div = 0.0;
    let mut marks = Vec::new();
    for (i, (dn, l)) in d.iter().zip(&terms).enumerate() {
        div += dn / l;
        if [999, 9_999, 99_999, 999_999].contains(&i) {
            marks.push(div);
        }
    }
    // log log growth: each decade adds at least ln(ln(10N)/ln N) > 0.07
    for w in marks.windows(2) {
        assert!(w[1] - w[0] > 0.07, "{marks:?}");
    }
    assert!(terms.windows(2).all(|w| w[0] <= w[1]));

    // geometric d: sum d^p converges and so does sum d/lambda
    let geo: Vec<f64> = (0..200).map(|k| 0.8f64.powi(k)).collect();
    let lam = perlman_witness(&geo, p).unwrap();
    let t = lam.terms(200).unwrap();
    let partial: Vec<f64> = geo
        .iter()
        .zip(&t)
        .scan(0.0, |s, (d, l)| {
            *s += d / l;
            Some(*s)
        })
        .collect();
    assert!(partial[199] - partial[99] < 1e-12);
}
