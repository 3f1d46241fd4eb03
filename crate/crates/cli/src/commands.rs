use lbv_core::constructions::WitnessExport;
use lbv_core::sequence::criterion_verdict;
use lbv_core::variation::DEFAULT_H_SAMPLES;
use lbv_core::{
    constructions, criterion_partial_sums, extremal_function, hardy_two_sides, lambda_variation,
    lip_norm, lp_modulus, membership_report, modulus_p_continuity, p_cont_ratio_norm, p_variation,
    perlman_witness, wang_block_partial_sums, wang_gap_family, wang_gap_window, Exponents,
    LambdaSequence, ModulusQuery, SeriesVerdict, WitnessSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::table::{Cell, Table};
use crate::{ExperimentConfig, RunError, RunOutcome};

const VARIATION_DEPTH: u32 = 8;
const MEMBERSHIP_TERMS: usize = 1 << 16;
const PERLMAN_TERMS: usize = 1_000_000;
const PERLMAN_MARGIN: f64 = 0.05;
const HARDY_INSTANCES: usize = 500;
const HARDY_LEN: usize = 256;
const HARDY_POINTS: usize = 9;

fn ok(table: Table, summary: serde_json::Value) -> Result<RunOutcome, RunError> {
    Ok(RunOutcome {
        table,
        summary,
        passed: true,
    })
}

pub fn variation(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let f = cfg.function()?;
    let lam = cfg.sequence()?;
    let (p, alpha, m) = (cfg.p, cfg.alpha, cfg.refine);
    let depth = cfg.delta_depth.unwrap_or(VARIATION_DEPTH);
    let err = RunError::core("function");
    let mut t = Table::new(
        "variation",
        &["functional", "p", "alpha", "delta", "value", "refinement"],
    );

    let vp = p_variation(&f, p).map_err(&err)?;
    t.push(vec![
        "p_variation".into(),
        p.into(),
        Cell::Empty,
        Cell::Empty,
        vp.into(),
        Cell::Empty,
    ]);
    let dn = f.derivative_lp_norm(p).map_err(&err)?;
    t.push(vec![
        "derivative_lp_norm".into(),
        p.into(),
        Cell::Empty,
        Cell::Empty,
        dn.into(),
        Cell::Empty,
    ]);
    let vl = match &lam {
        Some(lam) => {
            let v = lambda_variation(&f, lam).map_err(&err)?;
            t.push(vec![
                "lambda_variation".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                v.into(),
                Cell::Empty,
            ]);
            Some(v)
        }
        None => None,
    };
    for j in 0..=depth {
        let delta = 0.5f64.powi(j as i32);
        let q = ModulusQuery::new(delta, m).map_err(RunError::core("refine"))?;
        let w = modulus_p_continuity(&f, p, q).map_err(&err)?;
        t.push(vec![
            "modulus_p_continuity".into(),
            p.into(),
            Cell::Empty,
            delta.into(),
            w.into(),
            u64::from(m).into(),
        ]);
        let w = lp_modulus(&f, p, delta, DEFAULT_H_SAMPLES).map_err(&err)?;
        t.push(vec![
            "lp_modulus".into(),
            p.into(),
            Cell::Empty,
            delta.into(),
            w.into(),
            Cell::Empty,
        ]);
    }
    let mut lip = None;
    let mut ratio = None;
    if p > 1.0 {
        let r = lip_norm(&f, p, alpha, depth.max(1)).map_err(&err)?;
        t.push(vec![
            "lip_norm".into(),
            p.into(),
            alpha.into(),
            Cell::Empty,
            r.value.into(),
            Cell::Empty,
        ]);
        lip = Some(r.value);
        if alpha > 1.0 / p {
            let r = p_cont_ratio_norm(&f, p, alpha, depth, m).map_err(&err)?;
            t.push(vec![
                "p_cont_ratio_norm".into(),
                p.into(),
                alpha.into(),
                Cell::Empty,
                r.value.into(),
                u64::from(m).into(),
            ]);
            ratio = Some(r.value);
        }
    }
    ok(
        t,
        json!({
            "breakpoints": f.len(),
            "monotone_arcs": f.monotone_arcs().len(),
            "p_variation": vp,
            "derivative_lp_norm": dn,
            "lambda_variation": vl,
            "lip_norm": lip,
            "p_cont_ratio_norm": ratio,
        }),
    )
}

pub fn criterion(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let lam = cfg.required_sequence()?;
    let err = RunError::core("sequence");
    let ex = Exponents::new(cfg.p, cfg.alpha).map_err(&err)?;
    let rep = criterion_partial_sums(&lam, cfg.p, cfg.alpha, cfg.blocks).map_err(&err)?;
    let wang = wang_block_partial_sums(&lam, cfg.alpha, cfg.blocks).map_err(&err)?;
    let n = lam
        .available()
        .unwrap_or(MEMBERSHIP_TERMS)
        .min(MEMBERSHIP_TERMS);
    let member = membership_report(&lam, 1.0 / (1.0 - cfg.alpha), n).map_err(&err)?;

    let mut t = Table::new(
        "criterion",
        &[
            "block",
            "inner_sum",
            "term",
            "partial_sum",
            "wang_partial_sum",
        ],
    );
    for ((b, s), w) in rep
        .blocks
        .iter()
        .zip(&rep.partial_sums)
        .zip(&wang.partial_sums)
    {
        t.push(vec![
            u64::from(b.n).into(),
            b.inner.into(),
            b.term.into(),
            (*s).into(),
            (*w).into(),
        ]);
    }
    ok(
        t,
        json!({
            "exponents": ex,
            "verdict": rep.verdict,
            "criterion_partial_sum": rep.total(),
            "wang_verdict": wang.verdict,
            "wang_partial_sum": wang.partial_sums.last(),
            "class_s": member.class_s,
            "class_sq": member.class_sq,
            "membership_q": member.q,
            "membership_terms": n,
        }),
    )
}

struct LevelRow {
    level: usize,
    criterion_root: f64,
    lambda_variation: f64,
    analytic: f64,
    ratio: f64,
}

fn witness_rows(
    cfg: &ExperimentConfig,
    lam: &LambdaSequence,
) -> Result<(Vec<LevelRow>, Vec<serde_json::Value>), RunError> {
    if cfg.levels.last > constructions::MAX_LEVELS && !cfg.levels.is_empty() {
        return Err(RunError::invalid(
            "levels",
            format!("at most {} levels", constructions::MAX_LEVELS),
        ));
    }
    let mut rows = Vec::new();
    let mut exports = Vec::new();
    for level in cfg.levels.iter() {
        let mut spec = WitnessSpec::new(lam.clone(), cfg.p, cfg.alpha, level);
        spec.grid_refinement = cfg.refine;
        if let Some(d) = cfg.delta_depth {
            spec.ratio_depth = Some(d);
        }
        let (_, rep) = extremal_function(&spec).map_err(RunError::core("levels"))?;
        let ratio = rep.p_cont_ratio.as_ref().map_or(f64::NAN, |r| r.value);
        rows.push(LevelRow {
            level,
            criterion_root: rep.criterion_root,
            lambda_variation: rep.measured_lambda_variation,
            analytic: rep.analytic_lower_bound,
            ratio,
        });
        let export: WitnessExport<'_> = rep.export();
        exports.push(serde_json::to_value(export).expect("report serializes"));
    }
    Ok((rows, exports))
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

pub fn sharpness(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let lam = cfg.required_sequence()?;
    Exponents::new(cfg.p, cfg.alpha).map_err(RunError::core("p"))?;
    let (rows, exports) = witness_rows(cfg, &lam)?;
    let mut t = Table::new(
        "sharpness",
        &[
            "level",
            "criterion_root",
            "lambda_variation",
            "analytic_lower_bound",
            "p_cont_ratio",
            "variation_over_criterion",
            "ratio_over_first",
        ],
    );
    let first_ratio = rows.first().map_or(f64::NAN, |r| r.ratio);
    let quotients: Vec<f64> = rows
        .iter()
        .map(|r| r.lambda_variation / r.criterion_root)
        .collect();
    for (r, q) in rows.iter().zip(&quotients) {
        t.push(vec![
            (r.level as u64).into(),
            r.criterion_root.into(),
            r.lambda_variation.into(),
            r.analytic.into(),
            r.ratio.into(),
            (*q).into(),
            (r.ratio / first_ratio).into(),
        ]);
    }
    let vls: Vec<f64> = rows.iter().map(|r| r.lambda_variation).collect();
    let band = if quotients.is_empty() {
        None
    } else {
        let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().copied().fold(0.0, f64::max);
        Some(lo / hi)
    };
    ok(
        t,
        json!({
            "rows": rows.len(),
            "quotient_band": band,
            "ratio_growth": rows.last().map(|r| r.ratio / first_ratio),
            "lambda_variation_strictly_increasing": strictly_increasing(&vls),
            "criterion_verdict": criterion_verdict(&lam, &Exponents::new(cfg.p, cfg.alpha).unwrap()),
            "witnesses": exports,
        }),
    )
}

pub fn wang_demo(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    if cfg.blocks < 10 {
        return Err(RunError::invalid(
            "blocks",
            "wang-demo needs at least 10 blocks",
        ));
    }
    let lam = wang_gap_family(cfg.p, cfg.alpha, cfg.s).map_err(RunError::core("s"))?;
    let ex = Exponents::new(cfg.p, cfg.alpha).map_err(RunError::core("p"))?;
    let err = RunError::core("blocks");
    let wang = wang_block_partial_sums(&lam, cfg.alpha, cfg.blocks).map_err(&err)?;
    let crit = criterion_partial_sums(&lam, cfg.p, cfg.alpha, cfg.blocks).map_err(&err)?;
    let (rows, _) = witness_rows(cfg, &lam)?;

    let mut t = Table::new(
        "wang-demo",
        &[
            "section",
            "index",
            "wang_partial_sum",
            "criterion_partial_sum",
            "lambda_variation",
            "p_cont_ratio",
        ],
    );
    for (n, (w, c)) in wang.partial_sums.iter().zip(&crit.partial_sums).enumerate() {
        t.push(vec![
            "block".into(),
            (n as u64).into(),
            (*w).into(),
            (*c).into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    for r in &rows {
        t.push(vec![
            "level".into(),
            (r.level as u64).into(),
            Cell::Empty,
            Cell::Empty,
            r.lambda_variation.into(),
            r.ratio.into(),
        ]);
    }

    let b = cfg.blocks as usize;
    let wang_tail = wang.partial_sums[b] - wang.partial_sums[b - 10];
    let crit_increase = crit.partial_sums[b] - crit.partial_sums[b - 10];
    let vls: Vec<f64> = rows.iter().map(|r| r.lambda_variation).collect();
    let ratio_growth = match (rows.first(), rows.last()) {
        (Some(a), Some(z)) => z.ratio / a.ratio,
        _ => f64::NAN,
    };
    let crit_verdict = criterion_verdict(&lam, &ex);
    let checks = json!({
        "wang_converges": wang.verdict == SeriesVerdict::Converges,
        "criterion_diverges": crit_verdict == SeriesVerdict::Diverges,
        "criterion_increase_at_least_half": crit_increase >= 0.5,
        "lambda_variation_strictly_increasing": strictly_increasing(&vls),
        "ratio_bounded": rows.is_empty() || ratio_growth <= 2.0,
    });
    let passed = checks.as_object().unwrap().values().all(|v| v == true);
    Ok(RunOutcome {
        table: t,
        summary: json!({
            "wang": wang.verdict,
            "criterion": crit_verdict,
            "window": wang_gap_window(cfg.p, cfg.alpha).ok(),
            "wang_tail_last_10_blocks": wang_tail,
            "criterion_increase_last_10_blocks": crit_increase,
            "ratio_growth": ratio_growth,
            "checks": checks,
        }),
        passed,
    })
}

pub fn perlman_demo(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let p = cfg.p;
    if !(p > 1.0 && p.is_finite()) {
        return Err(RunError::invalid("p", "p > 1"));
    }
    let pc = p / (p - 1.0);
    let d: Vec<f64> = (1..=PERLMAN_TERMS)
        .map(|n| (n as f64).powf(-1.0 / p))
        .collect();
    let lam = perlman_witness(&d, p).map_err(RunError::core("p"))?;
    let terms = lam.terms(PERLMAN_TERMS).map_err(RunError::core("p"))?;

    let mut t = Table::new(
        "perlman-demo",
        &[
            "n",
            "sum_d_over_lambda",
            "sum_lambda_neg_pconj",
            "sum_d_pow_p",
        ],
    );
    let (mut div, mut conv, mut dp) = (0.0, 0.0, 0.0);
    let mut marks = Vec::new();
    let mut next = 1000;
    for (i, (dn, l)) in d.iter().zip(&terms).enumerate() {
        div += dn / l;
        conv += l.powf(-pc);
        dp += dn.powf(p);
        if i + 1 == next {
            t.push(vec![
                (next as u64).into(),
                div.into(),
                conv.into(),
                dp.into(),
            ]);
            marks.push((div, conv));
            next *= 10;
        }
    }
    let div_inc: Vec<f64> = marks.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let conv_inc: Vec<f64> = marks.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let passed =
        div_inc.iter().all(|&x| x >= PERLMAN_MARGIN) && conv_inc.windows(2).all(|w| w[1] < w[0]);
    Ok(RunOutcome {
        table: t,
        summary: json!({
            "terms": PERLMAN_TERMS,
            "divergent_increments_per_decade": div_inc,
            "convergent_increments_per_decade": conv_inc,
            "margin": PERLMAN_MARGIN,
        }),
        passed,
    })
}

pub fn hardy_demo(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Table::new(
        "hardy-demo",
        &["beta", "r", "instances", "max_ratio", "mean_ratio"],
    );
    let mut all_finite = true;
    let mut maxima = Vec::new();
    for beta in [0.25, 0.5, 1.0] {
        for r in [1.5, 2.0, 3.0] {
            let mut ratios = Vec::with_capacity(HARDY_INSTANCES);
            for _ in 0..HARDY_INSTANCES {
                let a: Vec<f64> = (0..HARDY_LEN)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            0.0
                        } else {
                            rng.gen_range(0.0..1.0f64).powi(4)
                        }
                    })
                    .collect();
                let mut nu = vec![1.0f64];
                while nu.len() < HARDY_POINTS {
                    let last = nu[nu.len() - 1];
                    nu.push(last * rng.gen_range(1.1..4.0));
                }
                let (lhs, rhs) =
                    hardy_two_sides(beta, r, &a, &nu).map_err(RunError::core("seed"))?;
                if lhs > 0.0 {
                    ratios.push(lhs / rhs);
                }
            }
            let max = ratios.iter().copied().fold(0.0, f64::max);
            let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
            all_finite &= max.is_finite() && max > 0.0;
            t.push(vec![
                beta.into(),
                r.into(),
                (ratios.len() as u64).into(),
                max.into(),
                mean.into(),
            ]);
            maxima.push(json!({ "beta": beta, "r": r, "max_ratio": max }));
        }
    }
    Ok(RunOutcome {
        table: t,
        summary: json!({ "empirical_constants": maxima, "instances_per_pair": HARDY_INSTANCES }),
        passed: all_finite,
    })
}
