//! Variation functionals of piecewise-linear periodic functions.
//!
//! Exact routines rest on two facts about a continuous piecewise-linear `f`:
//!
//! * optimal interval endpoints can be moved to local extrema, since the
//!   objective is convex in `f(t)` along a monotone run;
//! * the global maximum can be taken as a point not interior to any interval,
//!   because splitting an interval there yields two increments, each at least
//!   the original one. That turns every circular problem into one linear pass.
//!
//! Brute-force oracles that enumerate every cut point live alongside and do
//! not use either fact.

use crate::error::{check_param, Error, Result};
use crate::periodic::{check_p, MonotoneArcDecomposition, PiecewiseLinearPeriodic};
use crate::sequence::LambdaSequence;

/// Largest extremum count for which `lambda_variation` falls back to exact
/// enumeration when the arc formula is not certified.
pub const LAMBDA_ENUMERATION_LIMIT: usize = 14;

/// Candidate limit for [`brute_lambda_variation`].
pub const BRUTE_CANDIDATE_LIMIT: usize = 14;

/// Default number of uniform shift samples used by [`lip_norm`].
pub const DEFAULT_H_SAMPLES: usize = 64;

/// `v_p(f)`: the supremum of `(sum |f(I_n)|^p)^(1/p)` over interval systems.
pub fn p_variation(f: &PiecewiseLinearPeriodic, p: f64) -> Result<f64> {
    check_p(p)?;
    let arcs = f.monotone_arcs();
    if arcs.is_empty() {
        return Ok(0.0);
    }
    let closed = rotate_to_max(&arcs.extremum_values());
    Ok(best_power_sum(&closed, None, p).powf(1.0 / p))
}

/// `v_Lambda(f)`: the supremum of `sum |f(I_n)| / lambda_n`.
///
/// When every extremum-to-extremum increment is bounded by the largest arc it
/// spans, the arc magnitudes dominate any system and the value is
/// `sum d_(n) / lambda_n` with the magnitudes sorted nonincreasingly. Otherwise
/// merged intervals can beat the arcs and the value is found by enumeration,
/// which is limited to [`LAMBDA_ENUMERATION_LIMIT`] extrema.
pub fn lambda_variation(f: &PiecewiseLinearPeriodic, lam: &LambdaSequence) -> Result<f64> {
    let arcs = f.monotone_arcs();
    if arcs.is_empty() {
        return Ok(0.0);
    }
    if arc_formula_certified(&arcs) {
        let mags = arcs.sorted_magnitudes();
        let weights = lam.terms(mags.len())?;
        return Ok(mags.iter().zip(&weights).map(|(d, l)| d / l).sum());
    }
    let m = arcs.len();
    if m > LAMBDA_ENUMERATION_LIMIT {
        return Err(Error::Intractable {
            extrema: m,
            limit: LAMBDA_ENUMERATION_LIMIT,
        });
    }
    let closed = rotate_to_max(&arcs.extremum_values());
    // a system on m+1 points has at most m intervals
    let weights = lam.terms(m)?;
    Ok(enumerate_lambda_systems(&closed, &weights))
}

/// True when no interval between extrema has an increment larger than the
/// largest arc it covers. Then each interval of any system can be charged to a
/// distinct arc of at least its size.
pub fn arc_formula_certified(arcs: &MonotoneArcDecomposition) -> bool {
    let m = arcs.len();
    let values = arcs.extremum_values();
    let mags: Vec<f64> = arcs.increments().map(f64::abs).collect();
    let scale = mags.iter().fold(0.0_f64, |a, &b| a.max(b));
    let tol = 1e-12 * scale;
    for i in 0..m {
        let mut widest = 0.0_f64;
        for step in 0..m {
            let a = (i + step) % m;
            widest = widest.max(mags[a]);
            let j = (a + 1) % m;
            if (values[j] - values[i]).abs() > widest + tol {
                return false;
            }
        }
    }
    true
}

/// Brute-force `v_Lambda` over systems with endpoints in `candidates`.
///
/// Every candidate is tried as the cut of the circle and every system on the
/// resulting line is enumerated; each system is scored with its increments
/// matched to the weights in decreasing order.
pub fn brute_lambda_variation(
    f: &PiecewiseLinearPeriodic,
    lam: &LambdaSequence,
    candidates: &[f64],
) -> Result<f64> {
    let pts = normalize_candidates(candidates);
    if pts.len() > BRUTE_CANDIDATE_LIMIT {
        return Err(Error::TooManyCandidates {
            count: pts.len(),
            limit: BRUTE_CANDIDATE_LIMIT,
        });
    }
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let weights = lam.terms(pts.len())?;
    let mut best = 0.0_f64;
    for cut in 0..pts.len() {
        let line = cut_line(f, &pts, cut);
        let vals: Vec<f64> = line.iter().map(|&(_, y)| y).collect();
        best = best.max(enumerate_lambda_systems(&vals, &weights));
    }
    Ok(best)
}

/// Brute-force `v_p(f)^p` over systems with endpoints in `candidates`,
/// by dynamic programming on every circular cut.
pub fn brute_p_variation(f: &PiecewiseLinearPeriodic, p: f64, candidates: &[f64]) -> Result<f64> {
    check_p(p)?;
    let pts = normalize_candidates(candidates);
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let mut best = 0.0_f64;
    for cut in 0..pts.len() {
        let line = cut_line(f, &pts, cut);
        let vals: Vec<f64> = line.iter().map(|&(_, y)| y).collect();
        best = best.max(best_power_sum(&vals, None, p));
    }
    Ok(best)
}

/// Which circle cuts the grid dynamic program tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutPolicy {
    /// Cut once, at the grid point where `f` is largest.
    #[default]
    GlobalMax,
    /// Cut at every grid point; quadratic extra cost, used as a cross-check.
    AllGridPoints,
}

/// Parameters of a modulus of p-continuity evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusQuery {
    pub delta: f64,
    /// Each breakpoint segment is split into `2^grid_refinement` equal pieces.
    pub grid_refinement: u32,
    pub cut: CutPolicy,
}

impl ModulusQuery {
    pub fn new(delta: f64, grid_refinement: u32) -> Result<Self> {
        check_param(
            "delta",
            delta,
            delta > 0.0 && delta <= 1.0,
            "0 < delta <= 1",
        )?;
        check_param(
            "grid_refinement",
            grid_refinement as f64,
            grid_refinement <= 20,
            "grid_refinement <= 20",
        )?;
        Ok(Self {
            delta,
            grid_refinement,
            cut: CutPolicy::GlobalMax,
        })
    }

    pub fn with_cut(mut self, cut: CutPolicy) -> Self {
        self.cut = cut;
        self
    }
}

/// Modulus of p-continuity `omega_{1-1/p}(f; delta)`, as a lower bound from
/// systems with endpoints on the refined grid.
///
/// At `delta = 1` the length constraint is void and the exact `v_p(f)` is
/// returned. Grids are nested in the refinement level, so the value is
/// nondecreasing in it.
pub fn modulus_p_continuity(f: &PiecewiseLinearPeriodic, p: f64, q: ModulusQuery) -> Result<f64> {
    check_param("p", p, p > 1.0, "p > 1")?;
    check_param(
        "delta",
        q.delta,
        q.delta > 0.0 && q.delta <= 1.0,
        "0 < delta <= 1",
    )?;
    if q.delta >= 1.0 {
        return p_variation(f, p);
    }
    let grid = refined_grid(f, q.grid_refinement);
    let best = match q.cut {
        CutPolicy::GlobalMax => {
            let imax = argmax(grid.iter().map(|g| g.1));
            let line = unwrap_from(&grid, imax);
            grid_power_sum(&line, q.delta, p)
        }
        CutPolicy::AllGridPoints => (0..grid.len())
            .map(|c| grid_power_sum(&unwrap_from(&grid, c), q.delta, p))
            .fold(0.0, f64::max),
    };
    Ok(best.powf(1.0 / p))
}

/// `L^p`-modulus of continuity `omega(f; delta)_p`, maximized over a finite set
/// of shifts: all breakpoint differences in `[0, delta]`, `h_samples` uniform
/// shifts, and `delta` itself. Each `L^p` norm is integrated in closed form.
pub fn lp_modulus(
    f: &PiecewiseLinearPeriodic,
    p: f64,
    delta: f64,
    h_samples: usize,
) -> Result<f64> {
    check_p(p)?;
    check_param(
        "delta",
        delta,
        (0.0..=1.0).contains(&delta),
        "0 <= delta <= 1",
    )?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    let xs = f.positions();
    let mut shifts: Vec<f64> = Vec::new();
    for &a in xs {
        for &b in xs {
            let h = (a - b).rem_euclid(1.0);
            if h > 0.0 && h <= delta {
                shifts.push(h);
            }
        }
    }
    shifts.extend((1..=h_samples).map(|k| delta * k as f64 / h_samples as f64));
    shifts.push(delta);
    shifts.sort_by(f64::total_cmp);
    shifts.dedup();
    Ok(shifts
        .into_iter()
        .map(|h| shift_difference_norm(f, h, p))
        .fold(0.0, f64::max))
}

/// `(integral over a period of |f(x + h) - f(x)|^p dx)^(1/p)`, exact for
/// piecewise-linear `f`.
pub fn shift_difference_norm(f: &PiecewiseLinearPeriodic, h: f64, p: f64) -> f64 {
    let mut knots: Vec<f64> = f
        .positions()
        .iter()
        .flat_map(|&x| [x, (x - h).rem_euclid(1.0)])
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let diff = |x: f64| f.eval(x + h) - f.eval(x);
    let vals: Vec<f64> = knots.iter().map(|&x| diff(x)).collect();
    let n = knots.len();
    let mut total = 0.0;
    for i in 0..n {
        let (u, a) = (knots[i], vals[i]);
        let (v, b) = if i + 1 < n {
            (knots[i + 1], vals[i + 1])
        } else {
            (knots[0] + 1.0, vals[0])
        };
        total += (v - u) * mean_abs_power(a, b, p);
    }
    total.powf(1.0 / p)
}

/// Mean of `|a + (b - a) t|^p` over `t` in `[0, 1]`.
fn mean_abs_power(a: f64, b: f64, p: f64) -> f64 {
    let (ma, mb) = (a.abs(), b.abs());
    if a * b < 0.0 {
        return (ma.powf(p + 1.0) + mb.powf(p + 1.0)) / ((p + 1.0) * (ma + mb));
    }
    let (lo, hi) = if ma <= mb { (ma, mb) } else { (mb, ma) };
    if hi == 0.0 {
        return 0.0;
    }
    let rel = (hi - lo) / hi;
    if rel < 1e-6 {
        // series in the relative gap; the closed form cancels badly here
        let mid = 0.5 * (lo + hi);
        let e = 0.5 * (hi - lo) / mid;
        return mid.powf(p) * (1.0 + p * (p - 1.0) * e * e / 6.0);
    }
    (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / ((p + 1.0) * (hi - lo))
}

/// One row of a ratio-norm table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RatioRow {
    pub delta: f64,
    pub modulus: f64,
    pub ratio: f64,
}

/// `sup` over dyadic `delta = 2^-j`, `0 <= j <= depth`, of `modulus / delta^exponent`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RatioNormReport {
    pub value: f64,
    pub per_delta: Vec<RatioRow>,
    pub depth: u32,
}

impl RatioNormReport {
    fn build(
        depth: u32,
        exponent: f64,
        mut modulus: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        let mut per_delta = Vec::with_capacity(depth as usize + 1);
        for j in 0..=depth {
            let delta = 0.5_f64.powi(j as i32);
            let m = modulus(delta)?;
            per_delta.push(RatioRow {
                delta,
                modulus: m,
                ratio: m / delta.powf(exponent),
            });
        }
        let value = per_delta.iter().map(|r| r.ratio).fold(0.0, f64::max);
        Ok(Self {
            value,
            per_delta,
            depth,
        })
    }
}

/// Lower estimate of `||f||_{Lip(alpha; p)} = sup_delta omega(f; delta)_p / delta^alpha`.
pub fn lip_norm(
    f: &PiecewiseLinearPeriodic,
    p: f64,
    alpha: f64,
    depth: u32,
) -> Result<RatioNormReport> {
    lip_norm_with_samples(f, p, alpha, depth, DEFAULT_H_SAMPLES)
}

pub fn lip_norm_with_samples(
    f: &PiecewiseLinearPeriodic,
    p: f64,
    alpha: f64,
    depth: u32,
    h_samples: usize,
) -> Result<RatioNormReport> {
    check_param("p", p, p > 1.0, "p > 1")?;
    check_param(
        "alpha",
        alpha,
        alpha > 0.0 && alpha <= 1.0,
        "0 < alpha <= 1",
    )?;
    check_param("depth", depth as f64, depth >= 1, "depth >= 1")?;
    RatioNormReport::build(depth, alpha, |d| lp_modulus(f, p, d, h_samples))
}

/// Lower estimate of `sup_delta omega_{1-1/p}(f; delta) / delta^(alpha - 1/p)`.
pub fn p_cont_ratio_norm(
    f: &PiecewiseLinearPeriodic,
    p: f64,
    alpha: f64,
    depth: u32,
    grid_refinement: u32,
) -> Result<RatioNormReport> {
    check_param("p", p, p > 1.0, "p > 1")?;
    check_param(
        "alpha",
        alpha,
        alpha > 1.0 / p && alpha <= 1.0,
        "1/p < alpha <= 1",
    )?;
    RatioNormReport::build(depth, alpha - 1.0 / p, |d| {
        modulus_p_continuity(f, p, ModulusQuery::new(d, grid_refinement)?)
    })
}

/// Closed extremum sequence starting and ending at the global maximum.
fn rotate_to_max(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let g = argmax(values.iter().copied());
    (0..=m).map(|k| values[(g + k) % m]).collect()
}

fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Best `sum |y_j - y_i|^p` over systems on a line of points, optionally with
/// interval lengths bounded by `max_len` (positions given in `xs`).
fn best_power_sum(ys: &[f64], xs: Option<(&[f64], f64)>, p: f64) -> f64 {
    let n = ys.len();
    let mut best = vec![0.0_f64; n];
    let mut lo = 0;
    for j in 1..n {
        let mut b = best[j - 1];
        if let Some((x, max_len)) = xs {
            while x[j] - x[lo] > max_len {
                lo += 1;
            }
        }
        for i in lo..j {
            let cand = best[i] + (ys[j] - ys[i]).abs().powf(p);
            if cand > b {
                b = cand;
            }
        }
        best[j] = b;
    }
    best[n - 1]
}

fn grid_power_sum(line: &[(f64, f64)], max_len: f64, p: f64) -> f64 {
    let xs: Vec<f64> = line.iter().map(|g| g.0).collect();
    let ys: Vec<f64> = line.iter().map(|g| g.1).collect();
    best_power_sum(&ys, Some((&xs, max_len)), p)
}

/// Breakpoints plus `2^level - 1` uniform points inside every segment.
fn refined_grid(f: &PiecewiseLinearPeriodic, level: u32) -> Vec<(f64, f64)> {
    let pieces = 1usize << level;
    let mut grid = Vec::with_capacity(f.len() * pieces);
    for s in f.segments() {
        grid.push((s.x0, s.y0));
        for k in 1..pieces {
            let t = k as f64 / pieces as f64;
            let x = s.x0 + t * (s.x1 - s.x0);
            grid.push((x, s.y0 + t * (s.y1 - s.y0)));
        }
    }
    grid
}

/// Grid points from index `c` once around the circle, closing at `x_c + 1`.
fn unwrap_from(grid: &[(f64, f64)], c: usize) -> Vec<(f64, f64)> {
    let n = grid.len();
    let x0 = grid[c].0;
    let mut line: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let (x, y) = grid[(c + k) % n];
            (if x < x0 { x + 1.0 } else { x }, y)
        })
        .collect();
    line.push((x0 + 1.0, grid[c].1));
    line
}

fn normalize_candidates(candidates: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = candidates.iter().map(|x| x.rem_euclid(1.0)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Candidate positions and values once around the circle from `pts[cut]`.
fn cut_line(f: &PiecewiseLinearPeriodic, pts: &[f64], cut: usize) -> Vec<(f64, f64)> {
    let grid: Vec<(f64, f64)> = pts.iter().map(|&x| (x, f.eval(x))).collect();
    unwrap_from(&grid, cut)
}

/// Maximum over all systems on a line of points of the sorted-weight sum.
fn enumerate_lambda_systems(ys: &[f64], weights: &[f64]) -> f64 {
    fn score(incs: &[f64], weights: &[f64]) -> f64 {
        let mut d = incs.to_vec();
        d.sort_by(|a, b| b.total_cmp(a));
        d.iter().zip(weights).map(|(d, w)| d / w).sum()
    }
    fn go(ys: &[f64], pos: usize, incs: &mut Vec<f64>, weights: &[f64], best: &mut f64) {
        let n = ys.len();
        if pos + 1 >= n {
            *best = best.max(score(incs, weights));
            return;
        }
        go(ys, pos + 1, incs, weights, best);
        for j in pos + 1..n {
            let d = (ys[j] - ys[pos]).abs();
            if d == 0.0 {
                continue;
            }
            incs.push(d);
            go(ys, j, incs, weights, best);
            incs.pop();
        }
    }
    let mut best = 0.0;
    go(ys, 0, &mut Vec::new(), weights, &mut best);
    best
}
