//! Continuous 1-periodic piecewise-linear functions, intervals on the circle,
//! and the monotone-arc decomposition that the exact variation routines use.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};

/// A continuous 1-periodic function, linear between consecutive breakpoints.
///
/// The last breakpoint is joined to the first one shifted by one period, so
/// every list of breakpoints describes a continuous periodic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub struct PiecewiseLinearPeriodic {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

/// On-disk form: `{"breakpoints": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionFile {
    pub breakpoints: Vec<[f64; 2]>,
}

impl TryFrom<FunctionFile> for PiecewiseLinearPeriodic {
    type Error = Error;

    fn try_from(file: FunctionFile) -> Result<Self> {
        Self::new(file.breakpoints.iter().map(|&[x, y]| (x, y)).collect())
    }
}

impl From<PiecewiseLinearPeriodic> for FunctionFile {
    fn from(f: PiecewiseLinearPeriodic) -> Self {
        FunctionFile {
            breakpoints: f.breakpoints().map(|(x, y)| [x, y]).collect(),
        }
    }
}

/// One linear piece, `x1 > x0`; the wrap-around piece has `x1 >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn slope(&self) -> f64 {
        (self.y1 - self.y0) / (self.x1 - self.x0)
    }
}

impl PiecewiseLinearPeriodic {
    /// Builds a function from `(position, value)` pairs given in any order.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyBreakpoints);
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite("breakpoints"));
            }
            if !(0.0..1.0).contains(&x) {
                return Err(Error::PositionOutOfRange(x));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicatePosition(w[0].0));
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(Self { xs, ys })
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> Self {
        Self {
            xs: vec![0.0],
            ys: vec![c],
        }
    }

    /// Sorted, strictly increasing positions; the caller guarantees the invariants.
    pub(crate) fn from_sorted(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        debug_assert!(!xs.is_empty() && xs.len() == ys.len());
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(xs[0] >= 0.0 && *xs.last().unwrap() < 1.0);
        Self { xs, ys }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn positions(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// The `len()` linear pieces covering `[x_0, x_0 + 1)`.
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.xs.len();
        (0..n).map(move |i| {
            let (x1, y1) = if i + 1 < n {
                (self.xs[i + 1], self.ys[i + 1])
            } else {
                (self.xs[0] + 1.0, self.ys[0])
            };
            Segment {
                x0: self.xs[i],
                y0: self.ys[i],
                x1,
                y1,
            }
        })
    }

    /// Value at `x`; the argument is reduced modulo 1.
    pub fn eval(&self, x: f64) -> f64 {
        let t = x - x.floor();
        let n = self.xs.len();
        // index of the last breakpoint <= t, or the wrap segment when t < x_0
        let i = self.xs.partition_point(|&xi| xi <= t);
        let (x0, y0, x1, y1, t) = if i == 0 {
            (
                self.xs[n - 1] - 1.0,
                self.ys[n - 1],
                self.xs[0],
                self.ys[0],
                t,
            )
        } else if i == n {
            (
                self.xs[n - 1],
                self.ys[n - 1],
                self.xs[0] + 1.0,
                self.ys[0],
                t,
            )
        } else {
            (self.xs[i - 1], self.ys[i - 1], self.xs[i], self.ys[i], t)
        };
        if t == x0 {
            return y0;
        }
        y0 + (y1 - y0) * ((t - x0) / (x1 - x0))
    }

    /// `f(I) = f(b) - f(a)` for `I = [a, b]`.
    pub fn increment(&self, interval: Interval) -> f64 {
        self.eval(interval.end()) - self.eval(interval.start)
    }

    /// `(sum over pieces of |slope|^p * length)^(1/p)`.
    pub fn derivative_lp_norm(&self, p: f64) -> Result<f64> {
        check_param("p", p, p >= 1.0, "p >= 1")?;
        let sum: f64 = self
            .segments()
            .map(|s| s.slope().abs().powf(p) * s.len())
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    pub fn sup_norm(&self) -> f64 {
        self.ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| c * y).collect(),
        }
    }

    /// Monotone arcs with plateaus collapsed by exact comparison.
    pub fn monotone_arcs(&self) -> MonotoneArcDecomposition {
        self.monotone_arcs_with_tolerance(0.0)
    }

    /// Maximal circular runs of strict monotonicity. Steps with
    /// `|y_{i+1} - y_i| <= tol` are treated as flat.
    pub fn monotone_arcs_with_tolerance(&self, tol: f64) -> MonotoneArcDecomposition {
        let n = self.xs.len();
        let step_sign = |i: usize| -> i8 {
            let d = self.ys[(i + 1) % n] - self.ys[i];
            if d > tol {
                1
            } else if d < -tol {
                -1
            } else {
                0
            }
        };
        let signs: Vec<i8> = (0..n).map(step_sign).collect();
        let has_up = signs.iter().any(|&s| s > 0);
        let has_down = signs.iter().any(|&s| s < 0);
        if !(has_up && has_down) {
            return MonotoneArcDecomposition { arcs: Vec::new() };
        }

        // Start at a nonzero step whose previous nonzero step has the other sign.
        let prev_nonzero = |i: usize| -> i8 {
            (1..=n)
                .map(|k| signs[(i + n - k) % n])
                .find(|&s| s != 0)
                .unwrap_or(0)
        };
        let first = (0..n)
            .find(|&i| signs[i] != 0 && prev_nonzero(i) != signs[i])
            .expect("both signs present");

        let mut arcs = Vec::new();
        let mut run_start = first;
        let mut run_sign = signs[first];
        let mut run_end = first; // index of the last step of the current run
        for k in 1..=n {
            let i = (first + k) % n;
            let s = if k == n { -run_sign } else { signs[i] };
            if s == 0 {
                continue;
            }
            if s != run_sign {
                arcs.push(self.arc_between(run_start, (run_end + 1) % n));
                run_start = i;
                run_sign = s;
            }
            run_end = i;
        }
        MonotoneArcDecomposition { arcs }
    }

    fn arc_between(&self, from: usize, to: usize) -> MonotoneArc {
        let start = self.xs[from];
        let mut end = self.xs[to];
        if end <= start {
            end += 1.0;
        }
        MonotoneArc {
            start,
            end,
            start_value: self.ys[from],
            increment: self.ys[to] - self.ys[from],
        }
    }
}

/// Pointwise sum over the union of all breakpoint sets.
pub fn superpose(fs: &[PiecewiseLinearPeriodic]) -> Result<PiecewiseLinearPeriodic> {
    if fs.is_empty() {
        return Err(Error::EmptyBreakpoints);
    }
    let mut xs: Vec<f64> = fs.iter().flat_map(|f| f.xs.iter().copied()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let ys = xs
        .iter()
        .map(|&x| fs.iter().map(|f| f.eval(x)).sum())
        .collect();
    Ok(PiecewiseLinearPeriodic::from_sorted(xs, ys))
}

/// `[start, start + length]` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&start) || !(length > 0.0 && length <= 1.0) {
            return Err(Error::InvalidInterval { start, length });
        }
        Ok(Self { start, length })
    }

    /// Interval from `a` to `b` with `a < b` and `b - a <= 1`; `a` may lie outside `[0, 1)`.
    pub fn from_endpoints(a: f64, b: f64) -> Result<Self> {
        let start = a - a.floor();
        Self::new(start, b - a)
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }
}

/// Nonoverlapping intervals contained in one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSystem {
    intervals: Vec<Interval>,
}

impl IntervalSystem {
    const SLACK: f64 = 1e-12;

    /// Validates that the interiors are pairwise disjoint on the circle.
    ///
    /// Sorting by start and checking each interval against its circular
    /// successor is enough: with total length at most one, any endpoint is a
    /// point not interior to the system, which is where the period is cut.
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let total: f64 = intervals.iter().map(|i| i.length).sum();
        if total > 1.0 + Self::SLACK {
            return Err(Error::OverlappingIntervals);
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
        let n = sorted.len();
        for k in 0..n {
            let cur = sorted[k];
            let next_start = if k + 1 < n {
                sorted[k + 1].start
            } else {
                sorted[0].start + 1.0
            };
            if n > 1 && cur.end() > next_start + Self::SLACK {
                return Err(Error::OverlappingIntervals);
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `max |I_n|`.
    pub fn mesh(&self) -> f64 {
        self.intervals.iter().fold(0.0, |m, i| m.max(i.length))
    }

    pub fn increments(&self, f: &PiecewiseLinearPeriodic) -> Vec<f64> {
        self.intervals.iter().map(|&i| f.increment(i)).collect()
    }

    /// `(sum |f(I_n)|^p)^(1/p)`.
    pub fn p_sum(&self, f: &PiecewiseLinearPeriodic, p: f64) -> f64 {
        let s: f64 = self
            .intervals
            .iter()
            .map(|&i| f.increment(i).abs().powf(p))
            .sum();
        s.powf(1.0 / p)
    }

    /// `sum |f(I_n)| / lambda_n` with the intervals taken in stored order.
    pub fn lambda_sum(&self, f: &PiecewiseLinearPeriodic, weights: &[f64]) -> f64 {
        self.intervals
            .iter()
            .zip(weights)
            .map(|(&i, w)| f.increment(i).abs() / w)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneArc {
    pub start: f64,
    /// May exceed 1 when the arc wraps past the origin.
    pub end: f64,
    pub start_value: f64,
    pub increment: f64,
}

/// Circular list of maximal monotone arcs with alternating increment signs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonotoneArcDecomposition {
    pub arcs: Vec<MonotoneArc>,
}

impl MonotoneArcDecomposition {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.arcs.iter().map(|a| a.increment)
    }

    /// Values at the local extrema in circular order (the arc start values).
    pub fn extremum_values(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.start_value).collect()
    }

    /// `|increments|` sorted nonincreasingly.
    pub fn sorted_magnitudes(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self.increments().map(f64::abs).collect();
        d.sort_by(|a, b| b.total_cmp(a));
        d
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    check_param("p", p, p >= 1.0, "p >= 1")
}
