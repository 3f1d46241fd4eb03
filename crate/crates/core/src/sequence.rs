//! Weight sequences `Lambda = {lambda_n}` and the series built from them.
//!
//! Named families carry symbolic convergence verdicts from comparison tests;
//! explicit prefixes only ever get partial sums.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};

/// Tolerance for the boundary cases of symbolic exponent comparisons.
const EXPONENT_TOL: f64 = 1e-12;

/// Block length above which dyadic sums switch from direct summation to
/// Euler-Maclaurin with Simpson quadrature.
const DIRECT_SUM_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Explicit {
        terms: Vec<f64>,
    },
    /// `lambda_n = n^s`
    Power {
        params: PowerParams,
    },
    /// `lambda_n = n^s (ln(n + 1))^t`
    PowerLog {
        params: PowerLogParams,
    },
    /// `lambda_k = 2^{n(1-alpha)} max(n, 1)^{(1-alpha)s}` for `k` in `[2^n, 2^{n+1})`
    BlockPowerLog {
        params: BlockPowerLogParams,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogParams {
    pub s: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockPowerLogParams {
    pub alpha: f64,
    pub s: f64,
}

/// A positive nondecreasing sequence, indexed from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceFile", into = "SequenceFile")]
pub struct LambdaSequence {
    family: Family,
    scale: f64,
}

/// On-disk form: the family tag with its `params` or `terms`, plus an optional `scale`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceFile {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

impl TryFrom<SequenceFile> for LambdaSequence {
    type Error = Error;

    fn try_from(file: SequenceFile) -> Result<Self> {
        let seq = Self::from_family(file.family)?;
        seq.scaled(file.scale)
    }
}

impl From<LambdaSequence> for SequenceFile {
    fn from(seq: LambdaSequence) -> Self {
        SequenceFile {
            family: seq.family,
            scale: seq.scale,
        }
    }
}

impl LambdaSequence {
    pub fn from_family(family: Family) -> Result<Self> {
        match &family {
            Family::Explicit { terms } => {
                if terms.is_empty() {
                    return Err(Error::ZeroInput);
                }
                for (i, &t) in terms.iter().enumerate() {
                    if !(t.is_finite() && t > 0.0) {
                        return Err(Error::NotMonotone { index: i + 1 });
                    }
                    if i > 0 && t < terms[i - 1] {
                        return Err(Error::NotMonotone { index: i + 1 });
                    }
                }
            }
            Family::Power { params } => {
                check_param("s", params.s, params.s >= 0.0, "s >= 0")?;
            }
            Family::PowerLog { params } => {
                check_param("s", params.s, params.s >= 0.0, "s >= 0")?;
                check_param("t", params.t, params.t >= 0.0, "t >= 0")?;
            }
            Family::BlockPowerLog { params } => {
                check_param("alpha", params.alpha, params.alpha < 1.0, "alpha < 1")?;
                check_param("s", params.s, params.s >= 0.0, "s >= 0")?;
            }
        }
        Ok(Self { family, scale: 1.0 })
    }

    pub fn explicit(terms: Vec<f64>) -> Result<Self> {
        Self::from_family(Family::Explicit { terms })
    }

    pub fn power(s: f64) -> Result<Self> {
        Self::from_family(Family::Power {
            params: PowerParams { s },
        })
    }

    pub fn power_log(s: f64, t: f64) -> Result<Self> {
        Self::from_family(Family::PowerLog {
            params: PowerLogParams { s, t },
        })
    }

    pub fn block_power_log(alpha: f64, s: f64) -> Result<Self> {
        Self::from_family(Family::BlockPowerLog {
            params: BlockPowerLogParams { alpha, s },
        })
    }

    /// `c * lambda_n`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_param("scale", c, c > 0.0, "scale > 0")?;
        Ok(Self {
            family: self.family.clone(),
            scale: self.scale * c,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_named(&self) -> bool {
        !matches!(self.family, Family::Explicit { .. })
    }

    /// Number of accessible terms; `None` for named families.
    pub fn available(&self) -> Option<usize> {
        match &self.family {
            Family::Explicit { terms } => Some(terms.len()),
            _ => None,
        }
    }

    /// `lambda_n` for `n >= 1`, `None` past the end of an explicit prefix.
    pub fn term(&self, n: u64) -> Option<f64> {
        assert!(n >= 1, "sequences are indexed from 1");
        let base = match &self.family {
            Family::Explicit { terms } => *terms.get(n as usize - 1)?,
            _ => self.smooth_term(n as f64, dyadic_block(n)),
        };
        Some(self.scale * base)
    }

    /// The first `count` terms, or an error if an explicit prefix is too short.
    pub fn terms(&self, count: usize) -> Result<Vec<f64>> {
        if let Some(avail) = self.available() {
            if count > avail {
                return Err(Error::TermShortage {
                    needed: count,
                    available: avail,
                });
            }
        }
        Ok((1..=count as u64).map(|n| self.term(n).unwrap()).collect())
    }

    /// Named-family term as a smooth function of real `k` inside dyadic block `block`.
    fn smooth_term(&self, k: f64, block: u32) -> f64 {
        match &self.family {
            Family::Explicit { .. } => unreachable!("explicit sequences have no closed form"),
            Family::Power { params } => k.powf(params.s),
            Family::PowerLog { params } => k.powf(params.s) * (k + 1.0).ln().powf(params.t),
            Family::BlockPowerLog { params } => {
                let e = 1.0 - params.alpha;
                (block as f64 * e).exp2() * (block.max(1) as f64).powf(e * params.s)
            }
        }
    }

    /// `sum_{k=lo}^{hi} phi(k, lambda_k)` for `2^n <= lo <= hi < 2^{n+1}`.
    fn block_sum(&self, lo: u64, hi: u64, phi: impl Fn(f64, f64) -> f64) -> Result<f64> {
        debug_assert!(lo >= 1 && hi >= lo && dyadic_block(lo) == dyadic_block(hi));
        match &self.family {
            Family::Explicit { .. } => {
                let mut s = 0.0;
                for k in lo..=hi {
                    let lam = self.term(k).ok_or(Error::TermShortage {
                        needed: k as usize,
                        available: self.available().unwrap_or(0),
                    })?;
                    s += phi(k as f64, lam);
                }
                Ok(s)
            }
            _ => {
                let block = dyadic_block(lo);
                let g = |k: f64| phi(k, self.scale * self.smooth_term(k, block));
                Ok(smooth_integer_sum(lo, hi, g))
            }
        }
    }
}

/// `n` with `2^n <= k < 2^{n+1}`.
pub fn dyadic_block(k: u64) -> u32 {
    63 - k.leading_zeros()
}

/// `sum_{k=lo}^{hi} g(k)` for smooth `g`: direct below [`DIRECT_SUM_LIMIT`]
/// terms, otherwise integral plus endpoint corrections (Euler-Maclaurin to the
/// first derivative term).
pub fn smooth_integer_sum(lo: u64, hi: u64, g: impl Fn(f64) -> f64) -> f64 {
    if hi < lo {
        return 0.0;
    }
    if hi - lo < DIRECT_SUM_LIMIT {
        return (lo..=hi).map(|k| g(k as f64)).sum();
    }
    let (a, b) = (lo as f64, hi as f64);
    let panels = 4096;
    let h = (b - a) / panels as f64;
    let mut integral = g(a) + g(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        integral += w * g(a + i as f64 * h);
    }
    integral *= h / 3.0;
    let d = |x: f64| g(x + 0.5) - g(x - 0.5);
    integral + 0.5 * (g(a) + g(b)) + (d(b) - d(a)) / 12.0
}

/// Outcome of a symbolic or numeric classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proved,
    Refuted,
    UndeterminedNumeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesVerdict {
    Converges,
    Diverges,
    Undetermined,
}

impl SeriesVerdict {
    fn from_bool(converges: bool) -> Self {
        if converges {
            Self::Converges
        } else {
            Self::Diverges
        }
    }
}

/// Compares `x` with `y`: `Some(true)` if clearly greater, `Some(false)` if
/// clearly smaller, `None` on the boundary.
fn exceeds(x: f64, y: f64) -> Option<bool> {
    if (x - y).abs() <= EXPONENT_TOL * (1.0 + y.abs()) {
        None
    } else {
        Some(x > y)
    }
}

impl LambdaSequence {
    /// Symbolic verdict for `lambda_n -> infinity`.
    pub fn tends_to_infinity(&self) -> SeriesVerdict {
        // reusing the verdict type: Converges means "yes"
        match &self.family {
            Family::Explicit { .. } => SeriesVerdict::Undetermined,
            Family::Power { params } => SeriesVerdict::from_bool(params.s > 0.0),
            Family::PowerLog { params } => {
                SeriesVerdict::from_bool(params.s > 0.0 || params.t > 0.0)
            }
            Family::BlockPowerLog { .. } => SeriesVerdict::Converges,
        }
    }

    /// Symbolic verdict for `sum lambda_n^{-q}`.
    pub fn power_series_verdict(&self, q: f64) -> SeriesVerdict {
        match &self.family {
            Family::Explicit { .. } => SeriesVerdict::Undetermined,
            Family::Power { params } => {
                SeriesVerdict::from_bool(exceeds(q * params.s, 1.0) == Some(true))
            }
            Family::PowerLog { params } => {
                let c = match exceeds(q * params.s, 1.0) {
                    Some(b) => b,
                    None => q * params.t > 1.0,
                };
                SeriesVerdict::from_bool(c)
            }
            Family::BlockPowerLog { params } => {
                // block n contributes 2^{n(1 - q(1-alpha))} n^{-q(1-alpha)s}
                let e = q * (1.0 - params.alpha);
                let c = match exceeds(e, 1.0) {
                    Some(b) => b,
                    None => e * params.s > 1.0,
                };
                SeriesVerdict::from_bool(c)
            }
        }
    }

    /// Growth of `lambda` on dyadic block `n` as `2^{n a} n^{b}`, for named families.
    fn dyadic_growth(&self) -> Option<(f64, f64)> {
        match &self.family {
            Family::Explicit { .. } => None,
            Family::Power { params } => Some((params.s, 0.0)),
            Family::PowerLog { params } => Some((params.s, params.t)),
            Family::BlockPowerLog { params } => {
                let e = 1.0 - params.alpha;
                Some((e, e * params.s))
            }
        }
    }
}

/// Membership in the class `S` and in `S_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub q: f64,
    pub class_s: Verdict,
    pub class_sq: Verdict,
    /// Partial sums of `1/lambda_n`, `n = 1..=N`.
    pub reciprocal_sums: Vec<f64>,
    /// Partial sums of `lambda_n^{-q}`.
    pub q_sums: Vec<f64>,
}

pub fn membership_report(lam: &LambdaSequence, q: f64, n: usize) -> Result<MembershipReport> {
    check_param("q", q, q > 1.0, "q > 1")?;
    check_param("N", n as f64, n >= 1, "N >= 1")?;
    let terms = lam.terms(n)?;
    let reciprocal_sums = running_sum(terms.iter().map(|l| 1.0 / l));
    let q_sums = running_sum(terms.iter().map(|l| l.powf(-q)));

    let (class_s, class_sq) = if lam.is_named() {
        let in_s = lam.tends_to_infinity() == SeriesVerdict::Converges
            && lam.power_series_verdict(1.0) == SeriesVerdict::Diverges;
        let in_sq = in_s && lam.power_series_verdict(q) == SeriesVerdict::Converges;
        let v = |b: bool| if b { Verdict::Proved } else { Verdict::Refuted };
        (v(in_s), v(in_sq))
    } else {
        (Verdict::UndeterminedNumeric, Verdict::UndeterminedNumeric)
    };
    Ok(MembershipReport {
        q,
        class_s,
        class_sq,
        reciprocal_sums,
        q_sums,
    })
}

fn running_sum(it: impl Iterator<Item = f64>) -> Vec<f64> {
    it.scan(0.0, |acc, x| {
        *acc += x;
        Some(*acc)
    })
    .collect()
}

/// Conjugate exponents of the embedding problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    pub p: f64,
    pub alpha: f64,
    /// `p' = p / (p - 1)`
    pub p_conj: f64,
    /// `r = 1 / (alpha - 1/p)`
    pub r: f64,
    /// `r' = 1 / (1 + 1/p - alpha)`
    pub r_conj: f64,
}

impl Exponents {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        check_param("p", p, p > 1.0, "p > 1")?;
        check_param(
            "alpha",
            alpha,
            alpha > 1.0 / p && alpha < 1.0,
            "1/p < alpha < 1",
        )?;
        Ok(Self {
            p,
            alpha,
            p_conj: p / (p - 1.0),
            r: 1.0 / (alpha - 1.0 / p),
            r_conj: 1.0 / (1.0 + 1.0 / p - alpha),
        })
    }

    /// `alpha - 1/p`
    pub fn gap(&self) -> f64 {
        self.alpha - 1.0 / self.p
    }
}

/// Whether the inner dyadic sum stops at `2^{n+1}` or `2^{n+1} - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockEnd {
    #[default]
    Inclusive,
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionBlock {
    pub n: u32,
    /// `sum_k (k^{alpha-1/p} lambda_k)^{-p'}` over the block.
    pub inner: f64,
    /// `inner^{r'/p'}`
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub exponents: Exponents,
    pub block_end: BlockEnd,
    pub blocks: Vec<CriterionBlock>,
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
}

impl CriterionReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// `sum_{k=2^n}^{2^{n+1}} (k^{alpha-1/p} lambda_k)^{-p'}` (or up to `2^{n+1} - 1`).
pub fn criterion_inner_sum(
    lam: &LambdaSequence,
    ex: &Exponents,
    n: u32,
    end: BlockEnd,
) -> Result<f64> {
    let lo = 1u64 << n;
    let hi = (1u64 << (n + 1)) - 1;
    let (gap, pc) = (ex.gap(), ex.p_conj);
    let phi = |k: f64, l: f64| (k.powf(gap) * l).powf(-pc);
    let mut s = lam.block_sum(lo, hi, phi)?;
    if end == BlockEnd::Inclusive {
        s += lam.block_sum(hi + 1, hi + 1, phi)?;
    }
    Ok(s)
}

/// Partial sums of `sum_n (inner_n)^{r'/p'}` for blocks `n = 0..=n_blocks`.
pub fn criterion_partial_sums(
    lam: &LambdaSequence,
    p: f64,
    alpha: f64,
    n_blocks: u32,
) -> Result<CriterionReport> {
    criterion_partial_sums_with(lam, p, alpha, n_blocks, BlockEnd::Inclusive)
}

pub fn criterion_partial_sums_with(
    lam: &LambdaSequence,
    p: f64,
    alpha: f64,
    n_blocks: u32,
    block_end: BlockEnd,
) -> Result<CriterionReport> {
    let ex = Exponents::new(p, alpha)?;
    check_param(
        "n_blocks",
        n_blocks as f64,
        n_blocks <= 60,
        "n_blocks <= 60",
    )?;
    let mut blocks = Vec::with_capacity(n_blocks as usize + 1);
    for n in 0..=n_blocks {
        let inner = criterion_inner_sum(lam, &ex, n, block_end)?;
        blocks.push(CriterionBlock {
            n,
            inner,
            term: inner.powf(ex.r_conj / ex.p_conj),
        });
    }
    let partial_sums = running_sum(blocks.iter().map(|b| b.term));
    Ok(CriterionReport {
        exponents: ex,
        block_end,
        blocks,
        partial_sums,
        verdict: criterion_verdict(lam, &ex),
    })
}

/// Symbolic verdict for the criterion series. With `lambda ~ 2^{na} n^b` on
/// block `n`, the block term behaves like `2^{n r'(1 - alpha - a)} n^{-r' b}`.
pub fn criterion_verdict(lam: &LambdaSequence, ex: &Exponents) -> SeriesVerdict {
    let Some((a, b)) = lam.dyadic_growth() else {
        return SeriesVerdict::Undetermined;
    };
    let c = match exceeds(a, 1.0 - ex.alpha) {
        Some(v) => v,
        None => ex.r_conj * b > 1.0,
    };
    SeriesVerdict::from_bool(c)
}

/// Partial sums of `sum_{n<=N} lambda_n^{-1/(1-alpha)}`, with the symbolic verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WangReport {
    pub alpha: f64,
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
}

pub fn wang_partial_sums(lam: &LambdaSequence, alpha: f64, n: usize) -> Result<WangReport> {
    check_param("alpha", alpha, alpha > 0.0 && alpha < 1.0, "0 < alpha < 1")?;
    let q = 1.0 / (1.0 - alpha);
    let terms = lam.terms(n)?;
    Ok(WangReport {
        alpha,
        partial_sums: running_sum(terms.iter().map(|l| l.powf(-q))),
        verdict: lam.power_series_verdict(q),
    })
}

/// The same series summed per dyadic block `[2^n, 2^{n+1})`, `n = 0..=n_blocks`;
/// entry `n` is the partial sum through block `n`.
pub fn wang_block_partial_sums(
    lam: &LambdaSequence,
    alpha: f64,
    n_blocks: u32,
) -> Result<WangReport> {
    check_param("alpha", alpha, alpha > 0.0 && alpha < 1.0, "0 < alpha < 1")?;
    let q = 1.0 / (1.0 - alpha);
    let mut blocks = Vec::with_capacity(n_blocks as usize + 1);
    for n in 0..=n_blocks {
        let lo = 1u64 << n;
        blocks.push(lam.block_sum(lo, 2 * lo - 1, |_, l| l.powf(-q))?);
    }
    Ok(WangReport {
        alpha,
        partial_sums: running_sum(blocks.into_iter()),
        verdict: lam.power_series_verdict(q),
    })
}

/// Envelope `beta_k = max_j a_j w_{k-j}` with `w_d = theta^{-gamma d}` for
/// `d >= 0` and `w_d = theta^d` for `d < 0`.
///
/// The envelope dominates `a`, its consecutive ratios stay in
/// `[theta^{-gamma}, theta]`, and its sum is at most
/// `sum_d w_d = theta^gamma/(theta^gamma - 1) + 1/(theta - 1)` times `sum a`,
/// which is below `theta^{1+gamma}/((theta-1)(theta^gamma-1))`.
pub fn regularize_sequence(a: &[f64], theta: f64, gamma: f64) -> Result<Vec<f64>> {
    check_param("theta", theta, theta > 1.0, "theta > 1")?;
    check_param("gamma", gamma, gamma > 0.0, "gamma > 0")?;
    if a.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::NonFinite("a"));
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroInput);
    }
    let decay = theta.powf(-gamma);
    let rise = 1.0 / theta;
    let mut beta = a.to_vec();
    // forward pass covers j <= k, backward pass j > k; mixed paths are dominated
    for k in 1..beta.len() {
        beta[k] = beta[k].max(beta[k - 1] * decay);
    }
    for k in (0..beta.len().saturating_sub(1)).rev() {
        beta[k] = beta[k].max(beta[k + 1] * rise);
    }
    Ok(beta)
}

/// `theta^{1+gamma} / ((theta - 1)(theta^gamma - 1))`.
pub fn regularize_sum_bound(theta: f64, gamma: f64) -> f64 {
    theta.powf(1.0 + gamma) / ((theta - 1.0) * (theta.powf(gamma) - 1.0))
}

/// Both sides of the discrete Hardy-type inequality
/// `sum_{n>=0} 2^{-n beta}(sum_{1<=k<=nu_n} a_k)^{1/r}`
/// `<= C sum_{n>=1} 2^{-n beta}(sum_{nu_{n-1}<=k<=nu_n} a_k)^{1/r}`.
///
/// `a[0]` is `a_1`; the sums run over the supplied range of `nu`.
pub fn hardy_two_sides(beta: f64, r: f64, a: &[f64], nu: &[f64]) -> Result<(f64, f64)> {
    check_param("beta", beta, beta > 0.0, "beta > 0")?;
    check_param("r", r, r > 1.0, "r > 1")?;
    if nu.first() != Some(&1.0) {
        return Err(Error::Parameter {
            name: "nu_0",
            value: nu.first().copied().unwrap_or(f64::NAN),
            expected: "nu_0 = 1",
        });
    }
    if let Some(i) = nu
        .windows(2)
        .position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::NotMonotone { index: i + 1 });
    }
    let mut prefix = vec![0.0; a.len() + 1];
    for (k, &x) in a.iter().enumerate() {
        prefix[k + 1] = prefix[k] + x;
    }
    // sum of a_k over integer k in [lo, hi]
    let range = |lo: f64, hi: f64| -> f64 {
        let lo = (lo.ceil().max(1.0)) as usize;
        let hi = (hi.floor().min(a.len() as f64)) as usize;
        if hi < lo {
            0.0
        } else {
            prefix[hi] - prefix[lo - 1]
        }
    };
    let weight = |n: usize| (-(n as f64) * beta).exp2();
    let lhs = nu
        .iter()
        .enumerate()
        .map(|(n, &v)| weight(n) * range(1.0, v).powf(1.0 / r))
        .sum();
    let rhs = (1..nu.len())
        .map(|n| weight(n) * range(nu[n - 1], nu[n]).powf(1.0 / r))
        .sum();
    Ok((lhs, rhs))
}

/// The norming functional of `x` in `l^p`: `alpha_n = x_n^{p-1} / ||x||_p^{p-1}`.
/// It has `||alpha||_{p'} = 1` and `sum alpha_n x_n = ||x||_p`.
pub fn dual_extremizer(x: &[f64], p: f64) -> Result<Vec<f64>> {
    check_param("p", p, p > 1.0, "p > 1")?;
    if x.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::NonFinite("x"));
    }
    let norm = lp_norm(x, p);
    if norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok(x.iter().map(|&v| (v / norm).powf(p - 1.0)).collect())
}

/// `||x||_p`, scaled by the largest entry to avoid overflow.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}
