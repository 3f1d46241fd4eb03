//! Explicit functions and witness sequences: triangle combs, the sharpness
//! witness `g`, the embedding-inequality check, and the witness weights that
//! separate `V_p` from `Lambda BV`.

use serde::Serialize;

use crate::error::{check_param, Error, Result};
use crate::periodic::{Interval, PiecewiseLinearPeriodic};
use crate::sequence::{
    criterion_inner_sum, criterion_partial_sums, criterion_verdict, dual_extremizer,
    regularize_sequence, BlockEnd, Exponents, LambdaSequence, SeriesVerdict,
};
use crate::variation::{lambda_variation, p_cont_ratio_norm, RatioNormReport};

/// Highest witness level; level `n` adds `2^n` triangles.
pub const MAX_LEVELS: usize = 12;

/// `N` isosceles triangles of heights `H_j` on equal bases partitioning `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleCombSpec {
    pub interval: Interval,
    pub heights: Vec<f64>,
}

impl TriangleCombSpec {
    pub fn new(interval: Interval, heights: Vec<f64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::Parameter {
                name: "N",
                value: 0.0,
                expected: "N >= 1",
            });
        }
        if let Some(&h) = heights.iter().find(|h| !(h.is_finite() && **h >= 0.0)) {
            return Err(Error::Parameter {
                name: "H",
                value: h,
                expected: "H_j >= 0",
            });
        }
        Ok(Self { interval, heights })
    }

    pub fn count(&self) -> usize {
        self.heights.len()
    }

    /// Base width `h = |I| / N`.
    pub fn base(&self) -> f64 {
        self.interval.length / self.count() as f64
    }

    /// `2^{1/p} (sum H_j^p)^{1/p}`
    pub fn closed_form_p_variation(&self, p: f64) -> f64 {
        2f64.powf(1.0 / p) * self.height_norm(p)
    }

    /// `2 h^{-1/p'} (sum H_j^p)^{1/p}`, with `1/p' = 1 - 1/p`.
    pub fn closed_form_derivative_norm(&self, p: f64) -> f64 {
        2.0 * self.base().powf(-(1.0 - 1.0 / p)) * self.height_norm(p)
    }

    fn height_norm(&self, p: f64) -> f64 {
        self.heights
            .iter()
            .map(|h| h.powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// `F(I, N, H; x)`: zero outside `I` and at the nodes `a + jh`, equal to `H_j`
/// at `a + (j + 1/2)h`, linear in between.
pub fn triangle_comb(spec: &TriangleCombSpec) -> PiecewiseLinearPeriodic {
    let a = spec.interval.start;
    let b = spec.interval.end();
    let n = spec.count();
    let h = spec.base();
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * n + 1);
    for (j, &hj) in spec.heights.iter().enumerate() {
        pts.push((a + j as f64 * h, 0.0));
        pts.push((a + (j as f64 + 0.5) * h, hj));
    }
    pts.push((b, 0.0));
    from_unreduced(pts)
}

/// Reduces positions mod 1 and drops the closing node when it lands on the first.
fn from_unreduced(pts: Vec<(f64, f64)>) -> PiecewiseLinearPeriodic {
    let mut reduced: Vec<(f64, f64)> = pts.into_iter().map(|(x, y)| (x - x.floor(), y)).collect();
    reduced.sort_by(|a, b| a.0.total_cmp(&b.0));
    reduced.dedup_by(|later, earlier| later.0 == earlier.0 && later.1 == earlier.1);
    let (xs, ys) = reduced.into_iter().unzip();
    PiecewiseLinearPeriodic::from_sorted(xs, ys)
}

/// `delta_n = L_n^{r'} / sum_m L_m^{r'}`.
///
/// Then `delta_n^{alpha - 1/p}` is the norming functional of `{L_n}` in
/// `l^{r'}`, so `sum delta_n^{alpha-1/p} L_n = ||L||_{r'}`.
pub fn duality_weights(l_terms: &[f64], p: f64, alpha: f64) -> Result<Vec<f64>> {
    let ex = Exponents::new(p, alpha)?;
    let u = dual_extremizer(l_terms, ex.r_conj)?;
    let mut delta: Vec<f64> = u.iter().map(|v| v.powf(ex.r)).collect();
    let total: f64 = delta.iter().sum();
    delta.iter_mut().for_each(|d| *d /= total);
    Ok(delta)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeltaSource {
    /// Duality choice from the truncated criterion blocks.
    Auto,
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    pub lam: LambdaSequence,
    pub p: f64,
    pub alpha: f64,
    pub levels: usize,
    pub delta: DeltaSource,
    /// Dyadic depth of the measured p-continuity ratio; `None` skips it.
    pub ratio_depth: Option<u32>,
    pub grid_refinement: u32,
}

impl WitnessSpec {
    pub fn new(lam: LambdaSequence, p: f64, alpha: f64, levels: usize) -> Self {
        Self {
            lam,
            p,
            alpha,
            levels,
            delta: DeltaSource::Auto,
            ratio_depth: Some(levels as u32 + 3),
            grid_refinement: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessLevel {
    pub n: u32,
    pub delta: f64,
    pub beta: f64,
    /// `|J_n| = beta_n / L`
    pub width: f64,
    /// `(sum_{k=2^n}^{2^{n+1}-1} lambda_k^{-p'})^{1/p'}`
    pub s: f64,
    /// Criterion block root `(sum_{k=2^n}^{2^{n+1}} (k^{alpha-1/p} lambda_k)^{-p'})^{1/p'}`
    pub l: f64,
    /// `sum_k H_k^{(n)} / lambda_k`
    pub weighted_height_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub levels: usize,
    pub per_level: Vec<WitnessLevel>,
    /// `L = sum beta_n`
    pub beta_sum: f64,
    pub measured_lambda_variation: f64,
    /// `2^{alpha-1/p} sum_n delta_n^{alpha-1/p} L_n`
    pub analytic_lower_bound: f64,
    /// `sum_n sum_k H_k^{(n)} / lambda_k`, each triangle paired with its own index
    pub indexed_pairing_sum: f64,
    /// `(sum_{n=1}^{levels} L_n^{r'})^{1/r'}`
    pub criterion_root: f64,
    pub p_cont_ratio: Option<RatioNormReport>,
}

impl WitnessReport {
    pub fn beta(&self) -> Vec<f64> {
        self.per_level.iter().map(|l| l.beta).collect()
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.per_level.iter().map(|l| l.s).collect()
    }
}

/// Exported report: `{"levels", "beta", "S", "measured_lambda_variation", "analytic_lower_bound", ...}`.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessExport<'a> {
    pub levels: usize,
    pub beta: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub measured_lambda_variation: f64,
    pub analytic_lower_bound: f64,
    pub criterion_root: f64,
    pub p_cont_ratio: Option<f64>,
    pub per_level: &'a [WitnessLevel],
}

impl WitnessReport {
    pub fn export(&self) -> WitnessExport<'_> {
        WitnessExport {
            levels: self.levels,
            beta: self.beta(),
            s: self.s_values(),
            measured_lambda_variation: self.measured_lambda_variation,
            analytic_lower_bound: self.analytic_lower_bound,
            criterion_root: self.criterion_root,
            p_cont_ratio: self.p_cont_ratio.as_ref().map(|r| r.value),
            per_level: &self.per_level,
        }
    }
}

/// The truncated sharpness witness `g = sum_{n=1}^{levels} F(J_n, 2^n, H_n)`.
///
/// The lengths `|J_n| = beta_n / L` come from the envelope of `{delta_n}` with
/// `theta = 3/2`, `gamma = 1`; the heights
/// `H_k^{(n)} = (2^{-n} beta_n)^{alpha-1/p} lambda_k^{-1/(p-1)} S_n^{-p'/p}`
/// normalize every level to `sum_k (H_k^{(n)})^p = (2^{-n} beta_n)^{p(alpha-1/p)}`.
pub fn extremal_function(spec: &WitnessSpec) -> Result<(PiecewiseLinearPeriodic, WitnessReport)> {
    let ex = Exponents::new(spec.p, spec.alpha)?;
    let levels = spec.levels;
    if levels == 0 {
        return Err(Error::Parameter {
            name: "levels",
            value: 0.0,
            expected: "levels >= 1",
        });
    }
    if levels > MAX_LEVELS {
        return Err(Error::LevelBudget {
            levels,
            max: MAX_LEVELS,
        });
    }
    let lam = &spec.lam;
    lam.terms(1 << (levels + 1))?;

    let l_terms: Vec<f64> = (1..=levels as u32)
        .map(|n| Ok(criterion_inner_sum(lam, &ex, n, BlockEnd::Inclusive)?.powf(1.0 / ex.p_conj)))
        .collect::<Result<_>>()?;
    let delta = match &spec.delta {
        DeltaSource::Auto => duality_weights(&l_terms, spec.p, spec.alpha)?,
        DeltaSource::Explicit(d) => {
            if d.len() != levels {
                return Err(Error::Parameter {
                    name: "delta_seq",
                    value: d.len() as f64,
                    expected: "one delta per level",
                });
            }
            if let Some(&bad) = d.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(Error::Parameter {
                    name: "delta_seq",
                    value: bad,
                    expected: "delta_n > 0",
                });
            }
            let total: f64 = d.iter().sum();
            if total > 1.0 + 1e-12 {
                return Err(Error::DeltaSum(total));
            }
            d.clone()
        }
    };
    let beta = regularize_sequence(&delta, 1.5, 1.0)?;
    let beta_sum: f64 = beta.iter().sum();

    let mut combs = Vec::with_capacity(levels);
    let mut per_level = Vec::with_capacity(levels);
    let mut start = 0.0;
    for (idx, &b) in beta.iter().enumerate() {
        let n = idx as u32 + 1;
        let lo = 1u64 << n;
        let lam_k: Vec<f64> = (lo..2 * lo).map(|k| lam.term(k).unwrap()).collect();
        let s = lam_k
            .iter()
            .map(|l| l.powf(-ex.p_conj))
            .sum::<f64>()
            .powf(1.0 / ex.p_conj);
        let scale = (b / lo as f64).powf(ex.gap()) * s.powf(-ex.p_conj / ex.p);
        let heights: Vec<f64> = lam_k
            .iter()
            .map(|l| scale * l.powf(-1.0 / (ex.p - 1.0)))
            .collect();
        let weighted_height_sum = heights.iter().zip(&lam_k).map(|(h, l)| h / l).sum();

        let width = b / beta_sum;
        let end = if idx + 1 == levels {
            1.0
        } else {
            start + width
        };
        let interval = Interval::new(start, end - start)?;
        combs.push(triangle_comb(&TriangleCombSpec::new(interval, heights)?));
        per_level.push(WitnessLevel {
            n,
            delta: delta[idx],
            beta: b,
            width,
            s,
            l: l_terms[idx],
            weighted_height_sum,
        });
        start = end;
    }
    let g = concatenate(&combs);

    let measured_lambda_variation = lambda_variation(&g, lam)?;
    let analytic_lower_bound = 2f64.powf(ex.gap())
        * per_level
            .iter()
            .map(|l| l.delta.powf(ex.gap()) * l.l)
            .sum::<f64>();
    let indexed_pairing_sum = per_level.iter().map(|l| l.weighted_height_sum).sum();
    let criterion_root = l_terms
        .iter()
        .map(|l| l.powf(ex.r_conj))
        .sum::<f64>()
        .powf(1.0 / ex.r_conj);
    let p_cont_ratio = spec
        .ratio_depth
        .map(|depth| p_cont_ratio_norm(&g, spec.p, spec.alpha, depth, spec.grid_refinement))
        .transpose()?;

    Ok((
        g,
        WitnessReport {
            levels,
            per_level,
            beta_sum,
            measured_lambda_variation,
            analytic_lower_bound,
            indexed_pairing_sum,
            criterion_root,
            p_cont_ratio,
        },
    ))
}

/// Sum of functions with disjoint supports, joined without re-evaluation.
fn concatenate(parts: &[PiecewiseLinearPeriodic]) -> PiecewiseLinearPeriodic {
    let pts: Vec<(f64, f64)> = parts.iter().flat_map(|f| f.breakpoints()).collect();
    from_unreduced(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingCheck {
    /// `v_Lambda(f)`
    pub lhs: f64,
    /// `sup_delta omega_{1-1/p}(f; delta) / delta^{alpha - 1/p}` (lower estimate)
    pub lip_estimate: f64,
    /// `(criterion partial sum)^{1/r'}`
    pub criterion_root: f64,
    pub rhs_core: f64,
    /// `lhs / rhs_core`, zero when `lhs` is zero.
    pub ratio: f64,
}

/// Evaluates both sides of `v_Lambda(f) <= c ||f||_{Lip} (criterion)^{1/r'}`
/// with the Lipschitz norm replaced by its p-continuity equivalent.
pub fn theorem31_check(
    f: &PiecewiseLinearPeriodic,
    lam: &LambdaSequence,
    p: f64,
    alpha: f64,
    n_blocks: u32,
    depth: u32,
    grid_refinement: u32,
) -> Result<EmbeddingCheck> {
    let ex = Exponents::new(p, alpha)?;
    if criterion_verdict(lam, &ex) == SeriesVerdict::Diverges {
        return Err(Error::DivergentCriterion);
    }
    let lhs = lambda_variation(f, lam)?;
    let lip_estimate = p_cont_ratio_norm(f, p, alpha, depth, grid_refinement)?.value;
    let criterion_root = criterion_partial_sums(lam, p, alpha, n_blocks)?
        .total()
        .powf(1.0 / ex.r_conj);
    let rhs_core = lip_estimate * criterion_root;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs_core };
    Ok(EmbeddingCheck {
        lhs,
        lip_estimate,
        criterion_root,
        rhs_core,
        ratio,
    })
}

/// Weights `lambda_n = 1 / alpha_n`, `alpha_n = d_n^{p-1} / sum_{k<=n} d_k^p`,
/// for a nonincreasing positive `d`. When `sum d_n^p` diverges,
/// `sum d_n / lambda_n` diverges while `sum lambda_n^{-p'}` converges.
pub fn perlman_witness(d: &[f64], p: f64) -> Result<LambdaSequence> {
    check_param("p", p, p > 1.0, "p > 1")?;
    if d.is_empty() {
        return Err(Error::ZeroInput);
    }
    if let Some(i) = d.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::NotMonotone { index: i + 1 });
    }
    if let Some(i) = d.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::NotMonotone { index: i + 2 });
    }
    let mut acc = 0.0;
    let mut weights: Vec<f64> = d
        .iter()
        .map(|&x| {
            acc += x.powf(p);
            x.powf(p - 1.0) / acc
        })
        .collect();
    if weights.windows(2).any(|w| w[1] > w[0]) {
        // nonincreasing rearrangement
        weights.sort_by(|a, b| b.total_cmp(a));
    }
    LambdaSequence::explicit(weights.into_iter().map(|a| 1.0 / a).collect())
}

/// Open window `1 < s < (1 + 1/p - alpha) / (1 - alpha)` for [`wang_gap_family`].
pub fn wang_gap_window(p: f64, alpha: f64) -> Result<(f64, f64)> {
    Exponents::new(p, alpha)?;
    Ok((1.0, (1.0 + 1.0 / p - alpha) / (1.0 - alpha)))
}

/// A block-power-log sequence with `sum lambda_n^{-1/(1-alpha)} < infinity`
/// but a divergent embedding criterion.
pub fn wang_gap_family(p: f64, alpha: f64, s: f64) -> Result<LambdaSequence> {
    let (lo, hi) = wang_gap_window(p, alpha)?;
    check_param("s", s, s > lo && s < hi, "s strictly inside the gap window")?;
    LambdaSequence::block_power_log(alpha, s)
}
