//! Generalized variation of piecewise-linear 1-periodic functions.
//!
//! The crate computes `p`-variation, `Lambda`-variation, the modulus of
//! `p`-continuity and the `L^p`-modulus of continuity exactly or as certified
//! lower bounds, evaluates the dyadic series that decides whether
//! `Lip(alpha; p)` embeds into `Lambda BV`, and builds the explicit functions
//! and weight sequences that show the criterion is sharp.
//!
//! ```
//! use lbv_core::{lambda_variation, p_variation, LambdaSequence, PiecewiseLinearPeriodic};
//!
//! let f = PiecewiseLinearPeriodic::new(vec![(0.0, 0.0), (0.5, 1.0)])?;
//! assert!((p_variation(&f, 2.0)? - 2f64.sqrt()).abs() < 1e-15);
//! assert_eq!(lambda_variation(&f, &LambdaSequence::power(1.0)?)?, 1.5);
//! # Ok::<(), lbv_core::Error>(())
//! ```

pub mod constructions;
pub mod error;
pub mod periodic;
pub mod sequence;
pub mod variation;

pub use constructions::{
    duality_weights, extremal_function, perlman_witness, theorem31_check, triangle_comb,
    wang_gap_family, wang_gap_window, DeltaSource, EmbeddingCheck, TriangleCombSpec, WitnessReport,
    WitnessSpec,
};
pub use error::{Error, Result};
pub use periodic::{
    superpose, Interval, IntervalSystem, MonotoneArc, MonotoneArcDecomposition,
    PiecewiseLinearPeriodic,
};
pub use sequence::{
    criterion_partial_sums, dual_extremizer, hardy_two_sides, membership_report,
    regularize_sequence, wang_block_partial_sums, wang_partial_sums, CriterionReport, Exponents,
    LambdaSequence, MembershipReport, SeriesVerdict, Verdict,
};
pub use variation::{
    brute_lambda_variation, brute_p_variation, lambda_variation, lip_norm, lp_modulus,
    modulus_p_continuity, p_cont_ratio_norm, p_variation, ModulusQuery, RatioNormReport,
};
