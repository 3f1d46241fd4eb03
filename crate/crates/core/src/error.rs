use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("breakpoint list is empty")]
    EmptyBreakpoints,
    #[error("duplicate breakpoint position {0}")]
    DuplicatePosition(f64),
    #[error("breakpoint position {0} outside [0, 1)")]
    PositionOutOfRange(f64),
    #[error("non-finite value in `{0}`")]
    NonFinite(&'static str),
    #[error("invalid interval: start {start}, length {length}")]
    InvalidInterval { start: f64, length: f64 },
    #[error("intervals overlap or do not fit in one period")]
    OverlappingIntervals,
    #[error("parameter `{name}` = {value} out of range: {expected}")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("sequence is not positive and nondecreasing at index {index}")]
    NotMonotone { index: usize },
    #[error("sequence has {available} terms, {needed} required")]
    TermShortage { needed: usize, available: usize },
    #[error("input sequence is identically zero")]
    ZeroInput,
    #[error("too many candidate points: {count} (limit {limit})")]
    TooManyCandidates { count: usize, limit: usize },
    #[error(
        "exact Lambda-variation needs enumeration over {extrema} extrema (limit {limit}); \
         arc formula not certified for this function"
    )]
    Intractable { extrema: usize, limit: usize },
    #[error("criterion series diverges for this sequence; ratio is meaningless")]
    DivergentCriterion,
    #[error("level budget exceeded: {levels} > {max}")]
    LevelBudget { levels: usize, max: usize },
    #[error("delta sequence sums to {0} > 1")]
    DeltaSum(f64),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            expected,
        })
    }
}
