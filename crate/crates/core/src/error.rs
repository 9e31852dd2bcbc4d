use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature hit the subdivision limit ({intervals} intervals, value {value:e} ± {error:e})")]
    SubdivisionLimit { intervals: usize, value: f64, error: f64 },
    #[error("non-finite function value at x = {at}")]
    NonFiniteEvaluation { at: f64 },
    #[error("root is not bracketed: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    NoBracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },
    #[error("result overflows the floating-point range")]
    Overflow,
    #[error("asymptotic series is not certified: first omitted term {bound:e}")]
    DivergentTruncation { bound: f64 },
    #[error("argument out of range: {0}")]
    OutOfRange(&'static str),
    #[error("state has zero norm")]
    ZeroState,
    #[error("invalid momentum state: {0}")]
    InvalidState(&'static str),
    #[error("closed form is unstable at t' = {t:e}; use the small-time series")]
    SmallTimeInstability { t: f64 },
    #[error("negative time t' = {t}")]
    NegativeTime { t: f64 },
    #[error("P0(0) must be positive")]
    ZeroProbability,
    #[error("no backflow: P0(T) = {p0_end} is not below P0(0) = {p0_start}")]
    NotBackflow { p0_start: f64, p0_end: f64 },
    #[error("direct partition oracle limited to N <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(&'static str),
    #[error("cross-check failed: {what} ({a:e} vs {b:e})")]
    CrossCheck { what: &'static str, a: f64, b: f64 },
}
