use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("negative power of '{atom}' at position {pos}; only x admits negative exponents")]
    NegativePower { pos: usize, atom: String },
    #[error("determinant ad - bc must be 1, got {0}")]
    Determinant(String),
    #[error("invalid parameter b = {0}: zero or a negative integer")]
    InvalidB(f64),
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error("precision loss: condition estimate {0:.3e} exceeds 1e8 after fallback")]
    PrecisionLoss(f64),
    #[error("inadmissible K-type (q={q}, l={l}, m={m}): m must be congruent to {required} mod 4 (2l+q mod 4)")]
    Inadmissible { q: u8, l: u32, m: i64, required: i64 },
    #[error("negative lambda {0}")]
    NegativeLambda(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("chart violation: a - c t = {0} <= 0")]
    Chart(f64),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("grid too small: {0} points, need at least 8")]
    GridTooSmall(usize),
    #[error("invalid potential spec: {0}")]
    Potential(String),
    #[error("valid interval [{lo}, {hi}] shorter than 0.2: chi2 vanishes")]
    ValidInterval { lo: f64, hi: f64 },
    #[error("outside the valid interval: t = {0}")]
    OutsideInterval(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
