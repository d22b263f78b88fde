//! Error type shared by every module of the crate.
//!
//! All arithmetic is exact; errors are therefore *contract* failures
//! (wrong ring, non-invertible element, exhausted p-adic precision,
//! exceeded search budget), never rounding artifacts.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic precision exhausted: no certified digits remain ({0})")]
    PrecisionExhausted(String),
    #[error("operands belong to different coefficient rings: {0}")]
    MixedRings(String),
    #[error("operation unsupported over this ring: {0}")]
    UnsupportedRing(String),
    #[error("result leaves the p-adic integer subring (divisor valuation {0})")]
    LeavesIntegerRing(u32),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("germ must have order at least 1")]
    OrderZero,
    #[error("requested coefficient or jet order {requested} exceeds germ order {order}")]
    OrderTooHigh { requested: usize, order: usize },
    #[error("leading coefficient is not invertible in the ring")]
    NonInvertibleLeadingCoefficient,
    #[error("scalar is not invertible")]
    NonInvertibleScalar,
    #[error("linear coefficient is a root of unity obstruction: lambda^{0} = 1")]
    RootOfUnityObstruction(usize),
    #[error("germ is not tangent to the identity (A1 != 1)")]
    NotTangentToIdentity,
    #[error("degenerate affine combination: A1 of the result vanishes")]
    DegenerateCombination,
    #[error("word uses generator index {index} but the presentation has {count} generators")]
    VariantMismatch { index: usize, count: usize },
    #[error("Baumslag hypothesis input c_{0} is the trivial word")]
    TrivialCi(usize),
    #[error("relator {relator} failed verification at coefficient {index}")]
    RelatorFailure { relator: String, index: usize },
    #[error("symbolic budget exceeded: {0}")]
    SymbolicBlowup(String),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("no witness found within budget: {0}")]
    NotFound(String),
    #[error("input is not an exact rational map: {0}")]
    NonRationalInput(String),
    #[error("germ is over the wrong ring: expected {expected}, got {got}")]
    WrongRing { expected: String, got: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
