use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid base q = {0}: must differ from 0, 1 and -1")]
    InvalidQ(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate eigenvalues: a2 = a1 q^{m} (m = {m})")]
    DegenerateEigenvalues { m: usize },
    #[error("all couplings d0..d4 vanish but the data is not flagged degenerate")]
    AllCouplingsZero,
    #[error("eigenvalue collision h_{n} = h_{j}")]
    EigenvalueCollision { n: usize, j: usize },
    #[error("coupling g_{k} vanishes")]
    ZeroCoupling { k: usize },
    #[error("this family needs q^(1/2); pass --sqrt-q or a q that is a rational square")]
    MissingSqrtQ,
    #[error("sqrt_q^2 differs from q")]
    SqrtMismatch,
    #[error("inconsistent algebra: {0}")]
    InconsistentAlgebra(String),
    #[error("{0} is not the required square root")]
    NotASquare(String),
    #[error("flip e -> q/e applied to a zero parameter")]
    FlipOfZero,
    #[error("constraint cannot be solved: {0}")]
    ConstraintUnsolvable(String),
    #[error("denominator pole at k = {k}")]
    DenominatorPole { k: usize },
    #[error("recurrence denominator vanishes at n = {n}")]
    RecurrencePole { n: usize },
    #[error("pole of the difference operator at {0}")]
    PoleAtZ(String),
    #[error("figure transcription mismatch at node {node}: expected {expected}, computed {computed}")]
    TranscriptionMismatch {
        node: String,
        expected: String,
        computed: String,
    },
    #[error("unknown family: {0}")]
    UnknownFamily(String),
}
