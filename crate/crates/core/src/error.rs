use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("field characteristic {0} is not a prime below 65536")]
    BadCharacteristic(u32),

    #[error("associativity fails at (e{i}·e{j})·e{k} vs e{i}·(e{j}·e{k}), coefficient {l}")]
    AssociativityViolation { i: usize, j: usize, k: usize, l: usize },

    #[error("unit law fails against basis element e{0}")]
    UnitViolation(usize),

    #[error("invalid algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module data: {0}")]
    InvalidModule(String),

    #[error("quiver has an oriented cycle; its path algebra is infinite-dimensional")]
    UnsupportedQuiver,

    #[error("self-injective dimension exceeds bound {bound} (left: {left}, right: {right})")]
    NotGorensteinWithinBound {
        bound: usize,
        left: String,
        right: String,
    },

    #[error("approximation failed: {0}")]
    ApproximationFailed(String),

    #[error("balance violated in degree {0}")]
    BalanceViolation(usize),

    #[error("criteria (4) and registry (2) disagree: {0}")]
    CrossCheckViolation(String),

    #[error("property violated: {0}")]
    PropertyViolation(String),

    #[error("sequence is not proper: {0}")]
    ProperNessViolation(String),

    #[error("long sequence not exact at node {0}")]
    ExactnessViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("certificate violated: {0}")]
    CertificateViolation(String),

    #[error("homotopy hom formulas disagree: {0} vs {1}")]
    FormulaMismatch(usize, usize),

    #[error("no module named {0:?} in the registry")]
    UnknownModuleName(String),

    #[error("configuration error: {0}")]
    Config(String),
}
