use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Precondition and input errors. Axiom failures of a module are never
/// errors; they come back as structured reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field F_{p}^{degree}: no Conway polynomial in the built-in table")]
    UnsupportedField { p: u32, degree: u32 },

    #[error("{0} is not a supported prime (expected 2, 3, 5 or 7)")]
    UnsupportedPrime(u32),

    #[error("a perfect base needs at least one factor")]
    EmptyBase,

    #[error("base mismatch: {0}")]
    BaseMismatch(String),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("level {level} outside the allowed range {min}..={max}")]
    LevelOutOfRange {
        level: usize,
        min: usize,
        max: usize,
    },

    #[error("factor index {index} out of range for a base with {count} factors")]
    FactorOutOfRange { index: usize, count: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("B*A is not zero on factor {factor}; the pair is not a complex")]
    NotAComplex { factor: usize },

    #[error("matrix is not invertible on factor {factor}")]
    NotInvertible { factor: usize },

    #[error("psi is underdetermined: phi has an elementary divisor p^n on factor {factor}")]
    PsiUnderdetermined { factor: usize },

    #[error("no psi with phi*psi = psi*phi = xi exists on factor {factor}")]
    NoPsi { factor: usize },

    #[error("presented module is not killed by p^{n}")]
    NotKilled { n: usize },

    #[error("not a BK_n module on factor {factor}: {reason}")]
    NotBkn { factor: usize, reason: String },

    #[error("valuation {0} outside [0, 1]")]
    ValuationOutOfRange(String),

    #[error("enumeration cost {cost} exceeds the budget {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
