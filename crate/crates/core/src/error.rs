//! Crate-wide error type.
//!
//! Mathematical non-results (a spectrum that admits no regularized
//! determinant) are *not* errors; see [`crate::specreg::RegResult`]. The
//! variants here cover malformed input, violated numeric contracts and
//! evaluation points too close to a singularity to be trusted.

use num_complex::Complex64;
use thiserror::Error;

use crate::primezeta::SingularityKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),

    #[error("field F_{p}^{a} has order above the enumeration budget {budget}")]
    DegreeOutOfRange { p: u64, a: u32, budget: u64 },

    #[error("enumeration over F_q^n with q = {q}, n = {n} exceeds the budget {budget}")]
    BudgetExceeded { q: u64, n: u32, budget: u64 },

    #[error("division by zero in F_{q}")]
    DivisionByZero { q: u64 },

    #[error("operands belong to different fields (order {left} vs {right})")]
    MixedFields { left: u64, right: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular curve: {witness}")]
    SingularCurve { witness: String },

    #[error("unsupported curve model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported progression modulus {0} (supported: 3, 4, 6)")]
    UnsupportedModulus(u64),

    #[error("prime-divisor count at degree {n} is not a nonnegative integer ({detail})")]
    NonIntegralPrimeCount { n: u32, detail: String },

    #[error("L-polynomial coefficient a_{index} is not an integer ({detail})")]
    NonIntegralCoefficient { index: usize, detail: String },

    #[error("genus {genus} requires point counts N_1..N_{genus}, got {got} values")]
    GenusMismatch { genus: u32, got: usize },

    #[error("polynomial root finding stalled at residual {residual:e}")]
    RootFindingFailed { residual: f64 },

    #[error("s = {s} is within the guard radius of the zeta pole at s = {pole}")]
    NearPole { s: Complex64, pole: Complex64 },

    #[error("term k = {k} of the Moebius sum at s = {s} is within the guard radius of a {kind} singularity")]
    NearSingularity {
        s: Complex64,
        k: u64,
        kind: SingularityKind,
    },

    #[error("series does not converge at s = {s}: {detail}")]
    NonConvergent { s: Complex64, detail: String },

    #[error("zeta has a pole at s = 1 (requested s = {s})")]
    PoleAtOne { s: Complex64 },

    #[error("trivial character has an Euler factor at every prime dividing the modulus; use the Riemann zeta path")]
    TrivialCharacter,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("spectrum is not zeta regularizable: {0}")]
    NotRegularizable(String),
}

impl Error {
    /// Exit-code class used by the command-line front end: 2 for parse
    /// errors, 4 for numerical non-convergence, 3 for every other domain
    /// error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::RootFindingFailed { .. } | Error::NonConvergent { .. } => 4,
            _ => 3,
        }
    }
}
