use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which of the two forms of a curve `C_{f,g}` an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::F => f.write_str("f"),
            Side::G => f.write_str("g"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("{0} is not a prime below 2^31")]
    NotAPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    MixedFields,
    #[error("field of order {field} is not contained in the target field")]
    IncompatibleFields { field: String },
    #[error("F_(q^{m}) is not a subfield of the tower (degree {degree} over F_q)")]
    BadSubfieldDegree { m: usize, degree: usize },
    #[error("no subfield of order {0} in the tower")]
    NoSuchSubfield(String),
    #[error("polynomial has no root in the target field")]
    NoRootInTarget,
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is not irreducible")]
    NotIrreducible,
    #[error("polynomial of degree zero")]
    DegreeZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("(0:0) is not a projective point")]
    ZeroPoint,
    #[error("matrix does not have determinant one")]
    NotSpecialLinear,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{what} exceeds the guard {limit} (use --allow-large or FILLCURVE_GUARD_OVERRIDE)")]
    TooLarge { what: String, limit: u64 },
    #[error("precondition violated: V({side}) has the F_q-rational point {point}")]
    PreconditionViolated { side: Side, point: String },
    #[error("scan budget {budget} exceeded; at least {needed} field elements needed")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("construction requires odd characteristic")]
    EvenCharacteristic,
    #[error("index {index} out of range (only {len} choices)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("input set is not closed under the SL2 action")]
    NotClosed,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Json(_) => 1,
            Error::PreconditionViolated { .. }
            | Error::EvenCharacteristic
            | Error::IndexOutOfRange { .. }
            | Error::NotAPrimePower(_)
            | Error::DegreeMismatch { .. }
            | Error::ZeroForm => 2,
            Error::TooLarge { .. } | Error::BudgetExceeded { .. } => 3,
            _ => 4,
        }
    }
}
