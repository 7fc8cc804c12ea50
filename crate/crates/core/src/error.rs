use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field order {0} is not a prime in [5, 2^31)")]
    InvalidFieldOrder(u64),
    #[error("operands live over different fields (q = {0} and q = {1})")]
    ModulusMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, String),
    #[error("expected a polynomial of degree at least 1, got {0}")]
    ConstantPolynomial(String),
    #[error("{0} is not monic")]
    NotMonic(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("inputs are not coprime: gcd is {0}")]
    NotCoprime(String),
    #[error("unit group of size {size} exceeds the ceiling {ceiling}")]
    GroupTooLarge { size: u64, ceiling: u64 },
    #[error("the principal character has no L-polynomial")]
    PrincipalCharacter,
    #[error("character is not primitive (conductor {0})")]
    NotPrimitive(String),
    #[error("work estimate {work} exceeds the budget {budget}")]
    BudgetExceeded { work: f64, budget: f64 },
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    SingularCurve,
    #[error("place {0} has bad reduction; use its reduction datum")]
    BadReduction(String),
    #[error("conductor degree {0} is below 4; the L-function is not a polynomial of degree deg N_E - 4")]
    NegativeLDegree(usize),
    #[error("degree {needed} exceeds the configured prime-table depth {depth}")]
    DepthExceeded { needed: usize, depth: usize },
    #[error("point {0} is not on the unit circle")]
    OffUnitCircle(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
