use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q} exceeds the table limit {max}")]
    FieldTooLarge { q: u64, max: u32 },
    #[error("no built-in irreducible modulus for q = {0}; supply one explicitly")]
    NoBuiltinModulus(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{what} index {index} out of range [0, {bound})")]
    OutOfRange {
        what: &'static str,
        index: u64,
        bound: u64,
    },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operation requires rank at least 1")]
    RankZero,
    #[error("space of {0} points is too large to enumerate")]
    SpaceTooLarge(u64),
    #[error("the zero vector does not define a hyperplane")]
    ZeroNormal,
    #[error("operation requires a nonzero point")]
    ZeroPoint,
    #[error("field order {0} is even; progression arguments need odd q")]
    EvenOrder(u32),
    #[error("coefficient {coeff} is divisible by the characteristic {p}")]
    CoefficientNotCoprime { coeff: i64, p: u32 },
    #[error("equation has {got} variables, at least {min} required")]
    TooFewVariables { got: usize, min: usize },
    #[error("equation has {got} variables, exactly {expected} required")]
    WrongArity { got: usize, expected: usize },
    #[error("equation coefficients sum to {sum}, which is nonzero mod {p}")]
    CoefficientSumNonzero { sum: i64, p: u32 },
    #[error("function is constant")]
    ConstantFunction,
    #[error("set is not progression-free: {a} + {c} = 2 * {b}")]
    NotProgressionFree { a: u32, b: u32, c: u32 },
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
