use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus {0}: must satisfy 1 <= c < 2^31")]
    InvalidModulus(u64),
    #[error("enumeration of {work} terms exceeds the budget of {budget}")]
    Infeasible { work: u128, budget: u128 },
    #[error("quadrature did not converge at xi = {xi} (last change {delta:e})")]
    QuadratureNotConverged { xi: f64, delta: f64 },
    #[error(
        "test function is not a majorant of the indicator of [1, 2]: value {value} at t = {at}"
    )]
    NotMajorant { at: f64, value: f64 },
    #[error("no qualifying prime in [{start}, {end}) coprime to {modulus}")]
    EmptySupport { start: u64, end: u64, modulus: u64 },
    #[error("lambda chain needs {work} operations, above the work cap {cap}")]
    ChainBudgetExceeded { work: u128, cap: u128 },
    #[error("shift search needs {tuples} tuples, above the budget {budget}")]
    BudgetExceeded { tuples: u128, budget: u128 },
    #[error("dense kernels are capped at c <= {cap}, got {c}")]
    KernelTooLarge { c: u64, cap: u64 },
    #[error("coefficient norm is zero; the stated exponent is singular")]
    DegenerateCoefficients,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed kernel file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
