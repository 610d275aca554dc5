use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Substitution grammar or polynomial/loop syntax error.
    Parse { msg: String, line: usize, col: usize },
    AlphabetMismatch { left: usize, right: usize },
    EmptyImage { letter: usize },
    LetterOutOfRange { letter: usize, alphabet: usize },
    DuplicateRule { letter: usize },
    MissingRule { letter: usize },
    /// `power(zeta, 0)` is rejected: the identity substitution is never
    /// primitive-aperiodic and the zero power is never needed downstream.
    ZeroPower,
    DimensionMismatch { expected: usize, got: usize },
    GuardExceeded { what: &'static str, limit: u64, got: u64 },
    NonFinite { context: &'static str },
    NotPrimitive,
    NotNonNegative,
    /// Irreducibility search could not certify either outcome.
    Undecided { msg: String },
    NotMonic,
    NotReciprocal,
    ReducibleInput,
    ZeroPolynomial,
    DegreeGuard { max: usize, got: usize },
    PointOutOfRange,
    ReduciblePermutation,
    InvalidPermutation,
    OpenLoop { base: String, end: String },
    EmptyLoop,
    AllNodesSingular,
    Unimplemented(&'static str),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { msg, line, col } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet mismatch: {left} letters vs {right} letters")
            }
            Error::EmptyImage { letter } => write!(f, "empty image for letter {letter}"),
            Error::LetterOutOfRange { letter, alphabet } => {
                write!(f, "letter {letter} out of range for alphabet of size {alphabet}")
            }
            Error::DuplicateRule { letter } => write!(f, "duplicate rule for letter {letter}"),
            Error::MissingRule { letter } => write!(f, "missing rule for letter {letter}"),
            Error::ZeroPower => write!(f, "zeroth power of a substitution is rejected"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::GuardExceeded { what, limit, got } => {
                write!(f, "guard exceeded for {what}: {got} > {limit}")
            }
            Error::NonFinite { context } => write!(f, "non-finite value in {context}"),
            Error::NotPrimitive => write!(f, "matrix is not primitive"),
            Error::NotNonNegative => write!(f, "matrix has negative entries"),
            Error::Undecided { msg } => write!(f, "undecided: {msg}"),
            Error::NotMonic => write!(f, "polynomial is not monic"),
            Error::NotReciprocal => write!(f, "polynomial is not reciprocal"),
            Error::ReducibleInput => write!(f, "polynomial is reducible"),
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::DegreeGuard { max, got } => {
                write!(f, "degree {got} exceeds supported maximum {max}")
            }
            Error::PointOutOfRange => write!(f, "point outside the domain interval"),
            Error::ReduciblePermutation => write!(f, "permutation is not irreducible"),
            Error::InvalidPermutation => write!(f, "not a permutation"),
            Error::OpenLoop { base, end } => {
                write!(f, "move sequence is not a closed loop: starts at {base}, ends at {end}")
            }
            Error::EmptyLoop => write!(f, "empty move sequence"),
            Error::AllNodesSingular => write!(f, "all quadrature nodes were singular"),
            Error::Unimplemented(what) => write!(f, "unimplemented: {what}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}
