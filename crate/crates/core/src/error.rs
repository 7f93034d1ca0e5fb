use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime (use 0 for the rationals)")]
    NotPrime(u32),
    #[error("matrix dimensions do not compose: {left} columns vs {right} rows")]
    DimensionMismatch { left: usize, right: usize },
    #[error("composite of consecutive differentials is nonzero")]
    NonzeroComposite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("target series must have constant term 1")]
    ConstantTermNotOne,
    #[error("declared shape is inconsistent with the series: negative generator count in degree {degree}")]
    Deficit { degree: u32 },
    #[error("shape forbids generators in degree {degree} at characteristic {prime}")]
    Parity { degree: u32, prime: u32 },
    #[error("shape {shape} is not available at characteristic {prime}")]
    ShapeForPrime { shape: &'static str, prime: u32 },
    #[error("generator count in degree {degree} exceeds 64 bits")]
    Overflow { degree: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degree {degree} exceeds the truncation {truncation}")]
    BeyondTruncation { degree: u32, truncation: u32 },
    #[error("generator `{0}` must have positive degree")]
    ZeroDegreeGenerator(String),
    #[error("truncation height of `{0}` must be at least 2")]
    BadHeight(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("monomial has {found} exponents, presentation has {expected} generators")]
    MonomialLength { expected: usize, found: usize },
    #[error("class has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("operation {op} does not act at characteristic {prime}")]
    OperationForPrime { op: String, prime: u32 },
    #[error("table entry {op} on `{generator}` is fixed by instability")]
    InstabilityOverride { op: String, generator: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThomError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("fiber dimension {0} is below 2; the Thom space would not be simply connected")]
    FiberDimension(u32),
    #[error("Euler class must vanish: the orientation has odd degree {0} and the characteristic is not 2")]
    OddOrientationSquare(u32),
    #[error("orientation entry {op} is fixed: {reason}")]
    OrientationEntry { op: String, reason: &'static str },
    #[error("Wu class W_m is only defined for odd fiber dimension at odd primes (n = {0})")]
    WuUndefined(u32),
    #[error("t is compared with the Wu class only for p = 2 and odd n (p = {prime}, n = {n})")]
    MasseyConsistency { prime: u32, n: u32 },
    #[error("sphere-bundle class components have degrees {v_part} and {base}; expected v-part degree = base degree - (n - 1)")]
    SphereDegrees { v_part: u32, base: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarError {
    #[error(transparent)]
    Thom(#[from] ThomError),
    #[error("internal degree {t} exceeds the available letter range {max}")]
    BeyondTruncation { t: u32, max: u32 },
    #[error("d^2 != 0 at bidegree (-{s}, {t})")]
    BrokenDifferential { s: u32, t: u32 },
    #[error("Steenrod operations on bar words need a vanishing Euler class")]
    NonzeroEuler,
    #[error("{0} does not act letterwise on bar words")]
    UnsupportedOperation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmssError {
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("the spectral sequence is only known to collapse when the Euler class vanishes (u^2 = 0)")]
    NonzeroEuler,
    #[error("prime {0} is both sampled and excluded")]
    ExcludedPrimeSampled(u32),
    #[error("degree bound {needed} needs a larger truncation than {available}")]
    TruncationTooSmall { needed: u32, available: u32 },
}
