use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}+{im}i is outside the {domain} unit disk")]
    OutsideDisk { re: f64, im: f64, domain: &'static str },

    #[error("non-finite complex value")]
    NonFinite,

    #[error("[z, w] undefined for distinct boundary points")]
    DegenerateBracket,

    #[error("Möbius map has a pole at the evaluation point")]
    PoleHit,

    #[error("Möbius map is degenerate (ad - bc = 0)")]
    DegenerateMap,

    #[error("image of the closed disk is unbounded (|c| >= |d|)")]
    UnboundedImage,

    #[error("Möbius map does not send the closed unit disk into itself")]
    NotSelfMap,

    #[error("Möbius map is not an automorphism of the unit disk")]
    NotAutomorphism,

    #[error("jet base points differ")]
    BaseMismatch,

    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("series division by a jet that vanishes to its full order")]
    DivisionByZeroSeries,

    #[error("numerator vanishes to order {numerator} but denominator to order {denominator}")]
    NonRemovableSingularity { numerator: usize, denominator: usize },

    #[error("Blaschke zero lies outside the open unit disk")]
    ZeroOutsideDisk,

    #[error("polynomial has not been validated as bounded by 1 on the disk")]
    UnvalidatedPolynomial,

    #[error("|f(z)| = 1; invariant derivatives are undefined there")]
    UnimodularValue,

    #[error("closed-form denominator vanishes; use the iterated quotient instead")]
    DegenerateDenominator,

    #[error("Schur parameter {index} has modulus {modulus}, outside the admissible range")]
    GammaOutOfRange { index: usize, modulus: f64 },

    #[error("data violate the Schwarz-Pick inequality")]
    InconsistentData,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(&'static str),

    #[error("interpolation data are infeasible")]
    InfeasibleData,

    #[error("Pick-matrix verdict {pick:?} disagrees with the Schur recursion verdict {recursion:?}")]
    VerdictDisagreement { pick: String, recursion: String },

    #[error("interpolation nodes {0} and {1} coincide")]
    RepeatedNode(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
