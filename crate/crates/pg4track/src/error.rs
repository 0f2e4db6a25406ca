use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The modulus is not an odd prime q >= 5 coprime to 6, or exceeds the 31-bit cap.
    #[error("unsupported modulus {0}: need an odd prime q >= 5 with q not divisible by 2 or 3, q <= 2^31 - 1")]
    BadModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the zero polynomial vanishes everywhere; roots are undefined")]
    ZeroPolynomial,
    #[error("cannot normalize the all-zero coordinate vector")]
    ZeroVector,
    #[error("rank of an empty point list is undefined")]
    EmptyRank,
    #[error("spanning points are not in general position (rank < 3)")]
    DegenerateSpan,
    #[error("3 is a square in F_{0}: the construction hypothesis fails (use force to build anyway)")]
    HypothesisFailed(u64),
    #[error("point set is not a track: {0}")]
    NotATrack(&'static str),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("target point is a member of the set")]
    TargetInSet,
    #[error("the denominator quartic has roots in F_q; this target is handled by matrix_b_witness")]
    DenominatorHasRoots,
    #[error("parameters s and t must be distinct")]
    EqualParameters,
    #[error("{0}")]
    Precondition(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
