use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system has no solution")]
    InconsistentSystem,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("generation cap {gen_cap} is below target degree {degree}")]
    CapTooSmall { gen_cap: usize, degree: usize },

    /// The relation space meets the first filtered component; the vector is in F^2(T) coordinates.
    #[error("relations meet F^1(T) nontrivially")]
    ConditionIFails { witness: Vec<String> },

    #[error("relation space is not a kG-subbimodule: {0}")]
    NotBimodule(String),

    #[error("map is not G-equivariant: {0}")]
    NotEquivariant(String),

    #[error("homogeneous algebra is not certified Koszul (set assert_koszul or run koszul-check)")]
    NotKoszulCertified,

    #[error("characteristic 2 is not supported for Drinfeld orbifold parameters")]
    CharTwo,

    #[error("kappa is not alternating: {0}")]
    NotAlternating(String),

    #[error("kappa has a nonzero linear part")]
    NotConstantKappa,

    #[error("resolution hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("chain map lift failed in homological degree {n}, polynomial degree {degree}")]
    LiftFailed { n: usize, degree: usize },
}
