use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no value in the substitution")]
    MissingAssignment(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("filtration degree {actual} is below the required degree {required}")]
    DegreeViolation { required: i64, actual: String },
    #[error("negative power t^{power} in the deformation family")]
    NegativePower { power: i64 },
    #[error("expected {expected} components, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("bundles live over different charts")]
    BaseMismatch,
    #[error("map is not a weighted morphism: component {component} has degree {degree} < {required}")]
    NotWeightedMorphism {
        component: usize,
        degree: String,
        required: i64,
    },
    #[error("undecidable at truncation order {truncation}: need coefficients up to t^{needed}")]
    Undecidable { truncation: usize, needed: usize },
    #[error("coefficient of t^{index} requested beyond truncation order {truncation}")]
    BeyondTruncation { index: usize, truncation: usize },
    #[error("Clifford dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generator index {index} out of range for dimension {dim}")]
    GeneratorOutOfRange { index: usize, dim: usize },
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error("element is not a bivector")]
    NotBivector,
    #[error("jet is not invertible")]
    NonInvertible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    Precondition(String),
}
