use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("letter `{0}` appears more than once in a row")]
    DuplicateLetter(String),
    #[error("rows do not contain the same letters: {0}")]
    RowMismatch(String),
    #[error("a datum needs at least two letters")]
    TooFewLetters,
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("combinatorial datum is not admissible")]
    NotAdmissible,
    #[error("reduction must keep at least one letter")]
    EmptySubset,
    #[error("datum `{0}` is not in the Rauzy class")]
    NotInClass(String),
    #[error("arrow does not start at the current end of the path")]
    IncompatibleArrow,
    #[error("point {0} lies outside the domain")]
    OutOfDomain(f64),
    #[error("tie between the last top and bottom intervals at step {step}")]
    Tie { step: usize },
    #[error("maps have different combinatorial data")]
    DatumMismatch,
    #[error("parameter entry for `{0}` is not positive")]
    DegenerateTau(String),
    #[error("parameter vector has no positive entry")]
    AllZero,
    #[error("parameter vector is not in the simplex: {0}")]
    NotInSimplex(String),
    #[error("path target `{0}` is not cyclic")]
    TargetNotCyclic(String),
    #[error("reference IET does not follow the prescribed path")]
    InductionMismatch,
    #[error("configuration violates the reference order at position {0}")]
    OrderViolation(usize),
    #[error("parameter entry for `{letter}` is {value:e}, at or below the degeneracy threshold")]
    NearBoundary { letter: String, value: f64 },
    #[error("the Rauzy class contains no cyclic datum")]
    NoCyclicDatum,
    #[error("solver did not realize the path: {0}")]
    SolverFailed(String),
    #[error("Rauzy paths of the two maps differ")]
    PathMismatch,
    #[error("Rauzy induction stopped after {completed} of {requested} steps")]
    InductionFailed { completed: usize, requested: usize },
    #[error("invalid branch: {0}")]
    InvalidBranch(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
