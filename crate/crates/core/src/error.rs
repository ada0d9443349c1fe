use thiserror::Error;

/// Every failure the library reports. Variant names double as the error
/// names printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonSquare: matrix is {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("NotHermitian: asymmetry {asymmetry:e} exceeds tolerance")]
    NotHermitian { asymmetry: f64 },
    #[error("NotPSD: minimum eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },
    #[error("SingularShift: {context}")]
    SingularShift { context: String },
    #[error("SingularConstantTerm: constant coefficient is numerically singular")]
    SingularConstantTerm,
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("BadArity: cannot split a word of length {len} into {parts} nonempty parts")]
    BadArity { len: usize, parts: usize },
    #[error("BadLetter: letter {letter} outside 1..={n}")]
    BadLetter { letter: usize, n: usize },
    #[error("OutsideBall: point has norm {norm}")]
    OutsideBall { norm: f64 },
    #[error("NotRowContraction: row norm {norm}")]
    NotRowContraction { norm: f64 },
    #[error("FockTooLarge: dimension {dim} exceeds the guardrail {limit}")]
    FockTooLarge { dim: usize, limit: usize },
    #[error("Infeasible: Pick matrix minimum eigenvalue {min_eig:e}")]
    Infeasible { min_eig: f64 },
    #[error(
        "IsometryDefect: defect {defect:e}; the data is numerically on the boundary, rerun with --ridge to accept it"
    )]
    IsometryDefect { defect: f64 },
    #[error("ResidualTooLarge: node residual {residual:e}")]
    ResidualTooLarge { residual: f64 },
    #[error("SingularResolvent: state resolvent is numerically singular")]
    SingularResolvent,
    #[error("VerificationFailed: {0}")]
    VerificationFailed(String),
    #[error("BadIndex: index {index} out of range for {len} nodes")]
    BadIndex { index: usize, len: usize },
    #[error("ValidationError: {0}")]
    Validation(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("GenerationFailed: seed {seed} never reached infeasibility")]
    GenerationFailed { seed: u64 },
}

impl Error {
    /// The bare error name, e.g. `Infeasible`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPSD",
            Error::SingularShift { .. } => "SingularShift",
            Error::SingularConstantTerm => "SingularConstantTerm",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::BadArity { .. } => "BadArity",
            Error::BadLetter { .. } => "BadLetter",
            Error::OutsideBall { .. } => "OutsideBall",
            Error::NotRowContraction { .. } => "NotRowContraction",
            Error::FockTooLarge { .. } => "FockTooLarge",
            Error::Infeasible { .. } => "Infeasible",
            Error::IsometryDefect { .. } => "IsometryDefect",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::SingularResolvent => "SingularResolvent",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::BadIndex { .. } => "BadIndex",
            Error::Validation(_) => "ValidationError",
            Error::Parse(_) => "ParseError",
            Error::GenerationFailed { .. } => "GenerationFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
