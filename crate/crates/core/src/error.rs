use thiserror::Error;

/// Every failure reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands belong to different algebra contexts")]
    ContextMismatch,
    #[error("generator index {0} outside 1..={1}")]
    GeneratorOutOfRange(u32, u32),
    #[error("body is zero (|z_B| <= tol_body)")]
    BodyZero,
    #[error("body lies on the negative real axis, principal branch undefined")]
    BranchCut,
    #[error("analytic function refused the body value: {0}")]
    DomainViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("leading minor of order {0} has a singular body")]
    NotRegular(usize),
    #[error("body matrix is singular")]
    BodySingular,
    #[error("matrix is not superpositive")]
    NotSuperpositive,
    #[error("eta is not contractive (|eta_B| >= 1)")]
    EtaNotContractive,
    #[error("constant term of the series is singular")]
    ConstantTermSingular,
    #[error("series tail estimate {0:e} exceeds tolerance")]
    TailTooLarge(f64),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("Fourier window too small for the body inverse")]
    WindowTooSmall,
    #[error("feedthrough D is singular")]
    DSingular,
    #[error("J must be self-adjoint with J*J = I")]
    JInvalid,
    #[error("iteration did not converge")]
    NotConvergent,
    #[error("H is not strictly negative")]
    HNotNegative,
    #[error("Stein identity violated (residual {0:e})")]
    SteinViolated(f64),
    #[error("I - A has a singular body")]
    ISubASingular,
    #[error("node {0} lies outside the open unit superdisk")]
    NodeOutsideSuperdisk(usize),
    #[error("denominator has a singular constant term")]
    DenominatorSingular,
    #[error("Schur coefficient at step {step} is not contractive")]
    RhoNotContractive { step: usize },
    #[error("Schur step {step} has a singular shifted denominator")]
    StepSingular { step: usize },
    #[error("constraint p - a'pa = c'c violated (residual {0:e})")]
    ConstraintViolated(f64),
    #[error("c*Jc is not zero")]
    IsotropyViolated,
    #[error("a is not unimodular")]
    NotUnimodular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ContextMismatch => "ContextMismatch",
            Error::GeneratorOutOfRange(..) => "GeneratorOutOfRange",
            Error::BodyZero => "BodyZero",
            Error::BranchCut => "BranchCut",
            Error::DomainViolation(_) => "DomainViolation",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotRegular(_) => "NotRegular",
            Error::BodySingular => "BodySingular",
            Error::NotSuperpositive => "NotSuperpositive",
            Error::EtaNotContractive => "EtaNotContractive",
            Error::ConstantTermSingular => "ConstantTermSingular",
            Error::TailTooLarge(_) => "TailTooLarge",
            Error::NotInvertible => "NotInvertible",
            Error::WindowTooSmall => "WindowTooSmall",
            Error::DSingular => "DSingular",
            Error::JInvalid => "JInvalid",
            Error::NotConvergent => "NotConvergent",
            Error::HNotNegative => "HNotNegative",
            Error::SteinViolated(_) => "SteinViolated",
            Error::ISubASingular => "ISubASingular",
            Error::NodeOutsideSuperdisk(_) => "NodeOutsideSuperdisk",
            Error::DenominatorSingular => "DenominatorSingular",
            Error::RhoNotContractive { .. } => "RhoNotContractive",
            Error::StepSingular { .. } => "StepSingular",
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::IsotropyViolated => "IsotropyViolated",
            Error::NotUnimodular => "NotUnimodular",
            Error::Parse(_) => "Parse",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// True for malformed input, false for mathematical domain failures.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
