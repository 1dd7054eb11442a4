//! Error types shared across the library.

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the algebraic layer (groups, spaces, sections,
/// constructions, homomorphisms).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Operands live over different generator bases.
    #[error("basis mismatch: [{left}] vs [{right}]")]
    BasisMismatch { left: String, right: String },

    /// Operands live in different fibers (dimensions) of one space.
    /// Raised by addition: only quantities of the same kind may be added.
    #[error("fiber mismatch: {left} vs {right}")]
    FiberMismatch { left: String, right: String },

    /// Attempted to invert a fiber zero.
    #[error("zero quantity is not invertible")]
    ZeroNotInvertible,

    /// A zero quantity cannot serve as a unit of reference.
    #[error("zero quantity cannot be used as a unit")]
    ZeroUnit,

    /// Sections must select a nonzero quantity in every fiber.
    #[error("section values must be nonzero")]
    ZeroSectionValue,

    /// Generator name appears in both factors of a tensor product.
    #[error("generator name collision: `{0}`")]
    NameCollision(String),

    /// A quantity does not belong to the expected factor space.
    #[error("quantity does not belong to the expected space")]
    SpaceMismatch,

    /// The quotient group has torsion; the invariant factors >= 2 are listed.
    #[error("quotient has torsion: invariant factors {}", format_factors(.0))]
    TorsionQuotient(Vec<BigInt>),

    /// Kernel/image structure is undefined for a zero homomorphism.
    #[error("operation is undefined for a zero homomorphism")]
    ZeroHomomorphism,

    /// A pulled-back section cannot be expressed as character plus finitely
    /// many overrides.
    #[error("preimage section is not representable as character plus overrides")]
    NotRepresentable,

    /// The operation requires a coherent section.
    #[error("section is not coherent")]
    NotCoherent,

    /// A single character cannot satisfy all requested unit values.
    #[error("conflicting section requirements: {0}")]
    ConflictingSection(String),

    /// Matrix has no inverse over the integers.
    #[error("matrix is not invertible over the integers")]
    NotInvertible,

    /// Generator names must be non-empty.
    #[error("generator names must be non-empty")]
    EmptyGeneratorName,

    /// Generator names must be pairwise distinct.
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    /// Exponent vector length does not match the basis rank.
    #[error("expected {expected} exponents, got {got}")]
    ExponentCount { expected: usize, got: usize },

    /// Matrix shape is not the one required by the operation.
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
}

fn format_factors(factors: &[BigInt]) -> String {
    let parts: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Errors raised while parsing system files, dimension expressions or
/// quantity expressions. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("parse error at {line}:{col}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        col: usize,
        name: String,
    },

    #[error("parse error at {line}:{col}: unknown name `{name}`")]
    UnknownName {
        line: usize,
        col: usize,
        name: String,
    },

    #[error("parse error at {line}:{col}: non-integer exponents are not allowed")]
    NonIntegerExponent { line: usize, col: usize },

    #[error("parse error at {line}:{col}: duplicate name `{name}`")]
    DuplicateName {
        line: usize,
        col: usize,
        name: String,
    },

    #[error("system error: missing base unit for generator `{0}`")]
    MissingBaseUnit(String),

    #[error(
        "parse error at {line}: unit `{name}` is declared with dimension {declared} \
         but its value has dimension {actual}"
    )]
    DeclaredDimensionMismatch {
        line: usize,
        name: String,
        declared: String,
        actual: String,
    },

    #[error("parse error at {line}: unit `{name}` must have a nonzero value")]
    ZeroUnitValue { line: usize, name: String },
}

impl ParseError {
    pub fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    /// Shift the line number, e.g. when an expression parser runs on a slice
    /// of a larger file.
    pub fn at_line(mut self, new_line: usize) -> Self {
        match &mut self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownGenerator { line, .. }
            | ParseError::UnknownName { line, .. }
            | ParseError::NonIntegerExponent { line, .. }
            | ParseError::DuplicateName { line, .. }
            | ParseError::DeclaredDimensionMismatch { line, .. }
            | ParseError::ZeroUnitValue { line, .. } => *line = new_line,
            ParseError::MissingBaseUnit(_) => {}
        }
        self
    }
}
