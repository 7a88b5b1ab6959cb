use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("relator uses undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("cannot eliminate generator {0}: replacement word mentions it")]
    InvalidElimination(usize),

    #[error("coset enumeration exceeded {0} cosets")]
    LimitExceeded(usize),

    #[error("coset table is incomplete")]
    IncompleteTable,

    #[error("element cap of {0} exceeded")]
    CapExceeded(usize),

    #[error("quadratic field mismatch: Q(sqrt {0}) vs Q(sqrt {1})")]
    DiscriminantMismatch(u32, u32),

    #[error("invalid space form descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("inadmissible disk bundle side: {0}")]
    InadmissibleSide(String),

    #[error("gluing matrix has determinant {0}, expected +1 or -1")]
    DeterminantNotUnit(i64),

    #[error("homomorphisms do not share the leaf group as source")]
    MismatchedSources,

    #[error("prism recognition does not apply: {0}")]
    NotApplicable(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
