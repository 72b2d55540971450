use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("unknown field `{0}` (expected F<p> or Q)")]
    UnknownField(String),
    #[error("cannot read `{0}` as a field element")]
    BadLiteral(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CategoryError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("path `{0}` is not composable")]
    NotComposable(String),
    #[error("relation `{lhs} = {rhs}` has mismatched endpoints")]
    RelationEndpoints { lhs: String, rhs: String },
    #[error("hom-set {src} -> {tgt} exceeds the bound {bound}")]
    NonFinite { src: String, tgt: String, bound: usize },
    #[error("rewriting did not complete: {0}")]
    Unresolved(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmalgamError {
    #[error("leg {leg}: {reason}")]
    BadLeg { leg: String, reason: String },
    #[error("span legs have different domains")]
    DomainMismatch,
    #[error("word is not allowable: {0}")]
    NotAllowable(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlueError {
    #[error("object lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("morphism {0} does not run from the first leg to the second")]
    NotCrossing(String),
    #[error("construction check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("arrow `{arrow}`: expected a {rows}x{cols} matrix, got {got_rows}x{got_cols}")]
    Shape {
        arrow: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("relation violated at {0}")]
    Relation(String),
    #[error("not natural at arrow `{0}`")]
    NotNatural(String),
    #[error("base categories differ")]
    BaseMismatch,
    #[error("d∘d ≠ 0 at object `{object}` in degree {degree}")]
    NotComplex { object: String, degree: i32 },
    #[error("not a chain map at object `{object}` in degree {degree}")]
    NotChainMap { object: String, degree: i32 },
    #[error("degree windows differ")]
    WindowMismatch,
    #[error("universal property certificate failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}
