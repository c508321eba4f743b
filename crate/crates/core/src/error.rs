use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("input is empty")]
    EmptyInput,

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),

    #[error("unknown column '{0}'")]
    UnknownColumn(String),

    #[error("column '{column}': {message}")]
    TypeMismatch { column: String, message: String },

    #[error("kind manifest line {line}: {message}")]
    Manifest { line: usize, message: String },

    #[error("syntax error at offset {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("statistic undefined: {0}")]
    Undefined(&'static str),

    #[error("degenerate contingency table ({rows}x{cols} after pruning)")]
    Degenerate { rows: usize, cols: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Refused(String),

    #[error("{section} section: {source}")]
    Section {
        section: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_section(self, section: &'static str) -> Self {
        Error::Section {
            section,
            source: Box::new(self),
        }
    }
}
