use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("malformed matrix: {0}")]
    BadMatrix(String),
}

impl ParseError {
    pub fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line, msg: msg.into() }
    }
}
