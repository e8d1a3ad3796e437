use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("graph has no perfect matching: {0}")]
    NoPerfectMatching(String),

    #[error("infeasible: p = {p} but at most floor(n/3) = {max} cycles fit on n = {n} vertices")]
    Infeasible { n: usize, p: usize, max: usize },

    #[error(
        "algorithm inapplicable: {components} components, p = {p}, and no component has six or more vertices"
    )]
    AlgorithmInapplicable { components: usize, p: usize },

    #[error("oracle refused: n = {n} exceeds the configured limit {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
