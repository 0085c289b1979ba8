use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(#[from] clap::Error),

    #[error("unknown key `{key}` for `{command}`")]
    UnknownKey { key: String, command: String },

    #[error("missing required key `{0}`")]
    MissingKey(String),

    #[error("malformed value for `{key}`: {value:?} ({reason})")]
    Malformed { key: String, value: String, reason: String },

    #[error("{file}:{line}: expected `key = value`, found {text:?}")]
    Syntax { file: String, line: usize, text: String },

    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Model(#[from] raman_core::Error),
}
