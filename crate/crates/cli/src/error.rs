use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("invalid scenario at `{path}`: {message}")]
    Invalid { path: String, message: String },

    #[error("{0}")]
    Io(String),

    #[error("unknown selector `{selector}`; available: {available}")]
    UnknownSelector { selector: String, available: String },

    #[error("execution failed: {0}")]
    Execution(String),
}

impl CliError {
    /// 2 for anything caught before execution, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Invalid { .. } | CliError::UnknownSelector { .. } => 2,
            CliError::Io(_) | CliError::Execution(_) => 3,
        }
    }
}
