use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Output(String),
    #[error("purification failed: {0}")]
    Purification(String),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) | CliError::Output(_) => 3,
            CliError::Purification(_) => 4,
        }
    }
}

impl From<relent::Error> for CliError {
    fn from(e: relent::Error) -> Self {
        match e {
            relent::Error::Superluminal(_) => CliError::config("beta", e.to_string()),
            relent::Error::Domain(_) => CliError::config("scenario", e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
