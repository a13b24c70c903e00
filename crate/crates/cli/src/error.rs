use std::process::ExitCode;

/// Every failure maps to a stable exit code: 1 usage or config, 2 data,
/// 3 remote endpoint.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Remote(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Remote(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl From<biasaware::retriever::RetrieverError> for CliError {
    fn from(e: biasaware::retriever::RetrieverError) -> Self {
        use biasaware::retriever::RetrieverError as E;
        match e {
            E::Embed(_) => CliError::Remote(e.to_string()),
            E::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<biasaware::detector::DetectError> for CliError {
    fn from(e: biasaware::detector::DetectError) -> Self {
        use biasaware::detector::DetectError as E;
        match e {
            E::Remote(_) | E::InvalidReply(_) => CliError::Remote(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<biasaware::eval::EvalError> for CliError {
    fn from(e: biasaware::eval::EvalError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<biasaware::reasoner::ReasonerError> for CliError {
    fn from(e: biasaware::reasoner::ReasonerError) -> Self {
        use biasaware::reasoner::ReasonerError as E;
        match e {
            E::Config(_) => CliError::Usage(e.to_string()),
            E::Transport(_) => CliError::Remote(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
