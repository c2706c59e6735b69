use matcurv::CurvError;
use thiserror::Error;

/// Errors surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Curv(#[from] CurvError),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 2 usage, 3 numerical or normalization, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Verification(_) => 4,
            CliError::Curv(e) => match e {
                CurvError::Usage(_) | CurvError::Dimension(_) | CurvError::Domain(_) => 2,
                CurvError::Structure(_)
                | CurvError::NonFinite { .. }
                | CurvError::DegenerateSection(_)
                | CurvError::Normalization(_) => 3,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 4);
        assert_eq!(CliError::from(CurvError::Domain("x".into())).exit_code(), 2);
        assert_eq!(
            CliError::from(CurvError::Normalization("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(CurvError::DegenerateSection("x".into())).exit_code(),
            3
        );
    }
}
