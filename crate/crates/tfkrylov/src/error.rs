use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("PGM byte {offset}: {message}")]
    Pgm { offset: usize, message: String },
    #[error(transparent)]
    Numeric(#[from] tfkrylov_core::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Self::ConfigLine { .. } | Self::Config(_))
    }
}
