use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("placement has {actual} entries, problem has {expected} virtual machines")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no feasible instance generated after {attempts} attempts")]
    GenerationInfeasible { attempts: usize },

    #[error("no feasible solution found")]
    NoFeasibleSolution,

    #[error("instance too large for exhaustive search: {assignments} assignments")]
    InstanceTooLarge { assignments: f64 },

    #[error("{}: {message}", location(path, *line))]
    Parse {
        path: Option<PathBuf>,
        line: Option<usize>,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("vm_count {vm_count}, repetition {repetition}: {source}")]
    Scenario {
        vm_count: usize,
        repetition: usize,
        #[source]
        source: Box<Error>,
    },
}

fn location(path: &Option<PathBuf>, line: Option<usize>) -> String {
    let name = path
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "<input>".to_owned());
    match line {
        Some(l) => format!("{name}:{l}"),
        None => name,
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips experiment coordinates and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Scenario { source, .. } => source.root(),
            other => other,
        }
    }
}
