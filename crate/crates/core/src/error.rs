use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// k + ell <= 4 is the 2-core of an ordinary graph, which the core
    /// density analysis does not cover.
    #[error("unsupported case k={k}, ell={ell}: the core analysis requires k + ell > 4 (2-cores of ordinary graphs are excluded)")]
    UnsupportedCase { k: u32, ell: u32 },

    #[error("unsupported degree distribution: {0}")]
    UnsupportedSpec(String),

    #[error("density c={c} is not above the core appearance point c*={c_star}; no supercritical solution")]
    Subcritical { c: f64, c_star: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::UnsupportedCase { .. }
                | Error::UnsupportedSpec(_)
                | Error::Subcritical { .. }
                | Error::DegenerateFit(_)
        )
    }
}
