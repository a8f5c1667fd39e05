use thiserror::Error;

/// Every failure the toolkit can report. The CLI maps variants onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("site count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid direction {0} for this lattice")]
    InvalidDirection(String),
    #[error("lattice is not bipartite: {0}")]
    NotBipartite(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("symmetry {label} does not commute with the Hamiltonian")]
    SymmetryBroken { label: String },
    #[error("no dual pairs: {0}")]
    NoDualPairs(String),
    #[error("sector partition: {0}")]
    Sector(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("iterative solver did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable kind used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeMismatch(..) => "size_mismatch",
            Error::SiteOutOfRange { .. } => "site_out_of_range",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::InvalidDirection(_) => "invalid_direction",
            Error::NotBipartite(_) => "not_bipartite",
            Error::InvalidModel(_) => "invalid_model",
            Error::SymmetryBroken { .. } => "symmetry_broken",
            Error::NoDualPairs(_) => "no_dual_pairs",
            Error::Sector(_) => "sector",
            Error::Budget(_) => "budget",
            Error::NotConverged { .. } => "not_converged",
            Error::Numerical(_) => "numerical",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
