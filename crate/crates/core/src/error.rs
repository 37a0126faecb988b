use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("{what} = {requested} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero amplitude: {0}")]
    ZeroAmplitude(String),

    #[error("operator is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("energy diverged at step {step}: {value}")]
    Diverged { step: usize, value: String },

    #[error("model format: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_site(site: usize, n: usize) -> Result<()> {
    if site < n {
        Ok(())
    } else {
        Err(Error::SiteOutOfRange { site, n })
    }
}
