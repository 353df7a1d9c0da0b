use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: pole at x = {x}")]
    Pole { func: &'static str, x: f64 },

    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: no convergence ({detail})")]
    NoConvergence { func: &'static str, detail: String },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("{func}: coherent states need sigma > -1/2, got sigma = {sigma}")]
    SigmaRange { func: &'static str, sigma: f64 },

    #[error("{func}: degree {n} is below the codimension m = {m}")]
    Index { func: &'static str, n: u32, m: u32 },

    #[error("{func}: singular at {at} ({detail})")]
    Singular {
        func: &'static str,
        at: f64,
        detail: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("grid too coarse: {points} points, need at least {min}")]
    GridTooCoarse { points: usize, min: usize },
}

impl Error {
    /// True for errors caused by the (alpha, beta, m) choice rather than by a
    /// numerical breakdown.
    pub fn is_inadmissible(&self) -> bool {
        matches!(self, Error::Inadmissible(_) | Error::SigmaRange { .. })
    }

    pub fn is_parameter(&self) -> bool {
        matches!(self, Error::Parameter(_))
    }
}
