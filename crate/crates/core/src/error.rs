use std::path::PathBuf;

/// Errors raised by construction, sampling, estimation and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("depth {depth} exceeds the segment budget (maximum depth {max})")]
    DepthBudget { depth: u32, max: u32 },

    #[error("rank curve needs at least 2 distinct density levels, found {0}")]
    TooFewLevels(usize),

    #[error("power-law fit needs at least 2 points with positive density, found {0}")]
    TooFewFitPoints(usize),

    #[error("covariance matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error(
        "gaussian sampler rejected {rejects} consecutive draws outside the unit square; \
         acceptance probability is too low (is the mean far outside the square?)"
    )]
    AcceptanceTooLow { rejects: usize },

    #[error("centers {0} and {1} coincide")]
    CoincidentCenters(usize, usize),

    #[error("center {0} lies outside the unit square")]
    CenterOutside(usize),

    #[error("district {0}: clipped network has zero total length")]
    EmptyDistrict(usize),

    #[error("boundary weight p0 = {0} needs at least one interior edge to carry it")]
    NoBoundaryEdges(f64),

    #[error("local dimension needs at least 2 radii with nonzero ball counts, found {0}")]
    TooFewRadii(usize),

    #[error("{}:{line}: {reason}", path.display())]
    Csv { path: PathBuf, line: usize, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error("geojson: {0}")]
    GeoJson(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
