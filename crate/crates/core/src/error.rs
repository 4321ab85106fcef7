use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid terrain: {0}")]
    InvalidTerrain(String),

    #[error("invalid altitude line: {0}")]
    InvalidAltitude(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("degenerate ray: origin and through point coincide")]
    DegenerateRay,

    #[error("point {0} does not lie on the terrain")]
    NotOnTerrain(String),

    #[error("point {0} lies outside the polygon")]
    OutsidePolygon(String),

    #[error("empty sub-edge on edge {0}")]
    EmptySubEdge(usize),

    #[error("empty event context")]
    EmptyEventContext,

    #[error("sweep invariant violated: {message}")]
    Invariant { message: String, trace: String },

    #[error("corrupted trace: {0}")]
    CorruptTrace(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a malformed instance rather than a solver defect.
    pub fn is_invalid_instance(&self) -> bool {
        matches!(
            self,
            Error::InvalidTerrain(_)
                | Error::InvalidAltitude(_)
                | Error::InvalidPolygon(_)
                | Error::Parse(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
