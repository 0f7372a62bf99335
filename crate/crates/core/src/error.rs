use crate::percolation::Site;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("box [0,{max_x}]x[0,{max_y}] is too small: {reason}")]
    BoxTooSmall { max_x: u32, max_y: u32, reason: String },

    #[error("site ({}, {}) lies outside the lattice box", .0.x, .0.y)]
    OutOfBox(Site),

    #[error("event at time {event_time} precedes state time {state_time}")]
    EventOutOfOrder { event_time: f64, state_time: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("backward recursion exceeded depth cap {0}")]
    DepthExceeded(usize),

    #[error("truncated run rejected: the colored set touched the box boundary")]
    Truncated,

    #[error("no checkpoint at time {0}")]
    MissingCheckpoint(f64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
