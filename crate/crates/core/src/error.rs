use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot derive {field}: missing {constituent} constant {constant}")]
    CannotDerive {
        field: &'static str,
        constituent: &'static str,
        constant: &'static str,
    },

    #[error("invalid material card `{card}`: {field} {reason}")]
    InvalidCard {
        card: String,
        field: String,
        reason: String,
    },

    #[error("material database parse error: {0}")]
    MaterialParse(String),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("radius {r:.4} mm lies above the polar opening r0 = {r0:.4} mm")]
    AbovePolarOpening { r: f64, r0: f64 },

    #[error("invalid winding layer: {0}")]
    InvalidLayer(String),

    #[error("invalid cylinder section partition: {0}")]
    InvalidSections(String),

    #[error("empty laminate at station {station}")]
    EmptyLaminate { station: usize },

    #[error("design out of bounds: {0}")]
    OutOfBounds(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidOptimizer(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
