use std::fmt;

use thiserror::Error;

use crate::frcore::StorageScheme;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where a non-physical state was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// Solution point `node` of element `element`.
    Node { element: usize, node: usize },
    /// Face point `point` on face `face` (2 * axis + side) of element `element`.
    Face { element: usize, face: usize, point: usize },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Site::Node { element, node } => write!(f, "element {element}, node {node}"),
            Site::Face { element, face, point } => write!(f, "element {element}, face {face}, face point {point}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("order {order} outside supported range 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("interpolation nodes are not distinct (node {index} repeats {value})")]
    DuplicateNode { index: usize, value: f64 },

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch { what: &'static str, got: usize, expected: usize },

    #[error("quadrature order {quad_order} is below projection order {max_order}")]
    UnderIntegrated { max_order: usize, quad_order: usize },

    #[error("non-physical state (rho = {rho}, p = {pressure}){}{}",
        .site.map(|s| format!(" at {s}")).unwrap_or_default(),
        .scheme.map(|s| format!(" [scheme {s}]")).unwrap_or_default())]
    NonPhysical { rho: f64, pressure: f64, site: Option<Site>, scheme: Option<StorageScheme> },

    #[error("solution diverged at step {step} (t = {time}): {source}")]
    Diverged {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn nonphysical(rho: f64, pressure: f64) -> Self {
        Error::NonPhysical { rho, pressure, site: None, scheme: None }
    }

    /// Attach a location (and scheme) to a bare non-physical-state error.
    pub fn at(self, site: Site, scheme: StorageScheme) -> Self {
        match self {
            Error::NonPhysical { rho, pressure, .. } => {
                Error::NonPhysical { rho, pressure, site: Some(site), scheme: Some(scheme) }
            }
            other => other,
        }
    }

    pub fn is_nonphysical(&self) -> bool {
        matches!(self, Error::NonPhysical { .. })
    }
}
