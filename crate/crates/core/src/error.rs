use thiserror::Error;

use crate::embed::FaceId;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input: the caller handed us something unusable.
    Input,
    /// Well-formed input with a negative answer (infeasible, incomparable).
    Domain,
    /// An internal invariant broke. Always a bug or a corrupt embedding.
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("edge {0} is a loop")]
    Loop(i64),
    #[error("edges {0} and {1} join the same pair of vertices")]
    MultiEdge(i64, i64),
    #[error("invalid rotation system: {0}")]
    Rotation(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not 2-connected ({0})")]
    NotBiconnected(String),
    #[error("Euler check failed: V={vertices}, E={edges}, F={faces} (V - E + F = {})", *vertices as i64 - *edges as i64 + *faces as i64)]
    Euler {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    #[error("plane embedding requires an outer_face")]
    MissingOuterFace,
    #[error("operation requires {0} mode")]
    WrongMode(&'static str),
    #[error("unknown face {0}")]
    UnknownFace(String),
    #[error("unknown orientation {0:?}")]
    UnknownOrientation(String),
    #[error("invalid orientation: {0}")]
    BadOrientation(String),
    #[error("vertex sets of orientation and alpha differ")]
    VertexMismatch,
    #[error("orientations belong to different embeddings")]
    EmbeddingMismatch,
    #[error("alpha sums to {sum} but the graph has {edges} edges")]
    DegreeSum { sum: i64, edges: usize },
    #[error("no alpha-orientation exists")]
    Infeasible,
    #[error("orientation is not an alpha-orientation for the given alpha")]
    NotAlphaOrientation,
    #[error("orientations have different out-degree vectors")]
    AlphaMismatch,
    #[error("orientation is not strongly connected")]
    NotStronglyConnected,
    #[error("difference is not oriented Eulerian at vertex {0}")]
    NotEulerian(i64),
    #[error("face {0} is not flippable")]
    NotFlippable(FaceId),
    #[error("orientations are incomparable under the flip order")]
    Incomparable,
    #[error("not a simple cycle: {0}")]
    NotACycle(String),
    #[error("cycle has the wrong sense: {0}")]
    WrongSense(String),
    #[error("nesting precondition violated: {0}")]
    Nesting(String),
    #[error("enumeration budget of {0} search nodes exceeded")]
    BudgetExceeded(u64),
    #[error("greedy flipping stalled with quota remaining:\n{0}")]
    GreedyStall(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Infeasible
            | Error::Incomparable
            | Error::NotStronglyConnected
            | Error::AlphaMismatch
            | Error::NotAlphaOrientation
            | Error::NotFlippable(_)
            | Error::BudgetExceeded(_) => ErrorKind::Domain,
            Error::Invariant(_) | Error::GreedyStall(_) => ErrorKind::Invariant,
            _ => ErrorKind::Input,
        }
    }
}
