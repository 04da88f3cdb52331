use thiserror::Error;

/// Crate-wide error type. Variants that the CLI maps to exit code 2
/// (lift obstructions) are `Holonomy` and `ConflictingSheet`; everything
/// else is an input or precondition problem (exit code 3).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Single-linkage clustering at eps produced a cluster whose internal
    /// diameter exceeds eps: the tuple sits too close to a piece boundary
    /// for the chosen tolerance.
    #[error("ambiguous coincidence: cluster {indices:?} has diameter {diameter} > eps {eps}")]
    AmbiguousCoincidence {
        indices: Vec<usize>,
        diameter: f64,
        eps: f64,
    },

    /// Same as `AmbiguousCoincidence`, tagged with the grid node it occurred at.
    #[error("classification ambiguous at node {node}: cluster {indices:?} has diameter {diameter} > eps {eps}")]
    ClassificationAmbiguity {
        node: usize,
        indices: Vec<usize>,
        diameter: f64,
        eps: f64,
    },

    #[error("permutation group closure exceeded bound {bound} (reached {reached} elements)")]
    GroupTooLarge { reached: usize, bound: usize },

    #[error("unknown lemma: {0}")]
    UnknownLemma(String),

    /// Re-walking a grid edge does not reproduce the assigned tuple: the
    /// region is under-sampled around a loop and no single-valued lift exists.
    #[error("holonomy violation on edge {u}-{v}: expected {expected}, recomputed {got}")]
    Holonomy {
        u: usize,
        v: usize,
        expected: String,
        got: String,
    },

    /// Two gluing chains reach the same passing event with different sheets.
    #[error("conflicting sheets at event {event} (edge {u}-{v}): expected {expected}, got {got}")]
    ConflictingSheet {
        event: usize,
        u: usize,
        v: usize,
        expected: String,
        got: String,
    },

    #[error("input mismatch: {0}")]
    InputMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
