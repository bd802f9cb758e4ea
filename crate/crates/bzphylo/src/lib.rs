//! Semigroups of cyclic-group edge labellings on trivalent graphs and their
//! relation to Berenstein-Zelevinsky triangles.
//!
//! The library has six layers:
//!
//! * [`graphs`] - finite multigraphs with distinguished leaf edges, covering
//!   forests, edge collapse, and enumeration of trivalent graphs of a fixed
//!   type `(g, n)`.
//! * [`cyclic`] - labellings of graph edges by elements of `Z/mZ` with
//!   zero-sum vertex conditions, the graded semigroup they generate, Hilbert
//!   function counting, membership testing with witnesses, and saturation
//!   gaps.
//! * [`weights`] - dominant `SL_m` weights in fundamental coordinates,
//!   Littlewood-Richardson coefficients, and level-one conformal block
//!   dimensions.
//! * [`bz`] - Berenstein-Zelevinsky triangles: the triangular grid, hexagon
//!   exchange conditions, boundary weight projections, fiber enumeration,
//!   minimal generators, and glued (graph-indexed) triangle collections.
//! * [`bridge`] - the translation between the two worlds: vertex labellings
//!   to triangles, inclusion and equality experiments, the known equality
//!   counterexample for `m >= 4`, and relation checking.
//! * [`render`] - honeycomb drawings of triangles as SVG or plain text.
//!
//! All enumerations are deterministic: identical inputs produce identical
//! output, byte for byte.

pub mod bridge;
pub mod bz;
pub mod cyclic;
pub mod exact;
pub mod graphs;
pub mod render;
pub mod weights;

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A graph failed structural validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// The modulus of a cyclic group must be at least 2.
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),

    /// No trivalent graph of the requested type exists.
    #[error("no trivalent graph of type ({g}, {n}) exists")]
    DegenerateType { g: usize, n: usize },

    /// An argument failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A search exceeded its node budget.
    #[error("search exceeded the resource bound of {limit} nodes")]
    ResourceBound { limit: u64 },

    /// Two objects living on different grids or moduli were combined.
    #[error("mismatched moduli: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    /// An internal cross-check failed; this indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    /// Malformed JSON input.
    #[error("invalid JSON input: {0}")]
    Json(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error: 3 for resource exhaustion, 2 for
    /// everything else (validation).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceBound { .. } => 3,
            _ => 2,
        }
    }
}

/// Checks a modulus, returning it unchanged when `m >= 2`.
pub(crate) fn check_modulus(m: u32) -> Result<u32> {
    if m < 2 {
        Err(Error::ModulusTooSmall(m))
    } else {
        Ok(m)
    }
}
