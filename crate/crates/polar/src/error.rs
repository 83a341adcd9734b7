//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by code construction, encoding, and decoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Block length must be a power of two and at least 2.
    #[error("block length {0} is not a power of two >= 2")]
    BadBlockLength(usize),

    /// Payload plus CRC must fit in the block.
    #[error("{info} information bits do not fit in block length {block}")]
    TooManyInfoBits { info: usize, block: usize },

    /// A slice had the wrong length for the requested operation.
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// Node size must be a supported power of two.
    #[error("node size {0} is not supported (expected 4 or 8)")]
    BadNodeSize(usize),

    /// List size must be a supported power of two.
    #[error("list size {0} is not supported (expected a power of two in 1..=32)")]
    BadListSize(usize),

    /// List size must be divisible by four for stair-profile selection.
    #[error("list size {0} is not divisible by 4, required for stair selection")]
    ListNotDivisibleBy4(usize),

    /// Selection profile rows must be positive and non-increasing.
    #[error("selection profile ({x}, {y}, {z}) violates x >= y >= z >= 1")]
    BadProfile { x: usize, y: usize, z: usize },

    /// Selection profile keeps more candidates than a node can produce.
    #[error("profile keep count {keep} exceeds the {max} candidates of a size-{node} node")]
    ProfileTooWide {
        keep: usize,
        max: usize,
        node: usize,
    },

    /// Requested more subset sums than exist.
    #[error("requested {k} smallest sums but only {available} subsets exist")]
    TooManySums { k: usize, available: usize },

    /// Closed-form selection only exists for a few keep counts.
    #[error("no closed form for keep count {0} on this node class")]
    BadClosedFormK(usize),

    /// CRC width/polynomial combination is invalid.
    #[error("CRC polynomial {poly:#x} does not fit in width {width}")]
    BadCrc { width: usize, poly: u64 },

    /// A reliability override file could not be used.
    #[error("reliability file: {0}")]
    ReliabilityFile(String),

    /// Sorter sizing was asked for an unsupported input count.
    #[error("sorter input count {0} is not an even power-of-two arrangement")]
    BadSorterInputs(usize),

    /// Partial-selection sizing needs a profile.
    #[error("a selection profile is required for partial-selection sizing")]
    MissingProfile,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
