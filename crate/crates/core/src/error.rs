//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pool configuration that cannot be represented (pool count, exponent
    /// bounds, ordering, or address layout constraints violated).
    #[error("invalid pool configuration: {0}")]
    InvalidConfig(String),

    /// A value outside the range an operation accepts.
    #[error("{what} out of range: {value} (allowed {allowed})")]
    Range {
        what: &'static str,
        value: u64,
        allowed: &'static str,
    },

    /// A slice address whose fields do not fit the configured layout, or that
    /// would collide with the null sentinel.
    #[error("invalid slice address for layout: {0}")]
    InvalidAddress(String),

    /// The slice-ordinal space of a pool is used up.
    #[error(
        "address space exhausted in pool {pool}: ordinal {ordinal} does not fit in {slice_bits} bits"
    )]
    AddressSpaceExhausted {
        pool: usize,
        ordinal: u64,
        slice_bits: u32,
    },

    /// Read of a slot that was never allocated.
    #[error("unallocated address: pool {pool}, slice {ordinal}, offset {offset}")]
    UnallocatedAddress {
        pool: usize,
        ordinal: u32,
        offset: u32,
    },

    /// The segment reached its document-id capacity.
    #[error("segment full: document id space ({max} documents) is used up")]
    SegmentFull { max: u64 },

    /// A document with more token positions than the posting format can hold,
    /// under strict overflow handling.
    #[error("document {external_id:?} has {positions} token positions, maximum is {max}")]
    PositionOverflow {
        external_id: String,
        positions: usize,
        max: usize,
    },

    /// Malformed input data (corpus, history, or query file).
    #[error("data error at line {line}: {message}")]
    Data { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
