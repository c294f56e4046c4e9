//! Real-time in-memory inverted indexing with slice-pool postings
//! allocation.
//!
//! Postings for a term are written into chains of fixed-size "slices"
//! drawn from a small number of memory pools with increasing slice sizes,
//! so lists grow without ever copying written data. The crate bundles:
//!
//! - the 32-bit posting and slice-address codecs ([`codec`]),
//! - the slice allocator over demand-grown block arenas ([`pool`]),
//! - an active index segment with dictionary and reverse traversal
//!   ([`segment`]),
//! - full-traversal and top-k conjunctive query evaluation ([`query`]),
//! - the analytical memory/time cost model, configuration sweep, and
//!   Pareto bucketing ([`model`]),
//! - history-based starting-pool policies ([`policy`]),
//! - seeded Zipfian corpus/query generation ([`synth`]) and the
//!   line-oriented input formats ([`corpus`]).

pub mod codec;
pub mod config;
pub mod corpus;
pub mod error;
pub mod model;
pub mod policy;
pub mod pool;
pub mod query;
pub mod segment;
pub mod stats;
pub mod synth;

pub use codec::{AddressLayout, NULL_ADDRESS, Posting, SliceAddress};
pub use config::{BLOCK_EXPONENT, BLOCK_LEN, PoolConfig};
pub use error::{Error, Result};
pub use model::{SweepPoint, ThresholdTable, ZipfParams};
pub use policy::{HistoryTable, SpPolicy};
pub use pool::{AllocatorStats, PoolSet, PoolStats, TermTail};
pub use query::{Query, TraversalReport};
pub use segment::{Document, PositionOverflow, ReversePostingsIterator, Segment, SegmentOptions};
