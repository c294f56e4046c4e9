//! Bit-exact packing of postings and slice addresses into 32-bit words.
//!
//! A posting carries a 24-bit document id and an 8-bit token position. A
//! slice address carries a pool number, a slice ordinal within that pool,
//! and a word offset within the slice; the field widths depend on the pool
//! configuration but always sum to 32. Both value kinds therefore share the
//! storage unit of the index: one 32-bit memory slot.

use crate::error::{Error, Result};

/// Document ids are segment-local and fit in 24 bits.
pub const MAX_DOC_ID: u32 = (1 << 24) - 1;

/// Token positions fit in 8 bits.
pub const MAX_POSITION: u32 = u8::MAX as u32;

/// Sentinel for "no previous slice". Never handed out as a real address:
/// the allocator keeps the one slot that would pack to this word out of
/// allocatable space.
pub const NULL_ADDRESS: u32 = u32::MAX;

/// One term occurrence: document id in the high 24 bits, position in the
/// low 8. Packing this way makes the numeric order of the packed word equal
/// the lexicographic (doc_id, position) order, which query evaluation
/// relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Posting {
    doc_id: u32,
    position: u8,
}

impl Posting {
    pub fn new(doc_id: u32, position: u32) -> Result<Self> {
        if doc_id > MAX_DOC_ID {
            return Err(Error::Range {
                what: "doc_id",
                value: doc_id as u64,
                allowed: "0..=2^24-1",
            });
        }
        if position > MAX_POSITION {
            return Err(Error::Range {
                what: "position",
                value: position as u64,
                allowed: "0..=255",
            });
        }
        Ok(Posting {
            doc_id,
            position: position as u8,
        })
    }

    pub fn doc_id(self) -> u32 {
        self.doc_id
    }

    pub fn position(self) -> u32 {
        self.position as u32
    }

    /// Pack into one 32-bit memory slot.
    pub fn encode(self) -> u32 {
        (self.doc_id << 8) | self.position as u32
    }

    /// Inverse of [`Posting::encode`]; total over all 32-bit words.
    pub fn decode(word: u32) -> Self {
        Posting {
            doc_id: word >> 8,
            position: (word & 0xFF) as u8,
        }
    }
}

/// Unpacked slice address: which pool, which slice in that pool (a global
/// ordinal, not per-block), and a word offset inside the slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SliceAddress {
    pub pool: usize,
    pub ordinal: u32,
    pub offset: u32,
}

/// Per-pool field widths of the packed address form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldWidths {
    pub slice_bits: u32,
    pub offset_bits: u32,
}

/// Packed-address layout derived from the slice-size exponents: the pool
/// number occupies the top `pool_bits`, the slice ordinal the middle bits,
/// and the in-slice offset the low `offset_bits = z_p` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AddressLayout {
    pool_bits: u32,
    widths: Vec<FieldWidths>,
}

impl AddressLayout {
    /// Derive the layout for strictly increasing slice-size exponents.
    ///
    /// `pool_bits` is the smallest width that can address every pool (at
    /// least 1). Each pool's offset field is exactly `z_p` bits wide and the
    /// slice field takes the rest of the word; a pool whose slice field
    /// would shrink below one bit is rejected.
    pub fn derive(exponents: &[u8]) -> Result<Self> {
        let pools = exponents.len();
        if pools == 0 {
            return Err(Error::InvalidConfig("at least one pool required".into()));
        }
        let pool_bits = (usize::BITS - (pools - 1).leading_zeros()).max(1);
        let mut widths = Vec::with_capacity(pools);
        for (p, &z) in exponents.iter().enumerate() {
            let offset_bits = z as u32;
            let used = pool_bits + offset_bits;
            if used >= 32 {
                return Err(Error::InvalidConfig(format!(
                    "pool {p}: pool and offset fields leave no slice bits"
                )));
            }
            let slice_bits = 32 - used;
            if slice_bits < 1 {
                return Err(Error::InvalidConfig(format!(
                    "pool {p}: slice field must be at least one bit"
                )));
            }
            widths.push(FieldWidths {
                slice_bits,
                offset_bits,
            });
        }
        Ok(AddressLayout { pool_bits, widths })
    }

    pub fn pool_bits(&self) -> u32 {
        self.pool_bits
    }

    pub fn pool_count(&self) -> usize {
        self.widths.len()
    }

    pub fn widths(&self, pool: usize) -> FieldWidths {
        self.widths[pool]
    }

    pub fn slice_bits(&self, pool: usize) -> u32 {
        self.widths[pool].slice_bits
    }

    pub fn offset_bits(&self, pool: usize) -> u32 {
        self.widths[pool].offset_bits
    }

    /// Largest slice ordinal representable in `pool`.
    pub fn max_ordinal(&self, pool: usize) -> u32 {
        ((1u64 << self.widths[pool].slice_bits) - 1) as u32
    }

    /// Whether the all-ones pool code denotes a real pool. Only then can a
    /// valid address collide with [`NULL_ADDRESS`].
    pub fn last_pool_code_is_all_ones(&self) -> bool {
        self.pool_count() as u64 == 1u64 << self.pool_bits
    }

    /// Pack an address. Errors if any field exceeds its width or if the
    /// packed word would equal the null sentinel.
    pub fn encode(&self, addr: SliceAddress) -> Result<u32> {
        if addr.pool >= self.pool_count() {
            return Err(Error::InvalidAddress(format!(
                "pool {} out of range (pools: {})",
                addr.pool,
                self.pool_count()
            )));
        }
        let w = self.widths[addr.pool];
        if addr.ordinal as u64 >= 1u64 << w.slice_bits {
            return Err(Error::AddressSpaceExhausted {
                pool: addr.pool,
                ordinal: addr.ordinal as u64,
                slice_bits: w.slice_bits,
            });
        }
        if addr.offset as u64 >= 1u64 << w.offset_bits {
            return Err(Error::InvalidAddress(format!(
                "offset {} does not fit in {} bits",
                addr.offset, w.offset_bits
            )));
        }
        let word = ((addr.pool as u32) << (32 - self.pool_bits))
            | (addr.ordinal << w.offset_bits)
            | addr.offset;
        if word == NULL_ADDRESS {
            return Err(Error::InvalidAddress(
                "address collides with the null sentinel".into(),
            ));
        }
        Ok(word)
    }

    /// Unpack an address. The null sentinel and unused pool codes are
    /// rejected; for every word produced by [`AddressLayout::encode`] this
    /// is the exact inverse.
    pub fn decode(&self, word: u32) -> Result<SliceAddress> {
        if word == NULL_ADDRESS {
            return Err(Error::InvalidAddress("null sentinel".into()));
        }
        let pool = (word >> (32 - self.pool_bits)) as usize;
        if pool >= self.pool_count() {
            return Err(Error::InvalidAddress(format!(
                "pool code {pool} is unused (pools: {})",
                self.pool_count()
            )));
        }
        let w = self.widths[pool];
        let offset_mask = ((1u64 << w.offset_bits) - 1) as u32;
        let ordinal_mask = ((1u64 << w.slice_bits) - 1) as u32;
        Ok(SliceAddress {
            pool,
            ordinal: (word >> w.offset_bits) & ordinal_mask,
            offset: word & offset_mask,
        })
    }
}
