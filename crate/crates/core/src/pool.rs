//! Slice allocator: the per-pool block arenas postings are written into.
//!
//! Each pool hands out fixed-size slices (`2^{z_p}` words) carved from
//! demand-allocated `2^15`-word blocks. A term's postings live in a chain of
//! slices of increasing size; every slice after the first, and the first
//! slice itself when the term starts in a pool other than pool 0, reserves
//! slot 0 for a packed "previous" pointer. Written words are never moved or
//! copied afterwards, so addresses stay valid for the life of the segment.

use serde::Serialize;

use crate::codec::{NULL_ADDRESS, SliceAddress};
use crate::config::{BLOCK_LEN, PoolConfig};
use crate::error::{Error, Result};

struct Pool {
    slice_len: u32,
    slices_per_block: u32,
    blocks: Vec<Box<[u32]>>,
    next_slice: u32,
}

impl Pool {
    fn new(slice_len: u32, slices_per_block: u32) -> Self {
        Pool {
            slice_len,
            slices_per_block,
            blocks: Vec::new(),
            next_slice: 0,
        }
    }

    fn word_index(&self, ordinal: u32, offset: u32) -> (usize, usize) {
        let block = (ordinal / self.slices_per_block) as usize;
        let word = ((ordinal % self.slices_per_block) * self.slice_len + offset) as usize;
        (block, word)
    }

    fn word(&self, ordinal: u32, offset: u32) -> u32 {
        let (block, word) = self.word_index(ordinal, offset);
        self.blocks[block][word]
    }

    fn word_mut(&mut self, ordinal: u32, offset: u32) -> &mut u32 {
        let (block, word) = self.word_index(ordinal, offset);
        &mut self.blocks[block][word]
    }
}

/// Write cursor for one term's postings chain.
///
/// Tracks where the next posting goes, how many slices the chain has, and
/// the pool the chain started in. `Default` gives the state before the first
/// occurrence (nothing allocated).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermTail {
    start_pool: u8,
    state: Option<TailState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TailState {
    pool: u8,
    ordinal: u32,
    next_offset: u32,
    slice_count: u32,
}

impl TermTail {
    /// Tail for a term whose first slice will come from `start_pool`.
    pub fn new(start_pool: usize) -> Self {
        TermTail {
            start_pool: start_pool as u8,
            state: None,
        }
    }

    pub fn start_pool(&self) -> usize {
        self.start_pool as usize
    }

    /// Pool the tail slice lives in, once allocated.
    pub fn current_pool(&self) -> Option<usize> {
        self.state.map(|s| s.pool as usize)
    }

    /// Slices in the chain so far.
    pub fn slice_count(&self) -> u32 {
        self.state.map_or(0, |s| s.slice_count)
    }

    /// Address of the most recently written posting.
    pub fn last_written(&self) -> Option<SliceAddress> {
        self.state.map(|s| SliceAddress {
            pool: s.pool as usize,
            ordinal: s.ordinal,
            offset: s.next_offset - 1,
        })
    }

    /// Address of the next insertion slot, while the tail slice has room.
    pub fn next_slot(&self, pools: &PoolSet) -> Option<SliceAddress> {
        let s = self.state?;
        if s.next_offset < pools.capacity_end(s.pool as usize, s.ordinal) {
            Some(SliceAddress {
                pool: s.pool as usize,
                ordinal: s.ordinal,
                offset: s.next_offset,
            })
        } else {
            None
        }
    }

    /// Unwritten slots left in the tail slice.
    pub fn slots_remaining_in_slice(&self, pools: &PoolSet) -> u32 {
        self.state.map_or(0, |s| {
            pools.capacity_end(s.pool as usize, s.ordinal) - s.next_offset
        })
    }
}

impl Default for TermTail {
    fn default() -> Self {
        TermTail::new(0)
    }
}

/// Per-pool allocation counters.
#[derive(Debug, Clone, Serialize)]
pub struct PoolStats {
    pub exponent: u8,
    pub blocks: usize,
    pub slices: u64,
    pub slots_allocated: u64,
}

/// Allocation counters for the whole pool set.
///
/// `total_slots_allocated` counts every word of every allocated slice,
/// pointer slots included; `block_waste` counts the words of demand-grown
/// blocks that no slice occupies yet. The two are reported separately so the
/// slot total matches the per-term step-function accounting exactly.
#[derive(Debug, Clone, Serialize)]
pub struct AllocatorStats {
    pub per_pool: Vec<PoolStats>,
    pub total_slots_allocated: u64,
    pub block_waste: u64,
}

/// The set of `P` slice pools for one active segment.
pub struct PoolSet {
    config: PoolConfig,
    pools: Vec<Pool>,
}

impl PoolSet {
    /// Create empty pools. No blocks are allocated until a slice needs one.
    pub fn new(config: PoolConfig) -> Self {
        let pools = (0..config.pool_count())
            .map(|p| Pool::new(config.slice_len(p), config.slices_per_block(p)))
            .collect();
        PoolSet { config, pools }
    }

    pub fn config(&self) -> &PoolConfig {
        &self.config
    }

    /// Whether this slice ends one slot early because its final slot would
    /// pack to the null sentinel.
    fn is_sentinel_slice(&self, pool: usize, ordinal: u32) -> bool {
        pool == self.config.last_pool()
            && self.config.layout().last_pool_code_is_all_ones()
            && ordinal == self.config.layout().max_ordinal(pool)
    }

    /// One past the last writable offset of a slice.
    fn capacity_end(&self, pool: usize, ordinal: u32) -> u32 {
        let len = self.config.slice_len(pool);
        if self.is_sentinel_slice(pool, ordinal) {
            len - 1
        } else {
            len
        }
    }

    /// Allocate a fresh slice in `pool` and return the address of its slot 0.
    ///
    /// Grows the pool by one block if the current block is full. In pools
    /// other than pool 0 slot 0 is reserved for the previous pointer and
    /// initialized to the null sentinel.
    pub fn allocate_slice(&mut self, pool: usize) -> Result<SliceAddress> {
        let layout = self.config.layout();
        let slice_bits = layout.slice_bits(pool);
        let ordinal = self.pools[pool].next_slice;
        if ordinal as u64 >= 1u64 << slice_bits {
            return Err(Error::AddressSpaceExhausted {
                pool,
                ordinal: ordinal as u64,
                slice_bits,
            });
        }
        let p = &mut self.pools[pool];
        let block = (ordinal / p.slices_per_block) as usize;
        if block == p.blocks.len() {
            p.blocks.push(vec![0u32; BLOCK_LEN].into_boxed_slice());
        }
        p.next_slice = ordinal + 1;
        if pool > 0 {
            *p.word_mut(ordinal, 0) = NULL_ADDRESS;
        }
        Ok(SliceAddress {
            pool,
            ordinal,
            offset: 0,
        })
    }

    /// Append one posting word to a term's chain and return the advanced
    /// tail.
    ///
    /// The first call (empty tail) allocates the starting slice in the
    /// tail's start pool. When the tail slice is exhausted the next slice
    /// comes from the following pool — or from the last pool again once
    /// reached — and its slot 0 receives a packed pointer to the last
    /// posting slot of the slice before it.
    pub fn append_posting(&mut self, tail: TermTail, word: u32) -> Result<TermTail> {
        let state = match tail.state {
            None => {
                let start = tail.start_pool as usize;
                if start >= self.config.pool_count() {
                    return Err(Error::InvalidConfig(format!(
                        "start pool {start} out of range (pools: {})",
                        self.config.pool_count()
                    )));
                }
                let addr = self.allocate_slice(start)?;
                let first_offset = if start > 0 { 1 } else { 0 };
                *self.pools[start].word_mut(addr.ordinal, first_offset) = word;
                TailState {
                    pool: start as u8,
                    ordinal: addr.ordinal,
                    next_offset: first_offset + 1,
                    slice_count: 1,
                }
            }
            Some(st) if st.next_offset < self.capacity_end(st.pool as usize, st.ordinal) => {
                *self.pools[st.pool as usize].word_mut(st.ordinal, st.next_offset) = word;
                TailState {
                    next_offset: st.next_offset + 1,
                    ..st
                }
            }
            Some(st) => {
                let prev_pool = st.pool as usize;
                let next_pool = (prev_pool + 1).min(self.config.last_pool());
                if self.config.slice_len(next_pool) < 2 {
                    // A one-word slice cannot hold a pointer plus a posting;
                    // only the single-pool <0> configuration gets here.
                    return Err(Error::InvalidConfig(
                        "slice chain cannot grow: continuation slices need at least 2 words".into(),
                    ));
                }
                let addr = self.allocate_slice(next_pool)?;
                let prev_last = SliceAddress {
                    pool: prev_pool,
                    ordinal: st.ordinal,
                    offset: self.capacity_end(prev_pool, st.ordinal) - 1,
                };
                let pointer = self.config.layout().encode(prev_last)?;
                let p = &mut self.pools[next_pool];
                *p.word_mut(addr.ordinal, 0) = pointer;
                *p.word_mut(addr.ordinal, 1) = word;
                TailState {
                    pool: next_pool as u8,
                    ordinal: addr.ordinal,
                    next_offset: 2,
                    slice_count: st.slice_count + 1,
                }
            }
        };
        Ok(TermTail {
            start_pool: tail.start_pool,
            state: Some(state),
        })
    }

    /// Read one previously allocated slot.
    pub fn read_slot(&self, addr: SliceAddress) -> Result<u32> {
        if addr.pool >= self.pools.len() {
            return Err(Error::UnallocatedAddress {
                pool: addr.pool,
                ordinal: addr.ordinal,
                offset: addr.offset,
            });
        }
        let p = &self.pools[addr.pool];
        if addr.ordinal >= p.next_slice || addr.offset >= p.slice_len {
            return Err(Error::UnallocatedAddress {
                pool: addr.pool,
                ordinal: addr.ordinal,
                offset: addr.offset,
            });
        }
        Ok(p.word(addr.ordinal, addr.offset))
    }

    /// Unchecked read used by traversal; the address must come from the
    /// structure itself.
    pub(crate) fn word(&self, pool: usize, ordinal: u32, offset: u32) -> u32 {
        self.pools[pool].word(ordinal, offset)
    }

    #[cfg(test)]
    fn force_next_slice(&mut self, pool: usize, ordinal: u32) {
        self.pools[pool].next_slice = ordinal;
    }

    pub fn stats(&self) -> AllocatorStats {
        let mut per_pool = Vec::with_capacity(self.pools.len());
        let mut total = 0u64;
        let mut waste = 0u64;
        for (i, p) in self.pools.iter().enumerate() {
            let slots = p.next_slice as u64 * p.slice_len as u64;
            total += slots;
            waste += p.blocks.len() as u64 * BLOCK_LEN as u64 - slots;
            per_pool.push(PoolStats {
                exponent: self.config.exponent(i),
                blocks: p.blocks.len(),
                slices: p.next_slice as u64,
                slots_allocated: slots,
            });
        }
        AllocatorStats {
            per_pool,
            total_slots_allocated: total,
            block_waste: waste,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Posting;

    fn production_pools() -> PoolSet {
        PoolSet::new(PoolConfig::production())
    }

    #[test]
    fn create_is_empty() {
        let pools = production_pools();
        let stats = pools.stats();
        assert_eq!(stats.total_slots_allocated, 0);
        assert_eq!(stats.block_waste, 0);
        assert!(
            stats
                .per_pool
                .iter()
                .all(|p| p.blocks == 0 && p.slices == 0)
        );
    }

    #[test]
    fn eight_pools_allowed_nine_rejected() {
        assert!(PoolConfig::new(vec![0, 1, 2, 3, 4, 5, 6, 8]).is_ok());
        assert!(PoolConfig::new(vec![0, 1, 2, 3, 4, 5, 6, 7, 8]).is_err());
    }

    #[test]
    fn first_allocation_grows_one_block() {
        let mut pools = production_pools();
        let addr = pools.allocate_slice(0).unwrap();
        assert_eq!(
            addr,
            SliceAddress {
                pool: 0,
                ordinal: 0,
                offset: 0
            }
        );
        let stats = pools.stats();
        assert_eq!(stats.per_pool[0].blocks, 1);
        assert_eq!(stats.per_pool[0].slots_allocated, 2);
    }

    #[test]
    fn second_block_after_16384_slices() {
        // Pool 0 slices are 2 words; 2^15 / 2 = 16384 fit per block.
        let mut pools = production_pools();
        for i in 0..16384 {
            let addr = pools.allocate_slice(0).unwrap();
            assert_eq!(addr.ordinal, i);
        }
        assert_eq!(pools.stats().per_pool[0].blocks, 1);
        let addr = pools.allocate_slice(0).unwrap();
        assert_eq!(
            addr,
            SliceAddress {
                pool: 0,
                ordinal: 16384,
                offset: 0
            }
        );
        assert_eq!(pools.stats().per_pool[0].blocks, 2);
    }

    #[test]
    fn append_crosses_pools_at_capacity() {
        let mut pools = production_pools();
        let mut tail = TermTail::new(0);
        // Two postings fill the pool-0 slice.
        for i in 0..2 {
            tail = pools
                .append_posting(tail, Posting::new(i, 0).unwrap().encode())
                .unwrap();
        }
        assert_eq!(pools.stats().total_slots_allocated, 2);
        assert_eq!(tail.slice_count(), 1);
        // The third allocates a 16-word slice in pool 1 (pointer + 15 slots).
        tail = pools
            .append_posting(tail, Posting::new(2, 0).unwrap().encode())
            .unwrap();
        assert_eq!(pools.stats().total_slots_allocated, 18);
        assert_eq!(tail.slice_count(), 2);
        assert_eq!(tail.current_pool(), Some(1));
    }

    #[test]
    fn last_pool_chains_onto_itself() {
        let mut pools = production_pools();
        let mut tail = TermTail::new(0);
        for i in 0..2192u32 {
            tail = pools
                .append_posting(tail, Posting::new(i / 256, i % 256).unwrap().encode())
                .unwrap();
        }
        // 2 + 16 + 128 + 2048 + 2048
        assert_eq!(pools.stats().total_slots_allocated, 4242);
        assert_eq!(tail.slice_count(), 5);
        assert_eq!(tail.current_pool(), Some(3));
    }

    #[test]
    fn previous_pointer_targets_last_posting_slot() {
        let mut pools = production_pools();
        let mut tail = TermTail::new(0);
        for i in 0..3u32 {
            tail = pools
                .append_posting(tail, Posting::new(i, 0).unwrap().encode())
                .unwrap();
        }
        // Slot 0 of the pool-1 slice points at offset 1 of the pool-0 slice.
        let pointer = pools
            .read_slot(SliceAddress {
                pool: 1,
                ordinal: 0,
                offset: 0,
            })
            .unwrap();
        let target = pools.config().layout().decode(pointer).unwrap();
        assert_eq!(
            target,
            SliceAddress {
                pool: 0,
                ordinal: 0,
                offset: 1
            }
        );
        let word = pools.read_slot(target).unwrap();
        assert_eq!(Posting::decode(word).doc_id(), 1);
    }

    #[test]
    fn starting_slice_in_later_pool_reserves_null_pointer() {
        let mut pools = production_pools();
        let mut tail = TermTail::new(2);
        tail = pools
            .append_posting(tail, Posting::new(0, 0).unwrap().encode())
            .unwrap();
        assert_eq!(tail.current_pool(), Some(2));
        let slot0 = pools
            .read_slot(SliceAddress {
                pool: 2,
                ordinal: 0,
                offset: 0,
            })
            .unwrap();
        assert_eq!(slot0, NULL_ADDRESS);
        // The posting landed in slot 1.
        let slot1 = pools
            .read_slot(SliceAddress {
                pool: 2,
                ordinal: 0,
                offset: 1,
            })
            .unwrap();
        assert_eq!(Posting::decode(slot1).doc_id(), 0);
    }

    #[test]
    fn read_back_first_posting() {
        let mut pools = production_pools();
        let word = Posting::new(7, 3).unwrap().encode();
        let tail = pools.append_posting(TermTail::new(0), word).unwrap();
        let addr = tail.last_written().unwrap();
        assert_eq!(pools.read_slot(addr).unwrap(), word);
    }

    #[test]
    fn unallocated_reads_fault() {
        let pools = production_pools();
        let err = pools.read_slot(SliceAddress {
            pool: 0,
            ordinal: 0,
            offset: 0,
        });
        assert!(matches!(err, Err(Error::UnallocatedAddress { .. })));
        // The null sentinel never resolves to an allocated slot.
        let mut pools = production_pools();
        pools.allocate_slice(3).unwrap();
        let null = pools.config().layout().decode(NULL_ADDRESS);
        assert!(null.is_err());
    }

    #[test]
    fn allocation_exhausts_at_slice_bit_capacity() {
        let mut pools = production_pools();
        // Pool 3 addresses slices with 19 bits.
        pools.force_next_slice(3, 1 << 19);
        assert!(matches!(
            pools.allocate_slice(3),
            Err(Error::AddressSpaceExhausted { pool: 3, .. })
        ));
    }

    #[test]
    fn sentinel_slice_reserves_its_final_slot() {
        let pools = production_pools();
        let max = pools.config().layout().max_ordinal(3);
        assert_eq!(pools.capacity_end(3, max), 2047);
        assert_eq!(pools.capacity_end(3, 0), 2048);
        assert_eq!(pools.capacity_end(0, 0), 2);
        // Three pools leave the all-ones pool code unused, so no address
        // collides with the sentinel and nothing is reserved.
        let three = PoolSet::new(PoolConfig::new(vec![1, 4, 7]).unwrap());
        let max = three.config().layout().max_ordinal(2);
        assert_eq!(three.capacity_end(2, max), 128);
    }

    #[test]
    fn single_pool_zero_exponent_cannot_grow() {
        let mut pools = PoolSet::new(PoolConfig::new(vec![0]).unwrap());
        let tail = pools.append_posting(TermTail::new(0), 42).unwrap();
        assert!(matches!(
            pools.append_posting(tail, 43),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn stats_sum_example() {
        let mut pools = production_pools();
        for (term, f) in [(0u32, 1u32), (1, 5), (2, 100)] {
            let mut tail = TermTail::new(0);
            for i in 0..f {
                tail = pools
                    .append_posting(tail, Posting::new(i, term).unwrap().encode())
                    .unwrap();
            }
        }
        // 2 + 18 + 146
        assert_eq!(pools.stats().total_slots_allocated, 166);
    }

    #[test]
    fn zero_copy_previous_writes_never_move() {
        let mut pools = production_pools();
        let mut tail = TermTail::new(0);
        let mut recorded: Vec<(SliceAddress, u32)> = Vec::new();
        for i in 0..5000u32 {
            let word = Posting::new(i / 4, i % 4).unwrap().encode();
            tail = pools.append_posting(tail, word).unwrap();
            recorded.push((tail.last_written().unwrap(), word));
        }
        for (addr, word) in recorded {
            assert_eq!(pools.read_slot(addr).unwrap(), word);
        }
    }
}
