//! The active index segment: tokenization, document ingestion, the term
//! dictionary with tail pointers, and reverse-order postings traversal.
//!
//! Documents are ingested in arrival order and assigned dense ids from 0,
//! so ingestion order is chronology and walking postings backwards yields
//! most-recent-first. The dictionary keeps, per term, the write tail into
//! the slice pools plus the running frequency.

use std::collections::HashMap;

use crate::codec::{MAX_DOC_ID, Posting, SliceAddress};
use crate::config::PoolConfig;
use crate::error::{Error, Result};
use crate::policy::{HistoryTable, SpPolicy, starting_pool};
use crate::pool::{AllocatorStats, PoolSet, TermTail};

/// Documents per segment: the full 24-bit id space.
pub const MAX_DOCS: u64 = 1 << 24;

/// A document can hold at most this many token positions (8-bit positions).
pub const MAX_POSITIONS: usize = 256;

/// One input document: an external identifier and its text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub external_id: String,
    pub text: String,
}

impl Document {
    pub fn new(external_id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            external_id: external_id.into(),
            text: text.into(),
        }
    }
}

/// What to do with documents that tokenize to more positions than fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionOverflow {
    /// Keep the first [`MAX_POSITIONS`] tokens and count the rest.
    #[default]
    Truncate,
    /// Reject the document.
    Strict,
}

/// Split text into lowercase terms. Tokens are runs of alphanumeric
/// characters; a `#` or `@` immediately preceding such a run is kept as
/// part of the token. Positions are 0-based token indices.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut has_content = false;
    let mut flush = |current: &mut String, has_content: &mut bool| {
        if *has_content {
            tokens.push(std::mem::take(current));
        } else {
            current.clear();
        }
        *has_content = false;
    };
    for ch in text.chars() {
        if ch == '#' || ch == '@' {
            flush(&mut current, &mut has_content);
            current.push(ch);
        } else if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                current.push(lc);
            }
            has_content = true;
        } else {
            flush(&mut current, &mut has_content);
        }
    }
    flush(&mut current, &mut has_content);
    tokens
}

struct TermEntry {
    tail: TermTail,
    frequency: u64,
}

/// Segment construction options.
#[derive(Debug, Clone, Default)]
pub struct SegmentOptions {
    pub policy: SpPolicy,
    pub history: HistoryTable,
    pub position_overflow: PositionOverflow,
}

/// One active index segment.
pub struct Segment {
    pools: PoolSet,
    dictionary: HashMap<String, TermEntry>,
    external_ids: Vec<String>,
    policy: SpPolicy,
    history: HistoryTable,
    position_overflow: PositionOverflow,
    truncated_positions: u64,
    postings: u64,
}

impl Segment {
    pub fn new(config: PoolConfig) -> Self {
        Segment::with_options(config, SegmentOptions::default())
    }

    pub fn with_options(config: PoolConfig, options: SegmentOptions) -> Self {
        Segment {
            pools: PoolSet::new(config),
            dictionary: HashMap::new(),
            external_ids: Vec::new(),
            policy: options.policy,
            history: options.history,
            position_overflow: options.position_overflow,
            truncated_positions: 0,
            postings: 0,
        }
    }

    pub fn config(&self) -> &PoolConfig {
        self.pools.config()
    }

    pub fn pools(&self) -> &PoolSet {
        &self.pools
    }

    pub fn doc_count(&self) -> u64 {
        self.external_ids.len() as u64
    }

    pub fn term_count(&self) -> usize {
        self.dictionary.len()
    }

    /// Total postings appended across all terms.
    pub fn posting_count(&self) -> u64 {
        self.postings
    }

    pub fn external_id(&self, doc_id: u32) -> Option<&str> {
        self.external_ids.get(doc_id as usize).map(String::as_str)
    }

    /// Token positions dropped by truncation so far.
    pub fn truncated_positions(&self) -> u64 {
        self.truncated_positions
    }

    pub fn term_frequency(&self, term: &str) -> u64 {
        self.dictionary.get(term).map_or(0, |e| e.frequency)
    }

    pub fn term_tail(&self, term: &str) -> Option<&TermTail> {
        self.dictionary.get(term).map(|e| &e.tail)
    }

    /// Ingest one document: tokenize, assign the next document id, and
    /// append one posting per (term, position) occurrence. A term occurring
    /// several times produces several postings. New terms get their
    /// starting pool from the configured policy.
    pub fn ingest_document(&mut self, doc: &Document) -> Result<u32> {
        if self.doc_count() >= MAX_DOCS {
            return Err(Error::SegmentFull { max: MAX_DOCS });
        }
        let doc_id = self.external_ids.len() as u32;
        debug_assert!(doc_id <= MAX_DOC_ID);
        let terms = tokenize(&doc.text);
        let keep = if terms.len() > MAX_POSITIONS {
            match self.position_overflow {
                PositionOverflow::Strict => {
                    return Err(Error::PositionOverflow {
                        external_id: doc.external_id.clone(),
                        positions: terms.len(),
                        max: MAX_POSITIONS,
                    });
                }
                PositionOverflow::Truncate => {
                    self.truncated_positions += (terms.len() - MAX_POSITIONS) as u64;
                    MAX_POSITIONS
                }
            }
        } else {
            terms.len()
        };
        let Segment {
            pools,
            dictionary,
            policy,
            history,
            ..
        } = self;
        for (position, term) in terms.into_iter().take(keep).enumerate() {
            if !dictionary.contains_key(&term) {
                let pool = starting_pool(*policy, &term, history, pools.config());
                dictionary.insert(
                    term.clone(),
                    TermEntry {
                        tail: TermTail::new(pool),
                        frequency: 0,
                    },
                );
            }
            let entry = dictionary.get_mut(&term).expect("inserted above");
            let word = Posting::new(doc_id, position as u32)?.encode();
            entry.tail = pools.append_posting(entry.tail, word)?;
            entry.frequency += 1;
            self.postings += 1;
        }
        self.external_ids.push(doc.external_id.clone());
        Ok(doc_id)
    }

    /// Iterator over a term's postings, most recent first. Unknown terms
    /// yield an immediately exhausted iterator.
    pub fn open_iterator(&self, term: &str) -> ReversePostingsIterator<'_> {
        match self.dictionary.get(term) {
            Some(entry) => ReversePostingsIterator::new(&self.pools, &entry.tail, entry.frequency),
            None => ReversePostingsIterator::exhausted(&self.pools),
        }
    }

    /// Per-term frequencies of this segment, in the shape consumed as
    /// history by the next segment.
    pub fn export_term_stats(&self) -> HistoryTable {
        self.dictionary
            .iter()
            .map(|(term, entry)| (term.clone(), entry.frequency))
            .collect()
    }

    /// Total allocated memory slots, pointer slots included.
    pub fn memory_slots(&self) -> u64 {
        self.pools.stats().total_slots_allocated
    }

    pub fn allocator_stats(&self) -> AllocatorStats {
        self.pools.stats()
    }

    #[cfg(test)]
    fn force_doc_count(&mut self, count: u64) {
        self.external_ids = (0..count).map(|i| i.to_string()).collect();
    }
}

/// Cursor over one term's postings in exact reverse insertion order.
///
/// Walks the tail slice downwards, then follows each stored previous
/// pointer to the preceding slice's last posting slot. `pointer_follows`
/// counts those dereferences; reaching the chain's starting slice never
/// dereferences its reserved null pointer.
pub struct ReversePostingsIterator<'a> {
    pools: &'a PoolSet,
    remaining: u64,
    cursor: SliceAddress,
    slice_index: u32,
    start_pool: usize,
    pointer_follows: u64,
}

impl<'a> ReversePostingsIterator<'a> {
    /// Traverse a chain directly from its write tail, outside any segment.
    pub fn over_chain(pools: &'a PoolSet, tail: &TermTail, frequency: u64) -> Self {
        ReversePostingsIterator::new(pools, tail, frequency)
    }

    fn new(pools: &'a PoolSet, tail: &TermTail, frequency: u64) -> Self {
        match tail.last_written() {
            Some(cursor) if frequency > 0 => ReversePostingsIterator {
                pools,
                remaining: frequency,
                cursor,
                slice_index: tail.slice_count() - 1,
                start_pool: tail.start_pool(),
                pointer_follows: 0,
            },
            _ => ReversePostingsIterator::exhausted(pools),
        }
    }

    fn exhausted(pools: &'a PoolSet) -> Self {
        ReversePostingsIterator {
            pools,
            remaining: 0,
            cursor: SliceAddress {
                pool: 0,
                ordinal: 0,
                offset: 0,
            },
            slice_index: 0,
            start_pool: 0,
            pointer_follows: 0,
        }
    }

    /// Previous-pointer dereferences performed so far.
    pub fn pointer_follows(&self) -> u64 {
        self.pointer_follows
    }

    /// First posting offset of the current slice: 0 only in the chain's
    /// starting slice when the chain starts in pool 0.
    fn postings_floor(&self) -> u32 {
        if self.slice_index > 0 || self.start_pool > 0 {
            1
        } else {
            0
        }
    }
}

impl Iterator for ReversePostingsIterator<'_> {
    type Item = Posting;

    fn next(&mut self) -> Option<Posting> {
        if self.remaining == 0 {
            return None;
        }
        let word = self
            .pools
            .word(self.cursor.pool, self.cursor.ordinal, self.cursor.offset);
        let posting = Posting::decode(word);
        self.remaining -= 1;
        if self.remaining > 0 {
            if self.cursor.offset > self.postings_floor() {
                self.cursor.offset -= 1;
            } else {
                debug_assert!(
                    self.slice_index > 0,
                    "postings remain below the starting slice"
                );
                let pointer = self.pools.word(self.cursor.pool, self.cursor.ordinal, 0);
                self.cursor = self
                    .pools
                    .config()
                    .layout()
                    .decode(pointer)
                    .expect("previous pointer in a live chain is a valid address");
                self.slice_index -= 1;
                self.pointer_follows += 1;
            }
        }
        Some(posting)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;

    fn segment() -> Segment {
        Segment::new(PoolConfig::production())
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("Hello, World"), ["hello", "world"]);
        assert_eq!(tokenize("#Egypt #egypt"), ["#egypt", "#egypt"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("@User: look!"), ["@user", "look"]);
        // A sigil with no following alphanumerics is a separator.
        assert_eq!(tokenize("# @ ##tag"), ["#tag"]);
        assert_eq!(tokenize("a#b"), ["a", "#b"]);
    }

    #[test]
    fn first_document_postings() {
        let mut seg = segment();
        let id = seg.ingest_document(&Document::new("d0", "a b a")).unwrap();
        assert_eq!(id, 0);
        assert_eq!(seg.term_frequency("a"), 2);
        assert_eq!(seg.term_frequency("b"), 1);
        let got: Vec<(u32, u32)> = seg
            .open_iterator("a")
            .map(|p| (p.doc_id(), p.position()))
            .collect();
        assert_eq!(got, [(0, 2), (0, 0)]);
    }

    #[test]
    fn empty_text_gets_an_id_and_no_postings() {
        let mut seg = segment();
        let id = seg.ingest_document(&Document::new("d0", "")).unwrap();
        assert_eq!(id, 0);
        assert_eq!(seg.doc_count(), 1);
        assert_eq!(seg.memory_slots(), 0);
    }

    #[test]
    fn segment_full_at_doc_id_capacity() {
        let mut seg = segment();
        seg.force_doc_count(MAX_DOCS - 1);
        let id = seg.ingest_document(&Document::new("last", "x")).unwrap();
        assert_eq!(id as u64, MAX_DOCS - 1);
        let err = seg.ingest_document(&Document::new("over", "x"));
        assert!(matches!(err, Err(Error::SegmentFull { .. })));
    }

    #[test]
    fn reverse_iteration_order() {
        let mut seg = segment();
        for d in 0..3 {
            seg.ingest_document(&Document::new(format!("d{d}"), "t"))
                .unwrap();
        }
        let docs: Vec<u32> = seg.open_iterator("t").map(|p| p.doc_id()).collect();
        assert_eq!(docs, [2, 1, 0]);
        assert!(seg.open_iterator("unknown").next().is_none());
    }

    #[test]
    fn pointer_follows_match_model() {
        let mut seg = segment();
        for d in 0..20 {
            seg.ingest_document(&Document::new(format!("d{d}"), "t"))
                .unwrap();
        }
        let mut it = seg.open_iterator("t");
        let drained = it.by_ref().count();
        assert_eq!(drained, 20);
        assert_eq!(it.pointer_follows(), 2);
        assert_eq!(
            it.pointer_follows(),
            model::pointer_count(20, seg.config(), 0).unwrap()
        );
    }

    #[test]
    fn iterator_yields_reverse_of_insertions() {
        let mut seg = segment();
        let mut inserted = Vec::new();
        for d in 0..50u32 {
            let text = "w x w";
            seg.ingest_document(&Document::new(format!("d{d}"), text))
                .unwrap();
            inserted.push((d, 0));
            inserted.push((d, 2));
        }
        let mut expected: Vec<(u32, u32)> = inserted;
        expected.reverse();
        let got: Vec<(u32, u32)> = seg
            .open_iterator("w")
            .map(|p| (p.doc_id(), p.position()))
            .collect();
        assert_eq!(got, expected);
        // Strictly decreasing packed order.
        let packed: Vec<u32> = seg.open_iterator("w").map(|p| p.encode()).collect();
        assert!(packed.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn memory_slots_match_direct_cost() {
        let mut seg = segment();
        for i in 0..100u32 {
            let mut text = String::from("z");
            if i < 5 {
                text.push_str(" y");
            }
            if i == 0 {
                text.push_str(" x");
            }
            seg.ingest_document(&Document::new(format!("d{i}"), &text))
                .unwrap();
        }
        assert_eq!(seg.memory_slots(), 166); // 146 + 18 + 2
        let freqs = [("x", 1u64), ("y", 5), ("z", 100)];
        for (t, f) in freqs {
            assert_eq!(seg.term_frequency(t), f);
        }
        let direct = model::memory_cost_direct(
            seg.config(),
            seg.export_term_stats().iter().map(|(_, f)| (f, 0)),
        )
        .unwrap();
        assert_eq!(seg.memory_slots(), direct);
    }

    #[test]
    fn position_overflow_truncates_by_default() {
        let text = (0..300)
            .map(|i| format!("t{i}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut seg = segment();
        seg.ingest_document(&Document::new("big", &text)).unwrap();
        assert_eq!(seg.truncated_positions(), 44);
        assert_eq!(seg.term_frequency("t255"), 1);
        assert_eq!(seg.term_frequency("t256"), 0);

        let mut strict = Segment::with_options(
            PoolConfig::production(),
            SegmentOptions {
                position_overflow: PositionOverflow::Strict,
                ..Default::default()
            },
        );
        let err = strict.ingest_document(&Document::new("big", &text));
        assert!(matches!(err, Err(Error::PositionOverflow { .. })));
        // Strict rejection consumes no document id.
        assert_eq!(strict.doc_count(), 0);
    }

    #[test]
    fn export_round_trips_through_history_format() {
        let mut seg = segment();
        seg.ingest_document(&Document::new("d0", "a b a")).unwrap();
        let stats = seg.export_term_stats();
        assert_eq!(stats.get("a"), Some(2));
        assert_eq!(stats.get("b"), Some(1));
        let mut bytes = Vec::new();
        stats.write(&mut bytes).unwrap();
        let back = HistoryTable::read(&bytes[..]).unwrap();
        assert_eq!(back.get("a"), Some(2));
        assert_eq!(back.get("b"), Some(1));
        assert_eq!(back.len(), stats.len());

        let empty = segment().export_term_stats();
        assert!(empty.is_empty());
    }

    #[test]
    fn default_policy_ignores_history() {
        let mut history = HistoryTable::new();
        history.insert("hot", 5000);
        let mut with_history = Segment::with_options(
            PoolConfig::production(),
            SegmentOptions {
                policy: SpPolicy::Default,
                history,
                ..Default::default()
            },
        );
        let mut without = segment();
        for seg in [&mut with_history, &mut without] {
            for d in 0..40 {
                seg.ingest_document(&Document::new(format!("d{d}"), "hot cold"))
                    .unwrap();
            }
        }
        assert_eq!(with_history.memory_slots(), without.memory_slots());
        assert_eq!(with_history.term_tail("hot").unwrap().start_pool(), 0);
    }

    #[test]
    fn policy_assigns_starting_pools_once() {
        let mut history = HistoryTable::new();
        history.insert("hot", 20);
        let mut seg = Segment::with_options(
            PoolConfig::production(),
            SegmentOptions {
                policy: SpPolicy::Ceil,
                history,
                ..Default::default()
            },
        );
        seg.ingest_document(&Document::new("d0", "hot cold"))
            .unwrap();
        assert_eq!(seg.term_tail("hot").unwrap().start_pool(), 2);
        assert_eq!(seg.term_tail("cold").unwrap().start_pool(), 0);
        // One posting in a pool-2 slice occupies the whole 128-word slice.
        assert_eq!(seg.memory_slots(), 128 + 2);
    }
}
