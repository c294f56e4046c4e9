//! Query evaluation over a quiescent segment: full postings traversal and
//! top-k conjunctive retrieval in reverse chronological order.

use std::time::{Duration, Instant};

use crate::segment::{ReversePostingsIterator, Segment, tokenize};

/// A conjunctive query: all terms must match. Terms are normalized with the
/// same tokenizer used at ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub terms: Vec<String>,
}

impl Query {
    pub fn new(terms: Vec<String>) -> Self {
        Query { terms }
    }

    /// Parse one whitespace-separated query line.
    pub fn parse(line: &str) -> Self {
        Query {
            terms: tokenize(line),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Counters from draining every query term's postings end to end.
#[derive(Debug, Clone, Default)]
pub struct TraversalReport {
    pub postings_read: u64,
    pub pointer_follows: u64,
    pub wall_time: Duration,
}

/// Read the full postings list of every query term (one drain per term
/// occurrence, never exiting early) and report totals. Unknown terms
/// contribute nothing.
pub fn traverse_all(segment: &Segment, query: &Query) -> TraversalReport {
    let start = Instant::now();
    let mut report = TraversalReport::default();
    for term in &query.terms {
        let mut it = segment.open_iterator(term);
        for posting in it.by_ref() {
            std::hint::black_box(posting);
            report.postings_read += 1;
        }
        report.pointer_follows += it.pointer_follows();
    }
    report.wall_time = start.elapsed();
    report
}

/// Cursor that steps an iterator one *distinct document* at a time,
/// collapsing multiple positions within the same document.
struct DocCursor<'a> {
    it: ReversePostingsIterator<'a>,
    doc: Option<u32>,
}

impl<'a> DocCursor<'a> {
    fn new(mut it: ReversePostingsIterator<'a>) -> Self {
        let doc = it.next().map(|p| p.doc_id());
        DocCursor { it, doc }
    }

    fn advance(&mut self) {
        let Some(current) = self.doc else { return };
        self.doc = loop {
            match self.it.next() {
                Some(p) if p.doc_id() == current => continue,
                Some(p) => break Some(p.doc_id()),
                None => break None,
            }
        };
    }
}

/// The `k` most recent documents containing every query term, descending
/// document id.
///
/// Linear merge over the per-term reverse iterators: the candidate is the
/// highest current document id; whichever cursor sits above the others is
/// advanced (descending ids mean the others have already passed that
/// document), and a match is emitted when all cursors agree. Stops as soon
/// as `k` results are found or any cursor exhausts.
pub fn top_k_conjunctive(segment: &Segment, query: &Query, k: usize) -> Vec<u32> {
    let mut results = Vec::new();
    if k == 0 || query.is_empty() {
        return results;
    }
    let mut terms = query.terms.clone();
    terms.sort();
    terms.dedup();
    let mut cursors: Vec<DocCursor<'_>> = terms
        .iter()
        .map(|t| DocCursor::new(segment.open_iterator(t)))
        .collect();
    'merge: while results.len() < k {
        let mut highest = 0usize;
        let mut all_equal = true;
        for (i, c) in cursors.iter().enumerate() {
            let Some(doc) = c.doc else { break 'merge };
            if doc != cursors[highest].doc.unwrap() {
                all_equal = false;
            }
            if doc > cursors[highest].doc.unwrap() {
                highest = i;
            }
        }
        if all_equal {
            results.push(cursors[0].doc.unwrap());
            for c in &mut cursors {
                c.advance();
            }
        } else {
            cursors[highest].advance();
        }
    }
    results
}
