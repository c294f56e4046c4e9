//! Index construction shared by the `build` and `query` commands.

use std::collections::HashMap;
use std::fs;
use std::fs::File;
use std::io::BufWriter;

use anyhow::{Context, Result};
use serde::Serialize;
use slicepool::corpus::parse_corpus_line;
use slicepool::segment::{PositionOverflow, Segment, SegmentOptions, tokenize};
use slicepool::{HistoryTable, PoolStats};

use crate::args::IndexArgs;

/// Memory accounting of a finished build.
#[derive(Debug, Serialize)]
pub struct BuildReport {
    pub config: String,
    pub sp_policy: String,
    pub docs: u64,
    pub terms: usize,
    pub postings: u64,
    pub total_slots: u64,
    pub block_waste: u64,
    pub truncated_positions: u64,
    pub per_pool: Vec<PoolStats>,
}

impl BuildReport {
    pub fn csv_header() -> &'static str {
        "config,sp_policy,docs,terms,postings,total_slots,block_waste,truncated_positions"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.config,
            self.sp_policy,
            self.docs,
            self.terms,
            self.postings,
            self.total_slots,
            self.block_waste,
            self.truncated_positions
        )
    }
}

/// Build a segment from the corpus named by `args`, honoring policy,
/// history, and half-splitting.
pub fn build_index(args: &IndexArgs) -> Result<(Segment, BuildReport)> {
    let data = fs::read_to_string(&args.corpus)
        .with_context(|| format!("reading corpus {}", args.corpus.display()))?;
    let records: Vec<(u64, &str)> = data
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (i as u64 + 1, l))
        .collect();

    let (history, to_index) = if args.split_half {
        let mid = records.len() / 2;
        let mut counts: HashMap<String, u64> = HashMap::new();
        for &(line_no, line) in &records[..mid] {
            let doc = parse_corpus_line(line, line_no)?;
            for term in tokenize(&doc.text) {
                *counts.entry(term).or_default() += 1;
            }
        }
        let history: HistoryTable = counts.into_iter().collect();
        if let Some(path) = &args.history {
            let file = File::create(path)
                .with_context(|| format!("writing history {}", path.display()))?;
            history.write(BufWriter::new(file))?;
        }
        (history, &records[mid..])
    } else {
        let history = match &args.history {
            Some(path) => HistoryTable::read(crate::io_util::open_buffered(path)?)?,
            None => HistoryTable::new(),
        };
        (history, &records[..])
    };

    let mut segment = Segment::with_options(
        args.config.clone(),
        SegmentOptions {
            policy: args.sp,
            history,
            position_overflow: if args.strict_positions {
                PositionOverflow::Strict
            } else {
                PositionOverflow::Truncate
            },
        },
    );
    for &(line_no, line) in to_index {
        let doc = parse_corpus_line(line, line_no)?;
        segment
            .ingest_document(&doc)
            .with_context(|| format!("indexing record at line {line_no}"))?;
    }

    let stats = segment.allocator_stats();
    let report = BuildReport {
        config: args.config.to_string(),
        sp_policy: args.sp.name().to_string(),
        docs: segment.doc_count(),
        terms: segment.term_count(),
        postings: segment.posting_count(),
        total_slots: stats.total_slots_allocated,
        block_waste: stats.block_waste,
        truncated_positions: segment.truncated_positions(),
        per_pool: stats.per_pool,
    };
    Ok((segment, report))
}
