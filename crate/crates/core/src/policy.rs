//! Starting-pool policies: where a term's first slice is allocated.
//!
//! The default starts every term in pool 0. The history-aware policies use
//! a term's frequency from the preceding segment to begin in a pool whose
//! slice size fits it: `Ceil` picks the smallest slice size larger than the
//! historical frequency, `Floor` the largest slice size smaller than it,
//! and `Lambda` splits terms into short (pool 0) and long (last pool) at
//! the last slice size. Out-of-vocabulary terms always start in pool 0.
//! Pools are 0-indexed throughout.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::config::PoolConfig;
use crate::error::{Error, Result};

/// Starting-pool policy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpPolicy {
    #[default]
    Default,
    Ceil,
    Floor,
    Lambda,
}

impl SpPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(SpPolicy::Default),
            "ceil" => Ok(SpPolicy::Ceil),
            "floor" => Ok(SpPolicy::Floor),
            "lambda" => Ok(SpPolicy::Lambda),
            other => Err(Error::InvalidConfig(format!(
                "unknown starting-pool policy {other:?} (expected default|ceil|floor|lambda)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpPolicy::Default => "default",
            SpPolicy::Ceil => "ceil",
            SpPolicy::Floor => "floor",
            SpPolicy::Lambda => "lambda",
        }
    }
}

/// Historical term frequencies from a preceding segment. Loaded once before
/// indexing and immutable afterwards.
#[derive(Debug, Clone, Default)]
pub struct HistoryTable {
    map: HashMap<String, u64>,
}

impl HistoryTable {
    pub fn new() -> Self {
        HistoryTable::default()
    }

    pub fn insert(&mut self, term: impl Into<String>, frequency: u64) {
        self.map.insert(term.into(), frequency);
    }

    pub fn get(&self, term: &str) -> Option<u64> {
        self.map.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.map.iter().map(|(t, &f)| (t.as_str(), f))
    }

    /// Read the tab-separated `term<TAB>frequency` format, one entry per
    /// line, no header.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut table = HistoryTable::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let line_no = i as u64 + 1;
            let (term, freq) = line.split_once('\t').ok_or_else(|| Error::Data {
                line: line_no,
                message: "expected term<TAB>frequency".into(),
            })?;
            let frequency: u64 = freq.trim().parse().map_err(|_| Error::Data {
                line: line_no,
                message: format!("bad frequency {freq:?}"),
            })?;
            table.insert(term, frequency);
        }
        Ok(table)
    }

    /// Write the `term<TAB>frequency` format with terms sorted, so output is
    /// deterministic and round-trips through [`HistoryTable::read`].
    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort();
        for (term, freq) in entries {
            writeln!(writer, "{term}\t{freq}")?;
        }
        Ok(())
    }
}

impl FromIterator<(String, u64)> for HistoryTable {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        HistoryTable {
            map: iter.into_iter().collect(),
        }
    }
}

/// Pool where `term`'s first slice is allocated under `policy`.
pub fn starting_pool(
    policy: SpPolicy,
    term: &str,
    history: &HistoryTable,
    config: &PoolConfig,
) -> usize {
    let last = config.last_pool();
    let slice_len = |p: usize| 1u64 << config.exponent(p);
    let h = match (policy, history.get(term)) {
        (SpPolicy::Default, _) | (_, None) => return 0,
        (_, Some(h)) => h,
    };
    match policy {
        SpPolicy::Default => 0,
        SpPolicy::Ceil => {
            // Smallest slice size larger than (or holding exactly) H.
            if h <= slice_len(0) {
                0
            } else if h >= slice_len(last) {
                last
            } else {
                (1..=last)
                    .find(|&p| slice_len(p - 1) < h && h <= slice_len(p))
                    .expect("covered by the clamps above")
            }
        }
        SpPolicy::Floor => {
            // Largest slice size not exceeding H.
            if h < slice_len(0) {
                0
            } else if h >= slice_len(last) {
                last
            } else {
                (0..last)
                    .find(|&p| slice_len(p) <= h && h < slice_len(p + 1))
                    .expect("covered by the clamps above")
            }
        }
        SpPolicy::Lambda => {
            if h >= slice_len(last) {
                last
            } else {
                0
            }
        }
    }
}
