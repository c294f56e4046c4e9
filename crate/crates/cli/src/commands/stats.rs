use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use slicepool::HistoryTable;
use slicepool::corpus::parse_corpus_line;
use slicepool::segment::tokenize;

use crate::args::{OutputFormat, StatsArgs};
use crate::io_util::{open_buffered, out_writer, write_histogram};

#[derive(Debug, Serialize)]
struct CorpusStats {
    docs: u64,
    tokens: u64,
    vocab: usize,
    max_frequency: u64,
}

pub fn run(args: &StatsArgs) -> Result<()> {
    let mut docs = 0u64;
    let mut tokens = 0u64;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for (i, line) in open_buffered(&args.corpus)?.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let doc = parse_corpus_line(&line, i as u64 + 1)?;
        docs += 1;
        for term in tokenize(&doc.text) {
            tokens += 1;
            *counts.entry(term).or_default() += 1;
        }
    }
    let stats = CorpusStats {
        docs,
        tokens,
        vocab: counts.len(),
        max_frequency: counts.values().copied().max().unwrap_or(0),
    };

    if let Some(path) = &args.terms_out {
        let table: HistoryTable = counts.iter().map(|(t, &f)| (t.clone(), f)).collect();
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        table.write(BufWriter::new(file))?;
    }
    if let Some(path) = &args.emit_histogram {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for &f in counts.values() {
            *hist.entry(f).or_default() += 1;
        }
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_histogram(BufWriter::new(file), "frequency", hist)?;
    }

    let mut out = out_writer(args.out.as_ref())?;
    match args.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &stats)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "docs,tokens,vocab,max_frequency")?;
            writeln!(
                out,
                "{},{},{},{}",
                stats.docs, stats.tokens, stats.vocab, stats.max_frequency
            )?;
        }
    }
    Ok(())
}
