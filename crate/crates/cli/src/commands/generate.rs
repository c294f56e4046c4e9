use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use slicepool::segment::tokenize;
use slicepool::synth::{CorpusGenConfig, QueryGenConfig, generate_corpus, generate_queries};

use crate::UsageError;
use crate::args::GenArgs;
use crate::io_util::{open_buffered, write_histogram};

#[derive(Debug, Serialize)]
struct GenSummary {
    docs: u64,
    tokens: u64,
    vocab: u64,
    alpha: f64,
    seed: u64,
    queries: u64,
}

pub fn run(args: &GenArgs) -> Result<()> {
    if args.queries > 0 && args.queries_out.is_none() {
        return Err(UsageError::new("--queries requires --queries-out").into());
    }
    if args.emit_histogram.is_some() && args.queries == 0 {
        return Err(UsageError::new("--emit-histogram requires a generated query set").into());
    }

    let corpus_cfg = CorpusGenConfig {
        docs: args.docs,
        vocab: args.vocab,
        alpha: args.alpha,
        doc_len_min: args.doc_len_min,
        doc_len_max: args.doc_len_max,
        seed: args.seed,
    };
    let corpus_file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let summary = generate_corpus(&corpus_cfg, BufWriter::new(corpus_file))?;

    if let Some(queries_out) = &args.queries_out {
        let query_cfg = QueryGenConfig {
            queries: args.queries,
            vocab: args.vocab,
            rank_alpha: args.query_alpha,
            len_min: args.query_len_min,
            len_max: args.query_len_max,
            // Decorrelate from the corpus stream while staying seeded.
            seed: args.seed.wrapping_add(1),
        };
        let query_file = File::create(queries_out)
            .with_context(|| format!("creating {}", queries_out.display()))?;
        generate_queries(&query_cfg, BufWriter::new(query_file))?;

        if let Some(hist_path) = &args.emit_histogram {
            // Postings length each generated query term would have on the
            // generated corpus.
            let mut counts: HashMap<String, u64> = HashMap::new();
            for line in open_buffered(&args.out)?.lines() {
                let line = line?;
                let Some((_, text)) = line.split_once('\t') else {
                    continue;
                };
                for term in tokenize(text) {
                    *counts.entry(term).or_default() += 1;
                }
            }
            let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
            for line in open_buffered(queries_out)?.lines() {
                for term in tokenize(&line?) {
                    let len = counts.get(&term).copied().unwrap_or(0);
                    *hist.entry(len).or_default() += 1;
                }
            }
            let file = File::create(hist_path)
                .with_context(|| format!("creating {}", hist_path.display()))?;
            write_histogram(BufWriter::new(file), "postings_length", hist)?;
        }
    }

    let report = GenSummary {
        docs: summary.docs,
        tokens: summary.tokens,
        vocab: args.vocab,
        alpha: args.alpha,
        seed: args.seed,
        queries: args.queries,
    };
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    Ok(())
}
