//! Shared fixtures for the criterion benches.

use slicepool::PoolConfig;
use slicepool::corpus::{ingest_corpus, read_queries};
use slicepool::query::Query;
use slicepool::segment::Segment;
use slicepool::synth::{CorpusGenConfig, QueryGenConfig, generate_corpus, generate_queries};

pub const BENCH_SEED: u64 = 0xBE9C;

/// A segment filled from a seeded synthetic corpus, plus a query set.
pub fn indexed_fixture(config: &str, docs: u64) -> (Segment, Vec<Query>) {
    let pool_config = PoolConfig::parse(config).expect("valid bench configuration");
    let vocab = (docs / 2).max(100);
    let mut corpus = Vec::new();
    generate_corpus(
        &CorpusGenConfig {
            docs,
            vocab,
            alpha: 1.0,
            doc_len_min: 1,
            doc_len_max: 24,
            seed: BENCH_SEED,
        },
        &mut corpus,
    )
    .expect("corpus generation");
    let mut segment = Segment::new(pool_config);
    ingest_corpus(&mut segment, &corpus[..]).expect("ingestion");

    let mut queries = Vec::new();
    generate_queries(
        &QueryGenConfig {
            queries: 200,
            vocab,
            rank_alpha: 1.0,
            len_min: 1,
            len_max: 4,
            seed: BENCH_SEED + 1,
        },
        &mut queries,
    )
    .expect("query generation");
    let queries = read_queries(&queries[..]).expect("query parsing");
    (segment, queries)
}

/// Raw corpus bytes for ingestion benches.
pub fn corpus_bytes(docs: u64) -> Vec<u8> {
    let mut corpus = Vec::new();
    generate_corpus(
        &CorpusGenConfig {
            docs,
            vocab: (docs / 2).max(100),
            alpha: 1.0,
            doc_len_min: 1,
            doc_len_max: 24,
            seed: BENCH_SEED,
        },
        &mut corpus,
    )
    .expect("corpus generation");
    corpus
}
