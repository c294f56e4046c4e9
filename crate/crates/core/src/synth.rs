//! Seeded synthetic corpora and query sets with Zipfian term draws.
//!
//! Documents are short (a few dozen tokens, microblog scale), term ranks
//! follow a Zipfian law, and everything is reproducible from the seed — the
//! same seed produces byte-identical files.

use std::io::Write;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::error::{Error, Result};

/// Inverse-CDF sampler over ranks `1..=vocab` with weight `rank^-alpha`.
/// `alpha = 0` gives uniform draws.
pub struct ZipfSampler {
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(vocab: u64, alpha: f64) -> Result<Self> {
        if vocab < 1 {
            return Err(Error::InvalidConfig("vocabulary must be non-empty".into()));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "rank-bias exponent must be finite and non-negative, got {alpha}"
            )));
        }
        let mut cdf = Vec::with_capacity(vocab as usize);
        let mut acc = 0.0f64;
        for rank in 1..=vocab {
            acc += (rank as f64).powf(-alpha);
            cdf.push(acc);
        }
        let total = acc;
        for w in &mut cdf {
            *w /= total;
        }
        Ok(ZipfSampler { cdf })
    }

    pub fn vocab(&self) -> u64 {
        self.cdf.len() as u64
    }

    /// Draw a 1-based rank.
    pub fn sample<R: RngExt>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c < u) as u64 + 1
    }
}

/// Term string for a rank: ranks are stable vocabulary identity.
pub fn term_for_rank(rank: u64) -> String {
    format!("t{rank}")
}

/// Synthetic corpus shape.
#[derive(Debug, Clone)]
pub struct CorpusGenConfig {
    pub docs: u64,
    pub vocab: u64,
    pub alpha: f64,
    pub doc_len_min: usize,
    pub doc_len_max: usize,
    pub seed: u64,
}

impl Default for CorpusGenConfig {
    fn default() -> Self {
        CorpusGenConfig {
            docs: 10_000,
            vocab: 10_000,
            alpha: 1.0,
            doc_len_min: 1,
            doc_len_max: 24,
            seed: 0,
        }
    }
}

/// Synthetic query-set shape. `rank_alpha` biases query terms toward
/// frequent ranks; 0 draws uniformly over the vocabulary.
#[derive(Debug, Clone)]
pub struct QueryGenConfig {
    pub queries: u64,
    pub vocab: u64,
    pub rank_alpha: f64,
    pub len_min: usize,
    pub len_max: usize,
    pub seed: u64,
}

impl Default for QueryGenConfig {
    fn default() -> Self {
        QueryGenConfig {
            queries: 1000,
            vocab: 10_000,
            rank_alpha: 1.0,
            len_min: 1,
            len_max: 4,
            seed: 0,
        }
    }
}

/// Totals from corpus generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSummary {
    pub docs: u64,
    pub tokens: u64,
}

/// Write a corpus in the `external_id<TAB>text` line format.
pub fn generate_corpus<W: Write>(config: &CorpusGenConfig, mut out: W) -> Result<CorpusSummary> {
    if config.doc_len_min < 1 || config.doc_len_min > config.doc_len_max {
        return Err(Error::InvalidConfig(format!(
            "document length range {}..={} is empty or zero",
            config.doc_len_min, config.doc_len_max
        )));
    }
    let sampler = ZipfSampler::new(config.vocab, config.alpha)?;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut tokens = 0u64;
    let mut line = String::new();
    for doc in 0..config.docs {
        line.clear();
        line.push('d');
        line.push_str(&doc.to_string());
        line.push('\t');
        let len = rng.random_range(config.doc_len_min..=config.doc_len_max);
        for i in 0..len {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&term_for_rank(sampler.sample(&mut rng)));
        }
        tokens += len as u64;
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(CorpusSummary {
        docs: config.docs,
        tokens,
    })
}

/// Write a query set, one whitespace-separated query per line. Terms within
/// a query are distinct.
pub fn generate_queries<W: Write>(config: &QueryGenConfig, mut out: W) -> Result<()> {
    if config.len_min < 1 || config.len_min > config.len_max {
        return Err(Error::InvalidConfig(format!(
            "query length range {}..={} is empty or zero",
            config.len_min, config.len_max
        )));
    }
    let sampler = ZipfSampler::new(config.vocab, config.rank_alpha)?;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut terms: Vec<u64> = Vec::new();
    for _ in 0..config.queries {
        let len = rng
            .random_range(config.len_min..=config.len_max)
            .min(config.vocab as usize);
        terms.clear();
        let mut tries = 0;
        while terms.len() < len {
            let rank = sampler.sample(&mut rng);
            if terms.contains(&rank) {
                tries += 1;
                if tries > 100 * len {
                    // Heavily biased draws on a tiny vocabulary; fall back
                    // to the first unused ranks.
                    let mut next = 1;
                    while terms.len() < len {
                        if !terms.contains(&next) {
                            terms.push(next);
                        }
                        next += 1;
                    }
                    break;
                }
                continue;
            }
            terms.push(rank);
        }
        let line = terms
            .iter()
            .map(|&r| term_for_rank(r))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "{line}")?;
    }
    Ok(())
}
