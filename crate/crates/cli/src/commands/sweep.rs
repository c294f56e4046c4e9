use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use anyhow::{Result, ensure};
use rand::SeedableRng;
use rand::rngs::StdRng;
use serde::Serialize;
use slicepool::model::{
    ZipfParams, pareto_bucket_select, sweep_configurations, zipf_discrete_frequency,
};
use slicepool::synth::ZipfSampler;

use crate::args::{OutputFormat, SweepArgs};
use crate::io_util::{open_buffered, out_writer, read_histogram};

#[derive(Debug, Serialize)]
struct SweepRow {
    pools: usize,
    z: String,
    memory_cost_slots: u64,
    time_cost_cp_units: u64,
    selected: u8,
}

/// JSON output carries the run parameters alongside the rows; the CSV
/// column set is fixed.
#[derive(Debug, Serialize)]
struct SweepReport {
    alpha: f64,
    vocab: u64,
    total_terms: f64,
    buckets: usize,
    query_terms: u64,
    frequency_discretization: &'static str,
    configurations: Vec<SweepRow>,
}

pub fn run(args: &SweepArgs) -> Result<()> {
    ensure!(args.exp_min <= args.exp_max, "--exp-min exceeds --exp-max");
    ensure!(
        args.pools_min <= args.pools_max,
        "--pools-min exceeds --pools-max"
    );
    ensure!(args.buckets >= 1, "--buckets must be at least 1");
    let params = ZipfParams::new(args.alpha, args.vocab, args.total_terms)?;

    // Query-term frequency distribution: a histogram file, or ranks sampled
    // from the same vocabulary with the configured bias.
    let freqs: Vec<(u64, u64)> = match &args.freq_hist {
        Some(path) => read_histogram(open_buffered(path)?)?,
        None => {
            let sampler = ZipfSampler::new(args.vocab, args.query_alpha)?;
            let mut rng = StdRng::seed_from_u64(args.seed);
            let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
            for _ in 0..args.queries {
                let rank = sampler.sample(&mut rng);
                let f = zipf_discrete_frequency(rank, &params)?;
                *hist.entry(f).or_default() += 1;
            }
            hist.into_iter().collect()
        }
    };

    let points = sweep_configurations(
        args.exp_min..=args.exp_max,
        args.pools_min..=args.pools_max,
        &params,
        &freqs,
    )?;
    let selected: HashSet<usize> = pareto_bucket_select(&points, args.buckets)
        .into_iter()
        .collect();

    let rows: Vec<SweepRow> = points
        .iter()
        .enumerate()
        .map(|(i, p)| SweepRow {
            pools: p.config.pool_count(),
            z: p.config.to_string(),
            memory_cost_slots: p.memory_cost,
            time_cost_cp_units: p.time_cost,
            selected: selected.contains(&i) as u8,
        })
        .collect();

    let mut out = out_writer(args.out.as_ref())?;
    match args.format {
        OutputFormat::Csv => {
            writeln!(out, "pools,Z,memory_cost_slots,time_cost_cp_units,selected")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.pools, r.z, r.memory_cost_slots, r.time_cost_cp_units, r.selected
                )?;
            }
        }
        OutputFormat::Json => {
            let report = SweepReport {
                alpha: args.alpha,
                vocab: args.vocab,
                total_terms: args.total_terms,
                buckets: args.buckets,
                query_terms: freqs.iter().map(|&(_, c)| c).sum(),
                frequency_discretization: "floor(N*p(r)) clamped to >= 1",
                configurations: rows,
            };
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
