use std::io::Write;
use std::time::Instant;

use anyhow::{Result, ensure};
use serde::Serialize;
use slicepool::corpus::read_queries;
use slicepool::query::{top_k_conjunctive, traverse_all};
use slicepool::stats::{ci95_half_width, mean};

use crate::args::{OutputFormat, QueryArgs};
use crate::index::build_index;
use crate::io_util::{open_buffered, out_writer};

/// One run's metrics: deterministic counters plus wall-clock means with
/// 95% confidence half-widths over the trials (absent for a single trial).
#[derive(Debug, Serialize)]
struct QueryReport {
    config: String,
    sp_policy: String,
    k: usize,
    trials: u32,
    queries: usize,
    c_m_star_slots: u64,
    postings_read: u64,
    pointer_follows: u64,
    c_t_star_ms_mean: f64,
    c_t_star_ms_ci95: Option<f64>,
    r_k_ms_mean: f64,
    r_k_ms_ci95: Option<f64>,
    ci_method: &'static str,
}

impl QueryReport {
    fn csv_header() -> &'static str {
        "config,sp_policy,k,trials,queries,c_m_star_slots,postings_read,pointer_follows,\
         c_t_star_ms_mean,c_t_star_ms_ci95,r_k_ms_mean,r_k_ms_ci95"
    }

    fn csv_row(&self) -> String {
        let ci = |v: Option<f64>| v.map_or("NaN".to_string(), |x| format!("{x:.6}"));
        format!(
            "{},{},{},{},{},{},{},{},{:.6},{},{:.6},{}",
            self.config,
            self.sp_policy,
            self.k,
            self.trials,
            self.queries,
            self.c_m_star_slots,
            self.postings_read,
            self.pointer_follows,
            self.c_t_star_ms_mean,
            ci(self.c_t_star_ms_ci95),
            self.r_k_ms_mean,
            ci(self.r_k_ms_ci95),
        )
    }
}

pub fn run(args: &QueryArgs) -> Result<()> {
    ensure!(args.trials >= 1, "--trials must be at least 1");
    ensure!(args.k >= 1, "--k must be at least 1");
    let (segment, build) = build_index(&args.index)?;
    let queries = read_queries(open_buffered(&args.queries)?)?;

    let mut traverse_means_ms: Vec<f64> = Vec::new();
    let mut topk_means_ms: Vec<f64> = Vec::new();
    let mut counts: Option<(u64, u64)> = None;
    let mut first_results: Vec<Vec<u32>> = Vec::new();
    for trial in 0..args.trials {
        let mut postings_read = 0u64;
        let mut pointer_follows = 0u64;
        let mut per_query_ms = Vec::with_capacity(queries.len());
        for q in &queries {
            let report = traverse_all(&segment, q);
            postings_read += report.postings_read;
            pointer_follows += report.pointer_follows;
            per_query_ms.push(report.wall_time.as_secs_f64() * 1e3);
        }
        traverse_means_ms.push(mean(&per_query_ms));

        let mut per_query_ms = Vec::with_capacity(queries.len());
        let mut results = Vec::with_capacity(queries.len());
        for q in &queries {
            let t = Instant::now();
            let docs = top_k_conjunctive(&segment, q, args.k);
            per_query_ms.push(t.elapsed().as_secs_f64() * 1e3);
            results.push(docs);
        }
        topk_means_ms.push(mean(&per_query_ms));

        // Counters and result sets must not vary across trials.
        match counts {
            None => {
                counts = Some((postings_read, pointer_follows));
                first_results = results;
            }
            Some(expected) => {
                ensure!(
                    expected == (postings_read, pointer_follows) && first_results == results,
                    "non-deterministic counters in trial {trial}"
                );
            }
        }
    }
    let (postings_read, pointer_follows) = counts.unwrap_or((0, 0));

    if args.dump_results {
        let stdout = std::io::stdout();
        let mut w = stdout.lock();
        for (i, docs) in first_results.iter().enumerate() {
            let ids: Vec<String> = docs.iter().map(u32::to_string).collect();
            writeln!(w, "result\t{i}\t{}", ids.join(" "))?;
        }
    }

    let report = QueryReport {
        config: build.config,
        sp_policy: build.sp_policy,
        k: args.k,
        trials: args.trials,
        queries: queries.len(),
        c_m_star_slots: build.total_slots,
        postings_read,
        pointer_follows,
        c_t_star_ms_mean: mean(&traverse_means_ms),
        c_t_star_ms_ci95: ci95_half_width(&traverse_means_ms),
        r_k_ms_mean: mean(&topk_means_ms),
        r_k_ms_ci95: ci95_half_width(&topk_means_ms),
        ci_method: "student-t 95%, df = trials - 1",
    };
    let mut out = out_writer(args.out.as_ref())?;
    match args.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "{}", QueryReport::csv_header())?;
            writeln!(out, "{}", report.csv_row())?;
        }
    }
    Ok(())
}
