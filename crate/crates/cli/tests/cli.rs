//! End-to-end tests through the compiled binary: wire formats, flag
//! handling, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn slicepool(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicepool"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_toy_corpus(dir: &Path) {
    fs::write(dir.join("toy.tsv"), "d0\ta b\nd1\ta\nd2\ta b\n").unwrap();
    fs::write(dir.join("toy.q"), "a b\n").unwrap();
}

#[test]
fn build_reports_exact_slot_accounting() {
    let dir = tempfile::tempdir().unwrap();
    write_toy_corpus(dir.path());
    let out = slicepool(&["build", "--corpus", "toy.tsv"], dir.path());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    // f(a)=3 -> 18 slots, f(b)=2 -> 2 slots.
    assert_eq!(report["total_slots"], 20);
    assert_eq!(report["docs"], 3);
    assert_eq!(report["terms"], 2);
    assert_eq!(report["postings"], 5);
    assert_eq!(report["config"], "1-4-7-11");
}

#[test]
fn empty_corpus_reports_zeros() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.tsv"), "").unwrap();
    let out = slicepool(
        &["build", "--corpus", "empty.tsv", "--format", "csv"],
        dir.path(),
    );
    let text = stdout_of(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "1-4-7-11,default,0,0,0,0,0,0");
}

#[test]
fn query_dumps_results_and_emits_metrics() {
    let dir = tempfile::tempdir().unwrap();
    write_toy_corpus(dir.path());
    let out = slicepool(
        &[
            "query",
            "--corpus",
            "toy.tsv",
            "--queries",
            "toy.q",
            "--k",
            "2",
            "--dump-results",
            "--format",
            "csv",
            "--out",
            "report.csv",
        ],
        dir.path(),
    );
    let text = stdout_of(&out);
    assert!(
        text.contains("result\t0\t2 0"),
        "missing dumped results in {text:?}"
    );
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let row = report.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "1-4-7-11");
    assert_eq!(fields[2], "2"); // k
    assert_eq!(fields[5], "20"); // memory slots
    assert_eq!(fields[6], "5"); // postings read
    assert_eq!(fields[7], "1"); // pointer follows
}

#[test]
fn single_trial_has_no_confidence_interval() {
    let dir = tempfile::tempdir().unwrap();
    write_toy_corpus(dir.path());
    let out = slicepool(
        &[
            "query",
            "--corpus",
            "toy.tsv",
            "--queries",
            "toy.q",
            "--trials",
            "1",
        ],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["c_t_star_ms_ci95"].is_null());
    assert!(report["r_k_ms_ci95"].is_null());
    let out = slicepool(
        &[
            "query",
            "--corpus",
            "toy.tsv",
            "--queries",
            "toy.q",
            "--trials",
            "1",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    let text = stdout_of(&out);
    assert!(text.lines().nth(1).unwrap().contains("NaN"));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let out = slicepool(
            &[
                "gen",
                "--docs",
                "200",
                "--vocab",
                "100",
                "--seed",
                "11",
                "--out",
                &format!("{name}.tsv"),
                "--queries",
                "20",
                "--queries-out",
                &format!("{name}.q"),
            ],
            dir.path(),
        );
        stdout_of(&out);
    }
    assert_eq!(
        fs::read(dir.path().join("a.tsv")).unwrap(),
        fs::read(dir.path().join("b.tsv")).unwrap()
    );
    assert_eq!(
        fs::read(dir.path().join("a.q")).unwrap(),
        fs::read(dir.path().join("b.q")).unwrap()
    );
}

#[test]
fn gen_histogram_counts_query_term_postings_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let out = slicepool(
        &[
            "gen",
            "--docs",
            "300",
            "--vocab",
            "50",
            "--seed",
            "3",
            "--out",
            "c.tsv",
            "--queries",
            "40",
            "--queries-out",
            "c.q",
            "--emit-histogram",
            "hist.csv",
        ],
        dir.path(),
    );
    stdout_of(&out);
    let hist = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    let mut lines = hist.lines();
    assert_eq!(lines.next(), Some("postings_length,count"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    // One histogram entry per generated query term.
    let queries = fs::read_to_string(dir.path().join("c.q")).unwrap();
    let terms: u64 = queries
        .lines()
        .map(|l| l.split_whitespace().count() as u64)
        .sum();
    assert_eq!(total, terms);
}

#[test]
fn stats_summarizes_and_exports_term_table() {
    let dir = tempfile::tempdir().unwrap();
    write_toy_corpus(dir.path());
    let out = slicepool(
        &[
            "stats",
            "--corpus",
            "toy.tsv",
            "--terms-out",
            "terms.tsv",
            "--emit-histogram",
            "freqs.csv",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    let text = stdout_of(&out);
    assert_eq!(text.lines().nth(1), Some("3,5,2,3"));
    let terms = fs::read_to_string(dir.path().join("terms.tsv")).unwrap();
    assert_eq!(terms, "a\t3\nb\t2\n");
    let freqs = fs::read_to_string(dir.path().join("freqs.csv")).unwrap();
    assert_eq!(freqs, "frequency,count\n2,1\n3,1\n");
}

#[test]
fn sweep_emits_all_configurations_with_selection() {
    let dir = tempfile::tempdir().unwrap();
    let out = slicepool(
        &[
            "sweep",
            "--vocab",
            "1000",
            "--total-terms",
            "100000",
            "--queries",
            "200",
            "--buckets",
            "25",
        ],
        dir.path(),
    );
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("pools,Z,memory_cost_slots,time_cost_cp_units,selected")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6721); // all pool counts 4..=8 over exponents 0..=12
    assert!(rows.iter().any(|r| r.contains(",1-4-7-11,")));
    let selected = rows.iter().filter(|r| r.ends_with(",1")).count();
    assert!((1..=25).contains(&selected), "{selected} selected");
}

#[test]
fn sweep_accepts_a_frequency_histogram() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("hist.csv"),
        "frequency,count\n5,10\n100,2\n3000,1\n",
    )
    .unwrap();
    let out = slicepool(
        &[
            "sweep",
            "--vocab",
            "1000",
            "--total-terms",
            "100000",
            "--freq-hist",
            "hist.csv",
            "--pools-min",
            "4",
            "--pools-max",
            "4",
        ],
        dir.path(),
    );
    let text = stdout_of(&out);
    // 10*pc(5) + 2*pc(100) + 1*pc(3000) = 10 + 4 + 4 = 18 for the reference
    // configuration.
    let row = text.lines().find(|r| r.contains(",1-4-7-11,")).unwrap();
    assert_eq!(row.split(',').nth(3), Some("18"));
}

#[test]
fn split_half_indexes_second_half_and_writes_history() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.tsv"),
        "d0\thot hot hot\nd1\thot cold\nd2\thot\nd3\tcold cold\n",
    )
    .unwrap();
    let out = slicepool(
        &[
            "build",
            "--corpus",
            "c.tsv",
            "--split-half",
            "--history",
            "hist.tsv",
            "--sp",
            "ceil",
        ],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["docs"], 2);
    // First-half statistics: hot 4, cold 1.
    let hist = fs::read_to_string(dir.path().join("hist.tsv")).unwrap();
    assert_eq!(hist, "cold\t1\nhot\t4\n");
}

#[test]
fn exit_codes_distinguish_usage_data_and_capacity() {
    let dir = tempfile::tempdir().unwrap();
    write_toy_corpus(dir.path());

    // Usage: malformed configuration value.
    let out = slicepool(
        &["build", "--corpus", "toy.tsv", "--config", "9,8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    // Usage: unknown subcommand.
    let out = slicepool(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // Usage: inconsistent gen flags.
    let out = slicepool(
        &["gen", "--seed", "1", "--out", "x.tsv", "--queries", "5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));

    // Data: missing corpus file.
    let out = slicepool(&["build", "--corpus", "nope.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Data: record without a tab.
    fs::write(dir.path().join("bad.tsv"), "no tab in this record\n").unwrap();
    let out = slicepool(&["build", "--corpus", "bad.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "{stderr}");

    // Capacity: strict position handling rejects an over-long document.
    let long_doc = format!(
        "d0\t{}\n",
        (0..300)
            .map(|i| format!("t{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    fs::write(dir.path().join("long.tsv"), long_doc).unwrap();
    let out = slicepool(
        &["build", "--corpus", "long.tsv", "--strict-positions"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));

    // Help is not an error.
    let out = slicepool(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}
