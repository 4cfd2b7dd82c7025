//! `bench`: repeated timed solves per case, first run discarded.

use std::fmt::Write;
use std::time::Instant;

use pathwfc::solver::{run, RunStatus};
use pathwfc::{LevelMap, SketchImage, SolverConfig};
use serde::Serialize;

use crate::CliError;

pub struct BenchCase {
    pub name: String,
    pub sketch_name: String,
    pub level: LevelMap,
    pub sketch: SketchImage,
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub input: String,
    pub output: String,
    pub patterns: usize,
    pub size: [usize; 2],
    /// Wall time of every run, in seconds, including the discarded first one.
    pub run_times_s: Vec<f64>,
    pub run_solved: Vec<bool>,
    /// Times averaged: solved runs after the first.
    pub retained_s: Vec<f64>,
    pub mean_s: Option<f64>,
    pub std_dev_s: Option<f64>,
    /// No retained run solved.
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub runs: usize,
    pub discard_first: bool,
    pub parallel: bool,
    pub note: Option<String>,
    pub cases: Vec<CaseReport>,
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation (n - 1 in the denominator).
pub fn sample_std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    (xs.len() >= 2).then(|| {
        let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
        (ss / (xs.len() - 1) as f64).sqrt()
    })
}

fn bench_case(case: &BenchCase, runs: usize) -> CaseReport {
    let mut run_times_s = Vec::with_capacity(runs);
    let mut run_solved = Vec::with_capacity(runs);
    let mut patterns = 0;
    for i in 0..runs {
        let cfg = SolverConfig {
            seed: case.solver.seed.wrapping_add(i as u64),
            snapshot_every: None,
            ..case.solver.clone()
        };
        let t = Instant::now();
        let result = run(&case.level, &case.sketch, &cfg);
        run_times_s.push(t.elapsed().as_secs_f64());
        match result {
            Ok(r) => {
                patterns = r.pattern_counts.total;
                run_solved.push(r.status == RunStatus::Solved);
            }
            Err(_) => run_solved.push(false),
        }
    }
    let retained_s: Vec<f64> = run_times_s
        .iter()
        .zip(&run_solved)
        .skip(1)
        .filter(|(_, &ok)| ok)
        .map(|(&t, _)| t)
        .collect();
    CaseReport {
        name: case.name.clone(),
        input: case.sketch_name.clone(),
        output: case.level.name.clone(),
        patterns,
        size: [case.level.width(), case.level.height()],
        mean_s: mean(&retained_s),
        std_dev_s: sample_std_dev(&retained_s),
        failed: retained_s.is_empty(),
        run_times_s,
        run_solved,
        retained_s,
    }
}

/// Runs every case `runs` times with seeds `seed + i`. Cases run one after
/// another unless `parallel` is set.
pub fn run_bench(cases: &[BenchCase], runs: usize, parallel: bool) -> Result<BenchReport, CliError> {
    if runs < 2 {
        return Err(CliError::Config("bench needs --runs of at least 2".into()));
    }
    let reports = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || bench_case(c, runs))).collect();
            handles.into_iter().map(|h| h.join().expect("bench thread")).collect()
        })
    } else {
        cases.iter().map(|c| bench_case(c, runs)).collect()
    };
    Ok(BenchReport {
        runs,
        discard_first: true,
        parallel,
        note: parallel.then(|| "cases ran concurrently; times include contention".to_string()),
        cases: reports,
    })
}

/// Text table in the layout Input | Output | Nb. Patt. | Size | Time | Std Dev.
pub fn format_table(report: &BenchReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<20} {:<20} {:>9} {:>9} {:>10} {:>10}",
        "Input", "Output", "Nb. Patt.", "Size", "Time (s)", "Std Dev."
    )
    .unwrap();
    for c in &report.cases {
        let fmt = |v: Option<f64>| v.map_or("failed".to_string(), |v| format!("{v:.4}"));
        writeln!(
            out,
            "{:<20} {:<20} {:>9} {:>9} {:>10} {:>10}",
            c.input,
            c.output,
            c.patterns,
            format!("{}x{}", c.size[0], c.size[1]),
            fmt(c.mean_s),
            fmt(c.std_dev_s),
        )
        .unwrap();
    }
    if let Some(note) = &report.note {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}
