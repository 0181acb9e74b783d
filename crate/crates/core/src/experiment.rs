//! Experiment runner: single runs, preset sweeps, the LSH microbenchmark and
//! threshold calibration, with their CSV outputs.
//!
//! Floats are written with fixed precision so repeated runs produce
//! byte-identical files.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;

use crate::config::RunConfig;
use crate::domain::{distance, EntryId, FeatureVector, Task};
use crate::error::{Error, Result};
use crate::lsh::{LshIndex, LshParams};
use crate::rng;
use crate::sim::{self, percentile, Mode, MetricsReport, Overflow, ReuseGain, SimConfig};
use crate::workload::{self, ObjectCatalog, WorkloadSpec};

pub const TASKS_HEADER: &[&str] = &[
    "task_id",
    "service",
    "label",
    "outcome",
    "location",
    "arrival_s",
    "start_s",
    "finish_s",
    "waiting_s",
    "computation_s",
    "completion_s",
    "correct",
];

pub const SUMMARY_HEADER: &[&str] = &[
    "mode",
    "n_tasks",
    "redundancy",
    "trial",
    "mean_completion_s",
    "p90_completion_s",
    "mean_computation_s",
    "mean_waiting_s",
    "utilization_pct",
    "load_cloud",
    "load_edge",
    "load_reuse",
    "reuse_gain_delay",
    "reuse_gain_resource",
    "correctness",
];

pub const SWEEP_PREFIX: &[&str] = &["scenario", "grid_param", "grid_value"];

pub const BENCH_HEADER: &[&str] = &[
    "n",
    "num_tables",
    "bits_per_table",
    "dimension",
    "queries",
    "mean_query_us",
    "mean_candidates",
    "p90_query_us",
];

pub const CALIBRATION_HEADER: &[&str] = &["pair", "samples", "min", "p01", "p50", "p99", "max"];

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

/// Trial label of aggregate rows.
pub const AGGREGATE_TRIAL: &str = "p90";

/// One `summary.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub mode: Mode,
    pub n_tasks: usize,
    pub redundancy: f64,
    /// Trial index, or `None` for the 90th-percentile aggregate.
    pub trial: Option<usize>,
    pub mean_completion: f64,
    pub p90_completion: f64,
    pub mean_computation: f64,
    pub mean_waiting: f64,
    pub utilization_pct: f64,
    pub load_cloud: f64,
    pub load_edge: f64,
    pub load_reuse: f64,
    /// Gain against the paired no-reuse run; `None` for the cloud.
    pub gain: Option<ReuseGain>,
    pub correctness: f64,
}

impl SummaryRow {
    pub fn from_report(report: &MetricsReport, trial: usize, gain: Option<ReuseGain>) -> Self {
        Self {
            mode: report.mode,
            n_tasks: report.num_tasks(),
            redundancy: report.workload.redundancy_rate,
            trial: Some(trial),
            mean_completion: report.completion.mean,
            p90_completion: report.completion.p90,
            mean_computation: report.computation.mean,
            mean_waiting: report.waiting.mean,
            utilization_pct: report.utilization * 100.0,
            load_cloud: report.load_split.cloud,
            load_edge: report.load_split.edge,
            load_reuse: report.load_split.reuse,
            gain,
            correctness: report.correctness_rate,
        }
    }

    /// 90th percentile of every metric over `rows` (all of one mode and
    /// grid point).
    pub fn aggregate(rows: &[SummaryRow]) -> Option<Self> {
        let first = rows.first()?;
        let p = |f: fn(&SummaryRow) -> f64| percentile(&rows.iter().map(f).collect::<Vec<_>>(), 0.9);
        let gain = rows.iter().all(|r| r.gain.is_some()).then(|| ReuseGain {
            delay_gain: p(|r| r.gain.map_or(0.0, |g| g.delay_gain)),
            resource_gain: p(|r| r.gain.map_or(0.0, |g| g.resource_gain)),
        });
        Some(Self {
            mode: first.mode,
            n_tasks: first.n_tasks,
            redundancy: first.redundancy,
            trial: None,
            mean_completion: p(|r| r.mean_completion),
            p90_completion: p(|r| r.p90_completion),
            mean_computation: p(|r| r.mean_computation),
            mean_waiting: p(|r| r.mean_waiting),
            utilization_pct: p(|r| r.utilization_pct),
            load_cloud: p(|r| r.load_cloud),
            load_edge: p(|r| r.load_edge),
            load_reuse: p(|r| r.load_reuse),
            gain,
            correctness: p(|r| r.correctness),
        })
    }

    pub fn fields(&self) -> Vec<String> {
        let (gd, gr) = match self.gain {
            Some(g) => (f6(g.delay_gain), f6(g.resource_gain)),
            None => (String::new(), String::new()),
        };
        vec![
            self.mode.to_string(),
            self.n_tasks.to_string(),
            format!("{:.4}", self.redundancy),
            self.trial.map_or_else(|| AGGREGATE_TRIAL.to_owned(), |t| t.to_string()),
            f6(self.mean_completion),
            f6(self.p90_completion),
            f6(self.mean_computation),
            f6(self.mean_waiting),
            f6(self.utilization_pct),
            f6(self.load_cloud),
            f6(self.load_edge),
            f6(self.load_reuse),
            gd,
            gr,
            f6(self.correctness),
        ]
    }
}

impl fmt::Display for SummaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trial = self.trial.map_or_else(|| AGGREGATE_TRIAL.to_owned(), |t| t.to_string());
        write!(
            f,
            "{} n={} redundancy={:.2} trial={} completion={:.3}s (p90 {:.3}s) computation={:.3}s waiting={:.3}s \
             utilization={:.1}% load cloud/edge/reuse={:.2}/{:.2}/{:.2} correctness={:.3}",
            self.mode,
            self.n_tasks,
            self.redundancy,
            trial,
            self.mean_completion,
            self.p90_completion,
            self.mean_computation,
            self.mean_waiting,
            self.utilization_pct,
            self.load_cloud,
            self.load_edge,
            self.load_reuse,
            self.correctness,
        )?;
        if let Some(g) = self.gain {
            write!(f, " gain delay/resource={:.3}/{:.3}", g.delay_gain, g.resource_gain)?;
        }
        Ok(())
    }
}

fn task_fields(r: &sim::TaskRecord) -> Vec<String> {
    vec![
        r.task_id.to_string(),
        r.service.clone(),
        r.label.clone(),
        r.outcome.as_str().to_owned(),
        r.location.as_str().to_owned(),
        f6(r.arrival_time),
        f6(r.start_time),
        f6(r.finish_time),
        f6(r.waiting_time),
        f6(r.computation_time),
        f6(r.completion_time),
        r.correct.to_string(),
    ]
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("cannot create {}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file)))
}

pub fn write_tasks_csv(path: &Path, report: &MetricsReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(TASKS_HEADER)?;
    for r in &report.records {
        w.write_record(task_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_jobs<J, T, F>(jobs: Vec<J>, f: F) -> Result<Vec<T>>
where
    J: Send,
    T: Send,
    F: Fn(J) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    jobs.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_jobs<J, T, F>(jobs: Vec<J>, f: F) -> Result<Vec<T>>
where
    F: Fn(J) -> Result<T>,
{
    jobs.into_iter().map(f).collect()
}

fn simulate(config: &SimConfig, features_file: Option<&Path>) -> Result<MetricsReport> {
    match features_file {
        None => sim::run(config),
        Some(path) => {
            let tasks: Vec<Task> = workload::ingest(path, &config.workload)?;
            sim::run_tasks(config, &tasks)
        }
    }
}

/// Reports of one trial: the configured mode and, for reuse, the gain
/// against the same trial without reuse.
fn run_trial(config: &SimConfig, features_file: Option<&Path>) -> Result<(MetricsReport, Option<ReuseGain>)> {
    let report = simulate(config, features_file)?;
    let gain = match config.mode {
        Mode::CloudOnly => None,
        Mode::EdgeNoReuse => Some(sim::reuse_gain(&report, &report)?),
        Mode::EdgeWithReuse => {
            let plain = simulate(&config.with_mode(Mode::EdgeNoReuse), features_file)?;
            Some(sim::reuse_gain(&report, &plain)?)
        }
    };
    Ok((report, gain))
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<SummaryRow>,
    pub tasks_csv: PathBuf,
    pub summary_csv: PathBuf,
}

/// Run every trial of `cfg`, write `tasks.csv` (first trial) and
/// `summary.csv` (one row per trial plus the p90 aggregate).
pub fn cmd_run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    cfg.sim.validate()?;
    fs::create_dir_all(out_dir)?;
    let trials: Vec<usize> = (0..cfg.sim.trials).collect();
    let features = cfg.features_file.as_deref();
    let results = map_jobs(trials, |t| {
        let (report, gain) = run_trial(&cfg.sim.for_trial(t), features)?;
        Ok((t, report, gain))
    })?;
    let tasks_csv = out_dir.join("tasks.csv");
    let summary_csv = out_dir.join("summary.csv");
    write_tasks_csv(&tasks_csv, &results[0].1)?;
    let mut rows: Vec<SummaryRow> = results
        .iter()
        .map(|(t, report, gain)| SummaryRow::from_report(report, *t, *gain))
        .collect();
    if rows.len() > 1 {
        rows.extend(SummaryRow::aggregate(&rows));
    }
    write_summary_csv(&summary_csv, &rows)?;
    Ok(RunOutput {
        rows,
        tasks_csv,
        summary_csv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Completion,
    Computation,
    Waiting,
    Utilization,
    Load,
    Gain,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Completion,
        Scenario::Computation,
        Scenario::Waiting,
        Scenario::Utilization,
        Scenario::Load,
        Scenario::Gain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Completion => "completion",
            Scenario::Computation => "computation",
            Scenario::Waiting => "waiting",
            Scenario::Utilization => "utilization",
            Scenario::Load => "load",
            Scenario::Gain => "gain",
        }
    }

    pub fn names() -> String {
        Self::ALL.map(Scenario::as_str).join(", ")
    }

    /// Grid of the preset: task counts on the redundancy ramp, or edge
    /// capacity as a percentage of the slots needed to never queue.
    pub fn grid(self) -> Grid {
        match self {
            Scenario::Completion | Scenario::Computation | Scenario::Waiting | Scenario::Gain => {
                Grid::Tasks((10..=100).step_by(10).collect())
            }
            Scenario::Utilization | Scenario::Load => Grid::CapacityPercent((1..=10).map(|k| k * 10).collect()),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario {
                name: s.to_owned(),
                valid: Self::names(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grid {
    Tasks(Vec<usize>),
    CapacityPercent(Vec<usize>),
}

impl Grid {
    pub fn param(&self) -> &'static str {
        match self {
            Grid::Tasks(_) => "n_tasks",
            Grid::CapacityPercent(_) => "capacity_pct",
        }
    }

    pub fn values(&self) -> &[usize] {
        match self {
            Grid::Tasks(v) | Grid::CapacityPercent(v) => v,
        }
    }
}

/// Settings of a capacity-grid point: 1000 tasks at redundancy 0.8 with
/// overflow to the cloud.
pub const CAPACITY_GRID_TASKS: usize = 1000;
pub const CAPACITY_GRID_REDUNDANCY: f64 = 0.8;

/// Edge slots for `percent` of the no-queueing requirement, at least one.
pub fn slots_for_percent(requirement: usize, percent: usize) -> usize {
    ((requirement * percent).div_ceil(100)).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub grid_param: &'static str,
    pub grid_value: usize,
    pub summary: SummaryRow,
}

impl SweepRow {
    pub fn fields(&self) -> Vec<String> {
        let mut f = vec![
            self.scenario.to_string(),
            self.grid_param.to_owned(),
            self.grid_value.to_string(),
        ];
        f.extend(self.summary.fields());
        f
    }
}

/// Run all three modes across the scenario's grid for `base.trials` trials.
/// Rows are ordered by grid point, mode and trial, each (grid point, mode)
/// block followed by its p90 aggregate.
pub fn sweep(scenario: Scenario, base: &SimConfig) -> Result<Vec<SweepRow>> {
    base.validate()?;
    let grid = scenario.grid();
    let mut jobs = Vec::new();
    for (g, &value) in grid.values().iter().enumerate() {
        for t in 0..base.trials {
            jobs.push((g, value, t));
        }
    }
    let grid_ref = &grid;
    let mut results = map_jobs(jobs, |(g, value, t)| {
        let mut cfg = base.clone();
        match grid_ref {
            Grid::Tasks(_) => {
                cfg.workload.num_tasks = value;
                cfg.workload.redundancy_rate = workload::ramp_rate(value);
            }
            Grid::CapacityPercent(_) => {
                cfg.workload.num_tasks = CAPACITY_GRID_TASKS;
                cfg.workload.redundancy_rate = CAPACITY_GRID_REDUNDANCY;
                cfg.overflow = Overflow::Faster;
            }
        }
        let mut cfg = cfg.for_trial(t);
        if let Grid::CapacityPercent(_) = grid_ref {
            cfg.edge_slots = slots_for_percent(sim::no_overflow_slots(&cfg)?, value);
        }
        let reports: Vec<MetricsReport> = Mode::ALL
            .iter()
            .map(|&m| sim::run(&cfg.with_mode(m)))
            .collect::<Result<_>>()?;
        let plain = &reports[1];
        let rows: Vec<SummaryRow> = reports
            .iter()
            .map(|r| {
                let gain = match r.mode {
                    Mode::CloudOnly => Ok(None),
                    _ => sim::reuse_gain(r, plain).map(Some),
                };
                gain.map(|g| SummaryRow::from_report(r, t, g))
            })
            .collect::<Result<_>>()?;
        Ok((g, t, value, rows))
    })?;
    results.sort_by_key(|(g, t, ..)| (*g, *t));

    let mut out = Vec::new();
    for (g, &value) in grid.values().iter().enumerate() {
        for (m, _) in Mode::ALL.iter().enumerate() {
            let block: Vec<SummaryRow> = results
                .iter()
                .filter(|(gi, ..)| *gi == g)
                .map(|(_, _, _, rows)| rows[m].clone())
                .collect();
            let agg = SummaryRow::aggregate(&block);
            for summary in block.into_iter().chain(agg) {
                out.push(SweepRow {
                    scenario,
                    grid_param: grid.param(),
                    grid_value: value,
                    summary,
                });
            }
        }
    }
    Ok(out)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(SWEEP_PREFIX.iter().chain(SUMMARY_HEADER))?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Run a preset sweep and write `sweep_<scenario>.csv` into `out_dir`.
pub fn cmd_sweep(scenario: &str, base: &SimConfig, out_dir: &Path) -> Result<(PathBuf, Vec<SweepRow>)> {
    let scenario: Scenario = scenario.parse()?;
    let rows = sweep(scenario, base)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("sweep_{scenario}.csv"));
    write_sweep_csv(&path, &rows)?;
    Ok((path, rows))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub params: LshParams,
    pub queries: usize,
    pub mean_query_us: f64,
    pub mean_candidates: f64,
    pub p90_query_us: f64,
}

impl BenchRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.params.num_tables.to_string(),
            self.params.bits_per_table.to_string(),
            self.params.dimension.to_string(),
            self.queries.to_string(),
            format!("{:.3}", self.mean_query_us),
            format!("{:.3}", self.mean_candidates),
            format!("{:.3}", self.p90_query_us),
        ]
    }
}

/// Bits per table for the benchmark: about log2 of its largest n, so
/// buckets stay small as the index grows.
pub const BENCH_BITS_PER_TABLE: usize = 16;

/// Points stored per object in the benchmark's clustered data.
pub const BENCH_CLUSTER_SIZE: usize = 10;

/// Measure query latency and candidate counts on clustered data: `n`
/// stored points, `BENCH_CLUSTER_SIZE` noisy observations per object, and
/// queries that are fresh observations of stored objects.
pub fn bench_lsh(params: &LshParams, n_values: &[usize], queries: usize, noise_sigma: f64) -> Result<Vec<BenchRow>> {
    params.validate()?;
    if n_values.is_empty() {
        return Err(Error::param("n", "at least one n value is required"));
    }
    if queries == 0 {
        return Err(Error::param("queries", "must be >= 1"));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        if n == 0 {
            return Err(Error::param("n", "values must be >= 1"));
        }
        let seed = rng::mix(params.seed, n as u64);
        let mut catalog = ObjectCatalog::new(params.dimension, noise_sigma, seed)?;
        let mut noise = rng::stream(seed, 1);
        let mut index = LshIndex::build(*params)?;
        let objects = n.div_ceil(BENCH_CLUSTER_SIZE);
        for _ in 0..objects {
            catalog.mint();
        }
        for i in 0..n {
            let v = catalog.observe(i % objects, &mut noise);
            index.insert(EntryId(i as u64), v)?;
        }
        let mut pick = rng::stream(seed, 2);
        let qs: Vec<FeatureVector> = (0..queries)
            .map(|_| catalog.observe(pick.random_range(0..objects), &mut noise))
            .collect();
        let mut times = Vec::with_capacity(queries);
        let mut scanned = 0usize;
        for q in &qs {
            let start = Instant::now();
            let res = index.query_with_stats(q, crate::lsh::DEFAULT_MAX_CANDIDATES)?;
            times.push(start.elapsed().as_secs_f64() * 1e6);
            scanned += res.scanned;
            std::hint::black_box(&res);
        }
        rows.push(BenchRow {
            n,
            params: *params,
            queries,
            mean_query_us: times.iter().sum::<f64>() / queries as f64,
            mean_candidates: scanned as f64 / queries as f64,
            p90_query_us: percentile(&times, 0.9),
        });
    }
    Ok(rows)
}

/// Least-squares slope of log(mean query time) against log(n).
pub fn fitted_exponent(rows: &[BenchRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.mean_query_us > 0.0)
        .map(|r| ((r.n as f64).ln(), r.mean_query_us.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn cmd_bench_lsh(
    params: &LshParams,
    n_values: &[usize],
    queries: usize,
    noise_sigma: f64,
    out_dir: &Path,
) -> Result<(PathBuf, Vec<BenchRow>)> {
    let rows = bench_lsh(params, n_values, queries, noise_sigma)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join("bench_lsh.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(BENCH_HEADER)?;
    for r in &rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok((path, rows))
}

/// Distance quantiles between observations of one object and between
/// distinct objects.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub samples: usize,
    pub min: f64,
    pub p01: f64,
    pub p50: f64,
    pub p99: f64,
    pub max: f64,
}

impl DistanceProfile {
    fn of(d: &[f64]) -> Self {
        Self {
            samples: d.len(),
            min: d.iter().copied().fold(f64::INFINITY, f64::min),
            p01: percentile(d, 0.01),
            p50: percentile(d, 0.5),
            p99: percentile(d, 0.99),
            max: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub same_object: DistanceProfile,
    pub distinct_objects: DistanceProfile,
    /// Halfway (geometrically) between the two populations.
    pub suggested_tau_full: f64,
}

impl Calibration {
    /// The thresholds put every sampled same-object pair in Full and every
    /// distinct pair in Miss.
    pub fn separates(&self, tau_full: f64, tau_partial: f64) -> bool {
        self.same_object.max <= tau_full && self.distinct_objects.min > tau_partial
    }
}

/// Sample distances for the workload's object model.
pub fn calibrate(spec: &WorkloadSpec, samples: usize) -> Result<Calibration> {
    spec.validate()?;
    if samples == 0 {
        return Err(Error::param("samples", "must be >= 1"));
    }
    let mut catalog = ObjectCatalog::new(spec.dimension, spec.noise_sigma, spec.seed)?;
    let mut noise = rng::stream(spec.seed, 7);
    let mut same = Vec::with_capacity(samples);
    let mut distinct = Vec::with_capacity(samples);
    for _ in 0..samples {
        let a = catalog.mint();
        let b = catalog.mint();
        let a1 = catalog.observe(a, &mut noise);
        let a2 = catalog.observe(a, &mut noise);
        let b1 = catalog.observe(b, &mut noise);
        same.push(distance(&a1, &a2)?);
        distinct.push(distance(&a1, &b1)?);
    }
    let same_object = DistanceProfile::of(&same);
    let distinct_objects = DistanceProfile::of(&distinct);
    let suggested_tau_full = (same_object.max.max(f64::MIN_POSITIVE) * distinct_objects.min).sqrt();
    Ok(Calibration {
        same_object,
        distinct_objects,
        suggested_tau_full,
    })
}

pub fn write_calibration_csv(path: &Path, c: &Calibration) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CALIBRATION_HEADER)?;
    for (name, p) in [("same_object", &c.same_object), ("distinct_objects", &c.distinct_objects)] {
        w.write_record([
            name.to_owned(),
            p.samples.to_string(),
            f6(p.min),
            f6(p.p01),
            f6(p.p50),
            f6(p.p99),
            f6(p.max),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Write a text file, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
