//! Discrete-event simulation of users, one edge server and the cloud.
//!
//! Timeline of a task handled at the edge:
//!
//! ```text
//! arrival --uplink--> reception --queue--> start --service--> production --downlink--> finish
//! ```
//!
//! * uplink: `I_t / b + hops * per_hop_latency`, downlink: `O_t / b`.
//! * The edge has `edge_slots` servers and a FIFO queue. Service times are
//!   the execution and reuse costs of the cost model: `F_t / f^e` from
//!   scratch, `L` for a full reuse and `L + (1 - phi) F_t / f^e` for a
//!   partial one.
//! * The cloud has unbounded parallelism.
//! * An [`Overflow`] policy may forward a task from the edge to the cloud at
//!   reception instead of letting it join the queue.
//!
//! Metric definitions follow the task's point of view: completion is
//! `finish - arrival`, computation is `production - reception` and waiting is
//! `start - reception`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::domain::{CostParams, Outcome, OutcomeKind, ReuseOutput, Task};
use crate::error::{Error, Result};
use crate::forwarding::EdgeNode;
use crate::reuse_store::{Classification, ReuseStore, StoreConfig};
use crate::rng;
use crate::workload::{self, WorkloadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    CloudOnly,
    EdgeNoReuse,
    EdgeWithReuse,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::CloudOnly, Mode::EdgeNoReuse, Mode::EdgeWithReuse];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::CloudOnly => "cloud_only",
            Mode::EdgeNoReuse => "edge_no_reuse",
            Mode::EdgeWithReuse => "edge_with_reuse",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "cloud_only" | "cloud" => Ok(Mode::CloudOnly),
            "edge_no_reuse" | "edge" => Ok(Mode::EdgeNoReuse),
            "edge_with_reuse" | "reuse" => Ok(Mode::EdgeWithReuse),
            other => Err(format!(
                "unknown mode `{other}` (expected cloud_only, edge_no_reuse or edge_with_reuse)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Edge,
    Cloud,
}

impl Location {
    pub fn as_str(self) -> &'static str {
        match self {
            Location::Edge => "edge",
            Location::Cloud => "cloud",
        }
    }
}

/// When a task received at the edge is forwarded to the cloud instead of
/// joining the queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Overflow {
    /// Always queue at the edge.
    Never,
    /// Forward when the estimated queueing delay exceeds this many seconds.
    DelayBound(f64),
    /// Forward when the cloud is estimated to return the result sooner.
    Faster,
}

impl fmt::Display for Overflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Overflow::Never => f.write_str("never"),
            Overflow::DelayBound(b) => write!(f, "{b}"),
            Overflow::Faster => f.write_str("faster"),
        }
    }
}

impl FromStr for Overflow {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "never" | "none" => Ok(Overflow::Never),
            "faster" => Ok(Overflow::Faster),
            other => match other.parse::<f64>() {
                Ok(b) if b >= 0.0 => Ok(Overflow::DelayBound(b)),
                _ => Err(format!(
                    "expected `never`, `faster` or a non-negative delay in seconds, got `{other}`"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: Mode,
    pub cost: CostParams,
    pub edge_slots: usize,
    pub overflow: Overflow,
    pub store: StoreConfig,
    pub workload: WorkloadSpec,
    /// Services offloaded to the edge; `None` means the workload's service.
    pub offloaded_services: Option<Vec<String>>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            mode: Mode::EdgeWithReuse,
            cost: CostParams::default(),
            edge_slots: 15,
            overflow: Overflow::Never,
            store: StoreConfig::default(),
            workload: WorkloadSpec::default(),
            offloaded_services: None,
            trials: 10,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        self.store.validate()?;
        self.workload.validate()?;
        if self.trials == 0 {
            return Err(Error::param("trials", "must be >= 1"));
        }
        if self.edge_slots == 0 {
            return Err(Error::param("edge.slots", "must be >= 1"));
        }
        if let Overflow::DelayBound(b) = self.overflow {
            if b.is_nan() || b < 0.0 {
                return Err(Error::param("edge.overflow", "delay bound must be >= 0"));
            }
        }
        if self.store.dimension != self.workload.dimension {
            return Err(Error::param(
                "workload.dimension",
                format!(
                    "store dimension {} differs from workload dimension {}",
                    self.store.dimension, self.workload.dimension
                ),
            ));
        }
        Ok(())
    }

    /// Configuration of trial `trial`: workload and hash seeds derived from
    /// `seed`. Every mode gets the same derived seeds for the same trial.
    pub fn for_trial(&self, trial: usize) -> SimConfig {
        let base = rng::mix(self.seed, trial as u64);
        let mut c = self.clone();
        c.workload.seed = rng::mix(base, 1);
        c.store.seed = rng::mix(base, 2);
        c
    }

    pub fn with_mode(&self, mode: Mode) -> SimConfig {
        SimConfig {
            mode,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskRecord {
    pub task_id: u64,
    pub service: String,
    pub label: String,
    pub outcome: OutcomeKind,
    pub location: Location,
    /// Label of the stored result a reuse was served from.
    pub matched_label: Option<String>,
    pub arrival_time: f64,
    pub reception_time: f64,
    pub start_time: f64,
    pub production_time: f64,
    pub finish_time: f64,
    pub waiting_time: f64,
    pub computation_time: f64,
    pub completion_time: f64,
    pub correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub p90: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self { mean: 0.0, p90: 0.0 };
        }
        Self {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            p90: percentile(values, 0.9),
        }
    }
}

/// Linear interpolation between closest ranks.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSplit {
    pub cloud: f64,
    pub edge: f64,
    pub reuse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReuseGain {
    pub delay_gain: f64,
    pub resource_gain: f64,
}

/// Identifies the workload a report was produced from.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadKey {
    pub seed: u64,
    pub num_tasks: usize,
    pub redundancy_rate: f64,
    pub arrival_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub mode: Mode,
    pub workload: WorkloadKey,
    pub edge_slots: usize,
    pub records: Vec<TaskRecord>,
    pub completion: Summary,
    pub computation: Summary,
    pub waiting: Summary,
    /// Busy slot-seconds over `edge_slots * makespan`, in [0, 1].
    pub utilization: f64,
    pub busy_slot_time: f64,
    pub makespan: f64,
    pub load_split: LoadSplit,
    /// Correct reuse-served tasks over reuse-served tasks (1 when none).
    pub correctness_rate: f64,
    pub reuse_served: usize,
    /// Time-averaged number of tasks between arrival and finish.
    pub mean_in_system: f64,
    pub peak_busy_slots: usize,
}

impl MetricsReport {
    pub fn num_tasks(&self) -> usize {
        self.records.len()
    }

    /// Relative gap between the time-averaged number in system and
    /// `arrival_rate * mean completion time`.
    pub fn littles_law_residual(&self) -> f64 {
        let predicted = self.workload.arrival_rate * self.completion.mean;
        if predicted == 0.0 {
            return 0.0;
        }
        (self.mean_in_system - predicted).abs() / predicted
    }
}

/// Whether a finished task's answer matches computing it from scratch.
pub fn correctness_of(outcome: OutcomeKind, task_label: &str, matched_label: Option<&str>) -> bool {
    match outcome {
        OutcomeKind::EdgeCompute | OutcomeKind::CloudOffload => true,
        OutcomeKind::FullReuse | OutcomeKind::PartialReuse => matched_label == Some(task_label),
    }
}

pub fn reuse_gain(with_reuse: &MetricsReport, without: &MetricsReport) -> Result<ReuseGain> {
    if with_reuse.workload != without.workload {
        return Err(Error::WorkloadMismatch(format!(
            "{:?} vs {:?}",
            with_reuse.workload, without.workload
        )));
    }
    let ratio = |a: f64, b: f64| if b == 0.0 { 1.0 } else { a / b };
    Ok(ReuseGain {
        delay_gain: 1.0 - ratio(with_reuse.completion.mean, without.completion.mean),
        resource_gain: 1.0 - ratio(with_reuse.utilization, without.utilization),
    })
}

/// Generate the configured workload and simulate it.
pub fn run(config: &SimConfig) -> Result<MetricsReport> {
    config.validate()?;
    let tasks = workload::generate(&config.workload)?;
    run_tasks(config, &tasks)
}

/// Run every trial of `config`.
pub fn run_trials(config: &SimConfig) -> Result<Vec<MetricsReport>> {
    (0..config.trials).map(|t| run(&config.for_trial(t))).collect()
}

/// Slots needed for no task to ever wait: peak concurrency of a no-reuse
/// edge with unlimited slots.
pub fn no_overflow_slots(config: &SimConfig) -> Result<usize> {
    let probe = SimConfig {
        mode: Mode::EdgeNoReuse,
        edge_slots: config.workload.num_tasks.max(1),
        overflow: Overflow::Never,
        ..config.clone()
    };
    Ok(run(&probe)?.peak_busy_slots.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    // completions sort before receptions at the same instant so a freed slot
    // is offered to the queue head first
    Done,
    Reception,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: EventKind,
    seq: u64,
    task: usize,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |k: EventKind| match k {
            EventKind::Done => 0u8,
            EventKind::Reception => 1,
        };
        other
            .time
            .total_cmp(&self.time)
            .then(rank(other.kind).cmp(&rank(self.kind)))
            .then(other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, Default)]
struct Progress {
    reception: f64,
    start: f64,
    production: f64,
    finish: f64,
    location: Option<Location>,
    outcome: Option<Outcome>,
}

struct Engine<'a> {
    config: &'a SimConfig,
    tasks: &'a [Task],
    node: EdgeNode,
    events: BinaryHeap<Event>,
    seq: u64,
    queue: VecDeque<usize>,
    queued_work: f64,
    estimates: Vec<f64>,
    running_until: Vec<Option<f64>>,
    busy: usize,
    peak_busy: usize,
    busy_time: f64,
    progress: Vec<Progress>,
}

impl<'a> Engine<'a> {
    fn new(config: &'a SimConfig, tasks: &'a [Task]) -> Result<Self> {
        let store = match config.mode {
            Mode::EdgeWithReuse => Some(ReuseStore::new(config.store.clone())?),
            _ => None,
        };
        let offloaded = config
            .offloaded_services
            .clone()
            .unwrap_or_else(|| vec![config.workload.service.clone()]);
        Ok(Self {
            config,
            tasks,
            node: EdgeNode::new(offloaded, store, config.edge_slots),
            events: BinaryHeap::new(),
            seq: 0,
            queue: VecDeque::new(),
            queued_work: 0.0,
            estimates: vec![0.0; tasks.len()],
            running_until: vec![None; config.edge_slots],
            busy: 0,
            peak_busy: 0,
            busy_time: 0.0,
            progress: vec![Progress::default(); tasks.len()],
        })
    }

    fn push(&mut self, time: f64, kind: EventKind, task: usize) {
        self.seq += 1;
        self.events.push(Event {
            time,
            kind,
            seq: self.seq,
            task,
        });
    }

    fn cost(&self) -> &CostParams {
        &self.config.cost
    }

    fn edge_uplink(&self, t: &Task) -> f64 {
        t.input_size() / self.cost().edge_bandwidth + f64::from(self.cost().edge_hops) * self.cost().per_hop_latency
    }

    fn cloud_uplink(&self, t: &Task) -> f64 {
        t.input_size() / self.cost().cloud_bandwidth + f64::from(self.cost().cloud_hops) * self.cost().per_hop_latency
    }

    /// Cloud handling from `reception` on; unbounded parallelism.
    fn finish_in_cloud(&mut self, i: usize, reception: f64) {
        let t = &self.tasks[i];
        let production = reception + t.complexity() / self.cost().cloud_capacity_rate;
        let finish = production + t.output_size() / self.cost().cloud_bandwidth;
        self.progress[i] = Progress {
            reception,
            start: reception,
            production,
            finish,
            location: Some(Location::Cloud),
            outcome: Some(Outcome::cloud_offload()),
        };
    }

    /// Transfer from the edge to the cloud: the remaining hops and the cloud link.
    fn edge_to_cloud(&self, t: &Task) -> f64 {
        let extra_hops = f64::from(self.cost().cloud_hops - self.cost().edge_hops);
        t.input_size() / self.cost().cloud_bandwidth + extra_hops * self.cost().per_hop_latency
    }

    fn forward_to_cloud(&mut self, i: usize, now: f64) {
        let reception = now + self.edge_to_cloud(&self.tasks[i]);
        self.finish_in_cloud(i, reception);
    }

    fn should_forward(&self, t: &Task, estimate: f64, now: f64) -> bool {
        match self.config.overflow {
            Overflow::Never => false,
            Overflow::DelayBound(bound) => self.estimated_wait(now) > bound,
            Overflow::Faster => {
                let p = self.cost();
                let edge = self.estimated_wait(now) + estimate + t.output_size() / p.edge_bandwidth;
                let cloud = self.edge_to_cloud(t)
                    + t.complexity() / p.cloud_capacity_rate
                    + t.output_size() / p.cloud_bandwidth;
                edge > cloud
            }
        }
    }

    fn service_time(&self, t: &Task, outcome: &Outcome) -> f64 {
        let p = self.cost();
        let compute = t.complexity() / p.edge_capacity_rate;
        match outcome.kind() {
            OutcomeKind::FullReuse => p.lookup_cost,
            OutcomeKind::PartialReuse => p.lookup_cost + outcome.remaining_fraction() * compute,
            OutcomeKind::EdgeCompute => compute,
            OutcomeKind::CloudOffload => 0.0,
        }
    }

    /// Service time expected for a task about to be queued.
    fn estimate(&self, t: &Task) -> Result<f64> {
        let p = self.cost();
        let compute = t.complexity() / p.edge_capacity_rate;
        let Some(store) = self.node.store() else {
            return Ok(compute);
        };
        Ok(match store.peek(t.service(), t.features())? {
            Classification::Full(..) => p.lookup_cost,
            Classification::Partial(..) => p.lookup_cost + (1.0 - store.config().partial_fraction) * compute,
            Classification::Miss => compute,
        })
    }

    fn estimated_wait(&self, now: f64) -> f64 {
        if self.busy < self.config.edge_slots && self.queue.is_empty() {
            return 0.0;
        }
        let running: f64 = self
            .running_until
            .iter()
            .flatten()
            .map(|end| (end - now).max(0.0))
            .sum();
        (running + self.queued_work) / self.config.edge_slots as f64
    }

    fn on_reception(&mut self, i: usize, now: f64) -> Result<()> {
        let t = &self.tasks[i];
        if !self.node.is_offloaded(t.service()) {
            let outcome = self.node.decide(t.request(), now)?;
            debug_assert_eq!(outcome.kind(), OutcomeKind::CloudOffload);
            self.forward_to_cloud(i, now);
            return Ok(());
        }
        let est = self.estimate(t)?;
        if self.should_forward(t, est, now) {
            self.forward_to_cloud(i, now);
            return Ok(());
        }
        self.progress[i].reception = now;
        self.estimates[i] = est;
        self.queued_work += est;
        self.queue.push_back(i);
        self.try_start(now)
    }

    fn try_start(&mut self, now: f64) -> Result<()> {
        while self.busy < self.config.edge_slots {
            let Some(i) = self.queue.pop_front() else {
                break;
            };
            self.queued_work = (self.queued_work - self.estimates[i]).max(0.0);
            if self.queue.is_empty() {
                self.queued_work = 0.0;
            }
            let t = &self.tasks[i];
            let outcome = self.node.decide(t.request(), now)?;
            let duration = self.service_time(t, &outcome);
            let slot = self
                .running_until
                .iter()
                .position(Option::is_none)
                .expect("a slot is free");
            self.running_until[slot] = Some(now + duration);
            self.busy += 1;
            self.peak_busy = self.peak_busy.max(self.busy);
            self.busy_time += duration;
            let p = &mut self.progress[i];
            p.start = now;
            p.location = Some(Location::Edge);
            p.outcome = Some(outcome);
            self.push(now + duration, EventKind::Done, i);
        }
        Ok(())
    }

    fn on_done(&mut self, i: usize, now: f64) -> Result<()> {
        let t = &self.tasks[i];
        let start = self.progress[i].start;
        let slot = self
            .running_until
            .iter()
            .position(|s| *s == Some(now) || s.is_some_and(|e| e == now))
            .or_else(|| {
                // fall back to the slot whose end is closest to now
                self.running_until
                    .iter()
                    .enumerate()
                    .filter_map(|(k, s)| s.map(|e| (k, (e - now).abs())))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(k, _)| k)
            })
            .expect("a running slot");
        self.running_until[slot] = None;
        self.busy -= 1;
        debug_assert!(now >= start);

        let outcome = self.progress[i].outcome.clone().expect("started tasks have an outcome");
        let result = ReuseOutput {
            label: t.object_label().to_owned(),
            output_size: t.output_size(),
        };
        self.node.complete(t.request(), &outcome, result, now)?;
        let p = &mut self.progress[i];
        p.production = now;
        p.finish = now + t.output_size() / self.config.cost.edge_bandwidth;
        self.try_start(now)
    }

    fn run(mut self) -> Result<MetricsReport> {
        for (i, t) in self.tasks.iter().enumerate() {
            match self.config.mode {
                Mode::CloudOnly => {
                    let reception = t.arrival_time() + self.cloud_uplink(t);
                    self.finish_in_cloud(i, reception);
                }
                Mode::EdgeNoReuse | Mode::EdgeWithReuse => {
                    let at = t.arrival_time() + self.edge_uplink(t);
                    self.push(at, EventKind::Reception, i);
                }
            }
        }
        while let Some(ev) = self.events.pop() {
            match ev.kind {
                EventKind::Reception => self.on_reception(ev.task, ev.time)?,
                EventKind::Done => self.on_done(ev.task, ev.time)?,
            }
        }
        Ok(self.report())
    }

    fn report(self) -> MetricsReport {
        let records: Vec<TaskRecord> = self
            .tasks
            .iter()
            .zip(&self.progress)
            .map(|(t, p)| {
                let outcome = p.outcome.as_ref().expect("every task is handled");
                let matched_label = outcome.matched().map(|m| m.output.label.clone());
                TaskRecord {
                    task_id: t.id(),
                    service: t.service().to_owned(),
                    label: t.object_label().to_owned(),
                    outcome: outcome.kind(),
                    location: p.location.expect("every task is handled"),
                    correct: correctness_of(outcome.kind(), t.object_label(), matched_label.as_deref()),
                    matched_label,
                    arrival_time: t.arrival_time(),
                    reception_time: p.reception,
                    start_time: p.start,
                    production_time: p.production,
                    finish_time: p.finish,
                    waiting_time: p.start - p.reception,
                    computation_time: p.production - p.reception,
                    completion_time: p.finish - t.arrival_time(),
                }
            })
            .collect();

        let n = records.len().max(1) as f64;
        let collect = |f: fn(&TaskRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
        let makespan = records.iter().map(|r| r.finish_time).fold(0.0, f64::max);
        let utilization = if makespan > 0.0 {
            (self.busy_time / (self.config.edge_slots as f64 * makespan)).min(1.0)
        } else {
            0.0
        };
        let count = |pred: fn(&TaskRecord) -> bool| records.iter().filter(|r| pred(r)).count() as f64;
        let cloud = count(|r| r.location == Location::Cloud);
        let reuse = count(|r| matches!(r.outcome, OutcomeKind::FullReuse | OutcomeKind::PartialReuse));
        let edge = records.len() as f64 - cloud - reuse;
        let load_split = if records.is_empty() {
            LoadSplit {
                cloud: 0.0,
                edge: 0.0,
                reuse: 0.0,
            }
        } else {
            LoadSplit {
                cloud: cloud / n,
                edge: edge / n,
                reuse: reuse / n,
            }
        };
        let reuse_served = reuse as usize;
        let correct_reuse = records
            .iter()
            .filter(|r| matches!(r.outcome, OutcomeKind::FullReuse | OutcomeKind::PartialReuse) && r.correct)
            .count();
        let correctness_rate = if reuse_served == 0 {
            1.0
        } else {
            correct_reuse as f64 / reuse_served as f64
        };

        MetricsReport {
            mode: self.config.mode,
            workload: WorkloadKey {
                seed: self.config.workload.seed,
                num_tasks: records.len(),
                redundancy_rate: self.config.workload.redundancy_rate,
                arrival_rate: self.config.workload.arrival_rate,
            },
            edge_slots: self.config.edge_slots,
            completion: Summary::of(&collect(|r| r.completion_time)),
            computation: Summary::of(&collect(|r| r.computation_time)),
            waiting: Summary::of(&collect(|r| r.waiting_time)),
            utilization,
            busy_slot_time: self.busy_time,
            makespan,
            load_split,
            correctness_rate,
            reuse_served,
            mean_in_system: time_average_in_system(&records, makespan),
            peak_busy_slots: self.peak_busy,
            records,
        }
    }
}

/// Integrate the number of tasks between arrival and finish over
/// `[0, horizon]` by sweeping the arrival/finish events.
fn time_average_in_system(records: &[TaskRecord], horizon: f64) -> f64 {
    if horizon <= 0.0 {
        return 0.0;
    }
    let mut events: Vec<(f64, i64)> = records
        .iter()
        .flat_map(|r| [(r.arrival_time, 1), (r.finish_time, -1)])
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut area, mut level, mut last) = (0.0, 0i64, 0.0);
    for (t, delta) in events {
        area += level as f64 * (t - last);
        level += delta;
        last = t;
    }
    area / horizon
}

/// Simulate an explicit task list under `config` (the workload spec only
/// supplies the service name and arrival rate).
pub fn run_tasks(config: &SimConfig, tasks: &[Task]) -> Result<MetricsReport> {
    config.validate()?;
    if let Some(t) = tasks.iter().find(|t| t.features().dimension() != config.store.dimension) {
        return Err(Error::DimensionMismatch {
            expected: config.store.dimension,
            actual: t.features().dimension(),
        });
    }
    Engine::new(config, tasks)?.run()
}
