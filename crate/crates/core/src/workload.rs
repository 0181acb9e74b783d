//! Synthetic task streams.
//!
//! Objects are base feature vectors drawn uniformly on a sphere of radius
//! [`OBJECT_RADIUS`]; each task observes one object through independent
//! Gaussian noise. A task repeats an already-seen object with probability
//! `redundancy_rate`, otherwise it introduces a new one. Arrivals form a
//! Poisson process.
//!
//! Each aspect of a workload draws from its own random stream, and every
//! task consumes the same number of draws from each stream whatever the
//! redundancy rate. Two specs that differ only in `redundancy_rate` therefore
//! share arrival times, sizes and noise, which keeps sweeps over redundancy
//! paired.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, StandardNormal};

use crate::domain::{FeatureVector, Task};
use crate::error::{Error, Result};
use crate::rng;

pub const OBJECT_RADIUS: f64 = 10.0;
pub const DEFAULT_SERVICE: &str = "object-detection";

const STREAM_CHOICE: u64 = 1;
const STREAM_NOISE: u64 = 2;
const STREAM_ARRIVAL: u64 = 3;
const STREAM_SIZES: u64 = 4;
const STREAM_OBJECTS: u64 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub num_tasks: usize,
    pub redundancy_rate: f64,
    /// Tasks per second.
    pub arrival_rate: f64,
    pub service: String,
    pub input_size_range: (f64, f64),
    pub output_size_range: (f64, f64),
    pub complexity_range: (f64, f64),
    pub dimension: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            num_tasks: 100,
            redundancy_rate: 0.8,
            arrival_rate: 6.0,
            service: DEFAULT_SERVICE.to_owned(),
            input_size_range: (1.0, 3.0),
            output_size_range: (0.01, 0.05),
            complexity_range: (50.0, 150.0),
            dimension: 32,
            noise_sigma: 0.05,
            seed: 0,
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.redundancy_rate) {
            return Err(Error::param("workload.redundancy", "must be in [0, 1]"));
        }
        if !(self.arrival_rate.is_finite() && self.arrival_rate > 0.0) {
            return Err(Error::param("workload.arrival_rate", "must be > 0"));
        }
        let ranges = [
            ("workload.input_size", self.input_size_range, false),
            ("workload.output_size", self.output_size_range, false),
            ("workload.complexity", self.complexity_range, true),
        ];
        for (field, (lo, hi), strictly_positive) in ranges {
            let lo_ok = if strictly_positive { lo > 0.0 } else { lo >= 0.0 };
            if !(lo.is_finite() && hi.is_finite() && lo_ok && lo <= hi) {
                return Err(Error::param(field, format!("invalid range [{lo}, {hi}]")));
            }
        }
        if self.dimension == 0 {
            return Err(Error::param("workload.dimension", "must be >= 1"));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::param("workload.noise_sigma", "must be >= 0"));
        }
        if self.service.is_empty() {
            return Err(Error::param("workload.service", "must not be empty"));
        }
        Ok(())
    }
}

pub fn object_label(index: usize) -> String {
    format!("obj-{index:05}")
}

/// Base vectors of the objects a workload observes.
#[derive(Debug, Clone)]
pub struct ObjectCatalog {
    dimension: usize,
    noise: Normal<f64>,
    seed: u64,
    objects: Vec<FeatureVector>,
}

impl ObjectCatalog {
    pub fn new(dimension: usize, noise_sigma: f64, seed: u64) -> Result<Self> {
        let noise = Normal::new(0.0, noise_sigma)
            .map_err(|e| Error::param("workload.noise_sigma", e.to_string()))?;
        Ok(Self {
            dimension,
            noise,
            seed,
            objects: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn base(&self, index: usize) -> Option<&FeatureVector> {
        self.objects.get(index)
    }

    /// Create the next object. Its base vector depends only on the seed and
    /// its index.
    pub fn mint(&mut self) -> usize {
        let index = self.objects.len();
        let mut gen = rng::stream(rng::mix(self.seed, index as u64), STREAM_OBJECTS);
        let v = loop {
            let raw: Vec<f64> = (0..self.dimension)
                .map(|_| StandardNormal.sample(&mut gen))
                .collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                break raw.into_iter().map(|x| x / norm * OBJECT_RADIUS).collect();
            }
        };
        self.objects.push(FeatureVector::new(v).expect("finite by construction"));
        index
    }

    /// A noisy observation of object `index`.
    pub fn observe(&self, index: usize, gen: &mut ChaCha8Rng) -> FeatureVector {
        let v = self.objects[index]
            .as_slice()
            .iter()
            .map(|x| x + self.noise.sample(gen))
            .collect();
        FeatureVector::new(v).expect("finite by construction")
    }
}

struct TaskShape {
    arrivals: ChaCha8Rng,
    sizes: ChaCha8Rng,
    gap: Exp<f64>,
    clock: f64,
}

impl TaskShape {
    fn new(spec: &WorkloadSpec) -> Result<Self> {
        Ok(Self {
            arrivals: rng::stream(spec.seed, STREAM_ARRIVAL),
            sizes: rng::stream(spec.seed, STREAM_SIZES),
            gap: Exp::new(spec.arrival_rate)
                .map_err(|e| Error::param("workload.arrival_rate", e.to_string()))?,
            clock: 0.0,
        })
    }

    fn next(&mut self, spec: &WorkloadSpec, id: u64, label: String, features: FeatureVector) -> Result<Task> {
        self.clock += self.gap.sample(&mut self.arrivals);
        let uniform = |g: &mut ChaCha8Rng, (lo, hi): (f64, f64)| lo + (hi - lo) * g.random::<f64>();
        let input = uniform(&mut self.sizes, spec.input_size_range);
        let output = uniform(&mut self.sizes, spec.output_size_range);
        let complexity = uniform(&mut self.sizes, spec.complexity_range);
        Ok(Task::new(id, spec.service.clone(), features, input, output, complexity, self.clock)?.with_label(label))
    }
}

pub fn generate(spec: &WorkloadSpec) -> Result<Vec<Task>> {
    spec.validate()?;
    let mut catalog = ObjectCatalog::new(spec.dimension, spec.noise_sigma, spec.seed)?;
    let mut choice = rng::stream(spec.seed, STREAM_CHOICE);
    let mut noise = rng::stream(spec.seed, STREAM_NOISE);
    let mut shape = TaskShape::new(spec)?;
    let mut tasks = Vec::with_capacity(spec.num_tasks);
    for i in 0..spec.num_tasks {
        let repeat: f64 = choice.random();
        let pick: f64 = choice.random();
        let index = if !catalog.is_empty() && repeat < spec.redundancy_rate {
            ((pick * catalog.len() as f64) as usize).min(catalog.len() - 1)
        } else {
            catalog.mint()
        };
        let features = catalog.observe(index, &mut noise);
        tasks.push(shape.next(spec, i as u64, object_label(index), features)?);
    }
    Ok(tasks)
}

/// Redundancy rate of the ramp: 10% at 10 tasks rising linearly to 80% at
/// 100 tasks, clamped outside that range.
pub fn ramp_rate(num_tasks: usize) -> f64 {
    let n = (num_tasks as f64).clamp(10.0, 100.0);
    0.1 + 0.7 * (n - 10.0) / 90.0
}

/// One spec per task count, redundancy following [`ramp_rate`].
pub fn redundancy_ramp(base: &WorkloadSpec, n_values: &[usize]) -> Result<Vec<WorkloadSpec>> {
    if n_values.is_empty() {
        return Err(Error::param("n_values", "must not be empty"));
    }
    if n_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("n_values", "must be ascending"));
    }
    Ok(n_values
        .iter()
        .map(|&n| WorkloadSpec {
            num_tasks: n,
            redundancy_rate: ramp_rate(n),
            ..base.clone()
        })
        .collect())
}

/// Read a feature dump (`label,v1,...,vd` per line, optional header) and
/// attach arrivals and sizes drawn as in [`generate`].
pub fn ingest(path: impl AsRef<Path>, spec: &WorkloadSpec) -> Result<Vec<Task>> {
    let file = File::open(path.as_ref())?;
    ingest_reader(BufReader::new(file), spec)
}

pub fn ingest_reader<R: Read>(input: R, spec: &WorkloadSpec) -> Result<Vec<Task>> {
    spec.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut shape = TaskShape::new(spec)?;
    let mut tasks = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let is_header = i == 0
            && (rec.get(0) == Some("label") || rec.get(1).is_some_and(|f| f.parse::<f64>().is_err()));
        if is_header {
            continue;
        }
        let label = rec.get(0).unwrap_or_default().to_owned();
        let values = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    reason: format!("bad feature value `{f}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != spec.dimension {
            return Err(Error::Parse {
                line,
                reason: format!(
                    "dimension mismatch: expected {} feature values, got {}",
                    spec.dimension,
                    values.len()
                ),
            });
        }
        let features = FeatureVector::new(values).map_err(|e| Error::Parse {
            line,
            reason: e.to_string(),
        })?;
        tasks.push(shape.next(spec, tasks.len() as u64, label, features)?);
    }
    Ok(tasks)
}
