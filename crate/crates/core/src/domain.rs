//! Domain types shared across the crate.
//!
//! Units: data sizes in megabits, bandwidths in megabits/second, task
//! complexity in abstract compute-units, capacities in compute-units/second
//! and every time in seconds.

use std::fmt;

use crate::error::{Error, Result};

/// Extracted features of a task input, a point in a `d`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidFeatures("dimension must be at least 1".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFeatures(format!(
                "component {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn zeros(dimension: usize) -> Result<Self> {
        Self::new(vec![0.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn check_dimension(&self, expected: usize) -> Result<()> {
        if self.dimension() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dimension(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Euclidean distance between two feature vectors.
pub fn distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    b.check_dimension(a.dimension())?;
    Ok(a.0
        .iter()
        .zip(&b.0)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// `1 - cos(a, b)`. Zero vectors are treated as orthogonal to everything.
pub fn cosine_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    b.check_dimension(a.dimension())?;
    let denom = a.norm() * b.norm();
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((1.0 - a.dot(&b.0) / denom).max(0.0))
}

/// Identifier of a stored reuse entry (also the LSH entry key).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryId(pub u64);

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Result payload of a service execution.
///
/// `label` stands in for the service's answer (the detected object), and is
/// what correctness scoring compares.
#[derive(Debug, Clone, PartialEq)]
pub struct ReuseOutput {
    pub label: String,
    pub output_size: f64,
}

/// One service invocation `<I_t, F_t, O_t>` plus its extracted features.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    id: u64,
    service: String,
    object_label: String,
    features: FeatureVector,
    input_size: f64,
    output_size: f64,
    complexity: f64,
    arrival_time: f64,
}

impl Task {
    pub fn new(
        id: u64,
        service: impl Into<String>,
        features: FeatureVector,
        input_size: f64,
        output_size: f64,
        complexity: f64,
        arrival_time: f64,
    ) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(input_size) {
            return Err(Error::InvalidTask(format!("input_size {input_size} must be >= 0")));
        }
        if !ok(output_size) {
            return Err(Error::InvalidTask(format!("output_size {output_size} must be >= 0")));
        }
        if !(complexity.is_finite() && complexity > 0.0) {
            return Err(Error::InvalidTask(format!("complexity {complexity} must be > 0")));
        }
        if !ok(arrival_time) {
            return Err(Error::InvalidTask(format!("arrival_time {arrival_time} must be >= 0")));
        }
        Ok(Self {
            id,
            service: service.into(),
            object_label: String::new(),
            features,
            input_size,
            output_size,
            complexity,
            arrival_time,
        })
    }

    /// Attach the ground-truth object label (scoring only).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.object_label = label.into();
        self
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn service(&self) -> &str {
        &self.service
    }

    pub fn object_label(&self) -> &str {
        &self.object_label
    }

    pub fn features(&self) -> &FeatureVector {
        &self.features
    }

    pub fn input_size(&self) -> f64 {
        self.input_size
    }

    pub fn output_size(&self) -> f64 {
        self.output_size
    }

    pub fn complexity(&self) -> f64 {
        self.complexity
    }

    pub fn arrival_time(&self) -> f64 {
        self.arrival_time
    }

    /// The part of the task the forwarding plane is allowed to see.
    pub fn request(&self) -> TaskRequest<'_> {
        TaskRequest {
            service: &self.service,
            features: &self.features,
        }
    }

    /// Copy of this task with a different complexity (the residual `t'`).
    pub(crate) fn with_complexity(&self, complexity: f64) -> Task {
        Task {
            complexity,
            ..self.clone()
        }
    }
}

/// Label-free view of a task handed to the forwarding plane.
#[derive(Debug, Clone, Copy)]
pub struct TaskRequest<'a> {
    pub service: &'a str,
    pub features: &'a FeatureVector,
}

/// Network and compute parameters of the user/edge/cloud topology.
#[derive(Debug, Clone, PartialEq)]
pub struct CostParams {
    /// User to edge bandwidth, Mb/s.
    pub edge_bandwidth: f64,
    /// User to cloud bandwidth, Mb/s.
    pub cloud_bandwidth: f64,
    /// Compute units per second of one edge slot.
    pub edge_capacity_rate: f64,
    pub cloud_capacity_rate: f64,
    /// Reuse Store Table lookup cost, seconds.
    pub lookup_cost: f64,
    pub edge_hops: u32,
    pub cloud_hops: u32,
    pub per_hop_latency: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            edge_bandwidth: 50.0,
            cloud_bandwidth: 1.0,
            edge_capacity_rate: 100.0,
            cloud_capacity_rate: 1000.0,
            lookup_cost: 0.001,
            edge_hops: 1,
            cloud_hops: 6,
            per_hop_latency: 0.005,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cost.edge_bandwidth", self.edge_bandwidth),
            ("cost.cloud_bandwidth", self.cloud_bandwidth),
            ("cost.edge_capacity_rate", self.edge_capacity_rate),
            ("cost.cloud_capacity_rate", self.cloud_capacity_rate),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(field, format!("must be > 0, got {v}")));
            }
        }
        if !(self.lookup_cost.is_finite() && self.lookup_cost >= 0.0) {
            return Err(Error::param("cost.lookup_cost", "must be >= 0"));
        }
        if !(self.per_hop_latency.is_finite() && self.per_hop_latency >= 0.0) {
            return Err(Error::param("cost.per_hop_latency", "must be >= 0"));
        }
        if self.edge_hops < 1 {
            return Err(Error::param("cost.edge_hops", "must be >= 1"));
        }
        if self.cloud_hops < self.edge_hops {
            return Err(Error::param("cost.cloud_hops", "must be >= cost.edge_hops"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeKind {
    FullReuse,
    PartialReuse,
    EdgeCompute,
    CloudOffload,
}

impl OutcomeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::FullReuse => "full_reuse",
            OutcomeKind::PartialReuse => "partial_reuse",
            OutcomeKind::EdgeCompute => "edge_compute",
            OutcomeKind::CloudOffload => "cloud_offload",
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The stored entry a reuse outcome was served from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReuseMatch {
    pub entry_id: EntryId,
    pub distance: f64,
    pub output: ReuseOutput,
}

/// How a task was handled. Only constructible through the checked
/// constructors, so the flag combinations are always consistent.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    kind: OutcomeKind,
    reused_fraction: f64,
    matched: Option<ReuseMatch>,
}

impl Outcome {
    pub fn full_reuse(matched: ReuseMatch) -> Self {
        Self {
            kind: OutcomeKind::FullReuse,
            reused_fraction: 1.0,
            matched: Some(matched),
        }
    }

    pub fn partial_reuse(matched: ReuseMatch, reused_fraction: f64) -> Result<Self> {
        if !(reused_fraction > 0.0 && reused_fraction < 1.0) {
            return Err(Error::param(
                "reused_fraction",
                format!("partial reuse needs a fraction in (0, 1), got {reused_fraction}"),
            ));
        }
        Ok(Self {
            kind: OutcomeKind::PartialReuse,
            reused_fraction,
            matched: Some(matched),
        })
    }

    pub fn edge_compute() -> Self {
        Self {
            kind: OutcomeKind::EdgeCompute,
            reused_fraction: 0.0,
            matched: None,
        }
    }

    pub fn cloud_offload() -> Self {
        Self {
            kind: OutcomeKind::CloudOffload,
            reused_fraction: 0.0,
            matched: None,
        }
    }

    pub fn kind(&self) -> OutcomeKind {
        self.kind
    }

    pub fn reused_fraction(&self) -> f64 {
        self.reused_fraction
    }

    pub fn remaining_fraction(&self) -> f64 {
        1.0 - self.reused_fraction
    }

    pub fn matched(&self) -> Option<&ReuseMatch> {
        self.matched.as_ref()
    }

    /// `x_t^e`: handled at the edge.
    pub fn at_edge(&self) -> bool {
        self.kind != OutcomeKind::CloudOffload
    }

    /// `r_t`: full reuse.
    pub fn is_full_reuse(&self) -> bool {
        self.kind == OutcomeKind::FullReuse
    }

    /// `gamma_t`: some stored result was reused.
    pub fn is_reuse(&self) -> bool {
        matches!(self.kind, OutcomeKind::FullReuse | OutcomeKind::PartialReuse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&fv(&[1., 2., 3.]), &fv(&[1., 2., 3.])).unwrap(), 0.0);
        assert_eq!(distance(&fv(&[0., 0.]), &fv(&[3., 4.])).unwrap(), 5.0);
        assert_eq!(
            distance(&fv(&[1., 1., 1., 1.]), &fv(&[2., 2., 2., 2.])).unwrap(),
            2.0
        );
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = distance(&fv(&[1., 2.]), &fv(&[1., 2., 3.])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, actual: 3 }));
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(FeatureVector::new(vec![]).is_err());
        assert!(FeatureVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(FeatureVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn cosine_distance_basics() {
        assert!(cosine_distance(&fv(&[1., 0.]), &fv(&[2., 0.])).unwrap() < 1e-12);
        assert!((cosine_distance(&fv(&[1., 0.]), &fv(&[0., 3.])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn task_validation() {
        let f = fv(&[0.0]);
        assert!(Task::new(0, "s", f.clone(), 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(Task::new(0, "s", f.clone(), -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(Task::new(0, "s", f.clone(), 1.0, -1.0, 1.0, 0.0).is_err());
        assert!(Task::new(0, "s", f.clone(), 1.0, 1.0, 1.0, -0.5).is_err());
        assert!(Task::new(0, "s", f, 0.0, 0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn cost_params_validation() {
        assert!(CostParams::default().validate().is_ok());
        let bad = CostParams {
            cloud_hops: 0,
            ..CostParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = CostParams {
            edge_bandwidth: 0.0,
            ..CostParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn outcome_constructors_hold_invariants() {
        let m = ReuseMatch {
            entry_id: EntryId(1),
            distance: 0.0,
            output: ReuseOutput {
                label: "a".into(),
                output_size: 1.0,
            },
        };
        let full = Outcome::full_reuse(m.clone());
        assert_eq!(full.reused_fraction(), 1.0);
        assert!(full.matched().is_some() && full.is_reuse() && full.is_full_reuse());

        let partial = Outcome::partial_reuse(m.clone(), 0.5).unwrap();
        assert!(partial.matched().is_some() && partial.is_reuse() && !partial.is_full_reuse());
        assert!(Outcome::partial_reuse(m.clone(), 1.0).is_err());
        assert!(Outcome::partial_reuse(m, 0.0).is_err());

        for o in [Outcome::edge_compute(), Outcome::cloud_offload()] {
            assert_eq!(o.reused_fraction(), 0.0);
            assert!(o.matched().is_none() && !o.is_reuse());
        }
        assert!(!Outcome::cloud_offload().at_edge());
        assert!(Outcome::edge_compute().at_edge());
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0f64..100.0, 3)
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in vec3(), b in vec3(), c in vec3()) {
            let (a, b, c) = (fv(&a), fv(&b), fv(&c));
            let ab = distance(&a, &b).unwrap();
            let bc = distance(&b, &c).unwrap();
            let ac = distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
        }

        #[test]
        fn distance_symmetric_and_zero_on_self(a in vec3(), b in vec3()) {
            let (a, b) = (fv(&a), fv(&b));
            prop_assert_eq!(distance(&a, &b).unwrap(), distance(&b, &a).unwrap());
            prop_assert_eq!(distance(&a, &a).unwrap(), 0.0);
        }
    }
}
