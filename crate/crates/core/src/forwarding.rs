//! Edge forwarding plane.
//!
//! For every task the edge either serves a stored result (full or partial
//! reuse), computes from scratch, or forwards to the cloud when the service
//! has not been offloaded to this edge. Results computed at the edge are
//! admitted to the Reuse Store Table once they are produced; reused and
//! cloud-computed results are not.

use std::collections::BTreeSet;

use crate::domain::{distance, Outcome, OutcomeKind, ReuseMatch, ReuseOutput, TaskRequest};
use crate::error::Result;
use crate::reuse_store::{LookupResult, ReuseStore};

#[derive(Debug, Clone)]
pub struct EdgeNode {
    offloaded: BTreeSet<String>,
    /// `None` disables computation reuse entirely.
    store: Option<ReuseStore>,
    compute_slots: usize,
}

impl EdgeNode {
    pub fn new<I, S>(offloaded: I, store: Option<ReuseStore>, compute_slots: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            offloaded: offloaded.into_iter().map(Into::into).collect(),
            store,
            compute_slots,
        }
    }

    pub fn is_offloaded(&self, service: &str) -> bool {
        self.offloaded.contains(service)
    }

    pub fn store(&self) -> Option<&ReuseStore> {
        self.store.as_ref()
    }

    pub fn compute_slots(&self) -> usize {
        self.compute_slots
    }

    pub fn reuse_enabled(&self) -> bool {
        self.store.is_some()
    }

    /// Pick how to serve a task. Never sees the task's ground-truth label.
    pub fn decide(&mut self, req: TaskRequest<'_>, now: f64) -> Result<Outcome> {
        if !self.is_offloaded(req.service) {
            return Ok(Outcome::cloud_offload());
        }
        let Some(store) = self.store.as_mut() else {
            return Ok(Outcome::edge_compute());
        };
        Ok(match store.lookup(req.service, req.features, now)? {
            LookupResult::Full(entry) => Outcome::full_reuse(ReuseMatch {
                entry_id: entry.id,
                distance: distance(req.features, &entry.features)?,
                output: entry.output,
            }),
            LookupResult::Partial {
                entry,
                remaining_fraction,
                distance,
            } => Outcome::partial_reuse(
                ReuseMatch {
                    entry_id: entry.id,
                    distance,
                    output: entry.output,
                },
                1.0 - remaining_fraction,
            )?,
            LookupResult::Miss => Outcome::edge_compute(),
        })
    }

    /// Record the result of a task once it has been produced.
    pub fn complete(
        &mut self,
        req: TaskRequest<'_>,
        outcome: &Outcome,
        result: ReuseOutput,
        now: f64,
    ) -> Result<()> {
        match outcome.kind() {
            OutcomeKind::EdgeCompute | OutcomeKind::PartialReuse => {
                if let Some(store) = self.store.as_mut() {
                    store.place(req.service, req.features.clone(), result, now)?;
                }
            }
            OutcomeKind::FullReuse | OutcomeKind::CloudOffload => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{FeatureVector, Task};
    use crate::reuse_store::StoreConfig;

    fn node(reuse: bool) -> EdgeNode {
        let store = reuse.then(|| {
            ReuseStore::new(StoreConfig {
                dimension: 3,
                ..StoreConfig::default()
            })
            .unwrap()
        });
        EdgeNode::new(["detect"], store, 4)
    }

    fn task(service: &str, v: [f64; 3], label: &str) -> Task {
        Task::new(0, service, FeatureVector::new(v.to_vec()).unwrap(), 1.0, 0.1, 10.0, 0.0)
            .unwrap()
            .with_label(label)
    }

    fn result_of(t: &Task) -> ReuseOutput {
        ReuseOutput {
            label: t.object_label().to_owned(),
            output_size: t.output_size(),
        }
    }

    #[test]
    fn unknown_service_goes_to_cloud() {
        let mut n = node(true);
        let t = task("translate", [1., 2., 3.], "a");
        let o = n.decide(t.request(), 0.0).unwrap();
        assert_eq!(o.kind(), OutcomeKind::CloudOffload);
        n.complete(t.request(), &o, result_of(&t), 1.0).unwrap();
        assert_eq!(n.store().unwrap().total_len(), 0);
    }

    #[test]
    fn miss_then_reuse() {
        let mut n = node(true);
        let a = task("detect", [10., 0., 0.], "cat");
        let o = n.decide(a.request(), 0.0).unwrap();
        assert_eq!(o.kind(), OutcomeKind::EdgeCompute);
        n.complete(a.request(), &o, result_of(&a), 1.0).unwrap();
        assert_eq!(n.store().unwrap().len("detect"), 1);

        let b = task("detect", [10., 0., 0.], "cat");
        let o = n.decide(b.request(), 2.0).unwrap();
        assert_eq!(o.kind(), OutcomeKind::FullReuse);
        assert_eq!(o.matched().unwrap().output.label, "cat");
        n.complete(b.request(), &o, result_of(&b), 2.0).unwrap();
        let store = n.store().unwrap();
        assert_eq!(store.len("detect"), 1);
        assert_eq!(store.entries("detect")[0].frequency, 1);
    }

    #[test]
    fn partial_reuse_places_result() {
        let mut n = node(true);
        let a = task("detect", [10., 0., 0.], "cat");
        let o = n.decide(a.request(), 0.0).unwrap();
        n.complete(a.request(), &o, result_of(&a), 1.0).unwrap();
        let b = task("detect", [12., 0., 0.], "cat");
        let o = n.decide(b.request(), 2.0).unwrap();
        assert_eq!(o.kind(), OutcomeKind::PartialReuse);
        assert!((o.reused_fraction() - 0.5).abs() < 1e-12);
        n.complete(b.request(), &o, result_of(&b), 3.0).unwrap();
        assert_eq!(n.store().unwrap().len("detect"), 2);
    }

    #[test]
    fn disabled_store_never_reuses() {
        let mut n = node(false);
        for i in 0..5 {
            let t = task("detect", [10., 0., 0.], "cat");
            let o = n.decide(t.request(), i as f64).unwrap();
            assert_eq!(o.kind(), OutcomeKind::EdgeCompute);
            n.complete(t.request(), &o, result_of(&t), i as f64).unwrap();
        }
    }

    #[test]
    fn decision_ignores_labels() {
        let seq = [[10., 0., 0.], [0., 10., 0.], [10., 0., 0.], [10.5, 0., 0.], [0., 10., 0.]];
        let run = |labels: [&str; 5]| {
            let mut n = node(true);
            let mut kinds = Vec::new();
            for (i, (v, l)) in seq.iter().zip(labels).enumerate() {
                let t = task("detect", *v, l);
                let o = n.decide(t.request(), i as f64).unwrap();
                kinds.push(o.kind());
                n.complete(t.request(), &o, result_of(&t), i as f64).unwrap();
            }
            kinds
        };
        assert_eq!(run(["a", "b", "a", "a", "b"]), run(["q", "r", "s", "t", "u"]));
    }
}
