//! Task cost model: communication, execution, reuse and completion cost,
//! plus the edge compute/bandwidth feasibility check.
//!
//! Hop latency (`hops * per_hop_latency`) is added to the communication
//! term; with `per_hop_latency = 0` the communication cost is pure transfer
//! time.

use crate::domain::{CostParams, Outcome, Task};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub communication: f64,
    pub execution: f64,
    pub reuse: f64,
    pub total: f64,
    /// `x_t^e`
    pub at_edge: bool,
    /// `r_t`
    pub full_reuse: bool,
    /// `gamma_t`
    pub reused: bool,
}

impl CostBreakdown {
    /// Completion cost recomputed from the components.
    pub fn reassembled(&self) -> f64 {
        let gamma = if self.reused { 1.0 } else { 0.0 };
        self.communication + (1.0 - gamma) * self.execution + gamma * self.reuse
    }
}

pub fn communication_cost(t: &Task, at_edge: bool, p: &CostParams) -> f64 {
    let data = t.input_size() + t.output_size();
    if at_edge {
        data / p.edge_bandwidth + f64::from(p.edge_hops) * p.per_hop_latency
    } else {
        data / p.cloud_bandwidth + f64::from(p.cloud_hops) * p.per_hop_latency
    }
}

pub fn execution_cost(t: &Task, at_edge: bool, p: &CostParams) -> f64 {
    if at_edge {
        t.complexity() / p.edge_capacity_rate
    } else {
        t.complexity() / p.cloud_capacity_rate
    }
}

/// Lookup cost, plus edge execution of the residual share of the task for a
/// partial match.
pub fn reuse_cost(t: &Task, full: bool, remaining_fraction: f64, p: &CostParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&remaining_fraction) {
        return Err(Error::param(
            "remaining_fraction",
            format!("must be in [0, 1], got {remaining_fraction}"),
        ));
    }
    if full {
        if remaining_fraction != 0.0 {
            return Err(Error::param(
                "remaining_fraction",
                "a full reuse leaves nothing to compute",
            ));
        }
        return Ok(p.lookup_cost);
    }
    let residual = t.with_complexity(remaining_fraction * t.complexity());
    Ok(p.lookup_cost + residual.complexity() / p.edge_capacity_rate)
}

pub fn completion_cost(t: &Task, o: &Outcome, p: &CostParams) -> CostBreakdown {
    let at_edge = o.at_edge();
    let reused = o.is_reuse();
    let full_reuse = o.is_full_reuse();
    let communication = communication_cost(t, at_edge, p);
    let execution = execution_cost(t, at_edge, p);
    let reuse = if reused {
        let remaining = if full_reuse { 0.0 } else { o.remaining_fraction() };
        reuse_cost(t, full_reuse, remaining, p).expect("outcome fractions are in range")
    } else {
        0.0
    };
    let gamma = if reused { 1.0 } else { 0.0 };
    CostBreakdown {
        communication,
        execution,
        reuse,
        total: communication + (1.0 - gamma) * execution + gamma * reuse,
        at_edge,
        full_reuse,
        reused,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub compute_ok: bool,
    pub bandwidth_ok: bool,
    /// Edge compute demand over `f^e * window`.
    pub compute_load: f64,
    /// Edge input volume over `b^e * window`.
    pub bandwidth_load: f64,
}

/// Check the edge compute and uplink constraints for the tasks assigned to
/// the edge within `window` seconds. Both bounds are inclusive.
pub fn check_feasibility(edge_tasks: &[Task], p: &CostParams, window: f64) -> Result<Feasibility> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::param("window", "must be > 0"));
    }
    let compute: f64 = edge_tasks.iter().map(Task::complexity).sum();
    let input: f64 = edge_tasks.iter().map(Task::input_size).sum();
    let compute_cap = p.edge_capacity_rate * window;
    let bandwidth_cap = p.edge_bandwidth * window;
    Ok(Feasibility {
        compute_ok: compute <= compute_cap,
        bandwidth_ok: input <= bandwidth_cap,
        compute_load: compute / compute_cap,
        bandwidth_load: input / bandwidth_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{EntryId, FeatureVector, ReuseMatch, ReuseOutput};
    use proptest::prelude::*;

    fn task(i: f64, o: f64, f: f64) -> Task {
        Task::new(0, "svc", FeatureVector::zeros(1).unwrap(), i, o, f, 0.0).unwrap()
    }

    fn params() -> CostParams {
        CostParams {
            edge_bandwidth: 10.0,
            cloud_bandwidth: 2.0,
            edge_capacity_rate: 50.0,
            cloud_capacity_rate: 500.0,
            lookup_cost: 0.001,
            edge_hops: 1,
            cloud_hops: 6,
            per_hop_latency: 0.0,
        }
    }

    fn matched() -> ReuseMatch {
        ReuseMatch {
            entry_id: EntryId(0),
            distance: 0.0,
            output: ReuseOutput {
                label: "x".into(),
                output_size: 2.0,
            },
        }
    }

    const EPS: f64 = 1e-9;

    #[test]
    fn communication_examples() {
        let t = task(8.0, 2.0, 100.0);
        assert!((communication_cost(&t, true, &params()) - 1.0).abs() < EPS);
        assert!((communication_cost(&t, false, &params()) - 5.0).abs() < EPS);
        let empty = task(0.0, 0.0, 1.0);
        assert_eq!(communication_cost(&empty, true, &params()), 0.0);
        let p = CostParams {
            per_hop_latency: 0.005,
            ..params()
        };
        assert!((communication_cost(&empty, false, &p) - 0.03).abs() < EPS);
    }

    #[test]
    fn execution_examples() {
        let t = task(8.0, 2.0, 100.0);
        assert!((execution_cost(&t, true, &params()) - 2.0).abs() < EPS);
        assert!((execution_cost(&t, false, &params()) - 0.2).abs() < EPS);
        let tiny = task(0.0, 0.0, 1e-12);
        assert!(execution_cost(&tiny, true, &params()) < 1e-12);
    }

    #[test]
    fn reuse_examples() {
        let t = task(8.0, 2.0, 100.0);
        assert!((reuse_cost(&t, true, 0.0, &params()).unwrap() - 0.001).abs() < EPS);
        assert!((reuse_cost(&t, false, 0.5, &params()).unwrap() - 1.001).abs() < EPS);
        assert!((reuse_cost(&t, false, 1.0, &params()).unwrap() - 2.001).abs() < EPS);
        assert!(reuse_cost(&t, true, 0.5, &params()).is_err());
        assert!(reuse_cost(&t, false, 1.5, &params()).is_err());
    }

    #[test]
    fn completion_examples() {
        let t = task(8.0, 2.0, 100.0);
        let cloud = completion_cost(&t, &Outcome::cloud_offload(), &params());
        assert!((cloud.total - 5.2).abs() < EPS);
        assert!(!cloud.at_edge && !cloud.reused);

        let full = completion_cost(&t, &Outcome::full_reuse(matched()), &params());
        assert!((full.total - 1.001).abs() < EPS);
        assert!(full.at_edge && full.reused && full.full_reuse);

        let edge = completion_cost(&t, &Outcome::edge_compute(), &params());
        assert!((edge.total - 3.0).abs() < EPS);

        let partial = completion_cost(&t, &Outcome::partial_reuse(matched(), 0.5).unwrap(), &params());
        assert!((partial.total - 2.001).abs() < EPS);
        assert!(!partial.full_reuse && partial.reused);
    }

    #[test]
    fn feasibility_examples() {
        let p = params();
        let empty = check_feasibility(&[], &p, 1.0).unwrap();
        assert!(empty.compute_ok && empty.bandwidth_ok);
        assert_eq!((empty.compute_load, empty.bandwidth_load), (0.0, 0.0));

        let one = check_feasibility(&[task(1.0, 0.0, 100.0)], &p, 1.0).unwrap();
        assert!(!one.compute_ok);
        assert!((one.compute_load - 2.0).abs() < EPS);

        // sum of inputs equals b^e * window exactly
        let edge = check_feasibility(&[task(4.0, 0.0, 1.0), task(6.0, 0.0, 1.0)], &p, 1.0).unwrap();
        assert!(edge.bandwidth_ok);
        assert_eq!(edge.bandwidth_load, 1.0);

        assert!(check_feasibility(&[], &p, 0.0).is_err());
    }

    fn outcome_from(kind: u8, phi: f64) -> Outcome {
        match kind % 4 {
            0 => Outcome::full_reuse(matched()),
            1 => Outcome::partial_reuse(matched(), phi).unwrap(),
            2 => Outcome::edge_compute(),
            _ => Outcome::cloud_offload(),
        }
    }

    fn arb_params() -> impl Strategy<Value = CostParams> {
        (0.1f64..100.0, 0.1f64..100.0, 1.0f64..1000.0, 1.0f64..1000.0, 0.0f64..0.1, 0.0f64..0.02, 1u32..3, 0u32..6)
            .prop_map(|(be, bc, fe, fc, l, h, eh, extra)| CostParams {
                edge_bandwidth: be,
                cloud_bandwidth: bc,
                edge_capacity_rate: fe,
                cloud_capacity_rate: fc,
                lookup_cost: l,
                edge_hops: eh,
                cloud_hops: eh + extra,
                per_hop_latency: h,
            })
    }

    proptest! {
        #[test]
        fn irrelevant_parameters_do_not_matter(
            p in arb_params(), i in 0.0f64..50.0, o in 0.0f64..10.0, f in 1.0f64..500.0, kind in 0u8..4
        ) {
            let t = task(i, o, f);
            let base = completion_cost(&t, &outcome_from(kind, 0.5), &p).total;
            let bumped_l = CostParams { lookup_cost: p.lookup_cost + 1.0, ..p.clone() };
            let with_l = completion_cost(&t, &outcome_from(kind, 0.5), &bumped_l).total;
            if kind % 4 >= 2 {
                prop_assert_eq!(base, with_l);
            }
            if kind % 4 == 0 {
                let heavier = task(i, o, f * 10.0);
                prop_assert_eq!(base, completion_cost(&heavier, &outcome_from(0, 0.5), &p).total);
            }
        }

        #[test]
        fn monotone_in_parameters(
            p in arb_params(), i in 0.0f64..50.0, o in 0.0f64..10.0, f in 1.0f64..500.0,
            kind in 0u8..4, phi in 0.05f64..0.95, grow in 1.0f64..3.0
        ) {
            let t = task(i, o, f);
            let oc = outcome_from(kind, phi);
            let base = completion_cost(&t, &oc, &p).total;
            let faster = [
                CostParams { edge_bandwidth: p.edge_bandwidth * grow, ..p.clone() },
                CostParams { cloud_bandwidth: p.cloud_bandwidth * grow, ..p.clone() },
                CostParams { edge_capacity_rate: p.edge_capacity_rate * grow, ..p.clone() },
                CostParams { cloud_capacity_rate: p.cloud_capacity_rate * grow, ..p.clone() },
            ];
            for q in &faster {
                prop_assert!(completion_cost(&t, &oc, q).total <= base + 1e-12);
            }
            let slower = CostParams { lookup_cost: p.lookup_cost * grow + 1e-3, ..p.clone() };
            prop_assert!(completion_cost(&t, &oc, &slower).total >= base - 1e-12);
            for bigger in [task(i * grow, o, f), task(i, o * grow, f), task(i, o, f * grow)] {
                prop_assert!(completion_cost(&bigger, &oc, &p).total >= base - 1e-12);
            }
        }

        #[test]
        fn full_reuse_beats_edge_compute(p in arb_params(), i in 0.0f64..50.0, o in 0.0f64..10.0, f in 1.0f64..500.0) {
            let t = task(i, o, f);
            prop_assume!(p.lookup_cost < execution_cost(&t, true, &p));
            let full = completion_cost(&t, &Outcome::full_reuse(matched()), &p).total;
            let edge = completion_cost(&t, &Outcome::edge_compute(), &p).total;
            prop_assert!(full < edge);
        }

        #[test]
        fn reassembly_identity(p in arb_params(), i in 0.0f64..50.0, o in 0.0f64..10.0, f in 1.0f64..500.0, kind in 0u8..4, phi in 0.05f64..0.95) {
            let c = completion_cost(&task(i, o, f), &outcome_from(kind, phi), &p);
            prop_assert!((c.total - c.reassembled()).abs() <= 1e-12);
            prop_assert!(c.communication >= 0.0 && c.execution >= 0.0 && c.reuse >= 0.0);
        }
    }
}
