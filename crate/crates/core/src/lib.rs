//! Edge computation reuse.
//!
//! An edge server keeps recently computed results in a Reuse Store Table
//! indexed by locality-sensitive hashing. Incoming tasks whose input features
//! lie close to a stored entry are answered from the store (fully or
//! partially) instead of being recomputed. The crate contains the index, the
//! store, a cost model, the forwarding decision, a synthetic workload
//! generator and a discrete-event simulator that compares cloud-only, edge
//! and edge-with-reuse deployments.

pub mod config;
pub mod cost;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod forwarding;
pub mod lsh;
pub mod reuse_store;
pub mod rng;
pub mod sim;
pub mod workload;

pub use domain::{CostParams, EntryId, FeatureVector, Outcome, OutcomeKind, ReuseOutput, Task};
pub use error::{Error, Result};
pub use forwarding::EdgeNode;
pub use lsh::{LshIndex, LshParams};
pub use reuse_store::{LookupResult, ReuseStore, StoreConfig};
pub use sim::{MetricsReport, Mode, SimConfig, TaskRecord};
pub use workload::WorkloadSpec;
