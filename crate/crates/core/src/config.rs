//! Experiment configuration files.
//!
//! Flat `key = value` lines with dotted section prefixes. `#` starts a
//! comment. Every key except `mode` is optional and falls back to
//! [`SimConfig::default`].
//!
//! ```text
//! mode = edge_with_reuse
//! seed = 7
//! trials = 10
//! cost.edge_bandwidth = 50
//! edge.slots = 15
//! edge.overflow = never          # never | faster | <seconds>
//! store.capacity = 500           # or `unlimited`
//! workload.num_tasks = 100
//! workload.redundancy = ramp     # or a rate in [0, 1]
//! workload.features_file = dump.csv
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sim::{Mode, Overflow, SimConfig};
use crate::workload;

/// Every recognised key, in documentation order.
pub const KEYS: &[&str] = &[
    "mode",
    "seed",
    "trials",
    "cost.edge_bandwidth",
    "cost.cloud_bandwidth",
    "cost.edge_capacity_rate",
    "cost.cloud_capacity_rate",
    "cost.lookup_cost",
    "cost.edge_hops",
    "cost.cloud_hops",
    "cost.per_hop_latency",
    "edge.slots",
    "edge.overflow",
    "edge.services",
    "store.capacity",
    "store.tau_full",
    "store.tau_partial",
    "store.partial_fraction",
    "store.halving_window",
    "lsh.num_tables",
    "lsh.bits_per_table",
    "lsh.max_candidates",
    "workload.num_tasks",
    "workload.redundancy",
    "workload.arrival_rate",
    "workload.service",
    "workload.input_size_min",
    "workload.input_size_max",
    "workload.output_size_min",
    "workload.output_size_max",
    "workload.complexity_min",
    "workload.complexity_max",
    "workload.dimension",
    "workload.noise_sigma",
    "workload.features_file",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sim: SimConfig,
    /// Redundancy follows the ramp for `workload.num_tasks`.
    pub ramp: bool,
    /// Feature dump replacing the synthetic object model.
    pub features_file: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            sim: SimConfig {
                mode,
                ..SimConfig::default()
            },
            ramp: false,
            features_file: None,
        }
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let s = &mut self.sim;
        let v = value.trim();
        match key {
            "mode" => s.mode = parse(key, v)?,
            "seed" => s.seed = parse(key, v)?,
            "trials" => s.trials = parse(key, v)?,
            "cost.edge_bandwidth" => s.cost.edge_bandwidth = parse(key, v)?,
            "cost.cloud_bandwidth" => s.cost.cloud_bandwidth = parse(key, v)?,
            "cost.edge_capacity_rate" => s.cost.edge_capacity_rate = parse(key, v)?,
            "cost.cloud_capacity_rate" => s.cost.cloud_capacity_rate = parse(key, v)?,
            "cost.lookup_cost" => s.cost.lookup_cost = parse(key, v)?,
            "cost.edge_hops" => s.cost.edge_hops = parse(key, v)?,
            "cost.cloud_hops" => s.cost.cloud_hops = parse(key, v)?,
            "cost.per_hop_latency" => s.cost.per_hop_latency = parse(key, v)?,
            "edge.slots" => s.edge_slots = parse(key, v)?,
            "edge.overflow" => s.overflow = parse::<Overflow>(key, v)?,
            "edge.services" => {
                let names: Vec<String> = v
                    .split(',')
                    .map(str::trim)
                    .filter(|n| !n.is_empty())
                    .map(str::to_owned)
                    .collect();
                s.offloaded_services = Some(names);
            }
            "store.capacity" => {
                s.store.capacity = if v == "unlimited" { usize::MAX } else { parse(key, v)? }
            }
            "store.tau_full" => s.store.tau_full = parse(key, v)?,
            "store.tau_partial" => s.store.tau_partial = parse(key, v)?,
            "store.partial_fraction" => s.store.partial_fraction = parse(key, v)?,
            "store.halving_window" => {
                s.store.halving_window = if v == "none" { None } else { Some(parse(key, v)?) }
            }
            "lsh.num_tables" => s.store.num_tables = parse(key, v)?,
            "lsh.bits_per_table" => s.store.bits_per_table = parse(key, v)?,
            "lsh.max_candidates" => s.store.max_candidates = parse(key, v)?,
            "workload.num_tasks" => s.workload.num_tasks = parse(key, v)?,
            "workload.redundancy" => {
                if v == "ramp" {
                    self.ramp = true;
                } else {
                    self.ramp = false;
                    s.workload.redundancy_rate = parse(key, v)?;
                }
            }
            "workload.arrival_rate" => s.workload.arrival_rate = parse(key, v)?,
            "workload.service" => s.workload.service = v.to_owned(),
            "workload.input_size_min" => s.workload.input_size_range.0 = parse(key, v)?,
            "workload.input_size_max" => s.workload.input_size_range.1 = parse(key, v)?,
            "workload.output_size_min" => s.workload.output_size_range.0 = parse(key, v)?,
            "workload.output_size_max" => s.workload.output_size_range.1 = parse(key, v)?,
            "workload.complexity_min" => s.workload.complexity_range.0 = parse(key, v)?,
            "workload.complexity_max" => s.workload.complexity_range.1 = parse(key, v)?,
            "workload.dimension" => {
                let d = parse(key, v)?;
                s.workload.dimension = d;
                s.store.dimension = d;
            }
            "workload.noise_sigma" => s.workload.noise_sigma = parse(key, v)?,
            "workload.features_file" => self.features_file = Some(PathBuf::from(v)),
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Apply `key=value` overrides, e.g. from the command line.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::config(o.trim(), "override must look like key=value"))?;
            self.set(k.trim(), v)?;
        }
        self.finish()
    }

    /// Resolve derived values and validate.
    pub fn finish(&mut self) -> Result<()> {
        if self.ramp {
            self.sim.workload.redundancy_rate = workload::ramp_rate(self.sim.workload.num_tasks);
        }
        self.sim.validate().map_err(|e| match e {
            Error::InvalidParam { field, reason } => Error::config(field, reason),
            other => other,
        })
    }

    /// Resolve a relative features file against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let Some(p) = &self.features_file {
            if p.is_relative() {
                self.features_file = Some(base.join(p));
            }
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| Error::config(key, format!("cannot parse `{value}`: {e}")))
}

/// Parse configuration text.
pub fn parse_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(Mode::EdgeWithReuse);
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: n + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        let k = k.trim();
        if !seen.insert(k.to_owned()) {
            return Err(Error::config(k, format!("duplicate key on line {}", n + 1)));
        }
        cfg.set(k, v)?;
    }
    if !seen.contains("mode") {
        return Err(Error::config("mode", "missing required key"));
    }
    cfg.finish()?;
    Ok(cfg)
}

/// Read and parse a configuration file. A relative `workload.features_file`
/// is resolved against the file's directory.
pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = parse_str(&text)?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(e: Error) -> String {
        match e {
            Error::Config { field, .. } => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c = parse_str("mode = cloud_only\n").unwrap();
        assert_eq!(c.sim.mode, Mode::CloudOnly);
        assert_eq!(c.sim.edge_slots, SimConfig::default().edge_slots);
        assert_eq!(c.sim.workload, SimConfig::default().workload);
    }

    #[test]
    fn missing_mode_names_the_field() {
        assert_eq!(field_of(parse_str("seed = 3\n").unwrap_err()), "mode");
    }

    #[test]
    fn unknown_key_names_the_field() {
        assert_eq!(field_of(parse_str("mode = cloud_only\nedge.slotz = 4\n").unwrap_err()), "edge.slotz");
    }

    #[test]
    fn bad_value_names_the_field() {
        assert_eq!(field_of(parse_str("mode = edge\ncost.edge_bandwidth = fast\n").unwrap_err()), "cost.edge_bandwidth");
        assert_eq!(field_of(parse_str("mode = edge\nedge.slots = 0\n").unwrap_err()), "edge.slots");
        assert_eq!(field_of(parse_str("mode = teleport\n").unwrap_err()), "mode");
    }

    #[test]
    fn duplicate_keys_rejected() {
        assert_eq!(field_of(parse_str("mode = edge\nseed = 1\nseed = 2\n").unwrap_err()), "seed");
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_str("# header\n\nmode = reuse  # trailing\nseed=42\n").unwrap();
        assert_eq!(c.sim.mode, Mode::EdgeWithReuse);
        assert_eq!(c.sim.seed, 42);
    }

    #[test]
    fn line_without_equals_is_a_parse_error() {
        assert!(matches!(parse_str("mode = edge\nslots 4\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn ramp_and_special_values() {
        let c = parse_str(
            "mode = edge_with_reuse\nworkload.num_tasks = 100\nworkload.redundancy = ramp\n\
             store.capacity = unlimited\nstore.halving_window = 30\nedge.overflow = faster\n\
             edge.services = a, b\nworkload.dimension = 16\n",
        )
        .unwrap();
        assert!(c.ramp);
        assert!((c.sim.workload.redundancy_rate - 0.8).abs() < 1e-12);
        assert_eq!(c.sim.store.capacity, usize::MAX);
        assert_eq!(c.sim.store.halving_window, Some(30.0));
        assert_eq!(c.sim.overflow, Overflow::Faster);
        assert_eq!(c.sim.offloaded_services, Some(vec!["a".to_owned(), "b".to_owned()]));
        assert_eq!((c.sim.workload.dimension, c.sim.store.dimension), (16, 16));
    }

    #[test]
    fn overrides_apply_after_file() {
        let mut c = parse_str("mode = edge_no_reuse\nworkload.num_tasks = 50\n").unwrap();
        c.apply_overrides(&["workload.num_tasks=20", "edge.overflow = 2.5"]).unwrap();
        assert_eq!(c.sim.workload.num_tasks, 20);
        assert_eq!(c.sim.overflow, Overflow::DelayBound(2.5));
        assert_eq!(field_of(c.apply_overrides(&["nonsense"]).unwrap_err()), "nonsense");
    }

    #[test]
    fn every_documented_key_is_accepted() {
        let sample = |k: &str| match k {
            "mode" => "cloud_only",
            "edge.overflow" => "never",
            "edge.services" | "workload.service" => "object-detection",
            "store.halving_window" => "none",
            "workload.redundancy" => "0.5",
            "workload.features_file" => "x.csv",
            "workload.input_size_min" | "workload.output_size_min" | "workload.complexity_min" => "1",
            "workload.input_size_max" | "workload.output_size_max" | "workload.complexity_max" => "2",
            "store.tau_full" => "1",
            "store.tau_partial" => "3",
            "store.partial_fraction" => "0.5",
            "cost.cloud_hops" => "6",
            "workload.dimension" => "8",
            _ => "1",
        };
        let text: String = KEYS.iter().map(|k| format!("{k} = {}\n", sample(k))).collect();
        parse_str(&text).unwrap();
    }
}
