//! Browser bindings for the reuse simulator. Every export returns a JSON
//! string so the page needs no generated type glue.

use reuse_core::lsh::{LshIndex, LshParams};
use reuse_core::rng;
use reuse_core::sim::{self, Mode, SimConfig};
use reuse_core::FeatureVector;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Empirical per-table collision rate of two unit vectors at each angle,
/// next to the theoretical `(1 - theta/pi)^k`.
pub fn collision_curve_json(bits: usize, tables: usize, dimension: usize, steps: usize, seed: u64) -> Result<String, String> {
    if steps < 2 {
        return Err("steps must be >= 2".into());
    }
    let index = LshIndex::build(LshParams {
        num_tables: tables,
        bits_per_table: bits,
        dimension,
        seed,
    })
    .map_err(|e| e.to_string())?;
    let pairs = 200;
    let mut g = rng::stream(seed, 99);
    let mut points = Vec::with_capacity(steps);
    for s in 0..steps {
        let theta = std::f64::consts::FRAC_PI_2 * s as f64 / (steps - 1) as f64;
        let mut shared = 0;
        for _ in 0..pairs {
            let u = unit((0..dimension).map(|_| StandardNormal.sample(&mut g)).collect());
            let r: Vec<f64> = (0..dimension).map(|_| StandardNormal.sample(&mut g)).collect();
            let proj: f64 = r.iter().zip(&u).map(|(a, b)| a * b).sum();
            let w = unit(r.iter().zip(&u).map(|(a, b)| a - proj * b).collect());
            let v: Vec<f64> = u.iter().zip(&w).map(|(a, b)| theta.cos() * a + theta.sin() * b).collect();
            let su = index.signature(&FeatureVector::new(u).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let sv = index.signature(&FeatureVector::new(v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            shared += su.shared_tables(&sv);
        }
        points.push(json!({
            "theta": theta,
            "empirical": shared as f64 / (pairs * tables) as f64,
            "theoretical": (1.0 - theta / std::f64::consts::PI).powi(bits as i32),
        }));
    }
    Ok(Value::Array(points).to_string())
}

fn demo_config(num_tasks: usize, redundancy: f64, slots: usize, seed: u64) -> SimConfig {
    let mut c = SimConfig {
        edge_slots: slots,
        seed,
        ..SimConfig::default()
    };
    c.workload.num_tasks = num_tasks;
    c.workload.redundancy_rate = redundancy;
    c.for_trial(0)
}

fn report_json(r: &sim::MetricsReport) -> Value {
    json!({
        "mode": r.mode.as_str(),
        "mean_completion": r.completion.mean,
        "p90_completion": r.completion.p90,
        "mean_computation": r.computation.mean,
        "mean_waiting": r.waiting.mean,
        "utilization": r.utilization,
        "load_cloud": r.load_split.cloud,
        "load_edge": r.load_split.edge,
        "load_reuse": r.load_split.reuse,
        "correctness": r.correctness_rate,
    })
}

/// Run the three deployment modes on one workload.
pub fn simulate_json(num_tasks: usize, redundancy: f64, slots: usize, seed: u64) -> Result<String, String> {
    let c = demo_config(num_tasks, redundancy, slots, seed);
    let reports = Mode::ALL
        .iter()
        .map(|&m| sim::run(&c.with_mode(m)).map(|r| report_json(&r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(Value::Array(reports).to_string())
}

/// Reuse gains and correctness for redundancy 0, 0.1, ..., 0.8.
pub fn redundancy_sweep_json(num_tasks: usize, slots: usize, seed: u64) -> Result<String, String> {
    let mut rows = Vec::new();
    for k in 0..=8 {
        let redundancy = f64::from(k) / 10.0;
        let c = demo_config(num_tasks, redundancy, slots, seed);
        let plain = sim::run(&c.with_mode(Mode::EdgeNoReuse)).map_err(|e| e.to_string())?;
        let reuse = sim::run(&c.with_mode(Mode::EdgeWithReuse)).map_err(|e| e.to_string())?;
        let g = sim::reuse_gain(&reuse, &plain).map_err(|e| e.to_string())?;
        rows.push(json!({
            "redundancy": redundancy,
            "delay_gain": g.delay_gain,
            "resource_gain": g.resource_gain,
            "correctness": reuse.correctness_rate,
            "reuse_share": reuse.load_split.reuse,
        }));
    }
    Ok(Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn collision_curve(bits: usize, tables: usize, dimension: usize, steps: usize, seed: u32) -> Result<String, JsError> {
    collision_curve_json(bits, tables, dimension, steps, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(num_tasks: usize, redundancy: f64, slots: usize, seed: u32) -> Result<String, JsError> {
    simulate_json(num_tasks, redundancy, slots, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn redundancy_sweep(num_tasks: usize, slots: usize, seed: u32) -> Result<String, JsError> {
    redundancy_sweep_json(num_tasks, slots, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_tracks_theory() {
        let out: Value = serde_json::from_str(&collision_curve_json(8, 16, 16, 5, 1).unwrap()).unwrap();
        let pts = out.as_array().unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0]["empirical"], 1.0);
        for p in pts {
            let (e, t) = (p["empirical"].as_f64().unwrap(), p["theoretical"].as_f64().unwrap());
            assert!((e - t).abs() < 0.08, "{p}");
        }
        assert!(collision_curve_json(8, 4, 16, 1, 1).is_err());
        assert!(collision_curve_json(0, 4, 16, 5, 1).is_err());
    }

    #[test]
    fn simulate_returns_three_modes() {
        let out: Value = serde_json::from_str(&simulate_json(60, 0.7, 15, 3).unwrap()).unwrap();
        let modes: Vec<&str> = out.as_array().unwrap().iter().map(|r| r["mode"].as_str().unwrap()).collect();
        assert_eq!(modes, ["cloud_only", "edge_no_reuse", "edge_with_reuse"]);
        assert!(simulate_json(10, 1.5, 15, 0).is_err());
    }

    #[test]
    fn sweep_has_nine_points() {
        let out: Value = serde_json::from_str(&redundancy_sweep_json(100, 15, 2).unwrap()).unwrap();
        let rows = out.as_array().unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows[0]["delay_gain"].as_f64().unwrap().abs() < 1e-9);
    }
}
