//! Browser bindings: generate a benchmark path, compute an interval for
//! pasted data, and estimate coverage across horizons.
//!
//! Each export wraps a plain function of the same name with a `_native`
//! suffix so the logic is testable off the browser.

use std::collections::BTreeMap;

use wasm_bindgen::prelude::*;

use avgpi::dgp::{gen_scenario, Scenario};
use avgpi::harness::{run_simulation, Evaluator, MethodSettings, SimConfig};
use avgpi::rng::rng_from_seed;
use avgpi::{Method, Result, Series};

/// Noise scale used by the benchmark scenarios.
const SIGMA: f64 = 1.31;

fn js(e: avgpi::Error) -> JsError {
    JsError::new(&e.to_string())
}

pub fn simulate_path_native(scenario: &str, n: usize, seed: u64) -> Result<Vec<f64>> {
    let scenario: Scenario = scenario.parse()?;
    let s = gen_scenario(&scenario.spec(SIGMA), n, &mut rng_from_seed(seed))?;
    Ok(s.into_values())
}

/// Returns `[lower, upper]` for the mean of the next `m` values.
pub fn prediction_interval_native(
    values: &[f64],
    method: &str,
    m: usize,
    level: f64,
    d: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let method: Method = method.parse()?;
    let s = Series::new(values.to_vec())?;
    let mut settings = MethodSettings {
        boot_paths: 500,
        d: BTreeMap::new(),
        ..MethodSettings::default()
    };
    settings.zxw.boot_reps = 500;
    if d != 0.0 {
        settings.d.insert(method, d);
    }
    settings.validate()?;
    let iv = Evaluator::new(&s, &settings).intervals(method, m, &[level], &mut rng_from_seed(seed))?[0];
    Ok(vec![iv.lower, iv.upper])
}

/// Coverage (in %) at `level` for each horizon; in-sample length 260.
pub fn coverage_by_horizon_native(
    scenario: &str,
    method: &str,
    horizons: &[u32],
    level: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let method: Method = method.parse()?;
    let cfg = SimConfig {
        scenarios: vec![scenario.parse()?],
        horizons: horizons.iter().map(|&h| h as usize).collect(),
        levels: vec![level],
        n_trials: trials,
        methods: vec![method],
        base_seed: seed,
        ..SimConfig::default()
    };
    let report = run_simulation(&cfg)?;
    Ok(report
        .rows
        .iter()
        .map(|r| r.coverage.map_or(f64::NAN, |c| 100.0 * c))
        .collect())
}

#[wasm_bindgen]
pub fn simulate_path(scenario: &str, n: usize, seed: u32) -> std::result::Result<Vec<f64>, JsError> {
    simulate_path_native(scenario, n, seed.into()).map_err(js)
}

#[wasm_bindgen]
pub fn prediction_interval(
    values: &[f64],
    method: &str,
    m: usize,
    level: f64,
    d: f64,
    seed: u32,
) -> std::result::Result<Vec<f64>, JsError> {
    prediction_interval_native(values, method, m, level, d, seed.into()).map_err(js)
}

#[wasm_bindgen]
pub fn coverage_by_horizon(
    scenario: &str,
    method: &str,
    horizons: &[u32],
    level: f64,
    trials: usize,
    seed: u32,
) -> std::result::Result<Vec<f64>, JsError> {
    coverage_by_horizon_native(scenario, method, horizons, level, trials, seed.into()).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_reproducible() {
        let a = simulate_path_native("long-heavy", 300, 4).unwrap();
        assert_eq!(a.len(), 300);
        assert_eq!(a, simulate_path_native("long-heavy", 300, 4).unwrap());
        assert!(simulate_path_native("sideways", 10, 4).is_err());
    }

    #[test]
    fn interval_on_generated_path() {
        let path = simulate_path_native("short-light", 260, 1).unwrap();
        let iv = prediction_interval_native(&path, "kernel-boot", 20, 0.9, 0.0, 1).unwrap();
        assert!(iv[0] < iv[1]);
        let narrow = prediction_interval_native(&path, "kernel-boot", 20, 0.67, 0.0, 1).unwrap();
        assert!(iv[0] <= narrow[0] && narrow[1] <= iv[1]);
        assert!(prediction_interval_native(&path, "naive", 20, 0.9, 1.0, 1).is_err());
        assert!(prediction_interval_native(&path, "psychic", 20, 0.9, 0.0, 1).is_err());
    }

    #[test]
    fn coverage_curve_has_one_point_per_horizon() {
        let cov = coverage_by_horizon_native("short-light", "clt-original", &[10, 40], 0.9, 100, 2).unwrap();
        assert_eq!(cov.len(), 2);
        assert!(cov.iter().all(|c| (0.0..=100.0).contains(c)));
    }
}
