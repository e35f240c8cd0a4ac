use crate::dgp::{gen_scenario, Scenario};
use crate::error::{Error, Result};
use crate::interval::Method;
use crate::rng::{derive_seed, stream_rng};
use crate::series::{mean, Series};

use super::{check_levels, map_jobs, method_stream, tally, CoverageReport, Evaluator, MethodSettings, TrialHorizon};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenarios: Vec<Scenario>,
    /// In-sample length.
    pub t: usize,
    pub horizons: Vec<usize>,
    pub sigma: f64,
    pub levels: Vec<f64>,
    pub n_trials: usize,
    pub methods: Vec<Method>,
    pub base_seed: u64,
    pub settings: MethodSettings,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenarios: Scenario::ALL.to_vec(),
            t: 260,
            horizons: vec![20, 30, 40, 60, 90, 130],
            sigma: 1.31,
            levels: vec![0.90, 0.67],
            n_trials: 10_000,
            methods: Method::ZXW.to_vec(),
            base_seed: 1,
            settings: MethodSettings::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() || self.methods.is_empty() || self.horizons.is_empty() {
            return Err(Error::invalid("scenarios, methods and horizons must be non-empty"));
        }
        if self.horizons.contains(&0) {
            return Err(Error::invalid("horizons must be >= 1"));
        }
        let max_h = *self.horizons.iter().max().unwrap_or(&0);
        if max_h > self.t {
            return Err(Error::invalid(format!(
                "largest horizon {max_h} exceeds the sample length {}",
                self.t
            )));
        }
        if self.n_trials < 100 {
            return Err(Error::invalid(format!(
                "need at least 100 trials, got {}",
                self.n_trials
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma must be positive"));
        }
        check_levels(&self.levels)?;
        self.settings.validate()
    }
}

/// Monte-Carlo coverage and relative width of every method.
///
/// Trial `i` draws one path of length `t + max(horizons)` from stream 0 of
/// seed `base_seed + i`; the first `t` points are the sample and the next
/// `m` the target for horizon `m`. Each method and horizon draws from its
/// own stream of the same seed, so results do not depend on which other
/// methods run or on thread scheduling.
pub fn run_simulation(cfg: &SimConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let max_h = *cfg.horizons.iter().max().expect("validated");
    let mut rows = Vec::new();
    for &scenario in &cfg.scenarios {
        let spec = scenario.spec(cfg.sigma);
        spec.validate()?;
        log::info!("simulating {scenario}: {} trials", cfg.n_trials);
        let trials: Vec<Result<Vec<TrialHorizon>>> = map_jobs(cfg.n_trials, |i| {
            let seed = derive_seed(cfg.base_seed, i as u64);
            let path = gen_scenario(&spec, cfg.t + max_h, &mut stream_rng(seed, 0))?;
            let sample = Series::new(path[..cfg.t].to_vec())?;
            let eval = Evaluator::new(&sample, &cfg.settings);
            Ok(cfg
                .horizons
                .iter()
                .enumerate()
                .map(|(h, &m)| TrialHorizon {
                    target: mean(&path[cfg.t..cfg.t + m]),
                    outcomes: cfg
                        .methods
                        .iter()
                        .map(|&method| {
                            let mut rng = stream_rng(seed, method_stream(h, method));
                            eval.intervals(method, m, &cfg.levels, &mut rng)
                                .map_err(|e| {
                                    log::debug!("trial {i} {method} m={m}: {e}");
                                    e.to_string()
                                })
                        })
                        .collect(),
                })
                .collect())
        });
        let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
        for (h, &m) in cfg.horizons.iter().enumerate() {
            let per_h: Vec<&TrialHorizon> = trials.iter().map(|t| &t[h]).collect();
            rows.extend(tally(scenario.name(), &cfg.methods, &cfg.levels, m, &per_h)?);
        }
    }
    Ok(CoverageReport { rows })
}
