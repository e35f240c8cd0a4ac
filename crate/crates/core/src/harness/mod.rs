//! Experiment drivers: Monte-Carlo coverage simulation, rolling
//! pseudo-out-of-sample evaluation, and coverage reports.

mod config;
mod poos;
mod report;
mod sim;

use std::cell::OnceCell;
use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::interval::{Interval, Method};
use crate::mw::{pi_naive, DEFAULT_FREQUENCIES};
use crate::pascual::{self, ArmaGarchModel, PiMode};
use crate::series::Series;
use crate::stats::quantile_sorted;
use crate::zxw::{self, BootMeans, ZxwConfig};

pub use config::{config_args, parse_config};
pub use poos::{load_csv_column, run_poos, run_poos_series, PoosConfig};
pub use report::{CoverageReport, CoverageRow, ReportFormat};
pub use sim::{run_simulation, SimConfig};

/// Per-method tuning shared by the drivers and the one-shot `pi` command.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSettings {
    /// Settings for the model-free methods; `d` is overridden per method by
    /// [`MethodSettings::d`].
    pub zxw: ZxwConfig,
    pub naive_q: usize,
    /// Simulated paths for the model-based bootstrap intervals.
    pub boot_paths: usize,
    /// Differencing order per method; missing methods use 0.
    pub d: BTreeMap<Method, f64>,
}

impl Default for MethodSettings {
    fn default() -> Self {
        MethodSettings {
            zxw: ZxwConfig::default(),
            naive_q: DEFAULT_FREQUENCIES,
            boot_paths: 1000,
            d: BTreeMap::new(),
        }
    }
}

impl MethodSettings {
    pub fn d_for(&self, method: Method) -> f64 {
        self.d.get(&method).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (&method, &d) in &self.d {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::invalid(format!("{method}: d = {d} outside [0, 1]")));
            }
            if d != 0.0 && !matches!(method, Method::CltTdist | Method::KernelBoot) {
                return Err(Error::invalid(format!(
                    "{method} does not support differencing; only clt-tdist and kernel-boot do"
                )));
            }
        }
        Ok(())
    }
}

/// Builds intervals on one sample, caching the model fitted to the raw
/// series so the forecast-averaging methods share it across horizons.
pub struct Evaluator<'a> {
    s: &'a Series,
    settings: &'a MethodSettings,
    raw_model: OnceCell<std::result::Result<ArmaGarchModel, String>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(s: &'a Series, settings: &'a MethodSettings) -> Self {
        Evaluator {
            s,
            settings,
            raw_model: OnceCell::new(),
        }
    }

    fn raw_model(&self) -> Result<&ArmaGarchModel> {
        self.raw_model
            .get_or_init(|| pascual::select(self.s).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|msg| Error::numerical(msg.clone()))
    }

    /// One interval per level for `method` at horizon `m`.
    pub fn intervals<R: Rng + ?Sized>(
        &self,
        method: Method,
        m: usize,
        levels: &[f64],
        rng: &mut R,
    ) -> Result<Vec<Interval>> {
        let s = self.s;
        let zcfg = ZxwConfig {
            d: self.settings.d_for(method),
            ..self.settings.zxw
        };
        let paths = self.settings.boot_paths;
        let per_level = |f: &dyn Fn(f64) -> Result<Interval>| levels.iter().map(|&l| f(l)).collect();
        match method {
            Method::QtlOriginal => per_level(&|l| zxw::pi_qtl_original(s, m, l)),
            Method::CltOriginal => per_level(&|l| zxw::pi_clt_original(s, m, l)),
            Method::CltTdist => per_level(&|l| zxw::pi_clt_tdist(s, m, l, &zcfg)),
            Method::Naive => per_level(&|l| pi_naive(s, m, self.settings.naive_q, l)),
            Method::KernelBoot => {
                let boot = BootMeans::generate(s, m, &zcfg, rng)?;
                levels.iter().map(|&l| boot.interval(l)).collect()
            }
            Method::ForecastsAnalytic | Method::ForecastsBoot => {
                let mode = if method == Method::ForecastsAnalytic {
                    PiMode::Analytic
                } else {
                    PiMode::Bootstrap { paths }
                };
                pascual::avg_forecasts_intervals(self.raw_model()?, m, levels, mode, rng)
            }
            Method::SeriesAnalytic | Method::SeriesBoot => {
                let mode = if method == Method::SeriesAnalytic {
                    PiMode::Analytic
                } else {
                    PiMode::Bootstrap { paths }
                };
                let fit = pascual::fit_avg_series(s, m)?;
                pascual::avg_series_intervals(&fit, m, levels, mode, rng)
            }
        }
    }
}

/// Median interval width over the inter-quantile range of the realized
/// targets at the same level. `None` when the range is zero.
pub fn relative_median_width(widths: &[f64], oos_means: &[f64], level: f64) -> Result<Option<f64>> {
    if widths.is_empty() || oos_means.is_empty() {
        return Err(Error::invalid("relative width needs widths and targets"));
    }
    crate::interval::check_level(level)?;
    let mut sorted = oos_means.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = crate::interval::tails(level);
    let range = quantile_sorted(&sorted, hi) - quantile_sorted(&sorted, lo);
    if !(range > 0.0) {
        return Ok(None);
    }
    Ok(Some(median(widths) / range))
}

fn median(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, 0.5)
}

/// Outcome of one method at one horizon in one trial.
pub(crate) type Outcome = std::result::Result<Vec<Interval>, String>;

/// Per-trial results for one horizon: the realized target and each method's
/// intervals (in `methods` order).
pub(crate) struct TrialHorizon {
    pub target: f64,
    pub outcomes: Vec<Outcome>,
}

/// Folds trial results (in trial order) into report rows for one horizon.
pub(crate) fn tally(
    label: &str,
    methods: &[Method],
    levels: &[f64],
    m: usize,
    trials: &[&TrialHorizon],
) -> Result<Vec<CoverageRow>> {
    let targets: Vec<f64> = trials.iter().map(|t| t.target).collect();
    let mut rows = Vec::new();
    for (k, &method) in methods.iter().enumerate() {
        for (j, &level) in levels.iter().enumerate() {
            let mut covered = 0usize;
            let mut widths = Vec::with_capacity(trials.len());
            let mut skips = 0usize;
            for t in trials {
                match &t.outcomes[k] {
                    Ok(ivs) => {
                        if ivs[j].contains(t.target) {
                            covered += 1;
                        }
                        widths.push(ivs[j].width());
                    }
                    Err(_) => skips += 1,
                }
            }
            let used = widths.len();
            let (coverage, rel_width, median_width) = if used == 0 {
                (None, None, None)
            } else {
                (
                    Some(covered as f64 / used as f64),
                    relative_median_width(&widths, &targets, level)?,
                    Some(median(&widths)),
                )
            };
            rows.push(CoverageRow {
                scenario: label.to_string(),
                method,
                horizon: m,
                level,
                coverage,
                rel_width,
                n_trials: used,
                n_skips: skips,
                median_width,
            });
        }
    }
    Ok(rows)
}

/// Stream of method `k` at horizon index `h` within a trial; stream 0 is
/// reserved for data generation.
pub(crate) fn method_stream(h: usize, method: Method) -> u64 {
    let k = Method::ALL.iter().position(|&x| x == method).unwrap_or(0);
    1 + (h * Method::ALL.len() + k) as u64
}

/// Runs `f` over `0..n`, in parallel when the feature is on; results stay in
/// index order either way.
pub(crate) fn map_jobs<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::invalid("no levels given"));
    }
    levels
        .iter()
        .try_for_each(|&l| crate::interval::check_level(l))
}
