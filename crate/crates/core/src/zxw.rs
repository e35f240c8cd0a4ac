//! Model-free prediction intervals for the mean of the next `m` values.
//!
//! All four constructors centre on the sample mean. `clt-original` scales
//! normal quantiles by a lag-window long-run sd. `qtl-original` uses
//! empirical quantiles of in-sample rolling means. `clt-tdist` swaps in the
//! non-overlapping block estimator and Student t quantiles whose degrees of
//! freedom follow the block count. `kernel-boot` applies kernel quantiles to
//! stationary-bootstrap replicates of the (optionally differenced) series.

use rand::Rng;

use crate::error::{Error, Result};
use crate::interval::{check_level, tails, Interval, Method};
use crate::series::{demean, frac_diff, integrate_tail, rolling_means_slice, FracCoeffs, Series};
use crate::stats::{
    bootstrap_into, carlstein_block_length, default_bandwidth, default_lag_truncation,
    kernel_quantile_sorted, lag_window_lrv, normal_quantile, optimal_block_length,
    quantile_sorted, subsample_lrv, t_quantile, BlockPlan,
};

/// Minimum series length for the long-run-variance based methods.
pub const MIN_CLT_LEN: usize = 50;
/// Minimum number of rolling windows for the quantile based methods.
pub const MIN_WINDOWS: usize = 20;
/// Minimum bootstrap replicates for `kernel-boot`.
pub const MIN_BOOT_REPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `sqrt(q (1 - q)) B^{-1/5}`.
    Default,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockLength {
    Auto,
    Fixed(f64),
}

/// Where the interval is centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// The in-sample mean.
    Mean,
    /// The last observation; a natural origin for integrated series.
    Last,
    /// `Last` when the series is fully differenced (`d = 1`), else `Mean`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZxwConfig {
    /// Differencing order applied to the centred series, in `[0, 1]`.
    pub d: f64,
    pub boot_reps: usize,
    pub bandwidth: Bandwidth,
    pub block_len: BlockLength,
    pub anchor: Anchor,
}

impl Default for ZxwConfig {
    fn default() -> Self {
        ZxwConfig {
            d: 0.0,
            boot_reps: 1000,
            bandwidth: Bandwidth::Default,
            block_len: BlockLength::Auto,
            anchor: Anchor::Auto,
        }
    }
}

impl ZxwConfig {
    pub fn with_d(d: f64) -> Self {
        ZxwConfig {
            d,
            ..Self::default()
        }
    }

    fn center(&self, s: &Series, mean: f64) -> f64 {
        match self.anchor {
            Anchor::Mean => mean,
            Anchor::Last => s[s.len() - 1],
            Anchor::Auto if self.d >= 1.0 => s[s.len() - 1],
            Anchor::Auto => mean,
        }
    }
}

fn check_horizon(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("horizon must be >= 1"));
    }
    Ok(())
}

fn check_clt_len(s: &Series) -> Result<()> {
    if s.len() < MIN_CLT_LEN {
        return Err(Error::invalid(format!(
            "need at least {MIN_CLT_LEN} observations, got {}",
            s.len()
        )));
    }
    Ok(())
}

fn check_windows(len: usize, m: usize) -> Result<()> {
    if m > len || len - m + 1 < MIN_WINDOWS {
        return Err(Error::invalid(format!(
            "horizon {m} leaves fewer than {MIN_WINDOWS} rolling windows in {len} observations"
        )));
    }
    Ok(())
}

/// Normal-quantile interval scaled by the lag-window long-run sd.
pub fn pi_clt_original(s: &Series, m: usize, level: f64) -> Result<Interval> {
    pi_clt_original_with_lags(s, m, level, default_lag_truncation(s.len()))
}

pub fn pi_clt_original_with_lags(s: &Series, m: usize, level: f64, k_t: usize) -> Result<Interval> {
    check_horizon(m)?;
    check_level(level)?;
    check_clt_len(s)?;
    let (e, mean) = demean(s);
    let sigma = lag_window_lrv(&e, k_t)?.sigma;
    if sigma == 0.0 {
        log::warn!("clt-original: long-run sd is zero, returning a degenerate interval");
    }
    let half = normal_quantile(tails(level).1) * sigma / (m as f64).sqrt();
    Interval::new(mean - half, mean + half, level, Method::CltOriginal, m)
}

/// Empirical quantiles of the centred in-sample rolling means.
pub fn pi_qtl_original(s: &Series, m: usize, level: f64) -> Result<Interval> {
    check_horizon(m)?;
    check_level(level)?;
    check_windows(s.len(), m)?;
    let (e, mean) = demean(s);
    let mut means = rolling_means_slice(&e, m)?;
    means.sort_by(f64::total_cmp);
    let (lo, hi) = tails(level);
    Interval::new(
        mean + quantile_sorted(&means, lo),
        mean + quantile_sorted(&means, hi),
        level,
        Method::QtlOriginal,
        m,
    )
}

/// Sd of the mean of the next `m` values implied by a long-run sd of the
/// `d`-differenced series.
pub fn aggregated_sd(sigma: f64, m: usize, d: f64) -> Result<f64> {
    check_horizon(m)?;
    let mf = m as f64;
    if d == 0.0 {
        return Ok(sigma / mf.sqrt());
    }
    if d == 1.0 {
        return Ok(sigma * ((mf + 1.0) / 2.0).sqrt());
    }
    // sqrt(sum_i (sum_{j<=m-i} w_j)^2) / m with w the weights of (1 - L)^{-d}
    let w = FracCoeffs::integration(d, m)?;
    let mut cum = 0.0;
    let mut sq = 0.0;
    for c in w.coeffs() {
        cum += c;
        sq += cum * cum;
    }
    Ok(sigma * sq.sqrt() / mf)
}

/// Student-t interval from the non-overlapping block estimator.
pub fn pi_clt_tdist(s: &Series, m: usize, level: f64, cfg: &ZxwConfig) -> Result<Interval> {
    check_horizon(m)?;
    check_level(level)?;
    check_clt_len(s)?;
    let (e, mean) = demean(s);
    let de = frac_diff(&e, cfg.d)?;
    let l = carlstein_block_length(&de).min(de.len() / 2);
    let est = subsample_lrv(&de, l)?;
    let kappa = est.kappa.unwrap_or(0);
    if kappa < 3 {
        return Err(Error::numerical(format!(
            "clt-tdist: only {kappa} blocks, too few degrees of freedom"
        )));
    }
    if est.sigma == 0.0 {
        log::warn!("clt-tdist: long-run sd is zero, returning a degenerate interval");
    }
    let half = t_quantile(tails(level).1, (kappa - 1) as f64) * aggregated_sd(est.sigma, m, cfg.d)?;
    let c = cfg.center(s, mean);
    Interval::new(c - half, c + half, level, Method::CltTdist, m)
}

/// Sorted bootstrap means of the next-`m` average, reusable across levels.
#[derive(Debug, Clone)]
pub struct BootMeans {
    center: f64,
    sorted: Vec<f64>,
    horizon: usize,
    bandwidth: Bandwidth,
}

impl BootMeans {
    /// Runs the replicates: centre, difference, resample the last `m`
    /// differenced values `boot_reps` times, integrate each back and average.
    pub fn generate<R: Rng + ?Sized>(
        s: &Series,
        m: usize,
        cfg: &ZxwConfig,
        rng: &mut R,
    ) -> Result<Self> {
        check_horizon(m)?;
        check_windows(s.len(), m)?;
        if cfg.boot_reps < MIN_BOOT_REPS {
            return Err(Error::invalid(format!(
                "kernel-boot needs at least {MIN_BOOT_REPS} replicates, got {}",
                cfg.boot_reps
            )));
        }
        let (e, mean) = demean(s);
        let de = frac_diff(&e, cfg.d)?;
        if de.len() < m {
            return Err(Error::invalid(format!(
                "differencing leaves {} observations, fewer than the horizon {m}",
                de.len()
            )));
        }
        let plan = match cfg.block_len {
            BlockLength::Auto => BlockPlan::new(optimal_block_length(&de)?)?,
            BlockLength::Fixed(l) => BlockPlan::new(l)?,
        };
        let weights = FracCoeffs::integration(cfg.d, m)?;
        let mut tail = vec![0.0; m];
        let mut sorted = Vec::with_capacity(cfg.boot_reps);
        for _ in 0..cfg.boot_reps {
            bootstrap_into(&de, &plan, rng, &mut tail);
            let total: f64 = if cfg.d == 0.0 {
                tail.iter().sum()
            } else {
                integrate_tail(&tail, &weights).iter().sum()
            };
            sorted.push(total / m as f64);
        }
        sorted.sort_by(f64::total_cmp);
        Ok(BootMeans {
            center: cfg.center(s, mean),
            sorted,
            horizon: m,
            bandwidth: cfg.bandwidth,
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.sorted
    }

    pub fn interval(&self, level: f64) -> Result<Interval> {
        check_level(level)?;
        let (lo, hi) = tails(level);
        let n = self.sorted.len();
        let h = |q: f64| match self.bandwidth {
            Bandwidth::Default => default_bandwidth(q, n),
            Bandwidth::Fixed(h) => h,
        };
        Interval::new(
            self.center + kernel_quantile_sorted(&self.sorted, lo, h(lo)),
            self.center + kernel_quantile_sorted(&self.sorted, hi, h(hi)),
            level,
            Method::KernelBoot,
            self.horizon,
        )
    }
}

/// Kernel quantiles of stationary-bootstrap replicate means.
pub fn pi_kernel_boot<R: Rng + ?Sized>(
    s: &Series,
    m: usize,
    level: f64,
    cfg: &ZxwConfig,
    rng: &mut R,
) -> Result<Interval> {
    check_level(level)?;
    BootMeans::generate(s, m, cfg, rng)?.interval(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgp::{gen_scenario, Scenario};
    use crate::rng::rng_from_seed;
    use crate::stats::t_quantile;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn scenario_path(sc: Scenario, n: usize, seed: u64) -> Series {
        gen_scenario(&sc.spec(1.31), n, &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn clt_half_width_arithmetic() {
        // sigma = 1, m = 100, level 0.90
        let half = normal_quantile(0.95) * 1.0 / 10.0;
        assert_abs_diff_eq!(half, 0.16449, epsilon = 1e-5);
        // d = 0 t-quantile arithmetic with kappa = 13, m = 130
        let half = t_quantile(0.95, 12.0) * aggregated_sd(1.0, 130, 0.0).unwrap();
        assert_abs_diff_eq!(half, 0.15632, epsilon = 1e-5);
    }

    #[test]
    fn aggregated_sd_special_cases() {
        assert_eq!(aggregated_sd(2.0, 1, 1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(aggregated_sd(2.0, 1, 0.5).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(aggregated_sd(1.0, 9, 1.0).unwrap(), 5f64.sqrt(), epsilon = 1e-15);
        // m = 2, d = 1/2: cumulative weights 1 and 1.5
        assert_abs_diff_eq!(
            aggregated_sd(1.0, 2, 0.5).unwrap(),
            (1.0f64 + 2.25).sqrt() / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn constant_series_gives_point_intervals() {
        let s = Series::new(vec![4.2; 260]).unwrap();
        let cfg = ZxwConfig::default();
        let mut rng = rng_from_seed(1);
        for iv in [
            pi_clt_original(&s, 130, 0.9).unwrap(),
            pi_qtl_original(&s, 130, 0.9).unwrap(),
            pi_clt_tdist(&s, 130, 0.9, &cfg).unwrap(),
            pi_kernel_boot(&s, 130, 0.9, &cfg, &mut rng).unwrap(),
        ] {
            assert_abs_diff_eq!(iv.lower, 4.2, epsilon = 1e-12);
            assert_abs_diff_eq!(iv.upper, 4.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn qtl_endpoints_within_rolling_extremes() {
        let s = scenario_path(Scenario::ShortHeavy, 260, 3);
        let (e, mean) = demean(&s);
        let means = rolling_means_slice(&e, 40).unwrap();
        let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let iv = pi_qtl_original(&s, 40, 0.9).unwrap();
        assert!(iv.lower >= mean + lo - 1e-12 && iv.upper <= mean + hi + 1e-12);
    }

    #[test]
    fn precondition_errors() {
        let short = Series::new(vec![1.0; 40]).unwrap();
        assert!(pi_clt_original(&short, 10, 0.9).is_err());
        let s = scenario_path(Scenario::ShortLight, 100, 1);
        assert!(pi_qtl_original(&s, 90, 0.9).is_err());
        assert!(pi_clt_original(&s, 0, 0.9).is_err());
        let cfg = ZxwConfig {
            boot_reps: 50,
            ..ZxwConfig::default()
        };
        assert!(pi_kernel_boot(&s, 10, 0.9, &cfg, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn kernel_boot_is_deterministic() {
        let s = scenario_path(Scenario::LongLight, 260, 5);
        let cfg = ZxwConfig::default();
        let a = pi_kernel_boot(&s, 130, 0.9, &cfg, &mut rng_from_seed(9)).unwrap();
        let b = pi_kernel_boot(&s, 130, 0.9, &cfg, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        assert_eq!(a.upper.to_bits(), b.upper.to_bits());
    }

    #[test]
    fn differenced_pipelines_run() {
        let s = scenario_path(Scenario::ShortLight, 260, 7);
        let mut rng = rng_from_seed(2);
        for d in [0.5, 1.0] {
            let cfg = ZxwConfig::with_d(d);
            let a = pi_clt_tdist(&s, 60, 0.9, &cfg).unwrap();
            let b = pi_kernel_boot(&s, 60, 0.9, &cfg, &mut rng).unwrap();
            assert!(a.width() > 0.0 && b.width() > 0.0);
        }
    }

    fn assert_shifted(a: &Interval, b: &Interval, c: f64) {
        let tol = 1e-9 * (1.0 + c.abs() + a.width());
        assert!((a.lower + c - b.lower).abs() <= tol, "{a:?} {b:?}");
        assert!((a.upper + c - b.upper).abs() <= tol, "{a:?} {b:?}");
    }

    fn all_methods(s: &Series, m: usize, level: f64, seed: u64) -> Vec<Interval> {
        let cfg = ZxwConfig {
            boot_reps: 200,
            ..ZxwConfig::default()
        };
        vec![
            pi_clt_original(s, m, level).unwrap(),
            pi_qtl_original(s, m, level).unwrap(),
            pi_clt_tdist(s, m, level, &cfg).unwrap(),
            pi_kernel_boot(s, m, level, &cfg, &mut rng_from_seed(seed)).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn location_equivariance(seed in 0u64..10_000, c in -1e3f64..1e3, m in 1usize..100) {
            let s = scenario_path(Scenario::ShortLight, 150, seed);
            let shifted = s.map(|v| v + c).unwrap();
            for (a, b) in all_methods(&s, m, 0.9, seed).iter().zip(all_methods(&shifted, m, 0.9, seed).iter()) {
                assert_shifted(a, b, c);
            }
        }

        #[test]
        fn scale_equivariance(seed in 0u64..10_000, lambda in 0.01f64..100.0, m in 1usize..100) {
            let s = scenario_path(Scenario::ShortHeavy, 150, seed);
            let scaled = s.map(|v| v * lambda).unwrap();
            for (a, b) in all_methods(&s, m, 0.9, seed).iter().zip(all_methods(&scaled, m, 0.9, seed).iter()) {
                let tol = 1e-8 * lambda * (1.0 + a.lower.abs() + a.upper.abs());
                prop_assert!((a.lower * lambda - b.lower).abs() <= tol);
                prop_assert!((a.upper * lambda - b.upper).abs() <= tol);
            }
        }

        #[test]
        fn levels_nest(seed in 0u64..10_000, m in 1usize..100) {
            let s = scenario_path(Scenario::LongLight, 150, seed);
            for (narrow, wide) in all_methods(&s, m, 0.67, seed).iter().zip(all_methods(&s, m, 0.9, seed).iter()) {
                prop_assert!(wide.lower <= narrow.lower && narrow.upper <= wide.upper,
                    "{:?} not inside {:?}", narrow, wide);
            }
        }

        #[test]
        fn tdist_dominates_normal_for_equal_sigma(kappa in 3usize..500, level in 0.5f64..0.99) {
            let p = tails(level).1;
            prop_assert!(t_quantile(p, (kappa - 1) as f64) >= normal_quantile(p));
        }
    }
}
