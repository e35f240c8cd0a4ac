//! Resampling and estimation primitives: the stationary bootstrap with an
//! automatic expected block length, two long-run variance estimators, the
//! Carlstein block-length rule and an Epanechnikov kernel quantile estimator.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};
use crate::series::{mean, Series};

/// Expected block length of the stationary bootstrap and the matching
/// geometric restart probability `p = 1 / expected_block_len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPlan {
    expected_block_len: f64,
    geometric_p: f64,
}

impl BlockPlan {
    pub fn new(expected_block_len: f64) -> Result<Self> {
        if !(expected_block_len >= 1.0) || !expected_block_len.is_finite() {
            return Err(Error::invalid(format!(
                "expected block length {expected_block_len} must be a finite value >= 1"
            )));
        }
        Ok(BlockPlan {
            expected_block_len,
            geometric_p: 1.0 / expected_block_len,
        })
    }

    pub fn expected_block_len(&self) -> f64 {
        self.expected_block_len
    }

    pub fn geometric_p(&self) -> f64 {
        self.geometric_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrvMethod {
    LagWindow,
    Subsample,
}

/// A long-run standard deviation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrvEstimate {
    pub sigma: f64,
    /// Number of blocks; only set by the subsampling estimator.
    pub kappa: Option<usize>,
    pub method: LrvMethod,
}

pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Quantile of Student's t; infinite `df` gives the normal quantile.
pub fn t_quantile(p: f64, df: f64) -> f64 {
    if df.is_infinite() {
        return normal_quantile(p);
    }
    StudentsT::new(0.0, 1.0, df)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}

/// Linear-interpolation sample quantile (Hyndman-Fan type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn quantile(sample: &[f64], q: f64) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, q)
}

/// Sample autocovariances `gamma_0..=gamma_max_lag` with divisor `T`.
pub(crate) fn autocovariances(xs: &[f64], max_lag: usize) -> Vec<f64> {
    let n = xs.len();
    let mu = mean(xs);
    let c: Vec<f64> = xs.iter().map(|x| x - mu).collect();
    (0..=max_lag.min(n - 1))
        .map(|k| c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

fn flat_top(t: f64) -> f64 {
    let t = t.abs();
    if t <= 0.5 {
        1.0
    } else if t <= 1.0 {
        2.0 * (1.0 - t)
    } else {
        0.0
    }
}

/// Automatic expected block length for the stationary bootstrap.
///
/// Plug-in rule `b = (2 G^2 / D)^{1/3} T^{1/3}` with `G` and `D` estimated
/// from flat-top lag-window weighted autocovariances. The bandwidth is twice
/// the first lag starting a run of `K_T = max(5, ceil(sqrt(log10 T)))`
/// autocorrelations inside `±2 sqrt(log10(T) / T)`. The result is clamped
/// to `[1, 3 sqrt(T)]`.
pub fn optimal_block_length(s: &[f64]) -> Result<f64> {
    let n = s.len();
    if n < 50 {
        return Err(Error::invalid(format!(
            "automatic block length needs at least 50 values, got {n}"
        )));
    }
    let nf = n as f64;
    let upper = (3.0 * nf.sqrt()).min(nf / 3.0).max(1.0);
    let k_n = 5usize.max(nf.log10().sqrt().ceil() as usize);
    let max_lag = (nf.sqrt().ceil() as usize + k_n).min(n - 1);

    let acov = autocovariances(s, max_lag);
    if acov[0] <= 0.0 {
        return Ok(1.0);
    }
    let rho: Vec<f64> = acov[1..].iter().map(|g| g / acov[0]).collect();
    let crit = 2.0 * (nf.log10() / nf).sqrt();

    let first_quiet_run = (0..rho.len().saturating_sub(k_n - 1))
        .find(|&j| rho[j..j + k_n].iter().all(|r| r.abs() < crit));
    let m_hat = match first_quiet_run {
        Some(j) => j + 1,
        None => rho
            .iter()
            .rposition(|r| r.abs() >= crit)
            .map_or(1, |k| k + 1),
    };
    let bandwidth = (2 * m_hat).min(max_lag);

    let mut g = 0.0;
    let mut g0 = acov[0];
    for (k, gamma) in acov.iter().enumerate().take(bandwidth + 1).skip(1) {
        let w = flat_top(k as f64 / bandwidth as f64);
        g += 2.0 * w * k as f64 * gamma;
        g0 += 2.0 * w * gamma;
    }
    let d = 2.0 * g0 * g0;
    if d <= 0.0 || !d.is_finite() {
        return Ok(1.0);
    }
    let b = (2.0 * g * g / d).cbrt() * nf.cbrt();
    Ok(b.clamp(1.0, upper))
}

/// One stationary-bootstrap replicate of the same length as the input.
///
/// Blocks start at uniformly drawn positions, have geometric lengths with
/// mean `plan.expected_block_len()` and wrap around the series end.
pub fn stationary_bootstrap<R: Rng + ?Sized>(
    s: &Series,
    plan: &BlockPlan,
    rng: &mut R,
) -> Result<Series> {
    if s.len() < 2 {
        return Err(Error::invalid("bootstrap needs at least 2 values"));
    }
    let mut out = vec![0.0; s.len()];
    bootstrap_into(s, plan, rng, &mut out);
    Series::new(out)
}

/// Fills `out` with a stationary-bootstrap path. Because the uniform start
/// is the stationary law of the index chain, any stretch of a full-length
/// replicate has the same distribution as a path of that length.
pub(crate) fn bootstrap_into<R: Rng + ?Sized>(
    xs: &[f64],
    plan: &BlockPlan,
    rng: &mut R,
    out: &mut [f64],
) {
    let n = xs.len();
    let p = plan.geometric_p;
    let mut idx = rng.random_range(0..n);
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            if rng.random::<f64>() < p {
                idx = rng.random_range(0..n);
            } else {
                idx += 1;
                if idx == n {
                    idx = 0;
                }
            }
        }
        *slot = xs[idx];
    }
}

/// Default lag truncation `ceil(T^{1/3})` for [`lag_window_lrv`].
pub fn default_lag_truncation(n: usize) -> usize {
    (n as f64).cbrt().ceil() as usize
}

/// Truncated sum of sample autocovariances over lags `-k_t..=k_t`.
///
/// A negative sum is floored at zero and logged.
pub fn lag_window_lrv(s: &[f64], k_t: usize) -> Result<LrvEstimate> {
    if k_t >= s.len() {
        return Err(Error::invalid(format!(
            "lag truncation {k_t} must be below the series length {}",
            s.len()
        )));
    }
    let acov = autocovariances(s, k_t);
    let var = acov[0] + 2.0 * acov[1..].iter().sum::<f64>();
    let sigma = if var < 0.0 {
        log::warn!("lag-window long-run variance {var} is negative; using 0");
        0.0
    } else {
        var.sqrt()
    };
    Ok(LrvEstimate {
        sigma,
        kappa: None,
        method: LrvMethod::LagWindow,
    })
}

fn lag1_autocorrelation(s: &[f64]) -> f64 {
    let acov = autocovariances(s, 1);
    if acov[0] <= 0.0 {
        return 0.0;
    }
    acov[1] / acov[0]
}

/// Carlstein's AR(1)-based block length for the subsampling estimator.
pub fn carlstein_block_length(s: &[f64]) -> usize {
    let n = s.len();
    let cap = (n / 4).max(2);
    let rho = lag1_autocorrelation(s);
    if rho.abs() < 0.05 {
        return 2;
    }
    let ratio = 2.0 * rho / (1.0 - rho * rho);
    let l = (ratio * ratio * 1.5 * n as f64).cbrt().ceil();
    if !l.is_finite() || l >= cap as f64 {
        return cap;
    }
    (l as usize).clamp(2, cap)
}

/// Non-overlapping block estimator of the long-run standard deviation,
/// `sqrt(pi l / 2) / T * sum_i |block sum_i|` on the centred series.
///
/// A trailing block shorter than `l / 2` is dropped and the normalisation
/// uses the number of observations actually covered.
pub fn subsample_lrv(s: &[f64], l: usize) -> Result<LrvEstimate> {
    let n = s.len();
    if l < 2 || 2 * l > n {
        return Err(Error::invalid(format!(
            "block length {l} outside 2..={}",
            n / 2
        )));
    }
    let mu = mean(s);
    let full = n / l;
    let rest = n - full * l;
    let used = if 2 * rest >= l && rest > 0 { n } else { full * l };
    let mut total = 0.0;
    let mut kappa = 0;
    for block in s[..used].chunks(l) {
        total += block.iter().map(|x| x - mu).sum::<f64>().abs();
        kappa += 1;
    }
    let sigma = (std::f64::consts::PI * l as f64 / 2.0).sqrt() * total / used as f64;
    Ok(LrvEstimate {
        sigma,
        kappa: Some(kappa),
        method: LrvMethod::Subsample,
    })
}

fn epanechnikov(x: f64) -> f64 {
    if x.abs() < 1.0 {
        0.75 * (1.0 - x * x)
    } else {
        0.0
    }
}

/// Default kernel-quantile bandwidth `sqrt(q (1 - q)) n^{-1/5}`.
pub fn default_bandwidth(q: f64, n: usize) -> f64 {
    (q * (1.0 - q)).sqrt() * (n as f64).powf(-0.2)
}

/// Epanechnikov kernel quantile estimator on order statistics.
///
/// Returns `sum_i w_i X_(i)` with `w_i ∝ K((i/n - q) / h)`. Bandwidths below
/// `1/n` fall back to the type-7 sample quantile.
pub fn kernel_quantile(sample: &[f64], q: f64, h: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::invalid("kernel quantile of an empty sample"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("quantile level {q} outside (0, 1)")));
    }
    if !(h >= 0.0) {
        return Err(Error::invalid("bandwidth must be non-negative"));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(kernel_quantile_sorted(&sorted, q, h))
}

/// [`kernel_quantile`] with [`default_bandwidth`].
pub fn kernel_quantile_default(sample: &[f64], q: f64) -> Result<f64> {
    kernel_quantile(sample, q, default_bandwidth(q, sample.len().max(1)))
}

pub(crate) fn kernel_weights(n: usize, q: f64, h: f64) -> Vec<f64> {
    let nf = n as f64;
    let raw: Vec<f64> = (1..=n)
        .map(|i| epanechnikov((i as f64 / nf - q) / h))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

pub(crate) fn kernel_quantile_sorted(sorted: &[f64], q: f64, h: f64) -> f64 {
    let n = sorted.len();
    if h < 1.0 / n as f64 {
        return quantile_sorted(sorted, q);
    }
    let weights = kernel_weights(n, q, h);
    if !weights[0].is_finite() {
        return quantile_sorted(sorted, q);
    }
    weights.iter().zip(sorted).map(|(w, x)| w * x).sum()
}
