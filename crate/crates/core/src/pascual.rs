//! ARMA(p, q)-GARCH(1,1) models and the model-based intervals.
//!
//! Fitting is conditional sum of squares for the ARMA part, refined jointly
//! with the GARCH parameters by Gaussian quasi maximum likelihood. All
//! candidate models condition on the same first [`MAX_ORDER`] observations
//! so their AIC values are comparable. Intervals come in two flavours:
//! `avg-forecasts` fits the raw series and averages its `1..=m` step
//! forecasts, `avg-series` fits the series of `m`-term rolling means and
//! forecasts it `m` steps ahead. Each has an analytic and a residual
//! bootstrap variant (parameters fixed at their estimates).

use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::interval::{check_level, tails, Interval, Method};
use crate::optim::NelderMead;
use crate::rng::rng_from_seed;
use crate::series::{rolling_means, Series};
use crate::stats::{quantile_sorted, t_quantile};

/// Largest AR or MA order considered.
pub const MAX_ORDER: usize = 2;
/// Minimum number of observations a model is fitted to.
pub const MIN_FIT_LEN: usize = 60;
/// Minimum bootstrap paths.
pub const MIN_BOOT_PATHS: usize = 500;
/// Student t degrees of freedom above this are treated as normal.
pub const MAX_FINITE_DF: f64 = 100.0;

const BOUND: f64 = 0.99;
const FIT_SEED: u64 = 0x5eed_a4a4;

#[derive(Debug, Clone)]
pub struct ArmaGarchModel {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    /// Constant term of the variance equation; the innovation variance when
    /// GARCH is off.
    pub omega: f64,
    pub alpha_g: f64,
    pub beta_g: f64,
    pub garch: bool,
    pub mean: f64,
    /// One-step residuals from observation [`MAX_ORDER`] on.
    pub residuals: Series,
    pub cond_var: Series,
    /// Student t degrees of freedom of the standardized residuals, or
    /// infinity.
    pub innov_df: f64,
    pub loglik: f64,
    /// The last [`MAX_ORDER`] observations, oldest first.
    history: Vec<f64>,
}

impl ArmaGarchModel {
    /// Homoskedastic zero-mean ARMA with given coefficients and innovation
    /// variance, with zero residuals and history (so forecasts are 0).
    pub fn known(phi: Vec<f64>, theta: Vec<f64>, sigma2: f64) -> Result<Self> {
        if phi.len() > MAX_ORDER || theta.len() > MAX_ORDER {
            return Err(Error::invalid(format!("ARMA orders are capped at {MAX_ORDER}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) || phi.iter().chain(&theta).any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite and sigma2 > 0"));
        }
        Ok(ArmaGarchModel {
            phi,
            theta,
            omega: sigma2,
            alpha_g: 0.0,
            beta_g: 0.0,
            garch: false,
            mean: 0.0,
            residuals: Series::new(vec![0.0; MAX_ORDER + 1])?,
            cond_var: Series::new(vec![sigma2; MAX_ORDER + 1])?,
            innov_df: f64::INFINITY,
            loglik: 0.0,
            history: vec![0.0; MAX_ORDER],
        })
    }

    pub fn n_params(&self) -> usize {
        n_params(self.phi.len(), self.theta.len(), self.garch)
    }

    pub fn aic(&self) -> f64 {
        -2.0 * self.loglik + 2.0 * self.n_params() as f64
    }

    pub fn is_stationary(&self) -> bool {
        in_triangle(&self.phi) && self.alpha_g + self.beta_g < 1.0
    }

    fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha_g - self.beta_g)
    }

    fn standardized_residuals(&self) -> Vec<f64> {
        self.residuals
            .iter()
            .zip(self.cond_var.iter())
            .map(|(e, h)| e / h.sqrt())
            .collect()
    }
}

fn n_params(p: usize, q: usize, garch: bool) -> usize {
    1 + p + q + if garch { 3 } else { 1 }
}

// AR(2) stationarity triangle; also used for MA invertibility with the
// coefficients negated.
fn in_triangle(c: &[f64]) -> bool {
    match c.len() {
        0 => true,
        1 => c[0].abs() < 1.0,
        _ => c[1].abs() < 1.0 && c[0] + c[1] < 1.0 && c[1] - c[0] < 1.0,
    }
}

fn project_triangle(c: &mut [f64]) {
    match c.len() {
        0 => {}
        1 => c[0] = c[0].clamp(-BOUND, BOUND),
        _ => {
            c[1] = c[1].clamp(-BOUND, BOUND);
            let lim = BOUND - c[1];
            c[0] = c[0].clamp(-lim, lim);
        }
    }
}

fn project_ma(c: &mut [f64]) {
    // 1 + t1 L + t2 L^2 invertible iff (-t1, -t2) lies in the AR triangle
    c.iter_mut().for_each(|v| *v = -*v);
    project_triangle(c);
    c.iter_mut().for_each(|v| *v = -*v);
}

struct Layout {
    p: usize,
    q: usize,
}

impl Layout {
    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let (phi, rest) = x.split_at(self.p);
        let (theta, garch) = rest.split_at(self.q);
        (phi, theta, garch)
    }

    fn project(&self, x: &mut [f64], var_floor: f64) {
        let (phi, rest) = x.split_at_mut(self.p);
        let (theta, garch) = rest.split_at_mut(self.q);
        project_triangle(phi);
        project_ma(theta);
        if garch.len() == 3 {
            garch[0] = garch[0].max(var_floor);
            garch[1] = garch[1].clamp(0.0, BOUND);
            garch[2] = garch[2].clamp(0.0, BOUND);
            let persistence = garch[1] + garch[2];
            if persistence > 0.999 {
                garch[1] *= 0.999 / persistence;
                garch[2] *= 0.999 / persistence;
            }
        }
    }
}

/// ARMA residuals for `t >= MAX_ORDER` with pre-sample residuals set to zero.
fn arma_residuals(x: &[f64], phi: &[f64], theta: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let mut e = vec![0.0; x.len()];
    for t in MAX_ORDER..x.len() {
        let mut pred = 0.0;
        for (i, a) in phi.iter().enumerate() {
            pred += a * x[t - 1 - i];
        }
        for (j, b) in theta.iter().enumerate() {
            pred += b * e[t - 1 - j];
        }
        e[t] = x[t] - pred;
        out.push(e[t]);
    }
}

fn garch_variances(e: &[f64], omega: f64, alpha: f64, beta: f64, out: &mut Vec<f64>) {
    out.clear();
    let backcast = e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64;
    let mut h = backcast;
    let mut prev_e2 = backcast;
    for v in e {
        h = omega + alpha * prev_e2 + beta * h;
        out.push(h);
        prev_e2 = v * v;
    }
}

fn gaussian_nll(e: &[f64], h: &[f64]) -> f64 {
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    0.5 * e
        .iter()
        .zip(h)
        .map(|(e, h)| ln2pi + h.ln() + e * e / h)
        .sum::<f64>()
}

/// Negative log-likelihood of the standardized Student t with `df`.
fn student_nll(z: &[f64], df: f64) -> f64 {
    let c = ln_gamma((df + 1.0) / 2.0)
        - ln_gamma(df / 2.0)
        - 0.5 * (std::f64::consts::PI * (df - 2.0)).ln();
    -z.iter()
        .map(|v| c - (df + 1.0) / 2.0 * (1.0 + v * v / (df - 2.0)).ln())
        .sum::<f64>()
}

/// ML degrees of freedom for standardized residuals by golden-section
/// search over `ln(df - 2)`.
fn fit_student_df(z: &[f64]) -> f64 {
    let obj = |u: f64| student_nll(z, 2.0 + u.exp());
    let (mut a, mut b) = ((0.05f64).ln(), (1000.0f64).ln());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = obj(d);
        }
    }
    let df = 2.0 + (0.5 * (a + b)).exp();
    if df > MAX_FINITE_DF {
        f64::INFINITY
    } else {
        df
    }
}

/// Fits ARMA(p, q), optionally with GARCH(1,1) errors.
pub fn fit(s: &Series, p: usize, q: usize, garch_on: bool) -> Result<ArmaGarchModel> {
    if s.len() < MIN_FIT_LEN {
        return Err(Error::invalid(format!(
            "model fitting needs at least {MIN_FIT_LEN} observations, got {}",
            s.len()
        )));
    }
    if p > MAX_ORDER || q > MAX_ORDER {
        return Err(Error::invalid(format!("ARMA orders are capped at {MAX_ORDER}")));
    }
    let mean = s.mean();
    let raw_var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / s.len() as f64;
    if !(raw_var > 0.0) {
        return Err(Error::invalid("cannot fit a model to a constant series"));
    }
    // Fit in standardized units so the optimizer path does not depend on
    // the location and scale of the data.
    let scale = raw_var.sqrt();
    let x: Vec<f64> = s.iter().map(|v| (v - mean) / scale).collect();
    let var = 1.0;
    let var_floor = 1e-8;
    let n_eff = (x.len() - MAX_ORDER) as f64;
    let nm = NelderMead::default();
    let mut rng = rng_from_seed(FIT_SEED);
    let layout = Layout { p, q };

    // conditional sum of squares for the ARMA part
    let css = |params: &[f64]| {
        let (phi, theta, _) = layout.split(params);
        let mut e = Vec::with_capacity(x.len());
        arma_residuals(&x, phi, theta, &mut e);
        let ssr = e.iter().map(|v| v * v).sum::<f64>();
        0.5 * n_eff * (ssr / n_eff).ln()
    };
    let start = vec![0.0; p + q];
    let arma = nm.minimize(
        css,
        |v| layout.project(v, var_floor),
        &start,
        &vec![0.1; p + q],
        &mut rng,
    )?;

    let mut params = arma.x;
    let mut e = Vec::with_capacity(x.len());
    let mut h = Vec::with_capacity(x.len());
    let loglik;
    let (omega, alpha_g, beta_g);
    if garch_on {
        let mut start = params.clone();
        start.extend([0.05 * var, 0.05, 0.9]);
        let mut step = vec![0.05; p + q];
        step.extend([0.025 * var, 0.03, 0.03]);
        let qml = |params: &[f64]| {
            let (phi, theta, g) = layout.split(params);
            let mut e = Vec::with_capacity(x.len());
            let mut h = Vec::with_capacity(x.len());
            arma_residuals(&x, phi, theta, &mut e);
            garch_variances(&e, g[0], g[1], g[2], &mut h);
            gaussian_nll(&e, &h)
        };
        let joint = nm.minimize(
            qml,
            |v| layout.project(v, var_floor),
            &start,
            &step,
            &mut rng,
        )?;
        params = joint.x;
        let (phi, theta, g) = layout.split(&params);
        arma_residuals(&x, phi, theta, &mut e);
        garch_variances(&e, g[0], g[1], g[2], &mut h);
        loglik = -joint.f;
        (omega, alpha_g, beta_g) = (g[0], g[1], g[2]);
    } else {
        let (phi, theta, _) = layout.split(&params);
        arma_residuals(&x, phi, theta, &mut e);
        let sigma2 = (e.iter().map(|v| v * v).sum::<f64>() / n_eff).max(var_floor);
        h = vec![sigma2; e.len()];
        loglik = -gaussian_nll(&e, &h);
        (omega, alpha_g, beta_g) = (sigma2, 0.0, 0.0);
    }

    let (phi, theta, _) = layout.split(&params);
    let e: Vec<f64> = e.into_iter().map(|v| v * scale).collect();
    let h: Vec<f64> = h.into_iter().map(|v| v * raw_var).collect();
    let loglik = loglik - n_eff * scale.ln();
    let omega = omega * raw_var;
    let mut model = ArmaGarchModel {
        phi: phi.to_vec(),
        theta: theta.to_vec(),
        omega,
        alpha_g,
        beta_g,
        garch: garch_on,
        mean,
        residuals: Series::with_origin(e, s.origin_index() + MAX_ORDER as i64)?,
        cond_var: Series::with_origin(h, s.origin_index() + MAX_ORDER as i64)?,
        innov_df: f64::INFINITY,
        loglik,
        history: s[s.len() - MAX_ORDER..].to_vec(),
    };
    if !model.is_stationary() {
        log::warn!("fitted model sits on the stationarity boundary");
    }
    model.innov_df = fit_student_df(&model.standardized_residuals());
    Ok(model)
}

/// Fits every ARMA(p, q) with `p, q <= 2`, with and without GARCH(1,1), and
/// keeps the lowest AIC. Ties go to the model with fewer parameters.
pub fn select(s: &Series) -> Result<ArmaGarchModel> {
    let mut candidates: Vec<(usize, usize, bool)> = (0..=MAX_ORDER)
        .flat_map(|p| (0..=MAX_ORDER).flat_map(move |q| [(p, q, false), (p, q, true)]))
        .collect();
    candidates.sort_by_key(|&(p, q, g)| (n_params(p, q, g), p + q, g));

    let mut best: Option<ArmaGarchModel> = None;
    let mut last_err = None;
    for (p, q, g) in candidates {
        match fit(s, p, q, g) {
            Ok(model) => {
                if best.as_ref().is_none_or(|b| model.aic() < b.aic() - 1e-9) {
                    best = Some(model);
                }
            }
            Err(err) => {
                log::debug!("ARMA({p},{q}) garch={g} failed: {err}");
                last_err = Some(err);
            }
        }
    }
    best.ok_or_else(|| {
        last_err.unwrap_or_else(|| Error::numerical("no candidate model could be fitted"))
    })
}

/// Coefficients `Psi_0..Psi_{n-1}` of the causal MA(∞) representation.
pub fn psi_weights(model: &ArmaGarchModel, n: usize) -> Vec<f64> {
    psi_from(&model.phi, &model.theta, n)
}

pub(crate) fn psi_from(phi: &[f64], theta: &[f64], n: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = if j == 0 {
            1.0
        } else {
            theta.get(j - 1).copied().unwrap_or(0.0)
        };
        for (i, a) in phi.iter().enumerate() {
            if j > i {
                v += a * psi[j - 1 - i];
            }
        }
        psi.push(v);
    }
    psi
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    /// Point forecasts for horizons `1..=m`.
    pub mean: Vec<f64>,
    /// Conditional innovation variances for horizons `1..=m`.
    pub variance: Vec<f64>,
}

/// Multi-step forecasts with future innovations set to zero.
pub fn forecast(model: &ArmaGarchModel, m: usize) -> Forecast {
    let p = model.phi.len();
    let q = model.theta.len();
    let mut x: Vec<f64> = model.history.iter().map(|v| v - model.mean).collect();
    let resid = model.residuals.values();
    let mut e: Vec<f64> = resid[resid.len().saturating_sub(MAX_ORDER)..].to_vec();
    let mut mean = Vec::with_capacity(m);
    for _ in 0..m {
        let t = x.len();
        let mut v = 0.0;
        for i in 0..p {
            v += model.phi[i] * x[t - 1 - i];
        }
        for j in 0..q {
            v += model.theta[j] * e[e.len() - 1 - j];
        }
        x.push(v);
        e.push(0.0);
        mean.push(model.mean + v);
    }

    let e_last = resid[resid.len() - 1];
    let h_last = model.cond_var[model.cond_var.len() - 1];
    let variance = if model.garch {
        let one = model.omega + model.alpha_g * e_last * e_last + model.beta_g * h_last;
        let long_run = model.unconditional_variance();
        let persistence = model.alpha_g + model.beta_g;
        (0..m)
            .map(|k| long_run + persistence.powi(k as i32) * (one - long_run))
            .collect()
    } else {
        vec![model.omega; m]
    };
    Forecast { mean, variance }
}

/// Sd of the average `1..=m` step prediction error:
/// `sqrt(sum_i (sigma_{T+i} c_{m-i})^2) / m` with `c_k = sum_{j<=k} Psi_j`.
pub fn agg_error_sd(model: &ArmaGarchModel, m: usize) -> f64 {
    let sds: Vec<f64> = forecast(model, m).variance.iter().map(|v| v.sqrt()).collect();
    agg_sd_from(&psi_weights(model, m), &sds)
}

pub(crate) fn agg_sd_from(psi: &[f64], sds: &[f64]) -> f64 {
    let m = sds.len();
    let mut cum = Vec::with_capacity(m);
    let mut acc = 0.0;
    for p in psi.iter().take(m) {
        acc += p;
        cum.push(acc);
    }
    let sum: f64 = (1..=m)
        .map(|i| (sds[i - 1] * cum[m - i]).powi(2))
        .sum();
    sum.sqrt() / m as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiMode {
    Analytic,
    Bootstrap { paths: usize },
}

/// Simulates future paths with residuals drawn i.i.d. from the centred
/// standardized residual pool, and returns the statistic `stat` of each path.
fn simulate_paths<R, F>(
    model: &ArmaGarchModel,
    m: usize,
    paths: usize,
    rng: &mut R,
    stat: F,
) -> Vec<f64>
where
    R: Rng + ?Sized,
    F: Fn(&[f64]) -> f64,
{
    let mut pool = model.standardized_residuals();
    let centre = pool.iter().sum::<f64>() / pool.len() as f64;
    pool.iter_mut().for_each(|z| *z -= centre);

    let p = model.phi.len();
    let q = model.theta.len();
    let resid = model.residuals.values();
    let x0: Vec<f64> = model.history.iter().map(|v| v - model.mean).collect();
    let e0: Vec<f64> = resid[resid.len() - MAX_ORDER..].to_vec();
    let h0 = model.cond_var[model.cond_var.len() - 1];

    let mut x = Vec::with_capacity(MAX_ORDER + m);
    let mut e = Vec::with_capacity(MAX_ORDER + m);
    let mut path = Vec::with_capacity(m);
    (0..paths)
        .map(|_| {
            x.clear();
            x.extend_from_slice(&x0);
            e.clear();
            e.extend_from_slice(&e0);
            path.clear();
            let mut h = h0;
            for _ in 0..m {
                let t = x.len();
                h = if model.garch {
                    let prev = e[t - 1];
                    model.omega + model.alpha_g * prev * prev + model.beta_g * h
                } else {
                    model.omega
                };
                let shock = h.sqrt() * pool[rng.random_range(0..pool.len())];
                let mut v = shock;
                for i in 0..p {
                    v += model.phi[i] * x[t - 1 - i];
                }
                for j in 0..q {
                    v += model.theta[j] * e[t - 1 - j];
                }
                x.push(v);
                e.push(shock);
                path.push(model.mean + v);
            }
            stat(&path)
        })
        .collect()
}

fn empirical_intervals(
    mut draws: Vec<f64>,
    levels: &[f64],
    method: Method,
    m: usize,
) -> Result<Vec<Interval>> {
    draws.sort_by(f64::total_cmp);
    levels
        .iter()
        .map(|&level| {
            let (lo, hi) = tails(level);
            Interval::new(
                quantile_sorted(&draws, lo),
                quantile_sorted(&draws, hi),
                level,
                method,
                m,
            )
        })
        .collect()
}

fn symmetric_intervals(
    center: f64,
    sd: f64,
    df: f64,
    levels: &[f64],
    method: Method,
    m: usize,
) -> Result<Vec<Interval>> {
    levels
        .iter()
        .map(|&level| {
            let half = t_quantile(tails(level).1, df) * sd;
            Interval::new(center - half, center + half, level, method, m)
        })
        .collect()
}

fn check_request(m: usize, levels: &[f64], mode: PiMode) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("horizon must be >= 1"));
    }
    if levels.is_empty() {
        return Err(Error::invalid("no levels requested"));
    }
    levels.iter().try_for_each(|&l| check_level(l))?;
    if let PiMode::Bootstrap { paths } = mode {
        if paths < MIN_BOOT_PATHS {
            return Err(Error::invalid(format!(
                "bootstrap needs at least {MIN_BOOT_PATHS} paths, got {paths}"
            )));
        }
    }
    Ok(())
}

/// Intervals for the average of the model's `1..=m` step forecasts, one per
/// level. The bootstrap variant shares one set of simulated paths.
pub fn avg_forecasts_intervals<R: Rng + ?Sized>(
    model: &ArmaGarchModel,
    m: usize,
    levels: &[f64],
    mode: PiMode,
    rng: &mut R,
) -> Result<Vec<Interval>> {
    check_request(m, levels, mode)?;
    match mode {
        PiMode::Analytic => {
            let fc = forecast(model, m);
            let center = fc.mean.iter().sum::<f64>() / m as f64;
            let sd = agg_error_sd(model, m);
            symmetric_intervals(center, sd, model.innov_df, levels, Method::ForecastsAnalytic, m)
        }
        PiMode::Bootstrap { paths } => {
            let draws = simulate_paths(model, m, paths, rng, |path| {
                path.iter().sum::<f64>() / path.len() as f64
            });
            empirical_intervals(draws, levels, Method::ForecastsBoot, m)
        }
    }
}

/// Single-level form of [`avg_forecasts_intervals`].
pub fn pi_avg_forecasts<R: Rng + ?Sized>(
    model: &ArmaGarchModel,
    m: usize,
    level: f64,
    mode: PiMode,
    rng: &mut R,
) -> Result<Interval> {
    Ok(avg_forecasts_intervals(model, m, &[level], mode, rng)?[0])
}

/// A model of the `m`-term rolling means, or the constant they all equal.
#[derive(Debug, Clone)]
pub enum AvgSeriesFit {
    Constant(f64),
    Model(ArmaGarchModel),
}

/// Builds the rolling means of `s` and selects a model for them.
pub fn fit_avg_series(s: &Series, m: usize) -> Result<AvgSeriesFit> {
    if m == 0 || m > s.len() || s.len() - m + 1 < MIN_FIT_LEN {
        return Err(Error::invalid(format!(
            "horizon {m} leaves fewer than {MIN_FIT_LEN} rolling means"
        )));
    }
    let agg = rolling_means(s, m)?;
    let first = agg[0];
    if agg.iter().all(|&v| v == first) {
        return Ok(AvgSeriesFit::Constant(first));
    }
    select(&agg).map(AvgSeriesFit::Model)
}

/// Intervals from a rolling-mean model forecast `m` steps ahead, so the
/// target is the mean of the next `m` raw observations.
pub fn avg_series_intervals<R: Rng + ?Sized>(
    fit: &AvgSeriesFit,
    m: usize,
    levels: &[f64],
    mode: PiMode,
    rng: &mut R,
) -> Result<Vec<Interval>> {
    check_request(m, levels, mode)?;
    let method = match mode {
        PiMode::Analytic => Method::SeriesAnalytic,
        PiMode::Bootstrap { .. } => Method::SeriesBoot,
    };
    let model = match fit {
        AvgSeriesFit::Constant(c) => {
            return levels
                .iter()
                .map(|&level| Interval::new(*c, *c, level, method, m))
                .collect()
        }
        AvgSeriesFit::Model(model) => model,
    };
    match mode {
        PiMode::Analytic => {
            let fc = forecast(model, m);
            let psi = psi_weights(model, m);
            let var: f64 = (1..=m).map(|j| fc.variance[j - 1] * psi[m - j].powi(2)).sum();
            symmetric_intervals(fc.mean[m - 1], var.sqrt(), model.innov_df, levels, method, m)
        }
        PiMode::Bootstrap { paths } => {
            let draws = simulate_paths(model, m, paths, rng, |path| path[path.len() - 1]);
            empirical_intervals(draws, levels, method, m)
        }
    }
}

/// Fits the rolling means of `s` and returns one interval.
pub fn pi_avg_series<R: Rng + ?Sized>(
    s: &Series,
    m: usize,
    level: f64,
    mode: PiMode,
    rng: &mut R,
) -> Result<Interval> {
    check_request(m, &[level], mode)?;
    let fit = fit_avg_series(s, m)?;
    Ok(avg_series_intervals(&fit, m, &[level], mode, rng)?[0])
}
