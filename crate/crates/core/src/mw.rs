//! Low-frequency "naive" interval: Student t with `q` degrees of freedom,
//! scaled by the energy of the first `q` cosine projections of the series.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::interval::{check_level, tails, Interval, Method};
use crate::series::Series;
use crate::stats::t_quantile;

pub const DEFAULT_FREQUENCIES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CosineProjection {
    pub q: usize,
    pub x: Vec<f64>,
    /// `sum_j x_j^2`.
    pub xtx: f64,
}

/// `X_j = T^{-1} sum_t sqrt(2) cos(j pi (t - 1/2) / T) y_t`, `j = 1..=q`.
pub fn cosine_transform(s: &Series, q: usize) -> Result<CosineProjection> {
    let n = s.len();
    if q == 0 || q >= n {
        return Err(Error::invalid(format!(
            "number of frequencies {q} outside 1..{n}"
        )));
    }
    let nf = n as f64;
    let x: Vec<f64> = (1..=q)
        .map(|j| {
            let freq = j as f64 * PI / nf;
            s.iter()
                .enumerate()
                .map(|(t, y)| SQRT_2 * (freq * (t as f64 + 0.5)).cos() * y)
                .sum::<f64>()
                / nf
        })
        .collect();
    let xtx = x.iter().map(|v| v * v).sum();
    Ok(CosineProjection { q, x, xtx })
}

/// `ybar + t_q quantiles * sqrt((m + T) / (m q) * X'X)`.
pub fn pi_naive(s: &Series, m: usize, q: usize, level: f64) -> Result<Interval> {
    if m == 0 {
        return Err(Error::invalid("horizon must be >= 1"));
    }
    check_level(level)?;
    let proj = cosine_transform(s, q)?;
    if proj.xtx == 0.0 {
        log::warn!("naive: cosine projections vanish, returning a degenerate interval");
    }
    let (n, mf) = (s.len() as f64, m as f64);
    let scale = ((mf + n) / (mf * q as f64) * proj.xtx).sqrt();
    let half = t_quantile(tails(level).1, q as f64) * scale;
    let mean = s.mean();
    Interval::new(mean - half, mean + half, level, Method::Naive, m)
}
