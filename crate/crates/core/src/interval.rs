use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Every interval constructor the crate provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    QtlOriginal,
    KernelBoot,
    CltOriginal,
    CltTdist,
    Naive,
    SeriesAnalytic,
    SeriesBoot,
    ForecastsAnalytic,
    ForecastsBoot,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::QtlOriginal,
        Method::KernelBoot,
        Method::CltOriginal,
        Method::CltTdist,
        Method::Naive,
        Method::SeriesAnalytic,
        Method::SeriesBoot,
        Method::ForecastsAnalytic,
        Method::ForecastsBoot,
    ];

    /// The four model-free methods built on the sample mean.
    pub const ZXW: [Method; 4] = [
        Method::QtlOriginal,
        Method::KernelBoot,
        Method::CltOriginal,
        Method::CltTdist,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::QtlOriginal => "qtl-original",
            Method::KernelBoot => "kernel-boot",
            Method::CltOriginal => "clt-original",
            Method::CltTdist => "clt-tdist",
            Method::Naive => "naive",
            Method::SeriesAnalytic => "series-anlt",
            Method::SeriesBoot => "series-boot",
            Method::ForecastsAnalytic => "4cast-anlt",
            Method::ForecastsBoot => "4cast-boot",
        }
    }

    /// Whether the method depends on the random stream.
    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            Method::KernelBoot | Method::SeriesBoot | Method::ForecastsBoot
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method `{s}`")))
    }
}

/// A prediction interval for the mean of the next `horizon` observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: Method,
    pub horizon: usize,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, level: f64, method: Method, horizon: usize) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::numerical(format!(
                "{method}: invalid interval [{lower}, {upper}]"
            )));
        }
        check_level(level)?;
        Ok(Interval {
            lower,
            upper,
            level,
            method,
            horizon,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0, 1)")));
    }
    Ok(())
}

/// Lower and upper tail probabilities `(alpha/2, 1 - alpha/2)` for a level.
pub(crate) fn tails(level: f64) -> (f64, f64) {
    let alpha = 1.0 - level;
    (alpha / 2.0, 1.0 - alpha / 2.0)
}
