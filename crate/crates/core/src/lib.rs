//! Prediction intervals for the temporal average of the next `m` values of a
//! univariate time series, with Monte-Carlo and rolling-origin evaluation.

pub mod dgp;
pub mod error;
pub mod harness;
pub mod interval;
pub mod mw;
pub mod optim;
pub mod pascual;
pub mod rng;
pub mod series;
pub mod stats;
pub mod zxw;

pub use error::{Error, Result};
pub use interval::{Interval, Method};
pub use series::Series;
