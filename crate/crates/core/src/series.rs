//! Series container and the elementary transforms shared by every interval
//! method: demeaning, rolling means and fractional differencing/integration.

use std::ops::Deref;

use crate::error::{Error, Result};

/// An equidistant, finite, non-empty sequence of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    origin_index: i64,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_origin(values, 0)
    }

    pub fn with_origin(values: Vec<f64>, origin_index: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("series must contain at least one value"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "series value at position {pos} is not finite"
            )));
        }
        Ok(Series {
            values,
            origin_index,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Time index of the first value.
    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Applies `f` elementwise, keeping the time index.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Series> {
        Series::with_origin(self.values.iter().map(|&v| f(v)).collect(), self.origin_index)
    }
}

impl Deref for Series {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for Series {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Series::new(values)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Subtracts the sample mean. Returns the centred series and the mean.
pub fn demean(s: &Series) -> (Series, f64) {
    let mu = s.mean();
    let values = s.values.iter().map(|v| v - mu).collect();
    (
        Series {
            values,
            origin_index: s.origin_index,
        },
        mu,
    )
}

/// Means of every window of `m` consecutive values; element `k` averages
/// `s[k..k + m]`.
pub fn rolling_means(s: &Series, m: usize) -> Result<Series> {
    let values = rolling_means_slice(&s.values, m)?;
    Series::with_origin(values, s.origin_index + m as i64 - 1)
}

pub(crate) fn rolling_means_slice(xs: &[f64], m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > xs.len() {
        return Err(Error::invalid(format!(
            "window {m} outside 1..={}",
            xs.len()
        )));
    }
    let inv = 1.0 / m as f64;
    let mut out = Vec::with_capacity(xs.len() - m + 1);
    let mut acc: f64 = xs[..m].iter().sum();
    out.push(acc * inv);
    for k in m..xs.len() {
        acc += xs[k] - xs[k - m];
        out.push(acc * inv);
    }
    Ok(out)
}

/// Binomial-series weights of `(1 - L)^d`, truncated to a fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct FracCoeffs {
    d: f64,
    coeffs: Vec<f64>,
}

impl FracCoeffs {
    /// Weights `c_j = (-1)^j C(d, j)` for `j < len`. For `d = 1` only the two
    /// non-zero weights are kept, for `d = 0` only the leading one.
    pub fn differencing(d: f64, len: usize) -> Result<Self> {
        check_order(d)?;
        let coeffs = if d == 0.0 {
            vec![1.0]
        } else if d == 1.0 {
            vec![1.0, -1.0]
        } else {
            recursion(len.max(1), |j| (j - 1.0 - d) / j)
        };
        Ok(FracCoeffs { d, coeffs })
    }

    /// Weights of the inverse operator `(1 - L)^{-d}`, i.e. `(-1)^j C(-d, j)`.
    pub fn integration(d: f64, len: usize) -> Result<Self> {
        check_order(d)?;
        let coeffs = if d == 0.0 {
            vec![1.0]
        } else {
            recursion(len.max(1), |j| (j - 1.0 + d) / j)
        };
        Ok(FracCoeffs { d, coeffs })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncation_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Weight `j`, zero past the truncation point.
    pub fn get(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    /// Expanding-window filter: `out[t] = sum_{j<=t} c_j xs[t - j]`.
    pub(crate) fn filter(&self, xs: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(xs.len());
        for t in 0..xs.len() {
            let lags = (t + 1).min(self.coeffs.len());
            let mut acc = 0.0;
            for (j, c) in self.coeffs[..lags].iter().enumerate() {
                acc += c * xs[t - j];
            }
            out.push(acc);
        }
        out
    }
}

// c_0 = 1, c_j = c_{j-1} * ratio(j); avoids the factorials of the closed form.
fn recursion(len: usize, ratio: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(len);
    coeffs.push(1.0);
    for j in 1..len {
        let prev = coeffs[j - 1];
        coeffs.push(prev * ratio(j as f64));
    }
    coeffs
}

fn check_order(d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::invalid(format!("differencing order {d} outside [0, 1]")));
    }
    Ok(())
}

/// Applies `(1 - L)^d`.
///
/// `d = 1` yields first differences and drops the first observation. For
/// `0 < d < 1` the binomial expansion is truncated at the available history,
/// so the output keeps the input length.
pub fn frac_diff(s: &Series, d: f64) -> Result<Series> {
    check_order(d)?;
    if s.len() < 2 {
        return Err(Error::invalid("fractional differencing needs at least 2 values"));
    }
    if d == 0.0 {
        return Ok(s.clone());
    }
    if d == 1.0 {
        let values = s.values.windows(2).map(|w| w[1] - w[0]).collect();
        return Series::with_origin(values, s.origin_index + 1);
    }
    let coeffs = FracCoeffs::differencing(d, s.len())?;
    Series::with_origin(coeffs.filter(&s.values), s.origin_index)
}

/// Applies `(1 - L)^{-d}` to the last `window` values of `s`, treating the
/// values before the window as zero. For `d = 1` this is a cumulative sum.
pub fn frac_integrate(s: &Series, d: f64, window: usize) -> Result<Series> {
    check_order(d)?;
    if window == 0 || window > s.len() {
        return Err(Error::invalid(format!(
            "integration window {window} outside 1..={}",
            s.len()
        )));
    }
    let tail = &s.values[s.len() - window..];
    let values = integrate_tail(tail, &FracCoeffs::integration(d, window)?);
    Series::with_origin(values, s.origin_index + (s.len() - window) as i64)
}

pub(crate) fn integrate_tail(tail: &[f64], weights: &FracCoeffs) -> Vec<f64> {
    if weights.d() == 1.0 {
        let mut acc = 0.0;
        return tail
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
    }
    weights.filter(tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn series(v: &[f64]) -> Series {
        Series::new(v.to_vec()).unwrap()
    }

    #[test]
    fn construction_rejects_empty_and_non_finite() {
        assert!(Series::new(vec![]).is_err());
        assert!(Series::new(vec![1.0, f64::NAN]).is_err());
        assert!(Series::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn demean_examples() {
        let (c, mu) = demean(&series(&[1.0, 2.0, 3.0]));
        assert_eq!(mu, 2.0);
        assert_eq!(c.values(), &[-1.0, 0.0, 1.0]);

        let (c, mu) = demean(&series(&[5.0, 5.0, 5.0]));
        assert_eq!(mu, 5.0);
        assert_eq!(c.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn rolling_means_examples() {
        let s = series(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(rolling_means(&s, 2).unwrap().values(), &[1.5, 2.5, 3.5]);
        assert_eq!(rolling_means(&s, 1).unwrap().values(), s.values());
        assert_eq!(rolling_means(&s, 4).unwrap().values(), &[2.5]);
        assert!(rolling_means(&s, 0).is_err());
        assert!(rolling_means(&s, 5).is_err());
    }

    #[test]
    fn first_difference() {
        let out = frac_diff(&series(&[1.0, 3.0, 6.0]), 1.0).unwrap();
        assert_eq!(out.values(), &[2.0, 3.0]);
        assert_eq!(out.origin_index(), 1);
    }

    #[test]
    fn half_order_weights() {
        let w = FracCoeffs::differencing(0.5, 5).unwrap();
        assert_eq!(w.coeffs(), &[1.0, -0.5, -0.125, -0.0625, -0.0390625]);
        let w = FracCoeffs::integration(0.5, 4).unwrap();
        assert_eq!(w.coeffs(), &[1.0, 0.5, 0.375, 0.3125]);
    }

    #[test]
    fn integer_order_weights() {
        assert_eq!(FracCoeffs::differencing(1.0, 10).unwrap().coeffs(), &[1.0, -1.0]);
        assert_eq!(FracCoeffs::differencing(0.0, 10).unwrap().coeffs(), &[1.0]);
        assert!(FracCoeffs::integration(1.0, 4)
            .unwrap()
            .coeffs()
            .iter()
            .all(|&c| c == 1.0));
    }

    #[test]
    fn weights_stay_finite_for_long_expansions() {
        let w = FracCoeffs::differencing(0.3, 100_000).unwrap();
        assert!(w.coeffs().iter().all(|c| c.is_finite()));
        assert!(w.coeffs()[99_999].abs() < 1e-5);
    }

    #[test]
    fn identity_for_zero_order() {
        let s = series(&[0.3, -1.0, 2.5]);
        assert_eq!(frac_diff(&s, 0.0).unwrap(), s);
        assert_eq!(frac_integrate(&s, 0.0, 2).unwrap().values(), &[-1.0, 2.5]);
    }

    #[test]
    fn unit_integration_is_cumsum() {
        let s = series(&[9.0, 1.0, 2.0, 3.0]);
        assert_eq!(frac_integrate(&s, 1.0, 3).unwrap().values(), &[1.0, 3.0, 6.0]);
    }

    #[test]
    fn order_out_of_range() {
        let s = series(&[1.0, 2.0]);
        assert!(frac_diff(&s, 1.5).is_err());
        assert!(frac_diff(&s, -0.1).is_err());
        assert!(frac_integrate(&s, 2.0, 1).is_err());
        assert!(frac_diff(&series(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn half_order_square_sums_bounded() {
        let w = FracCoeffs::differencing(0.5, 5000).unwrap();
        let mut acc = 0.0;
        for c in w.coeffs() {
            let next = acc + c * c;
            assert!(next > acc);
            acc = next;
        }
        // sum_j c_j^2 = Gamma(1 + 2d) / Gamma(1 + d)^2 = 4 / pi for d = 1/2
        assert!(acc < 4.0 / std::f64::consts::PI);
    }

    fn round_trip_case(values: &[f64], d: f64) {
        let s = series(values);
        let diffed = frac_diff(&s, d).unwrap();
        let back = frac_integrate(&diffed, d, diffed.len()).unwrap();
        let n = s.len();
        let b = back.len();
        // d = 1 loses the level of the first observation.
        let anchor = if d == 1.0 { s[0] } else { 0.0 };
        for k in 1..=50 {
            let want = s[n - k] - anchor;
            let got = back[b - k];
            if d == 0.5 {
                assert_relative_eq!(got, want, max_relative = 1e-8, epsilon = 1e-9);
            } else {
                assert_relative_eq!(got, want, epsilon = 1e-9 * (1.0 + want.abs()));
            }
        }
    }

    proptest! {
        #[test]
        fn fractional_round_trip(values in prop::collection::vec(-100.0f64..100.0, 200..260)) {
            for d in [0.0, 0.5, 1.0] {
                round_trip_case(&values, d);
            }
        }

        #[test]
        fn rolling_means_shift_equivariant(
            values in prop::collection::vec(-1e3f64..1e3, 1..80),
            c in -1e3f64..1e3,
            m_frac in 0.0f64..1.0,
        ) {
            let m = 1 + ((values.len() - 1) as f64 * m_frac) as usize;
            let s = series(&values);
            let base = rolling_means(&s, m).unwrap();
            let shifted = rolling_means(&s.map(|v| v + c).unwrap(), m).unwrap();
            for (a, b) in base.iter().zip(shifted.iter()) {
                prop_assert!((a + c - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn demean_is_idempotent(values in prop::collection::vec(-1e6f64..1e6, 1..100)) {
            let (c, _) = demean(&series(&values));
            let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            prop_assert!(c.mean().abs() <= 1e-12 * scale);
            let (_, mu2) = demean(&c);
            prop_assert!(mu2.abs() <= 1e-12 * scale);
        }
    }
}
