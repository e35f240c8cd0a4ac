//! Data-generating processes for the coverage experiments.
//!
//! Four benchmark scenarios combine short memory (AR(1), coefficient 0.6) or
//! long memory (truncated MA(∞) with weights `(j+1)^{-0.8}`) with light-tailed
//! mixture-normal or heavy-tailed symmetric α-stable noise. The local-level
//! and local-to-unity processes and ARMA(1,1)-GARCH(1,1) paths are used to
//! exercise the low-frequency and model-based intervals.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::series::Series;

/// Burn-in discarded before AR(1) and ARMA-GARCH paths.
pub const BURN_IN: usize = 500;

/// Default MA truncation for the long-memory scenarios.
pub const DEFAULT_TRUNC_LEN: usize = 10_000;

/// Variance of the second mixture component, read as `N(0, 1.25)` with 1.25
/// a variance.
pub const DEFAULT_MIXTURE_VAR: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgpKind {
    Ar1,
    LongMemory,
    LocalLevel,
    LocalToUnity,
    ArmaGarch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailKind {
    /// `0.5 N(0, 1) + 0.5 N(0, var2)`.
    MixtureNormal { var2: f64 },
    /// Symmetric α-stable with unit scale.
    Stable { alpha: f64 },
    StandardNormal,
    /// Student t rescaled to unit variance; `df > 2`.
    StudentT { df: f64 },
}

impl TailKind {
    pub fn mixture() -> Self {
        TailKind::MixtureNormal {
            var2: DEFAULT_MIXTURE_VAR,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            TailKind::MixtureNormal { var2 } => mixture_draw(rng, var2),
            TailKind::Stable { alpha } => stable_draw(rng, alpha),
            TailKind::StandardNormal => rng.sample(StandardNormal),
            TailKind::StudentT { df } => {
                let t: f64 = StudentT::new(df).expect("validated df").sample(rng);
                t * ((df - 2.0) / df).sqrt()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TailKind::MixtureNormal { var2 } if !(var2 > 0.0) => {
                Err(Error::invalid("mixture variance must be positive"))
            }
            TailKind::Stable { alpha } => check_alpha(alpha),
            TailKind::StudentT { df } if !(df > 2.0) => {
                Err(Error::invalid("Student t innovations need df > 2"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GarchParams {
    /// Constant conditional variance `omega`.
    pub fn constant(variance: f64) -> Self {
        GarchParams {
            omega: variance,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || self.alpha < 0.0 || self.beta < 0.0 {
            return Err(Error::invalid("GARCH needs omega > 0 and alpha, beta >= 0"));
        }
        if self.alpha + self.beta >= 1.0 {
            return Err(Error::invalid(format!(
                "GARCH alpha + beta = {} is not below 1",
                self.alpha + self.beta
            )));
        }
        Ok(())
    }
}

/// Scenario descriptor. Fields irrelevant to `kind` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpSpec {
    pub kind: DgpKind,
    pub tail: TailKind,
    /// Noise scale for AR(1) and long-memory paths.
    pub sigma: f64,
    /// AR coefficient (AR(1) and ARMA-GARCH).
    pub phi: f64,
    /// MA coefficient (ARMA-GARCH only).
    pub theta: f64,
    /// Long-memory weight exponent.
    pub decay: f64,
    /// Local-level persistence parameter.
    pub b: f64,
    /// Local-to-unity parameter.
    pub c: f64,
    pub trunc_len: usize,
    pub garch: GarchParams,
}

impl Default for DgpSpec {
    fn default() -> Self {
        DgpSpec {
            kind: DgpKind::Ar1,
            tail: TailKind::mixture(),
            sigma: 1.0,
            phi: 0.6,
            theta: 0.0,
            decay: 0.8,
            b: 1.0,
            c: 0.0,
            trunc_len: DEFAULT_TRUNC_LEN,
            garch: GarchParams::constant(1.0),
        }
    }
}

impl DgpSpec {
    pub fn validate(&self) -> Result<()> {
        self.tail.validate()?;
        match self.kind {
            DgpKind::Ar1 => {
                if self.phi.abs() >= 1.0 {
                    return Err(Error::invalid("AR(1) needs |phi| < 1"));
                }
            }
            DgpKind::LongMemory => {
                if self.trunc_len < 1000 {
                    return Err(Error::invalid("long-memory truncation must be >= 1000"));
                }
                if !(self.decay > 0.0) {
                    return Err(Error::invalid("long-memory decay must be positive"));
                }
            }
            DgpKind::LocalLevel => {
                if !(self.b > 0.0) {
                    return Err(Error::invalid("local-level model needs b > 0"));
                }
            }
            DgpKind::LocalToUnity => {
                if !self.c.is_finite() {
                    return Err(Error::invalid("local-to-unity c must be finite"));
                }
            }
            DgpKind::ArmaGarch => {
                if self.phi.abs() >= 1.0 {
                    return Err(Error::invalid("ARMA needs |phi| < 1"));
                }
                self.garch.validate()?;
            }
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma must be positive"));
        }
        Ok(())
    }
}

/// The four benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    ShortLight,
    LongLight,
    ShortHeavy,
    LongHeavy,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::ShortLight,
        Scenario::LongLight,
        Scenario::ShortHeavy,
        Scenario::LongHeavy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::ShortLight => "short-light",
            Scenario::LongLight => "long-light",
            Scenario::ShortHeavy => "short-heavy",
            Scenario::LongHeavy => "long-heavy",
        }
    }

    pub fn spec(&self, sigma: f64) -> DgpSpec {
        let (kind, tail) = match self {
            Scenario::ShortLight => (DgpKind::Ar1, TailKind::mixture()),
            Scenario::LongLight => (DgpKind::LongMemory, TailKind::mixture()),
            Scenario::ShortHeavy => (DgpKind::Ar1, TailKind::Stable { alpha: 1.5 }),
            Scenario::LongHeavy => (DgpKind::LongMemory, TailKind::Stable { alpha: 1.5 }),
        };
        DgpSpec {
            kind,
            tail,
            sigma,
            ..DgpSpec::default()
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown scenario `{s}`")))
    }
}

fn mixture_draw<R: Rng + ?Sized>(rng: &mut R, var2: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    if rng.random::<bool>() {
        z
    } else {
        z * var2.sqrt()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::invalid(format!("stable index {alpha} outside (0, 2]")));
    }
    Ok(())
}

// Chambers-Mallows-Stuck, symmetric case, unit scale.
fn stable_draw<R: Rng + ?Sized>(rng: &mut R, alpha: f64) -> f64 {
    let v = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * ((v - alpha * v).cos() / w).powf((1.0 - alpha) / alpha)
}

pub fn sample_mixture_normal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Series> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    Series::new(
        (0..n)
            .map(|_| mixture_draw(rng, DEFAULT_MIXTURE_VAR))
            .collect(),
    )
}

/// Symmetric α-stable draws with the given scale.
pub fn sample_stable<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    scale: f64,
    rng: &mut R,
) -> Result<Series> {
    check_alpha(alpha)?;
    if !(scale > 0.0) {
        return Err(Error::invalid("stable scale must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    Series::new((0..n).map(|_| scale * stable_draw(rng, alpha)).collect())
}

/// Simulates `n` observations of the process described by `spec`.
pub fn gen_scenario<R: Rng + ?Sized>(spec: &DgpSpec, n: usize, rng: &mut R) -> Result<Series> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let values = match spec.kind {
        DgpKind::Ar1 => {
            let mut e = 0.0;
            let mut out = Vec::with_capacity(n);
            for t in 0..BURN_IN + n {
                e = spec.phi * e + spec.sigma * spec.tail.sample(rng);
                if t >= BURN_IN {
                    out.push(e);
                }
            }
            out
        }
        DgpKind::LongMemory => long_memory(spec, n, rng),
        DgpKind::LocalLevel => {
            let scale = 1.0 / (spec.b * n as f64);
            let mut level = 0.0;
            (0..n)
                .map(|_| {
                    let y1: f64 = rng.sample(StandardNormal);
                    let y2: f64 = rng.sample(StandardNormal);
                    level += y2;
                    y1 + scale * level
                })
                .collect()
        }
        DgpKind::LocalToUnity => {
            let rho = 1.0 - spec.c / n as f64;
            let mut y = 0.0;
            (0..n)
                .map(|_| {
                    let y1: f64 = rng.sample(StandardNormal);
                    y = rho * y + y1;
                    y
                })
                .collect()
        }
        DgpKind::ArmaGarch => {
            return gen_arma_garch(spec.phi, spec.theta, spec.garch, n, rng, spec.tail)
        }
    };
    Series::new(values)
}

fn long_memory<R: Rng + ?Sized>(spec: &DgpSpec, n: usize, rng: &mut R) -> Vec<f64> {
    let len = spec.trunc_len;
    let weights: Vec<f64> = (0..len)
        .map(|j| spec.sigma * ((j + 1) as f64).powf(-spec.decay))
        .collect();
    // noise[k] is the innovation at time k - (len - 1). Draws run newest
    // first so a longer truncation only prepends older shocks for a seed.
    let mut noise: Vec<f64> = (0..n + len - 1).map(|_| spec.tail.sample(rng)).collect();
    noise.reverse();
    (0..n)
        .map(|t| {
            let newest = t + len - 1;
            weights
                .iter()
                .enumerate()
                .map(|(j, w)| w * noise[newest - j])
                .sum()
        })
        .collect()
}

/// ARMA(1,1)-GARCH(1,1) path after a burn-in of [`BURN_IN`] observations.
///
/// `innovations` should have unit variance when GARCH is active (normal,
/// standardized t or a unit mixture).
pub fn gen_arma_garch<R: Rng + ?Sized>(
    phi: f64,
    theta: f64,
    garch: GarchParams,
    n: usize,
    rng: &mut R,
    innovations: TailKind,
) -> Result<Series> {
    if phi.abs() >= 1.0 {
        return Err(Error::invalid("ARMA needs |phi| < 1"));
    }
    garch.validate()?;
    innovations.validate()?;
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let mut var = garch.unconditional_variance();
    let mut e_prev = 0.0;
    let mut y = 0.0;
    let mut out = Vec::with_capacity(n);
    for t in 0..BURN_IN + n {
        var = garch.omega + garch.alpha * e_prev * e_prev + garch.beta * var;
        let e = var.sqrt() * innovations.sample(rng);
        y = phi * y + e + theta * e_prev;
        e_prev = e;
        if t >= BURN_IN {
            out.push(y);
        }
    }
    Series::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    fn lag1_corr(xs: &[f64]) -> f64 {
        let (m, _) = moments(xs);
        let num: f64 = xs.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
        let den: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
        num / den
    }

    #[test]
    fn mixture_moments() {
        let s = sample_mixture_normal(1_000_000, &mut rng_from_seed(1)).unwrap();
        let (m, v) = moments(&s);
        assert!(m.abs() <= 0.005, "mean {m}");
        assert!((1.118..=1.132).contains(&v), "variance {v}");
    }

    #[test]
    fn stable_at_two_is_gaussian() {
        let s = sample_stable(400_000, 2.0, 1.5, &mut rng_from_seed(2)).unwrap();
        let (m, v) = moments(&s);
        // N(0, 2 * 1.5^2)
        assert!(m.abs() < 0.02);
        assert!((v / 4.5 - 1.0).abs() < 0.01, "variance {v}");
    }

    #[test]
    fn stable_symmetry_and_tail_index() {
        let s = sample_stable(1_000_000, 1.5, 1.0, &mut rng_from_seed(3)).unwrap();
        let mut sorted = s.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = 0.5 * (sorted[499_999] + sorted[500_000]);
        assert!(median.abs() <= 0.01, "median {median}");

        let mut abs: Vec<f64> = s.iter().map(|x| x.abs()).collect();
        abs.sort_by(|a, b| b.total_cmp(a));
        let k = 10_000;
        let threshold = abs[k].ln();
        let hill = abs[..k].iter().map(|x| x.ln() - threshold).sum::<f64>() / k as f64;
        let alpha_hat = 1.0 / hill;
        assert!((1.35..=1.65).contains(&alpha_hat), "hill {alpha_hat}");
    }

    #[test]
    fn stable_rejects_bad_index() {
        let mut rng = rng_from_seed(0);
        assert!(sample_stable(10, 0.0, 1.0, &mut rng).is_err());
        assert!(sample_stable(10, 2.1, 1.0, &mut rng).is_err());
        assert!(sample_stable(10, 1.5, 0.0, &mut rng).is_err());
    }

    #[test]
    fn degenerate_ar_is_scaled_noise() {
        let spec = DgpSpec {
            phi: 0.0,
            sigma: 2.0,
            ..DgpSpec::default()
        };
        let path = gen_scenario(&spec, 50, &mut rng_from_seed(9)).unwrap();
        let mut rng = rng_from_seed(9);
        for _ in 0..BURN_IN {
            spec.tail.sample(&mut rng);
        }
        for v in path.iter() {
            assert_eq!(*v, 2.0 * spec.tail.sample(&mut rng));
        }
    }

    #[test]
    fn ar1_marginal_variance() {
        let spec = Scenario::ShortLight.spec(1.31);
        let path = gen_scenario(&spec, 1_000_000, &mut rng_from_seed(4)).unwrap();
        let (_, v) = moments(&path);
        let want = 1.31f64.powi(2) * 1.125 / (1.0 - 0.36);
        assert!((v / want - 1.0).abs() < 0.02, "{v} vs {want}");
    }

    #[test]
    fn long_memory_autocorrelation() {
        // Oracle: sum a_j a_{j+1} / sum a_j^2 for the truncated weights.
        let a: Vec<f64> = (0..DEFAULT_TRUNC_LEN)
            .map(|j| ((j + 1) as f64).powf(-0.8))
            .collect();
        let num: f64 = a.windows(2).map(|w| w[0] * w[1]).sum();
        let den: f64 = a.iter().map(|x| x * x).sum();
        let rho = num / den;
        assert!((0.55..=0.75).contains(&rho), "oracle {rho}");

        let spec = Scenario::LongLight.spec(1.0);
        let path = gen_scenario(&spec, 100_000, &mut rng_from_seed(5)).unwrap();
        let r = lag1_corr(&path);
        assert!((0.55..=0.75).contains(&r), "sample {r}");
    }

    #[test]
    fn truncation_tail_is_small() {
        let sq = |j: usize| ((j + 1) as f64).powf(-1.6);
        let total: f64 = (0..10_000).map(sq).sum();
        let tail_bound = (10_000f64).powf(-0.6) / 0.6;
        assert!(tail_bound / total <= 0.007);

        let mut spec = Scenario::LongLight.spec(1.0);
        let a = gen_scenario(&spec, 2000, &mut rng_from_seed(6)).unwrap();
        spec.trunc_len = 20_000;
        let b = gen_scenario(&spec, 2000, &mut rng_from_seed(6)).unwrap();
        let (_, va) = moments(&a);
        let (_, vb) = moments(&b);
        assert!((va / vb - 1.0).abs() < 0.01, "{va} vs {vb}");
    }

    #[test]
    fn reproducible_per_seed() {
        for sc in Scenario::ALL {
            let spec = sc.spec(1.31);
            let a = gen_scenario(&spec, 300, &mut rng_from_seed(77)).unwrap();
            let b = gen_scenario(&spec, 300, &mut rng_from_seed(77)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn local_to_unity_limits() {
        let n = 200;
        let mut spec = DgpSpec {
            kind: DgpKind::LocalToUnity,
            c: 0.0,
            ..DgpSpec::default()
        };
        let walk = gen_scenario(&spec, n, &mut rng_from_seed(8)).unwrap();
        let mut rng = rng_from_seed(8);
        let mut y = 0.0;
        for v in walk.iter() {
            let z: f64 = rng.sample(StandardNormal);
            y += z;
            assert_eq!(*v, y);
        }

        spec.c = n as f64;
        let noise = gen_scenario(&spec, n, &mut rng_from_seed(8)).unwrap();
        let mut rng = rng_from_seed(8);
        for v in noise.iter() {
            let z: f64 = rng.sample(StandardNormal);
            assert_eq!(*v, z);
        }
    }

    #[test]
    fn local_level_matches_recursion() {
        let spec = DgpSpec {
            kind: DgpKind::LocalLevel,
            b: 0.5,
            ..DgpSpec::default()
        };
        let n = 100;
        let path = gen_scenario(&spec, n, &mut rng_from_seed(10)).unwrap();
        let mut rng = rng_from_seed(10);
        let mut sum = 0.0;
        for v in path.iter() {
            let y1: f64 = rng.sample(StandardNormal);
            let y2: f64 = rng.sample(StandardNormal);
            sum += y2;
            assert!((v - (y1 + sum / (0.5 * n as f64))).abs() < 1e-12);
        }
    }

    #[test]
    fn garch_unconditional_variance() {
        let g = GarchParams {
            omega: 0.1,
            alpha: 0.1,
            beta: 0.8,
        };
        let path =
            gen_arma_garch(0.0, 0.0, g, 1_000_000, &mut rng_from_seed(11), TailKind::StandardNormal)
                .unwrap();
        let (_, v) = moments(&path);
        assert!((v / 1.0 - 1.0).abs() < 0.03, "variance {v}");
    }

    #[test]
    fn constant_variance_arma_reduces_to_ar1() {
        let path = gen_arma_garch(
            0.0,
            0.0,
            GarchParams::constant(4.0),
            200_000,
            &mut rng_from_seed(12),
            TailKind::StandardNormal,
        )
        .unwrap();
        let (_, v) = moments(&path);
        assert!((v / 4.0 - 1.0).abs() < 0.02);
        let r = lag1_corr(&path);
        assert!(r.abs() < 3.0 / (200_000f64).sqrt(), "lag-1 {r}");
    }

    #[test]
    fn invalid_specs() {
        let mut rng = rng_from_seed(0);
        let bad = DgpSpec {
            phi: 1.0,
            ..DgpSpec::default()
        };
        assert!(gen_scenario(&bad, 10, &mut rng).is_err());
        let bad = DgpSpec {
            kind: DgpKind::LongMemory,
            trunc_len: 10,
            ..DgpSpec::default()
        };
        assert!(gen_scenario(&bad, 10, &mut rng).is_err());
        let g = GarchParams {
            omega: 0.1,
            alpha: 0.5,
            beta: 0.5,
        };
        assert!(gen_arma_garch(0.0, 0.0, g, 10, &mut rng, TailKind::StandardNormal).is_err());
    }

    #[test]
    fn scenario_names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!("medium".parse::<Scenario>().is_err());
    }
}
