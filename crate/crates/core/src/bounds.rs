//! Randomized verification of the sandwich bounds between sliced and plain
//! 1-Wasserstein distances, plus the band-integral lower bound they rest on.
//!
//! For empirical measures of size k in R^n, n >= 3:
//!
//! ```text
//! kappa(n) / (16 e (k!)^2) * W1 <= SW1 <= kappa(n) * W1
//! ```
//!
//! with SW1 the unnormalized sphere integral. For n = 2 the checks use the
//! NORMALIZED sliced distance SW1 / S_1 (the sphere average), for which
//!
//! ```text
//! W1 / (2 (k(k-1) + 1)) <= SW1 / S_1 <= W1
//! ```
//!
//! holds; with the unnormalized convention the n = 2 upper bound would fail
//! already for single points (ratio 4 > 1), so the two-dimensional bound is
//! stated against the sphere average.
//!
//! Monte-Carlo checks carry 4 standard errors of slack on the tested side;
//! a violation is only recorded beyond that slack (false-alarm probability
//! per instance ~6e-5 under the normal approximation).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{w1, EmpiricalMeasure};
use crate::rng::{derive_seed, CounterStream};
use crate::sliced::{sw1_exact_2d, sw1_monte_carlo, SlicedEstimate};
use crate::special::{cap_cdf, kappa, sphere_area, Dimension};

/// Statistical slack multiplier for Monte-Carlo bound checks.
pub const MC_SIGMA_SLACK: f64 = 4.0;

/// Deterministic relative slack for exact-2D bound checks.
pub const EXACT_2D_REL_SLACK: f64 = 1e-9;

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// 1 / (16 e (k!)^2), the lower sandwich constant for n >= 3.
pub fn lower_sandwich_constant(k: usize) -> f64 {
    let kf = factorial(k);
    1.0 / (16.0 * std::f64::consts::E * kf * kf)
}

/// 1 / (2 (k(k-1) + 1)), the lower constant of the two-dimensional bound.
pub fn lower_sandwich_constant_2d(k: usize) -> f64 {
    1.0 / (2.0 * (k as f64 * (k as f64 - 1.0) + 1.0))
}

/// Outcome of a single sandwich check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// SW1 / (kappa(n) W1) for n >= 3, (SW1 / S_1) / W1 for n = 2;
    /// defined as 1 when W1 = 0.
    pub ratio: f64,
}

impl SandwichCheck {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Checks the n >= 3 sandwich for a sliced estimate computed from
/// `(alpha, beta)`. Monte-Carlo estimates get `MC_SIGMA_SLACK` standard
/// errors of slack on each side.
pub fn check_sandwich(
    alpha: &EmpiricalMeasure,
    beta: &EmpiricalMeasure,
    sw: &SlicedEstimate,
) -> Result<SandwichCheck> {
    if alpha.dim() < 3 {
        return Err(Error::domain(
            "check_sandwich requires n >= 3; use check_sandwich_2d in the plane",
        ));
    }
    let (dist, _) = w1(alpha, beta)?;
    let kap = kappa(Dimension::new(alpha.dim())?);
    let upper = kap * dist;
    let lower = lower_sandwich_constant(alpha.size()) * upper;
    let slack = MC_SIGMA_SLACK * sw.std_error;
    let ratio = if dist == 0.0 { 1.0 } else { sw.value / upper };
    Ok(SandwichCheck {
        lower_ok: sw.value >= lower - slack,
        upper_ok: sw.value <= upper + slack,
        ratio,
    })
}

/// Checks the n = 2 bound with the exact arc-decomposition value, against
/// the normalized sliced distance. Deterministic, with `EXACT_2D_REL_SLACK`
/// relative slack for rounding.
pub fn check_sandwich_2d(
    alpha: &EmpiricalMeasure,
    beta: &EmpiricalMeasure,
) -> Result<SandwichCheck> {
    if alpha.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: alpha.dim(),
            right: 2,
        });
    }
    let (dist, _) = w1(alpha, beta)?;
    let sw = sw1_exact_2d(alpha, beta)?;
    let normalized = sw.value / sphere_area(Dimension::new(2)?);
    let lower = lower_sandwich_constant_2d(alpha.size()) * dist;
    let slack = EXACT_2D_REL_SLACK * dist;
    let ratio = if dist == 0.0 { 1.0 } else { normalized / dist };
    Ok(SandwichCheck {
        lower_ok: normalized >= lower - slack,
        upper_ok: normalized <= dist + slack,
        ratio,
    })
}

/// Outcome of one band-integral check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCheck {
    /// Monte-Carlo estimate of the band integral of |<x, v>|.
    pub lhs: f64,
    pub lhs_std_error: f64,
    /// c^2 ||v|| kappa(n) / (16 e) with c the band's area fraction.
    pub rhs: f64,
    pub ok: bool,
}

/// Verifies the lower bound on the integral of |<x, v>| over the band
/// Omega = { x in S^{n-1} : |x_1| >= t_band }, whose area fraction c comes
/// from the cap distribution. The left side is estimated by Monte-Carlo with
/// `num_samples` sphere draws keyed by `seed`.
pub fn band_integral_lower_bound(
    n: Dimension,
    v: &[f64],
    t_band: f64,
    num_samples: u64,
    seed: u64,
) -> Result<BandCheck> {
    if n.get() < 3 {
        return Err(Error::domain("band integral requires n >= 3"));
    }
    if v.len() != n.get() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: n.get(),
        });
    }
    if !(0.0..1.0).contains(&t_band) {
        return Err(Error::domain(format!(
            "band threshold must lie in [0, 1) for a nonempty band, got {t_band}"
        )));
    }
    if num_samples == 0 {
        return Err(Error::domain("num_samples must be positive"));
    }

    let dim = n.get();
    let area = sphere_area(n);
    let samples: Vec<f64> = (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut stream = CounterStream::new(seed, i);
            let x = stream.unit_sphere(dim);
            if x[0].abs() >= t_band {
                x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs()
            } else {
                0.0
            }
        })
        .collect();

    let count = num_samples as f64;
    let mean = samples.iter().sum::<f64>() / count;
    let lhs = area * mean;
    let lhs_std_error = if num_samples > 1 {
        let var = samples.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (count - 1.0);
        area * (var / count).sqrt()
    } else {
        0.0
    };

    let c = 1.0 - cap_cdf(n, t_band)?;
    let norm_v = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rhs = c * c * norm_v * kappa(n) / (16.0 * std::f64::consts::E);

    Ok(BandCheck {
        lhs,
        lhs_std_error,
        rhs,
        ok: lhs >= rhs - MC_SIGMA_SLACK * lhs_std_error,
    })
}

/// Point clouds used by campaign instance generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointDistribution {
    /// Independent standard normal coordinates.
    Gaussian,
    /// Uniform on the cube [-1, 1]^n.
    Cube,
    /// Gaussian mixture: up to 3 unit-scale centers, 0.05 within-cluster
    /// scale. Stresses near-degenerate matchings.
    Clustered,
}

impl std::str::FromStr for PointDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(PointDistribution::Gaussian),
            "cube" => Ok(PointDistribution::Cube),
            "clustered" => Ok(PointDistribution::Clustered),
            other => Err(Error::InvalidConfig(format!(
                "unknown distribution {other:?} (expected gaussian, cube or clustered)"
            ))),
        }
    }
}

impl std::fmt::Display for PointDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PointDistribution::Gaussian => "gaussian",
            PointDistribution::Cube => "cube",
            PointDistribution::Clustered => "clustered",
        };
        write!(f, "{name}")
    }
}

/// Draws one empirical measure of size k in R^n from the given distribution.
pub fn sample_measure(
    distribution: PointDistribution,
    n: usize,
    k: usize,
    stream: &mut CounterStream,
) -> EmpiricalMeasure {
    let points: Vec<Vec<f64>> = match distribution {
        PointDistribution::Gaussian => (0..k)
            .map(|_| (0..n).map(|_| stream.standard_normal()).collect())
            .collect(),
        PointDistribution::Cube => (0..k)
            .map(|_| (0..n).map(|_| stream.uniform_in(-1.0, 1.0)).collect())
            .collect(),
        PointDistribution::Clustered => {
            let num_centers = k.clamp(1, 3);
            let centers: Vec<Vec<f64>> = (0..num_centers)
                .map(|_| (0..n).map(|_| stream.standard_normal()).collect())
                .collect();
            (0..k)
                .map(|_| {
                    let c = &centers[(stream.next_u64() % num_centers as u64) as usize];
                    c.iter()
                        .map(|&x| x + 0.05 * stream.standard_normal())
                        .collect()
                })
                .collect()
        }
    };
    EmpiricalMeasure::new(points).expect("generated points are finite and well-formed")
}

/// Campaign configuration; fully determines the report given the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    /// Monte-Carlo directions per instance (ignored when n = 2, where the
    /// exact method is used).
    pub num_samples: u64,
    pub seed: u64,
    pub distribution: PointDistribution,
}

impl CampaignConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "campaign dimension must be >= 2, got {}",
                self.n
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("campaign needs k >= 1".into()));
        }
        if self.n >= 3 && self.num_samples == 0 {
            return Err(Error::InvalidConfig(
                "Monte-Carlo campaigns need num_samples >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Aggregated result of a bound-verification campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub config: CampaignConfig,
    pub instance_count: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
}

/// Runs `trials` random sandwich checks. Instance i derives its generator
/// and Monte-Carlo seeds from `(config.seed, i)`, so the report is
/// bit-identical across runs and thread counts.
pub fn run_campaign(config: &CampaignConfig) -> Result<BoundReport> {
    config.validate()?;

    let checks: Vec<SandwichCheck> = (0..config.trials)
        .into_par_iter()
        .map(|i| -> Result<SandwichCheck> {
            let mut stream = CounterStream::new(config.seed, 2 * i);
            let alpha = sample_measure(config.distribution, config.n, config.k, &mut stream);
            let beta = sample_measure(config.distribution, config.n, config.k, &mut stream);
            if config.n == 2 {
                check_sandwich_2d(&alpha, &beta)
            } else {
                let mc_seed = derive_seed(config.seed, 2 * i + 1);
                let sw = sw1_monte_carlo(&alpha, &beta, config.num_samples, mc_seed)?;
                check_sandwich(&alpha, &beta, &sw)
            }
        })
        .collect::<Result<_>>()?;

    let mut violations = 0u64;
    let mut min_ratio: Option<f64> = None;
    let mut max_ratio: Option<f64> = None;
    for check in &checks {
        if !check.ok() {
            violations += 1;
        }
        min_ratio = Some(min_ratio.map_or(check.ratio, |m| m.min(check.ratio)));
        max_ratio = Some(max_ratio.map_or(check.ratio, |m| m.max(check.ratio)));
    }

    Ok(BoundReport {
        config: config.clone(),
        instance_count: config.trials,
        violations,
        min_ratio,
        max_ratio,
    })
}
