//! Explicit Hilbert embeddings of finite measure sets.
//!
//! A symmetric function f with zero diagonal that is negative semi-definite
//! on zero-sum coefficient vectors is realizable as squared distances of
//! points in a Hilbert space (Schoenberg). For a finite set this is the
//! classical-scaling construction: double-center, G = -1/2 J f J, take the
//! spectral factorization of G, and read coordinates off the positive part.
//!
//! The kernel used here is f(alpha_i, alpha_j) = SW1(alpha_i, alpha_j) /
//! kappa(n), which sandwiches the plain 1-Wasserstein distance:
//! sqrt(W1 / (16 e (k!)^2)) <= ||phi_i - phi_j|| <= sqrt(W1) for n >= 3,
//! with the 2(k(k-1)+1) constant in the plane.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{lower_sandwich_constant, lower_sandwich_constant_2d};
use crate::error::{Error, Result};
use crate::measures::{w1, EmpiricalMeasure};
use crate::rng::derive_seed;
use crate::sliced::{sw1_exact_2d, sw1_monte_carlo};
use crate::special::{kappa, Dimension};

/// Relative tolerance on the most negative centered eigenvalue before a
/// kernel is rejected as not negative semi-definite. Exact-2D kernels are
/// NSD mathematically; this covers floating point only. Monte-Carlo kernels
/// need a looser, std-error-scaled tolerance (see
/// [`check_negative_semidefinite_with_tol`]).
pub const NSD_REL_TOL: f64 = 1e-8;

/// Relative eigenvalue threshold below which spectral mass is clipped.
pub const RANK_REL_TOL: f64 = 1e-12;

/// Symmetric zero-diagonal matrix of squared-distance candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    values: Vec<Vec<f64>>,
    /// Largest per-entry Monte-Carlo standard error (0 for exact kernels).
    max_std_error: f64,
}

impl KernelMatrix {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_std_error(values, 0.0)
    }

    pub fn with_std_error(values: Vec<Vec<f64>>, max_std_error: f64) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return Err(Error::Empty("kernel matrix needs at least one row"));
        }
        let scale = values
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let tol = 1e-12 * (1.0 + scale);
        for (i, row) in values.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidKernel(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidKernel(format!(
                        "entry ({i},{j}) is not finite"
                    )));
                }
                if v < -tol {
                    return Err(Error::InvalidKernel(format!(
                        "entry ({i},{j}) = {v} is negative"
                    )));
                }
                if (v - values[j][i]).abs() > tol {
                    return Err(Error::InvalidKernel(format!(
                        "asymmetric at ({i},{j}): {v} vs {}",
                        values[j][i]
                    )));
                }
            }
            if values[i][i].abs() > tol {
                return Err(Error::InvalidKernel(format!(
                    "diagonal entry {i} = {} is not zero",
                    values[i][i]
                )));
            }
        }
        Ok(KernelMatrix {
            values,
            max_std_error,
        })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn max_std_error(&self) -> f64 {
        self.max_std_error
    }

    /// -1/2 J f J with J = I - (1/m) 1 1^T, the Gram candidate of classical
    /// scaling.
    fn centered_gram(&self) -> Vec<Vec<f64>> {
        let m = self.size();
        let row_means: Vec<f64> = self
            .values
            .iter()
            .map(|row| row.iter().sum::<f64>() / m as f64)
            .collect();
        let total_mean = row_means.iter().sum::<f64>() / m as f64;
        // f is symmetric, so column means equal row means
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| -0.5 * (self.values[i][j] - row_means[i] - row_means[j] + total_mean))
                    .collect()
            })
            .collect()
    }
}

/// How pairwise sliced distances of a kernel are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    /// Arc-decomposition exact values; requires ambient dimension 2.
    Exact2d,
    /// Seeded Monte-Carlo; pair (i, j) draws its directions from a sub-seed
    /// derived from (seed, pair index), so assembly order does not matter.
    MonteCarlo { num_samples: u64, seed: u64 },
}

/// Builds the kernel f\[i]\[j] = SW1(alpha_i, alpha_j) / kappa(n) over a
/// family of measures sharing one (k, n). Each unordered pair is computed
/// once and mirrored.
pub fn build_kernel(measures: &[EmpiricalMeasure], method: KernelMethod) -> Result<KernelMatrix> {
    if measures.is_empty() {
        return Err(Error::Empty("kernel needs at least one measure"));
    }
    let n = measures[0].dim();
    let k = measures[0].size();
    for m in measures {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
        if m.size() != k {
            return Err(Error::SizeMismatch {
                left: k,
                right: m.size(),
            });
        }
    }
    if let KernelMethod::Exact2d = method {
        if n != 2 {
            return Err(Error::DimensionMismatch { left: n, right: 2 });
        }
    }
    let kap = kappa(Dimension::new(n)?);
    let m = measures.len();

    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let computed: Vec<(f64, f64)> = pairs
        .par_iter()
        .enumerate()
        .map(|(pair_index, &(i, j))| -> Result<(f64, f64)> {
            let est = match method {
                KernelMethod::Exact2d => sw1_exact_2d(&measures[i], &measures[j])?,
                KernelMethod::MonteCarlo { num_samples, seed } => sw1_monte_carlo(
                    &measures[i],
                    &measures[j],
                    num_samples,
                    derive_seed(seed, pair_index as u64),
                )?,
            };
            Ok((est.value / kap, est.std_error / kap))
        })
        .collect::<Result<_>>()?;

    let mut values = vec![vec![0.0; m]; m];
    let mut max_std_error = 0.0f64;
    for (&(i, j), &(value, std_error)) in pairs.iter().zip(&computed) {
        values[i][j] = value;
        values[j][i] = value;
        max_std_error = max_std_error.max(std_error);
    }
    KernelMatrix::with_std_error(values, max_std_error)
}

/// Result of a negative-semi-definiteness check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsdCheck {
    pub ok: bool,
    /// Smallest eigenvalue of the centered Gram matrix G = -1/2 J f J;
    /// NSD on the zero-sum subspace is equivalent to this being >= 0.
    pub min_eigenvalue: f64,
    /// Largest |eigenvalue| of G, the scale the tolerance is relative to.
    pub spectral_norm: f64,
}

/// Checks negative semi-definiteness of f on zero-sum coefficient vectors
/// with the default tolerance [`NSD_REL_TOL`].
pub fn check_negative_semidefinite(f: &KernelMatrix) -> NsdCheck {
    check_negative_semidefinite_with_tol(f, NSD_REL_TOL)
}

/// Same check with an explicit relative tolerance; Monte-Carlo kernels
/// should scale it by their standard error.
pub fn check_negative_semidefinite_with_tol(f: &KernelMatrix, rel_tol: f64) -> NsdCheck {
    let (eigenvalues, _) = jacobi_eigen(f.centered_gram());
    let spectral_norm = eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let min_eigenvalue = eigenvalues.iter().fold(f64::INFINITY, |acc, &l| acc.min(l));
    NsdCheck {
        ok: min_eigenvalue >= -rel_tol * spectral_norm,
        min_eigenvalue,
        spectral_norm,
    }
}

/// Coordinates realizing a kernel as squared distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    /// One coordinate vector per input row; length equals the number of
    /// retained eigenvalues.
    pub coordinates: Vec<Vec<f64>>,
    /// Full centered spectrum, descending.
    pub eigenvalues: Vec<f64>,
    /// Total |negative eigenvalue| mass clipped to zero.
    pub clipped_mass: f64,
}

impl EmbeddingResult {
    /// Embedding dimension (count of retained eigenvalues).
    pub fn dim(&self) -> usize {
        self.coordinates.first().map_or(0, |c| c.len())
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.coordinates[i]
            .iter()
            .zip(&self.coordinates[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.squared_distance(i, j).sqrt()
    }
}

/// Embeds the finite set behind `f` so that squared coordinate distances
/// reproduce f. Fails if f is not negative semi-definite beyond
/// [`NSD_REL_TOL`]; eigenvalues below the rank threshold are clipped and
/// accounted in `clipped_mass`.
pub fn embed_finite_set(f: &KernelMatrix) -> Result<EmbeddingResult> {
    embed_finite_set_with_tol(f, NSD_REL_TOL)
}

/// Embedding with an explicit NSD tolerance (for Monte-Carlo kernels).
pub fn embed_finite_set_with_tol(f: &KernelMatrix, nsd_rel_tol: f64) -> Result<EmbeddingResult> {
    let m = f.size();
    let (mut eigenvalues, vectors) = jacobi_eigen(f.centered_gram());
    let spectral_norm = eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let min_eigenvalue = eigenvalues.iter().fold(f64::INFINITY, |acc, &l| acc.min(l));
    if min_eigenvalue < -nsd_rel_tol * spectral_norm {
        return Err(Error::NotNegativeSemidefinite {
            min_eigenvalue,
            tolerance: nsd_rel_tol * spectral_norm,
        });
    }

    // sort the spectrum descending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    let sorted_vals: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    eigenvalues = sorted_vals;

    let rank_cut = RANK_REL_TOL * spectral_norm;
    let retained: Vec<usize> = (0..m).filter(|&l| eigenvalues[l] > rank_cut).collect();
    let clipped_mass: f64 = eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();

    let coordinates: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            retained
                .iter()
                .map(|&l| eigenvalues[l].sqrt() * vectors[i][order[l]])
                .collect()
        })
        .collect();

    Ok(EmbeddingResult {
        coordinates,
        eigenvalues,
        clipped_mass,
    })
}

/// Pairwise verification report for the embedding control functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlReport {
    pub pair_count: u64,
    pub violations: u64,
    /// min/max over pairs of ||phi_i - phi_j|| / sqrt(W1), 1 when W1 = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
}

/// Checks, for every pair of measures, that the embedding distance lies in
/// the control sandwich
/// sqrt(c_low(k) W1) <= ||phi_i - phi_j|| <= sqrt(W1),
/// where c_low is the dimension-appropriate lower sandwich constant. The
/// comparison happens at the squared level with `squared_slack` absolute
/// tolerance (pass ~4x the kernel's max std error for Monte-Carlo kernels);
/// the embedding's clipped mass is added to the slack automatically.
pub fn check_control_functions(
    measures: &[EmpiricalMeasure],
    result: &EmbeddingResult,
    squared_slack: f64,
) -> Result<ControlReport> {
    if measures.len() != result.coordinates.len() {
        return Err(Error::SizeMismatch {
            left: measures.len(),
            right: result.coordinates.len(),
        });
    }
    if measures.is_empty() {
        return Err(Error::Empty("control check needs at least one measure"));
    }
    let n = measures[0].dim();
    let k = measures[0].size();
    let lower_c = if n >= 3 {
        lower_sandwich_constant(k)
    } else {
        lower_sandwich_constant_2d(k)
    };
    let slack = squared_slack + result.clipped_mass + 1e-12;

    let mut violations = 0u64;
    let mut pair_count = 0u64;
    let mut min_ratio: Option<f64> = None;
    let mut max_ratio: Option<f64> = None;
    for i in 0..measures.len() {
        for j in (i + 1)..measures.len() {
            let (dist, _) = w1(&measures[i], &measures[j])?;
            let dsq = result.squared_distance(i, j);
            let lower_ok = dsq >= lower_c * dist - slack;
            let upper_ok = dsq <= dist + slack;
            if !(lower_ok && upper_ok) {
                violations += 1;
            }
            let ratio = if dist == 0.0 {
                1.0
            } else {
                (dsq / dist).sqrt()
            };
            min_ratio = Some(min_ratio.map_or(ratio, |m| m.min(ratio)));
            max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
            pair_count += 1;
        }
    }
    Ok(ControlReport {
        pair_count,
        violations,
        min_ratio,
        max_ratio,
    })
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns (eigenvalues, vectors) with vectors[i][l] the i-th component of
/// the eigenvector for eigenvalues[l], i.e. A = V diag(lambda) V^T with V
/// holding eigenvectors as columns. Robust and plenty fast at the matrix
/// sizes that occur here (m is the number of measures being embedded).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = a.len();
    let mut v = vec![vec![0.0; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if m <= 1 {
        return (
            a.iter()
                .enumerate()
                .map(|(i, r)| r.get(i).copied().unwrap_or(0.0))
                .collect(),
            v,
        );
    }

    let frob: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let stop = 1e-30 * frob * frob;

    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .map(|i| ((i + 1)..m).map(|j| a[i][j] * a[i][j]).sum::<f64>())
            .sum::<f64>()
            * 2.0;
        if off <= stop {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for row in a.iter_mut() {
                    let (ap, aq) = (row[p], row[q]);
                    row[p] = c * ap - s * aq;
                    row[q] = s * ap + c * aq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apj, aqj) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (x, y) = (*apj, *aqj);
                    *apj = c * x - s * y;
                    *aqj = s * x + c * y;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let eigenvalues: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}
