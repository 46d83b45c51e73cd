//! Empirical measures of fixed size k and the exact 1-Wasserstein distance.
//!
//! An empirical measure is (1/k) sum of Dirac masses at k points of R^n.
//! For two such measures of equal size, W1 is the minimum over bijections of
//! the mean matched Euclidean distance; we solve it exactly with a dense
//! O(k^3) shortest-augmenting-path assignment. On the line there is a fast
//! path: sort both lists and pair order statistics.

use crate::error::{Error, Result};

/// Uniformly weighted point cloud (1/k) sum of delta_{x^i} in R^n.
///
/// Duplicate points are allowed (multiset semantics). The stored order
/// carries no meaning: every distance in this crate is invariant under
/// reordering of the point list.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<Vec<f64>>,
}

impl EmpiricalMeasure {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("empirical measure needs at least one point"));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::Empty("points must have at least one coordinate"));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::domain("point coordinates must be finite"));
            }
        }
        Ok(EmpiricalMeasure { points })
    }

    /// Measure on the real line from a list of values.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    /// Number of support points (with multiplicity).
    #[inline]
    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Ambient dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    #[inline]
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Applies a point map to every support point, preserving k.
    ///
    /// This is the induced map on empirical measures (the pushforward of the
    /// discrete measure). The image points must all share one dimension.
    pub fn pushforward<F>(&self, f: F) -> Result<EmpiricalMeasure>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        EmpiricalMeasure::new(self.points.iter().map(|p| f(p)).collect())
    }

    fn check_compatible(&self, other: &EmpiricalMeasure) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// A bijection of {0..k-1} together with its mean transport cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// permutation\[i] = j pairs source point i with target point j.
    pub permutation: Vec<usize>,
    /// (1/k) sum of matched distances.
    pub cost: f64,
}

#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mean of the matched distances, accumulated in ascending order so the
/// reported cost does not depend on how the points happen to be stored.
fn mean_sorted(mut dists: Vec<f64>) -> f64 {
    dists.sort_by(f64::total_cmp);
    let k = dists.len() as f64;
    dists.iter().sum::<f64>() / k
}

/// Error-free transform: s + e == a + b exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let err = (a - (s - bv)) + (b - bv);
    (s, err)
}

/// |a - b| as an exact double-double (abs of the error-free difference).
#[inline]
fn exact_abs_diff(a: f64, b: f64) -> (f64, f64) {
    let (s, e) = two_sum(a, -b);
    if s < 0.0 || (s == 0.0 && e < 0.0) {
        (-s, -e)
    } else {
        (s, e)
    }
}

/// Mean of exact 1D distances, accumulated in double-double precision and
/// rounded once at the end.
///
/// On the line, distinct optimal matchings are common (uncrossing a pair
/// does not change the total) and the tie is an exact identity of the
/// unrounded differences. Summing the rounded per-pair distances would make
/// mathematically equal matchings disagree in the last ulp; summing the
/// exact differences makes every optimal matching report the identical
/// floating-point cost.
fn mean_exact_1d(mut terms: Vec<(f64, f64)>) -> f64 {
    terms.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (thi, tlo) in terms.iter().copied() {
        let (s, e) = two_sum(hi, thi);
        let carry = lo + tlo + e;
        let (h2, l2) = two_sum(s, carry);
        hi = h2;
        lo = l2;
    }
    let k = terms.len() as f64;
    (hi + lo) / k
}

/// Exact 1-Wasserstein distance between equal-size empirical measures.
///
/// Returns the minimum over all k! bijections of the mean matched Euclidean
/// distance, plus one optimal matching. Only the cost is canonical; when
/// several matchings are optimal, which one is returned is unspecified.
pub fn w1(alpha: &EmpiricalMeasure, beta: &EmpiricalMeasure) -> Result<(f64, Matching)> {
    alpha.check_compatible(beta)?;
    let k = alpha.size();
    let costs: Vec<Vec<f64>> = alpha
        .points()
        .iter()
        .map(|x| beta.points().iter().map(|y| euclidean(x, y)).collect())
        .collect();
    let permutation = min_cost_assignment(&costs);
    let cost = if alpha.dim() == 1 {
        mean_exact_1d(
            (0..k)
                .map(|i| exact_abs_diff(alpha.points()[i][0], beta.points()[permutation[i]][0]))
                .collect(),
        )
    } else {
        mean_sorted((0..k).map(|i| costs[i][permutation[i]]).collect())
    };
    Ok((cost, Matching { permutation, cost }))
}

/// 1-Wasserstein distance on the real line via sorted pairing.
///
/// Pairs the j-th smallest of `values_a` with the j-th smallest of
/// `values_b`; on the line this realizes the assignment minimum. The sort is
/// stable, so equal values keep input order and the returned matching is
/// deterministic.
pub fn w1_line(values_a: &[f64], values_b: &[f64]) -> Result<(f64, Matching)> {
    if values_a.is_empty() {
        return Err(Error::Empty("w1_line needs at least one value"));
    }
    if values_a.len() != values_b.len() {
        return Err(Error::SizeMismatch {
            left: values_a.len(),
            right: values_b.len(),
        });
    }
    let k = values_a.len();
    let mut order_a: Vec<usize> = (0..k).collect();
    let mut order_b: Vec<usize> = (0..k).collect();
    order_a.sort_by(|&i, &j| values_a[i].total_cmp(&values_a[j]));
    order_b.sort_by(|&i, &j| values_b[i].total_cmp(&values_b[j]));

    let mut permutation = vec![0usize; k];
    let mut terms = Vec::with_capacity(k);
    for j in 0..k {
        permutation[order_a[j]] = order_b[j];
        terms.push(exact_abs_diff(values_a[order_a[j]], values_b[order_b[j]]));
    }
    let cost = mean_exact_1d(terms);
    Ok((cost, Matching { permutation, cost }))
}

/// Sum of |a_(j) - b_(j)| over sorted order statistics, divided by k.
///
/// Same value as `w1_line` without materializing the matching; used in the
/// Monte-Carlo inner loop.
pub(crate) fn line_distance(values_a: &mut [f64], values_b: &mut [f64]) -> f64 {
    debug_assert_eq!(values_a.len(), values_b.len());
    values_a.sort_unstable_by(f64::total_cmp);
    values_b.sort_unstable_by(f64::total_cmp);
    let k = values_a.len() as f64;
    values_a
        .iter()
        .zip(values_b.iter())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / k
}

/// Dense shortest-augmenting-path assignment (Jonker-Volgenant style) on a
/// k x k cost matrix. Exact for the given floating-point costs; O(k^3).
fn min_cost_assignment(costs: &[Vec<f64>]) -> Vec<usize> {
    let n = costs.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(costs.iter().all(|row| row.len() == n));

    // 1-based arrays with a virtual row/column 0, per the classical
    // potentials formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // matched_row[j] = row assigned to column j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];

        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = costs[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }

            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if matched_row[j] > 0 {
            assignment[matched_row[j] - 1] = j - 1;
        }
    }
    assignment
}
