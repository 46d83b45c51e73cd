//! Shared helpers for the integration suites: an adaptive-Simpson quadrature
//! oracle, exhaustive assignment enumeration, and random test geometry.
//! These stay independent of the library code paths they are used to check.

#![allow(dead_code)]

use swemb::rng::CounterStream;
use swemb::EmpiricalMeasure;

/// Adaptive Simpson quadrature with error control `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }

    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 60)
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn heap_permutations(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        heap_permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Compensated (Neumaier) summation after an ascending sort: on the line,
/// exactly tied matchings must report bit-identical means, so the sum of the
/// unrounded differences is carried at double-double precision.
pub fn exact_mean_abs_diffs(pairs: &[(f64, f64)]) -> f64 {
    let mut terms: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(a, b)| {
            // error-free |a - b| as hi + lo
            let s = a - b;
            let bv = s - a;
            let err = (a - (s - bv)) + (-b - bv);
            if s < 0.0 || (s == 0.0 && err < 0.0) {
                (-s, -err)
            } else {
                (s, err)
            }
        })
        .collect();
    terms.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (thi, tlo) in terms.iter().copied() {
        let s = hi + thi;
        let bv = s - hi;
        let err = (hi - (s - bv)) + (thi - bv);
        let carry = lo + tlo + err;
        let s2 = s + carry;
        let bv2 = s2 - s;
        let err2 = (s - (s2 - bv2)) + (carry - bv2);
        hi = s2;
        lo = err2;
    }
    (hi + lo) / pairs.len() as f64
}

/// Exhaustive k! minimum of the mean matched distance. The per-matching cost
/// follows the library's canonical reporting rule (exact 1D differences,
/// ascending plain summation otherwise) so equal optima compare
/// bit-identically; the minimization itself is independent enumeration.
pub fn brute_force_w1(alpha: &EmpiricalMeasure, beta: &EmpiricalMeasure) -> f64 {
    let k = alpha.size();
    let one_dimensional = alpha.dim() == 1;
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    heap_permutations(&mut perm, 0, &mut |p| {
        let cost = if one_dimensional {
            let pairs: Vec<(f64, f64)> = (0..k)
                .map(|i| (alpha.points()[i][0], beta.points()[p[i]][0]))
                .collect();
            exact_mean_abs_diffs(&pairs)
        } else {
            let mut dists: Vec<f64> = (0..k)
                .map(|i| euclidean(&alpha.points()[i], &beta.points()[p[i]]))
                .collect();
            dists.sort_by(f64::total_cmp);
            dists.iter().sum::<f64>() / k as f64
        };
        if cost < best {
            best = cost;
        }
    });
    best
}

/// Minimum over block permutations of the summed block distances
/// (the l1-of-Euclidean quotient metric of the symmetric product).
pub fn brute_force_block_quotient(blocks_x: &[Vec<f64>], blocks_y: &[Vec<f64>]) -> f64 {
    let k = blocks_x.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    heap_permutations(&mut perm, 0, &mut |p| {
        let cost: f64 = (0..k)
            .map(|i| euclidean(&blocks_x[i], &blocks_y[p[i]]))
            .sum();
        if cost < best {
            best = cost;
        }
    });
    best
}

/// Random orthogonal matrix as a product of Givens rotations over all
/// coordinate pairs, optionally composed with a reflection.
pub fn random_orthogonal(n: usize, stream: &mut CounterStream) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let angle = stream.uniform_in(0.0, 2.0 * std::f64::consts::PI);
            let (s, c) = angle.sin_cos();
            for row in q.iter_mut() {
                let (a, b) = (row[i], row[j]);
                row[i] = c * a - s * b;
                row[j] = s * a + c * b;
            }
        }
    }
    if stream.next_u64().is_multiple_of(2) {
        for row in q.iter_mut() {
            row[0] = -row[0];
        }
    }
    q
}

pub fn apply_matrix(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Standard-normal point cloud.
pub fn gaussian_measure(n: usize, k: usize, stream: &mut CounterStream) -> EmpiricalMeasure {
    EmpiricalMeasure::new(
        (0..k)
            .map(|_| (0..n).map(|_| stream.standard_normal()).collect())
            .collect(),
    )
    .unwrap()
}

/// Mean and standard error of a sample.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Independent planar sliced-distance oracle: rectangle rule over `angles`
/// uniform directions (equals the trapezoid rule for periodic integrands),
/// with its own projection and sorted-pairing code.
pub fn quadrature_sw1_2d(alpha: &EmpiricalMeasure, beta: &EmpiricalMeasure, angles: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..angles {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / angles as f64;
        let (s, c) = phi.sin_cos();
        let mut pa: Vec<f64> = alpha.points().iter().map(|p| p[0] * c + p[1] * s).collect();
        let mut pb: Vec<f64> = beta.points().iter().map(|p| p[0] * c + p[1] * s).collect();
        pa.sort_by(f64::total_cmp);
        pb.sort_by(f64::total_cmp);
        let dist: f64 =
            pa.iter().zip(&pb).map(|(a, b)| (a - b).abs()).sum::<f64>() / alpha.size() as f64;
        total += dist;
    }
    total * 2.0 * std::f64::consts::PI / angles as f64
}
