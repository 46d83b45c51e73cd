//! Finite groups acting on R^n by affine isometries, the induced quotient
//! metric, and its isometric reduction to empirical-measure space.
//!
//! For a finite group G = {g_1, ..., g_k} acting by isometries, the orbit
//! space distance d(\[x], \[y]) = min_g ||x - g y|| equals the 1-Wasserstein
//! distance between the orbit measures (1/k) sum of delta_{g_i x} and
//! (1/k) sum of delta_{g_i y}. `check_isometric_reduction` verifies that
//! equality instance by instance.
//!
//! Groups are stored as full element lists; `generate` closes a generator
//! set by fixed-point iteration with an explicit size cap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{euclidean, w1, EmpiricalMeasure};

/// Orthogonality tolerance for rotation parts: max-norm of Q^T Q - I.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Max-norm tolerance when matching composed elements against the element
/// list; composed orthogonal matrices accumulate rounding.
pub const ELEMENT_MATCH_TOL: f64 = 1e-9;

/// Default cap for `generate`.
pub const DEFAULT_GENERATION_CAP: usize = 10_000;

/// An isometry of R^n: x -> Q x + t with Q orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineIsometry {
    rotation: Vec<Vec<f64>>,
    translation: Vec<f64>,
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

fn identity_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

impl AffineIsometry {
    pub fn new(rotation: Vec<Vec<f64>>, translation: Vec<f64>) -> Result<Self> {
        let n = rotation.len();
        if n == 0 {
            return Err(Error::Empty("isometry needs at least one dimension"));
        }
        if rotation.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidIsometry(
                "rotation matrix is not square".into(),
            ));
        }
        if translation.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: translation.len(),
            });
        }
        // Q^T Q must be the identity within tolerance
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|l| rotation[l][i] * rotation[l][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > ORTHOGONALITY_TOL {
                    return Err(Error::InvalidIsometry(format!(
                        "rotation is not orthogonal: (Q^T Q)[{i}][{j}] = {dot}"
                    )));
                }
            }
        }
        Ok(AffineIsometry {
            rotation,
            translation,
        })
    }

    pub fn identity(n: usize) -> Self {
        AffineIsometry {
            rotation: identity_matrix(n),
            translation: vec![0.0; n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn rotation(&self) -> &[Vec<f64>] {
        &self.rotation
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.rotation, x)
            .iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// self after other: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        AffineIsometry {
            rotation: mat_mul(&self.rotation, &other.rotation),
            translation: mat_vec(&self.rotation, &other.translation)
                .iter()
                .zip(&self.translation)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn inverse(&self) -> AffineIsometry {
        let n = self.dim();
        let transpose: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| self.rotation[j][i]).collect())
            .collect();
        let translation = mat_vec(&transpose, &self.translation)
            .into_iter()
            .map(|v| -v)
            .collect();
        AffineIsometry {
            rotation: transpose,
            translation,
        }
    }

    /// Max-norm proximity over rotation entries and translation entries.
    pub fn approx_eq(&self, other: &AffineIsometry, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let rot_close = self
            .rotation
            .iter()
            .zip(&other.rotation)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol));
        let trans_close = self
            .translation
            .iter()
            .zip(&other.translation)
            .all(|(x, y)| (x - y).abs() <= tol);
        rot_close && trans_close
    }
}

/// An explicit finite group of affine isometries of R^n.
///
/// Construction validates the group axioms within [`ELEMENT_MATCH_TOL`]:
/// the identity is present, and the element list is closed under
/// composition and inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteIsometryGroup {
    elements: Vec<AffineIsometry>,
    dim: usize,
}

impl FiniteIsometryGroup {
    pub fn new(elements: Vec<AffineIsometry>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Empty("group needs at least the identity"));
        }
        let dim = elements[0].dim();
        if elements.iter().any(|g| g.dim() != dim) {
            return Err(Error::GroupClosure(
                "elements act on different dimensions".into(),
            ));
        }
        let group = FiniteIsometryGroup { elements, dim };

        let id = AffineIsometry::identity(dim);
        if group.find_match(&id).is_none() {
            return Err(Error::GroupClosure("identity element is missing".into()));
        }
        for (i, g) in group.elements.iter().enumerate() {
            for (j, h) in group.elements.iter().enumerate() {
                if group.find_match(&g.compose(h)).is_none() {
                    return Err(Error::GroupClosure(format!(
                        "composition of elements {i} and {j} is not in the list"
                    )));
                }
            }
            if group.find_match(&g.inverse()).is_none() {
                return Err(Error::GroupClosure(format!(
                    "inverse of element {i} is not in the list"
                )));
            }
        }
        Ok(group)
    }

    /// Closes a generator set under composition by fixed-point iteration,
    /// failing past [`DEFAULT_GENERATION_CAP`] elements (e.g. for generators
    /// of infinite order).
    pub fn generate(generators: Vec<AffineIsometry>) -> Result<Self> {
        Self::generate_with_cap(generators, DEFAULT_GENERATION_CAP)
    }

    /// [`Self::generate`] with an explicit element cap.
    pub fn generate_with_cap(generators: Vec<AffineIsometry>, cap: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Empty("need at least one generator"));
        }
        let dim = generators[0].dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::GroupClosure(
                "generators act on different dimensions".into(),
            ));
        }
        let mut elements = vec![AffineIsometry::identity(dim)];
        let mut frontier = vec![AffineIsometry::identity(dim)];
        while let Some(g) = frontier.pop() {
            for gen in &generators {
                let prod = g.compose(gen);
                if !elements
                    .iter()
                    .any(|e| e.approx_eq(&prod, ELEMENT_MATCH_TOL))
                {
                    if elements.len() >= cap {
                        return Err(Error::GroupClosure(format!(
                            "generation exceeded {cap} elements; generators may have infinite order"
                        )));
                    }
                    elements.push(prod.clone());
                    frontier.push(prod);
                }
            }
        }
        Self::new(elements)
    }

    fn find_match(&self, candidate: &AffineIsometry) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.approx_eq(candidate, ELEMENT_MATCH_TOL))
    }

    /// Group order k = |G|.
    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[AffineIsometry] {
        &self.elements
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.len(),
            });
        }
        Ok(())
    }

    /// Quotient metric on orbits: min over g of ||x - g y||.
    pub fn quotient_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self
            .elements
            .iter()
            .map(|g| euclidean(x, &g.apply(y)))
            .fold(f64::INFINITY, f64::min))
    }

    /// The empirical measure of size |G| on the orbit of x (with
    /// multiplicity when the stabilizer is nontrivial).
    pub fn orbit_measure(&self, x: &[f64]) -> Result<EmpiricalMeasure> {
        self.check_point(x)?;
        EmpiricalMeasure::new(self.elements.iter().map(|g| g.apply(x)).collect())
    }

    /// Verifies d(\[x], \[y]) = W1(orbit measure of x, orbit measure of y).
    pub fn check_isometric_reduction(&self, x: &[f64], y: &[f64]) -> Result<ReductionCheck> {
        let quotient = self.quotient_distance(x, y)?;
        let (wasserstein, _) = w1(&self.orbit_measure(x)?, &self.orbit_measure(y)?)?;
        Ok(ReductionCheck {
            quotient,
            wasserstein,
            ok: (quotient - wasserstein).abs() <= 1e-9 * (1.0 + quotient),
        })
    }

    /// The trivial group on R^n.
    pub fn trivial(n: usize) -> Self {
        FiniteIsometryGroup {
            elements: vec![AffineIsometry::identity(n)],
            dim: n,
        }
    }

    /// Cyclic group of m rotations by 2 pi / m in the (axis_a, axis_b)
    /// coordinate plane of R^n.
    pub fn cyclic_rotations(n: usize, axis_a: usize, axis_b: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("cyclic group needs order >= 1".into()));
        }
        if axis_a >= n || axis_b >= n || axis_a == axis_b {
            return Err(Error::InvalidConfig(format!(
                "rotation plane ({axis_a}, {axis_b}) invalid in dimension {n}"
            )));
        }
        let elements = (0..m)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                plane_rotation(n, axis_a, axis_b, angle)
            })
            .collect();
        Self::new(elements)
    }

    /// Dihedral group of order 2m in the (axis_a, axis_b) plane: m rotations
    /// plus m reflections.
    pub fn dihedral(n: usize, axis_a: usize, axis_b: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig(
                "dihedral group needs order >= 1".into(),
            ));
        }
        if axis_a >= n || axis_b >= n || axis_a == axis_b {
            return Err(Error::InvalidConfig(format!(
                "reflection plane ({axis_a}, {axis_b}) invalid in dimension {n}"
            )));
        }
        let mut elements = Vec::with_capacity(2 * m);
        for j in 0..m {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            elements.push(plane_rotation(n, axis_a, axis_b, angle));
            elements.push(plane_reflection(n, axis_a, axis_b, angle / 2.0));
        }
        Self::new(elements)
    }

    /// All sign flips on the given axes: order 2^len(axes).
    pub fn sign_flips(n: usize, axes: &[usize]) -> Result<Self> {
        if axes.iter().any(|&a| a >= n) {
            return Err(Error::InvalidConfig(format!(
                "axis out of range for dimension {n}"
            )));
        }
        if axes.len() > 16 {
            return Err(Error::InvalidConfig("too many sign-flip axes".into()));
        }
        let mut elements = Vec::with_capacity(1 << axes.len());
        for mask in 0u32..(1 << axes.len()) {
            let mut rotation = identity_matrix(n);
            for (bit, &axis) in axes.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    rotation[axis][axis] = -1.0;
                }
            }
            elements.push(AffineIsometry {
                rotation,
                translation: vec![0.0; n],
            });
        }
        Self::new(elements)
    }

    /// The symmetric group on the first `m` coordinates of R^n, acting by
    /// permutation matrices: order m!.
    pub fn coordinate_permutations(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidConfig(format!(
                "cannot permute first {m} coordinates of R^{n}"
            )));
        }
        if m > 8 {
            return Err(Error::InvalidConfig(
                "coordinate permutation group limited to m <= 8".into(),
            ));
        }
        let mut perm: Vec<usize> = (0..m).collect();
        let mut elements = Vec::new();
        heap_permutations(&mut perm, 0, &mut |p| {
            let mut rotation = identity_matrix(n);
            for (i, row) in rotation.iter_mut().enumerate().take(m) {
                for (j, entry) in row.iter_mut().enumerate().take(m) {
                    *entry = if p[j] == i { 1.0 } else { 0.0 };
                }
            }
            elements.push(AffineIsometry {
                rotation,
                translation: vec![0.0; n],
            });
        });
        Self::new(elements)
    }

    /// Conjugates every element by the translation to `center`, i.e. moves
    /// the fixed locus: g -> T_c g T_{-c}. The result is again a group and
    /// exercises nonzero translation parts.
    pub fn conjugated_by_translation(&self, center: &[f64]) -> Result<Self> {
        self.check_point(center)?;
        let elements = self
            .elements
            .iter()
            .map(|g| {
                let qc = mat_vec(&g.rotation, center);
                let translation = g
                    .translation
                    .iter()
                    .zip(center)
                    .zip(&qc)
                    .map(|((t, c), q)| t + c - q)
                    .collect();
                AffineIsometry {
                    rotation: g.rotation.clone(),
                    translation,
                }
            })
            .collect();
        Self::new(elements)
    }
}

/// Quotient-vs-Wasserstein comparison for one pair of orbit representatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub quotient: f64,
    pub wasserstein: f64,
    pub ok: bool,
}

fn plane_rotation(n: usize, a: usize, b: usize, angle: f64) -> AffineIsometry {
    let (s, c) = angle.sin_cos();
    let mut rotation = identity_matrix(n);
    rotation[a][a] = c;
    rotation[a][b] = -s;
    rotation[b][a] = s;
    rotation[b][b] = c;
    AffineIsometry {
        rotation,
        translation: vec![0.0; n],
    }
}

/// Reflection across the line at `axis_angle` in the (a, b) plane.
fn plane_reflection(n: usize, a: usize, b: usize, axis_angle: f64) -> AffineIsometry {
    let (s, c) = (2.0 * axis_angle).sin_cos();
    let mut rotation = identity_matrix(n);
    rotation[a][a] = c;
    rotation[a][b] = s;
    rotation[b][a] = s;
    rotation[b][b] = -c;
    AffineIsometry {
        rotation,
        translation: vec![0.0; n],
    }
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
