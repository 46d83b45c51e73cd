//! Special functions: Beta, regularized incomplete Beta, sphere surface
//! areas, the slice constant `kappa`, and the distribution of the absolute
//! first coordinate of a uniform point on the unit sphere.
//!
//! Everything is computed in log space through `ln_gamma`, so arguments in
//! the hundreds (dimension up to ~1000 in the inequality checks) stay well
//! away from overflow.

use crate::error::{Error, Result};

/// Ambient dimension of R^n. All formulas in this module require n >= 2;
/// the cap distribution additionally requires n >= 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Lanczos approximation, g = 7, 9 terms. Relative accuracy ~1e-15 over the
// positive real axis.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural log of the Beta function, ln B(a, b) for a, b > 0.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Beta function B(a, b) = integral of t^(a-1) (1-t)^(b-1) over [0, 1].
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a <= 0.0 || b <= 0.0 {
        return Err(Error::domain(format!(
            "beta requires positive arguments, got a={a}, b={b}"
        )));
    }
    Ok(ln_beta(a, b).exp())
}

/// Regularized incomplete Beta function I(x; a, b).
///
/// Continued-fraction evaluation (modified Lentz) with the symmetry switch at
/// x = (a+1)/(a+b+2), following the classical incomplete-Beta recipe. The
/// switch keeps the fraction in its fast-converging regime on both sides.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a <= 0.0 || b <= 0.0 {
        return Err(Error::domain(format!(
            "reg_inc_beta requires positive parameters, got a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "reg_inc_beta requires x in [0, 1], got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    // front factor x^a (1-x)^b / (a B(a,b)), assembled in log space
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() / a) * beta_cont_fraction(a, b, x)
    } else {
        1.0 - (ln_front.exp() / b) * beta_cont_fraction(b, a, 1.0 - x)
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Continued fraction for the incomplete Beta function (modified Lentz).
fn beta_cont_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;

        let num = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + num / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let num = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + num / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Surface area of the unit (n-1)-sphere in R^n: 2 pi^(n/2) / Gamma(n/2).
pub fn sphere_area(n: Dimension) -> f64 {
    let half_n = n.get() as f64 / 2.0;
    (std::f64::consts::LN_2 + half_n * std::f64::consts::PI.ln() - ln_gamma(half_n)).exp()
}

/// The slice constant: the integral of |x_1| over the unit (n-1)-sphere,
/// kappa(n) = 2 S_{n-1} / ((n-1) B((n-1)/2, 1/2)).
///
/// kappa(2) = 4, kappa(3) = 2 pi. For single-point measures the sliced
/// 1-Wasserstein distance equals kappa(n) times the Euclidean distance.
pub fn kappa(n: Dimension) -> f64 {
    let nf = n.get() as f64;
    let b = ln_beta((nf - 1.0) / 2.0, 0.5).exp();
    2.0 * sphere_area(n) / ((nf - 1.0) * b)
}

fn require_cap_dimension(n: Dimension) -> Result<f64> {
    if n.get() < 3 {
        return Err(Error::domain(format!(
            "cap distribution requires n >= 3, got {n}"
        )));
    }
    Ok(n.get() as f64)
}

fn require_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(())
}

/// Density of |x_1| for x uniform on S^{n-1}, n >= 3:
/// f(t) = 2 (1 - t^2)^((n-1)/2 - 1) / B((n-1)/2, 1/2).
pub fn cap_density(n: Dimension, t: f64) -> Result<f64> {
    let nf = require_cap_dimension(n)?;
    require_unit_interval(t)?;
    let exponent = (nf - 1.0) / 2.0 - 1.0;
    let b = ln_beta((nf - 1.0) / 2.0, 0.5).exp();
    Ok(2.0 * (1.0 - t * t).powf(exponent) / b)
}

/// Cumulative distribution of |x_1|: P(|x_1| <= t) = 1 - I(1 - t^2; (n-1)/2, 1/2).
///
/// Shares the `reg_inc_beta` code path bit-for-bit; callers comparing the two
/// expressions see identical floating-point results.
pub fn cap_cdf(n: Dimension, t: f64) -> Result<f64> {
    let nf = require_cap_dimension(n)?;
    require_unit_interval(t)?;
    Ok(1.0 - reg_inc_beta(1.0 - t * t, (nf - 1.0) / 2.0, 0.5)?)
}

/// Expectation of |x_1|: 2 / ((n-1) B((n-1)/2, 1/2)).
///
/// Equals kappa(n) / sphere_area(n).
pub fn cap_expectation(n: Dimension) -> Result<f64> {
    let nf = require_cap_dimension(n)?;
    let b = ln_beta((nf - 1.0) / 2.0, 0.5).exp();
    Ok(2.0 / ((nf - 1.0) * b))
}

/// The distribution of |x_1| for x uniform on S^{n-1} (n >= 3).
#[derive(Debug, Clone, Copy)]
pub struct CapDistribution {
    n: Dimension,
}

impl CapDistribution {
    pub fn new(n: Dimension) -> Result<Self> {
        require_cap_dimension(n)?;
        Ok(CapDistribution { n })
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        cap_density(self.n, t)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        cap_cdf(self.n, t)
    }

    pub fn expectation(&self) -> f64 {
        cap_expectation(self.n).expect("dimension validated at construction")
    }
}

/// Number of grid points used by the default inequality grid.
pub const DEFAULT_GRID_POINTS: usize = 1001;

/// Uniform grid on [0, 1] with both endpoints included.
pub fn unit_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least the two endpoints");
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Checks the cap-area inequality
/// 1 - I(1 - x^2; (n-1)/2, 1/2) <= 2e (n-1) x B((n-1)/2, 1/2)
/// at every grid point, with 1e-12 slack for rounding. Returns true iff it
/// holds everywhere on the grid.
pub fn check_beta_inequality(n: Dimension, grid: &[f64]) -> Result<bool> {
    let nf = require_cap_dimension(n)?;
    let half = (nf - 1.0) / 2.0;
    let b = ln_beta(half, 0.5).exp();
    let rhs_slope = 2.0 * std::f64::consts::E * (nf - 1.0) * b;
    for &x in grid {
        require_unit_interval(x)?;
        let lhs = 1.0 - reg_inc_beta(1.0 - x * x, half, 0.5)?;
        if lhs > rhs_slope * x + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn dimension_rejects_small_values() {
        assert!(Dimension::new(0).is_err());
        assert!(Dimension::new(1).is_err());
        assert!(Dimension::new(2).is_ok());
    }

    #[test]
    fn beta_trivial_values() {
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((beta(1.0, 2.0).unwrap() - 0.5).abs() < 1e-13);
        // B(1/2, 1/2) = pi
        assert!((beta(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn beta_rejects_nonpositive_arguments() {
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
        assert!(beta(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn reg_inc_beta_boundaries() {
        for &(a, b) in &[(0.5, 0.5), (2.0, 3.0), (10.0, 0.5), (250.0, 0.5)] {
            assert_eq!(reg_inc_beta(0.0, a, b).unwrap(), 0.0);
            assert_eq!(reg_inc_beta(1.0, a, b).unwrap(), 1.0);
        }
    }

    #[test]
    fn reg_inc_beta_uniform_case_is_identity() {
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((reg_inc_beta(x, 1.0, 1.0).unwrap() - x).abs() < 1e-14);
        }
    }

    #[test]
    fn reg_inc_beta_symmetry_identity() {
        // I(x; a, b) = 1 - I(1-x; b, a)
        for &(x, a, b) in &[(0.3, 2.5, 0.5), (0.7, 1.5, 4.0), (0.05, 12.0, 0.5)] {
            let lhs = reg_inc_beta(x, a, b).unwrap();
            let rhs = 1.0 - reg_inc_beta(1.0 - x, b, a).unwrap();
            assert!((lhs - rhs).abs() < 1e-14, "x={x} a={a} b={b}");
        }
    }

    #[test]
    fn reg_inc_beta_domain_errors() {
        assert!(reg_inc_beta(-0.1, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(1.1, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn sphere_area_low_dimensions() {
        assert!((sphere_area(dim(2)) - 2.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((sphere_area(dim(3)) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn kappa_closed_forms() {
        assert!((kappa(dim(2)) - 4.0).abs() < 1e-12);
        assert!((kappa(dim(3)) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn kappa_equals_area_times_expectation() {
        for n in 3..=100 {
            let d = dim(n);
            let lhs = kappa(d);
            let rhs = sphere_area(d) * cap_expectation(d).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-12,
                "n={n}: kappa={lhs} area*exp={rhs}"
            );
        }
    }

    #[test]
    fn cap_density_is_uniform_for_n3() {
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((cap_density(dim(3), t).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_cdf_boundaries_and_n3_identity() {
        for n in 3..=12 {
            assert_eq!(cap_cdf(dim(n), 0.0).unwrap(), 0.0);
            assert!((cap_cdf(dim(n), 1.0).unwrap() - 1.0).abs() < 1e-14);
        }
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((cap_cdf(dim(3), t).unwrap() - t).abs() < 1e-13);
        }
    }

    #[test]
    fn cap_expectation_n3_is_half() {
        assert!((cap_expectation(dim(3)).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cap_rejects_dimension_two() {
        assert!(cap_density(dim(2), 0.5).is_err());
        assert!(cap_cdf(dim(2), 0.5).is_err());
        assert!(cap_expectation(dim(2)).is_err());
        assert!(CapDistribution::new(dim(2)).is_err());
    }

    #[test]
    fn cap_rejects_t_outside_unit_interval() {
        assert!(cap_density(dim(4), -0.01).is_err());
        assert!(cap_density(dim(4), 1.01).is_err());
        assert!(cap_cdf(dim(4), 2.0).is_err());
    }

    #[test]
    fn beta_inequality_holds_at_endpoints() {
        // x = 0: left side is exactly 0
        let n = dim(5);
        let half = 2.0;
        let lhs = 1.0 - reg_inc_beta(1.0, half, 0.5).unwrap();
        assert_eq!(lhs, 0.0);
        // x = 1: left side 1, right side at least 2
        let b = beta(half, 0.5).unwrap();
        let rhs = 2.0 * std::f64::consts::E * 4.0 * b;
        assert!(rhs >= 2.0);
        assert!(check_beta_inequality(n, &[0.0, 1.0]).unwrap());
    }

    #[test]
    fn normalized_kappa_is_decreasing() {
        // concentration of measure: E|x_1| shrinks as n grows
        let mut prev = cap_expectation(dim(3)).unwrap();
        for n in 4..=100 {
            let cur = cap_expectation(dim(n)).unwrap();
            assert!(cur < prev, "n={n}: {cur} >= {prev}");
            prev = cur;
        }
    }
}
