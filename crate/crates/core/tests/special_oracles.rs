//! Quadrature and sampling oracles for the special functions. The oracles
//! integrate the defining expressions directly (adaptive Simpson, or plain
//! Monte-Carlo over the sphere) and never touch the continued-fraction or
//! log-gamma production paths.

mod support;

use proptest::prelude::*;
use support::{adaptive_simpson, mean_and_se};
use swemb::rng::CounterStream;
use swemb::special::{
    beta, cap_cdf, cap_density, cap_expectation, check_beta_inequality, kappa, ln_beta,
    reg_inc_beta, sphere_area, unit_grid, CapDistribution, Dimension,
};

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

/// Quadrature of the defining Beta integral. For parameters below 1 the
/// endpoint singularities are removed by the exact substitution
/// t = sin^2(u), which turns the integrand into
/// 2 sin^(2a-1)(u) cos^(2b-1)(u) on [0, pi/2].
fn beta_by_quadrature(a: f64, b: f64) -> f64 {
    if a >= 1.0 && b >= 1.0 {
        adaptive_simpson(
            &|t| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0),
            0.0,
            1.0,
            1e-12,
        )
    } else {
        adaptive_simpson(
            &|u| 2.0 * u.sin().powf(2.0 * a - 1.0) * u.cos().powf(2.0 * b - 1.0),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-12,
        )
    }
}

#[test]
fn beta_matches_quadrature_oracle() {
    // frozen closed forms first
    assert!((beta(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert!((beta(2.0, 3.0).unwrap() - 1.0 / 12.0).abs() < 1e-13);

    for &(a, b) in &[
        (0.5, 0.5),
        (2.0, 3.0),
        (1.0, 1.0),
        (2.5, 0.5),
        (7.0, 3.5),
        (0.7, 4.0),
        (12.5, 0.5),
    ] {
        let via_quad = beta_by_quadrature(a, b);
        let via_lib = beta(a, b).unwrap();
        assert!(
            ((via_lib - via_quad) / via_quad).abs() < 1e-10,
            "B({a},{b}): lib {via_lib}, quadrature {via_quad}"
        );
    }
}

#[test]
fn reg_inc_beta_matches_quadrature_oracle() {
    // I(x; a, b) = (partial integral) / (full integral), both by quadrature
    for &(x, a, b) in &[
        (0.3, 2.5, 0.5),
        (0.7, 2.5, 0.5),
        (0.5, 1.5, 1.5),
        (0.2, 5.0, 2.0),
        (0.9, 4.5, 0.5),
        (0.05, 3.0, 7.0),
    ] {
        let numerator = adaptive_simpson(
            &|t| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0),
            0.0,
            x,
            1e-13,
        );
        let oracle = numerator / beta_by_quadrature(a, b);
        let lib = reg_inc_beta(x, a, b).unwrap();
        assert!(
            (lib - oracle).abs() < 1e-10,
            "I({x};{a},{b}): lib {lib}, oracle {oracle}"
        );
    }
}

#[test]
fn sphere_area_matches_recurrence_oracle() {
    // area(n) = 2 pi area(n-2) / (n - 2), seeded with the circle and 2-sphere
    let mut areas = [0.0f64; 11];
    areas[2] = 2.0 * std::f64::consts::PI;
    areas[3] = 4.0 * std::f64::consts::PI;
    for n in 4..=10 {
        areas[n] = 2.0 * std::f64::consts::PI * areas[n - 2] / (n as f64 - 2.0);
    }
    #[allow(clippy::needless_range_loop)]
    for n in 2..=10 {
        let lib = sphere_area(dim(n));
        assert!(
            ((lib - areas[n]) / areas[n]).abs() < 1e-12,
            "n={n}: lib {lib}, recurrence {}",
            areas[n]
        );
    }
}

#[test]
fn kappa_low_dimensions_match_circle_and_sphere_integrals() {
    // n = 2: integral of |cos| over the circle
    let circle = adaptive_simpson(&|t| t.cos().abs(), 0.0, 2.0 * std::f64::consts::PI, 1e-12);
    assert!((kappa(dim(2)) - circle).abs() < 1e-10);
    assert!((kappa(dim(2)) - 4.0).abs() < 1e-12);

    // n = 3: spherical coordinates reduce the surface integral to
    // 2 pi * integral of |cos(phi)| sin(phi) over [0, pi]
    let sphere = 2.0
        * std::f64::consts::PI
        * adaptive_simpson(
            &|phi| phi.cos().abs() * phi.sin(),
            0.0,
            std::f64::consts::PI,
            1e-12,
        );
    assert!((kappa(dim(3)) - sphere).abs() < 1e-10);
    assert!((kappa(dim(3)) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn kappa_matches_monte_carlo_oracle_mid_dimensions() {
    // kappa(n) = S_{n-1} E|x_1|; estimate the expectation by direct sampling
    for n in 4..=8 {
        let mut stream = CounterStream::new(0xABCD_0000 + n as u64, 0);
        let draws: Vec<f64> = (0..1_000_000)
            .map(|_| stream.unit_sphere(n)[0].abs())
            .collect();
        let (mean, se) = mean_and_se(&draws);
        let estimate = sphere_area(dim(n)) * mean;
        let se_scaled = sphere_area(dim(n)) * se;
        let lib = kappa(dim(n));
        assert!(
            (lib - estimate).abs() < 4.0 * se_scaled,
            "n={n}: kappa {lib} vs MC {estimate} (4se = {})",
            4.0 * se_scaled
        );
    }
}

#[test]
fn cap_density_normalizes_and_matches_expectation_quadrature() {
    for n in 3..=12 {
        let d = dim(n);
        let mass = adaptive_simpson(&|t| cap_density(d, t).unwrap(), 0.0, 1.0, 1e-12);
        assert!((mass - 1.0).abs() < 1e-10, "n={n}: density mass {mass}");

        let first_moment = adaptive_simpson(&|t| t * cap_density(d, t).unwrap(), 0.0, 1.0, 1e-12);
        let lib = cap_expectation(d).unwrap();
        assert!(
            (first_moment - lib).abs() < 1e-10,
            "n={n}: moment {first_moment} vs expectation {lib}"
        );
    }
}

#[test]
fn cap_cdf_derivative_matches_density() {
    // central finite differences of the cdf against the density
    let h = 1e-6;
    for n in [3usize, 5, 8, 12] {
        let d = dim(n);
        for i in 1..=9 {
            let t = i as f64 / 10.0;
            let derivative = (cap_cdf(d, t + h).unwrap() - cap_cdf(d, t - h).unwrap()) / (2.0 * h);
            let density = cap_density(d, t).unwrap();
            assert!(
                (derivative - density).abs() < 1e-6,
                "n={n}, t={t}: fd {derivative} vs density {density}"
            );
        }
    }
}

#[test]
fn cap_cdf_shares_the_incomplete_beta_code_path() {
    for n in 3..=10 {
        let d = dim(n);
        let nf = n as f64;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let direct = 1.0 - reg_inc_beta(1.0 - t * t, (nf - 1.0) / 2.0, 0.5).unwrap();
            assert_eq!(
                cap_cdf(d, t).unwrap().to_bits(),
                direct.to_bits(),
                "n={n}, t={t}"
            );
        }
    }
}

#[test]
fn cap_sampling_matches_cdf() {
    // Kolmogorov-Smirnov distance between the empirical distribution of
    // |x_1| over sphere samples and the closed-form cdf
    let n = 5;
    let cap = CapDistribution::new(dim(n)).unwrap();
    let mut stream = CounterStream::new(777, 0);
    let count = 200_000usize;
    let mut draws: Vec<f64> = (0..count).map(|_| stream.unit_sphere(n)[0].abs()).collect();
    draws.sort_by(f64::total_cmp);
    let mut ks = 0.0f64;
    for (i, &t) in draws.iter().enumerate() {
        let f = cap.cdf(t).unwrap();
        ks = ks.max((f - i as f64 / count as f64).abs());
        ks = ks.max((f - (i + 1) as f64 / count as f64).abs());
    }
    assert!(ks < 0.01, "KS statistic {ks}");
}

#[test]
fn cap_area_inequality_endpoint_cases() {
    // x = 1: left side is 1 and the right side is at least 2, because
    // B((n-1)/2, 1/2)^2 >= 1/(e(n-1))
    for n in 3..=50 {
        let nf = n as f64;
        let b = beta((nf - 1.0) / 2.0, 0.5).unwrap();
        let rhs = 2.0 * std::f64::consts::E * (nf - 1.0) * b;
        assert!(rhs >= 2.0, "n={n}: rhs {rhs}");
        assert!(check_beta_inequality(dim(n), &[1.0]).unwrap());
    }
}

#[test]
fn beta_square_lower_bound_holds() {
    for n in 3..=1000 {
        let nf = n as f64;
        let b2 = (2.0 * ln_beta((nf - 1.0) / 2.0, 0.5)).exp();
        let bound = 1.0 / (std::f64::consts::E * (nf - 1.0));
        assert!(b2 >= bound, "n={n}: B^2 {b2} < {bound}");
    }
}

#[test]
fn inequality_grid_default_scope() {
    let grid = unit_grid(1001);
    for n in 3..=50 {
        assert!(check_beta_inequality(dim(n), &grid).unwrap(), "n={n}");
    }
}

proptest! {
    #[test]
    fn reg_inc_beta_stays_in_unit_interval(
        x in 0.0f64..=1.0,
        a in 0.05f64..50.0,
        b in 0.05f64..50.0,
    ) {
        let v = reg_inc_beta(x, a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn reg_inc_beta_is_monotone_in_x(
        x1 in 0.0f64..=1.0,
        x2 in 0.0f64..=1.0,
        a in 0.05f64..50.0,
        b in 0.05f64..50.0,
    ) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let vlo = reg_inc_beta(lo, a, b).unwrap();
        let vhi = reg_inc_beta(hi, a, b).unwrap();
        // allow a hair of rounding across the continued-fraction switch
        prop_assert!(vlo <= vhi + 1e-14, "I({lo})={vlo} > I({hi})={vhi}");
    }
}
