//! Randomized checks of the quotient metric across a zoo of finite isometry
//! groups: reduction to Wasserstein distances, representative independence,
//! pseudometric axioms, and the unordered-tuple instance.

mod support;

use support::{brute_force_block_quotient, euclidean};
use swemb::orbit::FiniteIsometryGroup;
use swemb::rng::CounterStream;
use swemb::{w1, EmpiricalMeasure};

/// A varied collection of groups with |G| <= 8 acting on R^n, n <= 4.
fn group_zoo() -> Vec<FiniteIsometryGroup> {
    let mut groups = vec![
        FiniteIsometryGroup::trivial(2),
        FiniteIsometryGroup::cyclic_rotations(2, 0, 1, 4).unwrap(),
        FiniteIsometryGroup::cyclic_rotations(3, 0, 2, 7).unwrap(),
        FiniteIsometryGroup::cyclic_rotations(4, 1, 3, 5).unwrap(),
        FiniteIsometryGroup::dihedral(2, 0, 1, 4).unwrap(),
        FiniteIsometryGroup::dihedral(3, 0, 1, 3).unwrap(),
        FiniteIsometryGroup::sign_flips(2, &[0, 1]).unwrap(),
        FiniteIsometryGroup::sign_flips(3, &[0, 1, 2]).unwrap(),
        FiniteIsometryGroup::sign_flips(4, &[1, 3]).unwrap(),
        FiniteIsometryGroup::coordinate_permutations(3, 3).unwrap(),
        FiniteIsometryGroup::coordinate_permutations(4, 3).unwrap(),
        FiniteIsometryGroup::coordinate_permutations(2, 2).unwrap(),
    ];
    // move some fixed loci away from the origin to exercise translations
    let conjugated: Vec<FiniteIsometryGroup> = groups
        .iter()
        .map(|g| {
            let center: Vec<f64> = (0..g.dim()).map(|i| 0.5 + i as f64).collect();
            g.conjugated_by_translation(&center).unwrap()
        })
        .collect();
    groups.extend(conjugated);
    groups
}

fn random_point(n: usize, stream: &mut CounterStream) -> Vec<f64> {
    (0..n).map(|_| 2.0 * stream.standard_normal()).collect()
}

#[test]
fn reduction_equality_across_the_zoo() {
    let groups = group_zoo();
    let mut stream = CounterStream::new(123_456, 0);
    let mut checked = 0;
    while checked < 500 {
        for g in &groups {
            let x = random_point(g.dim(), &mut stream);
            let y = random_point(g.dim(), &mut stream);
            let check = g.check_isometric_reduction(&x, &y).unwrap();
            assert!(
                check.ok,
                "|G|={}, n={}: quotient {} vs W1 {}",
                g.order(),
                g.dim(),
                check.quotient,
                check.wasserstein
            );
            checked += 1;
        }
    }
}

#[test]
fn representative_independence() {
    let groups = group_zoo();
    let mut stream = CounterStream::new(654_321, 0);
    for g in &groups {
        for _ in 0..10 {
            let x = random_point(g.dim(), &mut stream);
            let y = random_point(g.dim(), &mut stream);
            let reference = g.quotient_distance(&x, &y).unwrap();
            for e in g.elements() {
                let moved = e.apply(&x);
                let d = g.quotient_distance(&moved, &y).unwrap();
                assert!(
                    (d - reference).abs() <= 1e-10 * (1.0 + reference),
                    "|G|={}: {d} vs {reference}",
                    g.order()
                );
            }
        }
    }
}

#[test]
fn pseudometric_axioms() {
    let groups = group_zoo();
    let mut stream = CounterStream::new(24_680, 0);
    for g in &groups {
        for _ in 0..15 {
            let x = random_point(g.dim(), &mut stream);
            let y = random_point(g.dim(), &mut stream);
            let z = random_point(g.dim(), &mut stream);

            let xy = g.quotient_distance(&x, &y).unwrap();
            let yx = g.quotient_distance(&y, &x).unwrap();
            // symmetry comes from closure under inverses
            assert!(
                (xy - yx).abs() <= 1e-12 * (1.0 + xy),
                "|G|={}: {xy} vs {yx}",
                g.order()
            );

            assert_eq!(g.quotient_distance(&x, &x).unwrap(), 0.0);

            let xz = g.quotient_distance(&x, &z).unwrap();
            let zy = g.quotient_distance(&z, &y).unwrap();
            assert!(xy <= xz + zy + 1e-9, "triangle: {xy} > {xz} + {zy}");
        }
    }
}

#[test]
fn unordered_tuples_reduce_to_wasserstein() {
    // permuting the blocks of (R^n)^k with the l1-of-Euclidean block metric:
    // the quotient distance equals k times the W1 distance between the two
    // empirical measures carried by the blocks
    let mut stream = CounterStream::new(86_420, 0);
    for _ in 0..100 {
        let k = 1 + (stream.next_u64() % 4) as usize;
        let n = 1 + (stream.next_u64() % 3) as usize;
        let blocks_x: Vec<Vec<f64>> = (0..k).map(|_| random_point(n, &mut stream)).collect();
        let blocks_y: Vec<Vec<f64>> = (0..k).map(|_| random_point(n, &mut stream)).collect();

        let quotient = brute_force_block_quotient(&blocks_x, &blocks_y);
        let mx = EmpiricalMeasure::new(blocks_x).unwrap();
        let my = EmpiricalMeasure::new(blocks_y).unwrap();
        let (wasserstein, _) = w1(&mx, &my).unwrap();
        assert!(
            (quotient - k as f64 * wasserstein).abs() <= 1e-9 * (1.0 + quotient),
            "k={k}: block quotient {quotient} vs k W1 {}",
            k as f64 * wasserstein
        );
    }
}

#[test]
fn fixed_points_shrink_orbits_but_not_the_reduction() {
    // a point fixed by part of the group keeps multiplicity in its orbit
    // measure, and the reduction still holds
    let g = FiniteIsometryGroup::dihedral(2, 0, 1, 4).unwrap();
    let mut stream = CounterStream::new(97_531, 0);
    for _ in 0..50 {
        // points on the x-axis are fixed by the horizontal reflection
        let x = vec![stream.standard_normal().abs() + 0.1, 0.0];
        let y = random_point(2, &mut stream);
        let check = g.check_isometric_reduction(&x, &y).unwrap();
        assert!(check.ok);
    }
}

#[test]
fn euclidean_distance_bounds_the_quotient() {
    let groups = group_zoo();
    let mut stream = CounterStream::new(13_579, 0);
    for g in &groups {
        for _ in 0..10 {
            let x = random_point(g.dim(), &mut stream);
            let y = random_point(g.dim(), &mut stream);
            let q = g.quotient_distance(&x, &y).unwrap();
            assert!(q <= euclidean(&x, &y) + 1e-12);
        }
    }
}
