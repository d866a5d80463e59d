mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use toric_core::fixtures;
use toric_core::kahler::{
    block_tensors, compatibility_residuals, guillemin_hessian, interior_point, invert_legendre,
    legendre_jacobian, legendre_map, metric_g, metric_g_inverse, one_cut_inverse, sp_potential,
    FiniteDifference, NewtonOptions,
};
use toric_core::polylattice::PolyhedralSet;

fn sp_at(p: &PolyhedralSet) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x: &[f64]| sp_potential(&interior_point(p, x).unwrap())
}

fn samples(name: &str, seed: u64) -> (PolyhedralSet, Vec<Vec<f64>>) {
    let p = fixtures::by_name(name).unwrap();
    let pts = common::interior_points(&p, 50, 3.0, 0.02, &mut common::rng(seed));
    (p, pts)
}

const FD_FIXTURES: [&str; 6] = ["f1", "f2", "slab", "f4", "f3", "lens_cone"];

#[test]
fn finite_difference_hessian_matches_metric() {
    let fd = FiniteDifference::default();
    for (seed, name) in FD_FIXTURES.iter().enumerate() {
        let (p, pts) = samples(name, seed as u64);
        for x in pts {
            let g = metric_g(&interior_point(&p, &x).unwrap());
            let h = fd.hessian(sp_at(&p), &x);
            let err = (&h - &g).amax();
            assert!(err <= 1e-4 * g.amax(), "{name} {x:?}: {err}");
        }
    }
}

#[test]
fn finite_difference_gradient_matches_legendre_map() {
    let fd = FiniteDifference::default();
    for (seed, name) in FD_FIXTURES.iter().enumerate() {
        let (p, pts) = samples(name, 100 + seed as u64);
        for x in pts {
            let y = legendre_map(&interior_point(&p, &x).unwrap());
            let grad = fd.gradient(sp_at(&p), &x);
            let scale = y.amax().max(1.0);
            for (a, b) in grad.iter().zip(y.iter()) {
                assert!((a - b).abs() <= 1e-6 * scale, "{name} {x:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn legendre_jacobian_matches_finite_differences() {
    let fd = FiniteDifference::default();
    for (seed, name) in FD_FIXTURES.iter().enumerate() {
        let (p, pts) = samples(name, 200 + seed as u64);
        for x in pts {
            let pt = interior_point(&p, &x).unwrap();
            let jac = legendre_jacobian(&pt);
            assert_eq!(jac, metric_g(&pt));
            let numeric = fd.jacobian(
                |y: &[f64]| legendre_map(&interior_point(&p, y).unwrap()).as_slice().to_vec(),
                &x,
            );
            assert!((&numeric - &jac).amax() <= 1e-4 * jac.amax(), "{name}");
        }
    }
}

#[test]
fn block_tensors_are_compatible_and_positive() {
    for (seed, name) in FD_FIXTURES.iter().enumerate() {
        let (p, pts) = samples(name, 300 + seed as u64);
        for x in pts {
            let pt = interior_point(&p, &x).unwrap();
            let t = block_tensors(&pt).unwrap();
            let c = compatibility_residuals(&t);
            assert!(c.max() < 1e-10, "{name} {c:?}");
            assert!(metric_g(&pt).symmetric_eigenvalues().min() > 0.0);
            assert!(t.g.symmetric_eigenvalues().min() > 0.0);
            let g = metric_g(&pt);
            let inv = metric_g_inverse(&g).unwrap();
            let n = g.nrows();
            assert!((&g * &inv - DMatrix::identity(n, n)).amax() < 1e-10);
        }
    }
}

#[test]
fn legendre_map_is_monotone() {
    for (seed, name) in ["f1", "f2", "slab", "f4"].iter().enumerate() {
        let p = fixtures::by_name(name).unwrap();
        let mut rng = common::rng(400 + seed as u64);
        let a = common::interior_points(&p, 100, 3.0, 1e-3, &mut rng);
        let b = common::interior_points(&p, 100, 3.0, 1e-3, &mut rng);
        for (x, y) in a.iter().zip(&b) {
            let gx = legendre_map(&interior_point(&p, x).unwrap());
            let gy = legendre_map(&interior_point(&p, y).unwrap());
            let dot: f64 = (gx - gy)
                .iter()
                .zip(x.iter().zip(y))
                .map(|(d, (u, v))| d * (u - v))
                .sum();
            assert!(dot > 0.0, "{name}");
        }
    }
}

#[test]
fn legendre_map_is_surjective_on_targets() {
    let opts = NewtonOptions::default();
    for (seed, name) in ["f1", "f2", "f4", "slab"].iter().enumerate() {
        let p = fixtures::by_name(name).unwrap();
        let mut rng = common::rng(500 + seed as u64);
        for _ in 0..100 {
            let mut y: Vec<f64> = (0..p.dim()).map(|_| rng.random_range(-10.0..10.0)).collect();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 10.0 {
                y.iter_mut().for_each(|v| *v *= 10.0 / norm);
            }
            let r = invert_legendre(&p, &y, &opts).unwrap_or_else(|e| panic!("{name} {y:?}: {e}"));
            assert!(r.residual < 1e-8, "{name} {y:?}: {}", r.residual);
            let check = legendre_map(&r.point);
            for (a, b) in check.iter().zip(&y) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn quadrant_origin_solution() {
    let r = invert_legendre(&fixtures::f4(), &[0.0, 0.0], &NewtonOptions::default()).unwrap();
    // x + (1/2) ln x = 0
    let root = 0.426_302_751_006_862_7;
    for v in r.point.x.iter() {
        assert!((v - root).abs() < 1e-10);
    }
}

#[test]
fn guillemin_hessian_rank_drops_on_weakly_convex_sets() {
    for (seed, name) in ["f3", "slab", "half_space_3d"].iter().enumerate() {
        let p = fixtures::by_name(name).unwrap();
        let rank = toric_core::polylattice::convexity_class(&p).rank;
        for x in common::interior_points(&p, 30, 3.0, 0.02, &mut common::rng(600 + seed as u64)) {
            let pt = interior_point(&p, &x).unwrap();
            let eig = guillemin_hessian(&pt).symmetric_eigenvalues();
            let scale = eig.amax();
            let numeric_rank = eig.iter().filter(|e| e.abs() > 1e-8 * scale).count();
            assert_eq!(numeric_rank, rank, "{name}");
            assert!(metric_g(&pt).cholesky().is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn one_cut_inverse_matches_numeric_inverse(
        eta in (1usize..=5).prop_flat_map(|n| proptest::collection::vec(-4i64..=4, n)),
        l in 1e-3f64..10.0,
    ) {
        prop_assume!(eta.iter().any(|v| *v != 0));
        let n = eta.len();
        let e = nalgebra::DVector::from_iterator(n, eta.iter().map(|&v| v as f64));
        let g = DMatrix::identity(n, n) + (&e * e.transpose()) / (2.0 * l);
        let numeric = metric_g_inverse(&g).unwrap();
        let closed = one_cut_inverse(&eta, l);
        prop_assert!((numeric - closed).amax() < 1e-12);
    }

    #[test]
    fn sp_minus_guillemin_is_half_norm(x in 0.01f64..0.99, y in 0.01f64..0.99) {
        prop_assume!(x + y < 0.99);
        let pt = interior_point(&fixtures::f2(), &[x, y]).unwrap();
        let diff = sp_potential(&pt) - toric_core::kahler::guillemin_potential(&pt);
        prop_assert!((diff - 0.5 * (x * x + y * y)).abs() < 1e-14);
    }
}
