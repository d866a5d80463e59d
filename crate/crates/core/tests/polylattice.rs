mod common;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use toric_core::fixtures;
use toric_core::polylattice::faces::{face_point, facet_is_essential};
use toric_core::polylattice::lattice::{gcd_slice, rank_int};
use toric_core::polylattice::{
    normalize, saturation_check, split_weakly_convex, unimodularity_report, Facet,
    NormalizeOptions, PolyhedralSet, SetKind,
};

fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
            .collect();
        let term = BigInt::from(m[0][c]) * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut s in column_subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// Full row rank with coprime maximal minors.
fn minors_oracle(rows: &[Vec<i64>], n: usize) -> bool {
    let k = rows.len();
    if k > n {
        return false;
    }
    let mut g = BigInt::zero();
    for cols in column_subsets(n, k) {
        let sub: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        g = num_integer::Integer::gcd(&g, &det(&sub));
    }
    g == BigInt::from(1)
}

#[test]
fn saturation_matches_minor_oracle_on_200_matrices() {
    use rand::Rng;
    let mut rng = common::rng(7);
    let mut agree_true = 0;
    for _ in 0..200 {
        let k = rng.random_range(1..=4);
        let n = rng.random_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(-5..=5)).collect())
            .collect();
        let expected = minors_oracle(&rows, n);
        assert_eq!(saturation_check(&rows), expected, "{rows:?}");
        agree_true += expected as usize;
    }
    assert!(agree_true > 10, "sample should include saturated cases");
}

proptest! {
    #[test]
    fn saturation_matches_minor_oracle(
        rows in (1usize..=4, 1usize..=4).prop_flat_map(|(k, n)| {
            proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), k)
        })
    ) {
        let n = rows[0].len();
        prop_assert_eq!(saturation_check(&rows), minors_oracle(&rows, n));
    }

    #[test]
    fn normalize_is_idempotent_on_random_sets(
        facets in proptest::collection::vec(
            (proptest::collection::vec(-4i64..=4, 2), -3i64..=3), 1..5),
        primitivize in any::<bool>(),
    ) {
        prop_assume!(facets.iter().all(|(e, _)| e.iter().any(|v| *v != 0)));
        let raw = toric_core::polylattice::RawPolyhedralSet {
            dim: 2,
            kind: SetKind::General,
            orientation: toric_core::polylattice::Orientation::Lower,
            facets: facets.iter().map(|(e, k)| Facet::integral(e.clone(), *k)).collect(),
        };
        let opts = NormalizeOptions { auto_primitivize: primitivize };
        let once = normalize(&raw, opts).unwrap();
        let twice = normalize(&once.to_raw(), opts).unwrap();
        prop_assert_eq!(once.facets(), twice.facets());
    }

    #[test]
    fn split_zeroes_trailing_coordinates(
        a in -3i64..=3, b in -3i64..=3, width in 1i64..4,
    ) {
        prop_assume!(num_integer::Integer::gcd(&a, &b) == 1);
        // a slab in R^3 between two parallel planes
        let p = PolyhedralSet::upper(3, SetKind::General, vec![
            Facet::integral(vec![-a, -b, 0], 0),
            Facet::integral(vec![a, b, 0], width),
        ]).unwrap();
        let s = split_weakly_convex(&p).unwrap();
        prop_assert_eq!(s.k, 2);
        for f in p.facets() {
            let t = s.transform(&f.eta);
            prop_assert!(t[1..].iter().all(Zero::is_zero));
        }
        prop_assert!(unimodularity_report(&s.projected_set).unwrap().is_unimodular);
    }
}

#[test]
fn unimodular_implies_simple_on_fixtures() {
    for f in fixtures::all() {
        let r = unimodularity_report(&f.set).unwrap();
        if r.saturated_faces {
            assert!(r.simple_vertices, "{}", f.name);
        }
    }
}

#[test]
fn false_verdicts_carry_refailing_witnesses() {
    let mut sets: Vec<(String, PolyhedralSet)> =
        fixtures::all().into_iter().map(|f| (f.name.to_string(), f.set)).collect();
    sets.push((
        "redundant".into(),
        PolyhedralSet::upper(
            2,
            SetKind::General,
            vec![
                Facet::integral(vec![-1, 0], 0),
                Facet::integral(vec![0, -1], 0),
                Facet::integral(vec![1, 1], 1),
                Facet::integral(vec![2, 2], 5),
            ],
        )
        .unwrap(),
    ));
    for (name, p) in sets {
        let r = unimodularity_report(&p).unwrap();
        assert_eq!(
            r.is_unimodular,
            r.minimal && r.primitive && r.simple_vertices && r.saturated_faces
        );
        if !r.minimal {
            let j = r.minimal_witness.expect("witness");
            assert!(!facet_is_essential(&p, j).unwrap(), "{name}");
        }
        if !r.primitive {
            let j = r.primitive_witness.expect("witness");
            assert_ne!(gcd_slice(&p.facets()[j].eta), 1, "{name}");
        }
        if !r.simple_vertices {
            let w = r.vertex_witness.clone().expect("witness");
            assert!(p.contains(&w.point));
            assert!(w.active.len() > p.dim());
        }
        if !r.saturated_faces {
            let face = r.saturation_witness.clone().expect("witness");
            let etas: Vec<Vec<i64>> = face.indices().iter().map(|&i| p.facets()[i].eta.clone()).collect();
            assert!(!saturation_check(&etas), "{name}");
            assert!(face_point(&p, &face).unwrap().is_some());
        }
    }
}

#[test]
fn f5_witness_pair_has_determinant_two() {
    let p = fixtures::f5();
    let r = unimodularity_report(&p).unwrap();
    let face = r.saturation_witness.unwrap();
    assert_eq!(face.to_string(), "{2,3}");
    let rows: Vec<Vec<i64>> = face.indices().iter().map(|&i| p.facets()[i].eta.clone()).collect();
    assert_eq!(det(&rows).abs(), BigInt::from(2));
    assert_eq!(rank_int(&rows, 2), 2);
}

#[test]
fn split_fixture_table() {
    for (name, k) in [("f2", 0), ("f3", 1), ("slab", 1), ("f4", 0), ("half_space_3d", 2)] {
        let p = fixtures::by_name(name).unwrap();
        let s = split_weakly_convex(&p).unwrap();
        assert_eq!(s.k, k, "{name}");
        assert_eq!(s.projected_set.dim(), p.dim() - k);
        for f in p.facets() {
            assert!(s.transform(&f.eta)[p.dim() - k..].iter().all(Zero::is_zero));
        }
    }
}
