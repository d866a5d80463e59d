mod common;

use rand::Rng;
use toric_core::contact::{
    canonical_contact_form, classify, cone_generators, contact_point, induced_acm_structure,
    is_reeb_type, normalize_moment, reeb_vector,
};
use toric_core::fixtures;
use toric_core::polylattice::{convexity_class, feasible, is_good_cone, Constraint, ConvexityClass};

const CONES: [&str; 5] = ["f3", "f4", "lens_cone", "half_space_3d", "f5_lift_cone"];

#[test]
fn reeb_type_agrees_with_rank_on_good_cones() {
    for name in CONES {
        let p = fixtures::by_name(name).unwrap();
        if !is_good_cone(&p).unwrap().0 {
            assert!(is_reeb_type(&p).is_err());
            continue;
        }
        let v = is_reeb_type(&p).unwrap();
        assert_eq!(v.reeb_type, convexity_class(&p).k == 0, "{name}");
    }
}

#[test]
fn positive_functional_matches_rank_on_all_cones() {
    // independent of goodness: a functional positive on every generator
    // exists iff the conormals span
    for name in CONES {
        let p = fixtures::by_name(name).unwrap();
        let gens = cone_generators(&p).unwrap().all();
        let one = num_rational::BigRational::from_integer(1.into());
        let cs: Vec<Constraint> = gens.iter().map(|g| Constraint::ge(g, one.clone())).collect();
        let found = feasible(p.dim(), &cs, p.limits()).unwrap().feasible;
        assert_eq!(found, convexity_class(&p).k == 0, "{name}");
    }
}

#[test]
fn reeb_vector_is_positive_on_rays() {
    for name in ["f4", "lens_cone"] {
        let p = fixtures::by_name(name).unwrap();
        let x = reeb_vector(&p).unwrap();
        for r in cone_generators(&p).unwrap().rays {
            assert!(r.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() > 0);
        }
    }
}

#[test]
fn classification_fixture_table() {
    for (name, label) in [
        ("f4", "sasakian_type"),
        ("lens_cone", "sasakian_type"),
        ("f3", "non_sasakian_type"),
        ("half_space_3d", "non_sasakian_type"),
    ] {
        let c = classify(&fixtures::by_name(name).unwrap()).unwrap();
        assert_eq!(c.type_label.as_str(), label, "{name}");
        assert_eq!(c.k_contact, c.convexity.class == ConvexityClass::StronglyConvex);
        assert_eq!(c.reeb_vector.is_some(), c.k_contact);
    }
}

#[test]
fn acm_identities_at_random_points() {
    let mut rng = common::rng(21);
    for name in ["f4", "lens_cone"] {
        let p = fixtures::by_name(name).unwrap();
        for x in common::sphere_points(&p, 20, 1e-3, &mut rng) {
            let cp = contact_point(&p, &x, &[0.0; 2]).unwrap();
            let acm = induced_acm_structure(&p, &cp).unwrap();
            assert!(acm.residuals.max() < 1e-9, "{name} {:?}", acm.residuals);
            // Hermitian compatibility on random tangent vectors
            for _ in 0..20 {
                let v = nalgebra::DVector::from_iterator(3, (0..3).map(|_| rng.random_range(-1.0..1.0)));
                let pv = &acm.phi * &v;
                let lhs = pv.dot(&(&acm.metric * &pv));
                let rhs = v.dot(&(&acm.metric * &v)) - acm.alpha.dot(&v).powi(2);
                assert!((lhs - rhs).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn normalization_is_idempotent() {
    let mut rng = common::rng(22);
    for name in ["f4", "f3", "lens_cone"] {
        let p = fixtures::by_name(name).unwrap();
        for x in common::interior_points(&p, 100, 5.0, 0.0, &mut rng) {
            let u = normalize_moment(&p, &x).unwrap();
            let again = normalize_moment(&p, &u).unwrap();
            for (a, b) in u.iter().zip(&again) {
                assert!((a - b).abs() < 1e-15);
            }
            assert!((canonical_contact_form(&u).alpha_of_reeb - 1.0).abs() < 1e-14);
        }
    }
}
