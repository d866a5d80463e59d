//! Small named polyhedral sets used throughout the tests, the CLI examples
//! and the acceptance suite.

use crate::polylattice::{
    normalize, Facet, NormalizeOptions, Orientation, PolyhedralSet, RawPolyhedralSet, SetKind,
};

pub struct Fixture {
    pub name: &'static str,
    pub set: PolyhedralSet,
}

fn build(dim: usize, kind: SetKind, orientation: Orientation, facets: &[(&[i64], i64)]) -> PolyhedralSet {
    let raw = RawPolyhedralSet {
        dim,
        kind,
        orientation,
        facets: facets
            .iter()
            .map(|(eta, kappa)| Facet::integral(eta.to_vec(), *kappa))
            .collect(),
    };
    normalize(&raw, NormalizeOptions::default()).expect("fixture is well formed")
}

/// The interval `[0, 1]`.
pub fn f1() -> PolyhedralSet {
    build(1, SetKind::General, Orientation::Upper, &[(&[-1], 0), (&[1], 1)])
}

/// The standard triangle.
pub fn f2() -> PolyhedralSet {
    build(
        2,
        SetKind::General,
        Orientation::Upper,
        &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)],
    )
}

/// The half-plane cone `{x_1 >= 0}`.
pub fn f3() -> PolyhedralSet {
    build(2, SetKind::Cone, Orientation::Lower, &[(&[1, 0], 0)])
}

/// The quadrant cone.
pub fn f4() -> PolyhedralSet {
    build(2, SetKind::Cone, Orientation::Lower, &[(&[1, 0], 0), (&[0, 1], 0)])
}

/// A triangle with a determinant-two vertex at facets 2 and 3.
pub fn f5() -> PolyhedralSet {
    build(
        2,
        SetKind::General,
        Orientation::Upper,
        &[(&[-1, 0], 0), (&[0, -1], 0), (&[2, 1], 2)],
    )
}

/// `[0, 1] x R`.
pub fn slab() -> PolyhedralSet {
    build(2, SetKind::General, Orientation::Upper, &[(&[-1, 0], 0), (&[1, 0], 1)])
}

/// The cone with rays `(0,1)` and `(2,-1)`.
pub fn lens_cone() -> PolyhedralSet {
    build(2, SetKind::Cone, Orientation::Lower, &[(&[1, 0], 0), (&[1, 2], 0)])
}

/// A cone in `R^3` whose facets 2 and 3 meet along a ray with a
/// non-saturated pair of conormals.
pub fn f5_lift_cone() -> PolyhedralSet {
    build(
        3,
        SetKind::Cone,
        Orientation::Upper,
        &[(&[-1, 0, 0], 0), (&[0, -1, 0], 0), (&[2, 1, -2], 0)],
    )
}

/// The half-space cone `{x_1 >= 0}` in `R^3`.
pub fn half_space_3d() -> PolyhedralSet {
    build(3, SetKind::Cone, Orientation::Lower, &[(&[1, 0, 0], 0)])
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture { name: "f1", set: f1() },
        Fixture { name: "f2", set: f2() },
        Fixture { name: "f3", set: f3() },
        Fixture { name: "f4", set: f4() },
        Fixture { name: "f5", set: f5() },
        Fixture { name: "slab", set: slab() },
        Fixture { name: "lens_cone", set: lens_cone() },
        Fixture { name: "f5_lift_cone", set: f5_lift_cone() },
        Fixture { name: "half_space_3d", set: half_space_3d() },
    ]
}

pub fn by_name(name: &str) -> Option<PolyhedralSet> {
    all().into_iter().find(|f| f.name == name).map(|f| f.set)
}
