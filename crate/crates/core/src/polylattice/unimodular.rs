use num_rational::BigRational;

use super::faces::{active_faces, face_point, is_minimal, FaceIndexSet};
use super::lattice::{gcd_slice, int_matrix, rank_int, smith_normal_form};
use super::{PolyError, PolyhedralSet};

/// True iff the vectors are linearly independent and span a saturated
/// sublattice of `Z^n` (all Smith invariant factors equal one).
pub fn saturation_check(etas: &[Vec<i64>]) -> bool {
    let Some(n) = etas.first().map(Vec::len) else {
        return true;
    };
    let snf = smith_normal_form(&int_matrix(etas), n);
    snf.rank() == etas.len() && snf.is_unit()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWitness {
    pub point: Vec<BigRational>,
    pub active: FaceIndexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularityReport {
    pub minimal: bool,
    pub minimal_witness: Option<usize>,
    pub primitive: bool,
    pub primitive_witness: Option<usize>,
    pub simple_vertices: bool,
    pub vertex_witness: Option<VertexWitness>,
    pub saturated_faces: bool,
    pub saturation_witness: Option<FaceIndexSet>,
    pub is_unimodular: bool,
    /// The faces the verdicts were computed over.
    pub active_faces: Vec<FaceIndexSet>,
}

pub fn unimodularity_report(p: &PolyhedralSet) -> Result<UnimodularityReport, PolyError> {
    p.check_dim()?;
    let minimality = is_minimal(p)?;

    let primitive_witness = p.facets().iter().position(|f| gcd_slice(&f.eta) != 1);

    let faces = active_faces(p)?;
    let etas_of = |face: &FaceIndexSet| -> Vec<Vec<i64>> {
        face.indices().iter().map(|&i| p.facets()[i].eta.clone()).collect()
    };

    // vertices are the maximal active sets of full rank
    let mut vertex_witness = None;
    for face in &faces {
        let maximal = !faces
            .iter()
            .any(|other| other.len() > face.len() && face.is_subset(other));
        if maximal && rank_int(&etas_of(face), p.dim()) == p.dim() && face.len() != p.dim() {
            let point = face_point(p, face)?.expect("active face has a point");
            vertex_witness = Some(VertexWitness {
                point,
                active: face.clone(),
            });
            break;
        }
    }

    let saturation_witness = faces
        .iter()
        .filter(|f| !f.is_empty())
        .find(|f| !saturation_check(&etas_of(f)))
        .cloned();

    let minimal = minimality.minimal;
    let primitive = primitive_witness.is_none();
    let simple_vertices = vertex_witness.is_none();
    let saturated_faces = saturation_witness.is_none();
    Ok(UnimodularityReport {
        minimal,
        minimal_witness: minimality.witness,
        primitive,
        primitive_witness,
        simple_vertices,
        vertex_witness,
        saturated_faces,
        saturation_witness,
        is_unimodular: minimal && primitive && simple_vertices && saturated_faces,
        active_faces: faces,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvexityClass {
    StronglyConvex,
    WeaklyConvex,
}

impl ConvexityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConvexityClass::StronglyConvex => "strongly_convex",
            ConvexityClass::WeaklyConvex => "weakly_convex",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub rank: usize,
    /// Codimension of the span of the conormals.
    pub k: usize,
    pub class: ConvexityClass,
}

pub fn convexity_class(p: &PolyhedralSet) -> ConvexityReport {
    let rank = rank_int(&p.etas(), p.dim());
    let k = p.dim() - rank;
    ConvexityReport {
        rank,
        k,
        class: if k == 0 {
            ConvexityClass::StronglyConvex
        } else {
            ConvexityClass::WeaklyConvex
        },
    }
}

/// A cone is good when `C \ {0}` is unimodular. Face activity already
/// excludes the apex for cones.
pub fn is_good_cone(p: &PolyhedralSet) -> Result<(bool, UnimodularityReport), PolyError> {
    if !p.is_cone() {
        return Err(PolyError::NotACone);
    }
    let report = unimodularity_report(p)?;
    Ok((report.is_unimodular, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::polylattice::{normalize, Facet, NormalizeOptions, Orientation, RawPolyhedralSet, SetKind};

    #[test]
    fn saturation_examples() {
        assert!(saturation_check(&[vec![1, 0], vec![0, 1]]));
        assert!(!saturation_check(&[vec![0, -1], vec![2, 1]]));
        assert!(saturation_check(&[vec![1, 1]]));
        assert!(!saturation_check(&[vec![1, 2], vec![2, 4]]));
        assert!(!saturation_check(&[vec![2, 4]]));
    }

    #[test]
    fn triangle_is_unimodular() {
        let r = unimodularity_report(&fixtures::f2()).unwrap();
        assert!(r.minimal && r.primitive && r.simple_vertices && r.saturated_faces);
        assert!(r.is_unimodular);
    }

    #[test]
    fn det_two_vertex_fails_saturation() {
        let r = unimodularity_report(&fixtures::f5()).unwrap();
        assert!(!r.saturated_faces);
        assert_eq!(r.saturation_witness, Some(FaceIndexSet::from_one_based(&[2, 3])));
        assert!(!r.is_unimodular);
        assert!(r.simple_vertices);
    }

    #[test]
    fn non_primitive_reported() {
        let raw = RawPolyhedralSet {
            dim: 2,
            kind: SetKind::General,
            orientation: Orientation::Upper,
            facets: vec![Facet::integral(vec![2, 2], 1)],
        };
        let p = normalize(&raw, NormalizeOptions::default()).unwrap();
        let r = unimodularity_report(&p).unwrap();
        assert!(!r.primitive);
        assert_eq!(r.primitive_witness, Some(0));
    }

    #[test]
    fn non_simple_vertex() {
        // square pyramid apex: four facets through one vertex in R^3
        let p = PolyhedralSet::upper(
            3,
            SetKind::General,
            vec![
                Facet::integral(vec![1, 0, 1], 1),
                Facet::integral(vec![-1, 0, 1], 1),
                Facet::integral(vec![0, 1, 1], 1),
                Facet::integral(vec![0, -1, 1], 1),
                Facet::integral(vec![0, 0, -1], 0),
            ],
        )
        .unwrap();
        let r = unimodularity_report(&p).unwrap();
        assert!(!r.simple_vertices);
        let w = r.vertex_witness.unwrap();
        assert_eq!(w.active.len(), 4);
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        assert_eq!(w.point, vec![zero.clone(), zero, one]);
    }

    #[test]
    fn convexity_examples() {
        let q = convexity_class(&fixtures::f4());
        assert_eq!((q.k, q.class), (0, ConvexityClass::StronglyConvex));
        let h = convexity_class(&fixtures::f3());
        assert_eq!((h.k, h.class), (1, ConvexityClass::WeaklyConvex));
        assert_eq!(convexity_class(&fixtures::f2()).class, ConvexityClass::StronglyConvex);
    }

    #[test]
    fn good_cones() {
        assert!(is_good_cone(&fixtures::f4()).unwrap().0);
        assert!(is_good_cone(&fixtures::lens_cone()).unwrap().0);
        let (good, report) = is_good_cone(&fixtures::f5_lift_cone()).unwrap();
        assert!(!good);
        assert_eq!(report.saturation_witness, Some(FaceIndexSet::from_one_based(&[2, 3])));
        assert_eq!(is_good_cone(&fixtures::f2()), Err(PolyError::NotACone));
    }
}
