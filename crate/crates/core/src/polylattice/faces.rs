use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::feasibility::{feasible, Constraint, Relation};
use super::{PolyError, PolyhedralSet};

/// A set `I` of facet indices (0-based, sorted, distinct).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceIndexSet(Vec<usize>);

impl FaceIndexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FaceIndexSet(indices)
    }

    pub fn empty() -> Self {
        FaceIndexSet(Vec::new())
    }

    pub fn from_one_based(indices: &[usize]) -> Self {
        FaceIndexSet::new(indices.iter().map(|i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn with(&self, i: usize) -> FaceIndexSet {
        let mut v = self.0.clone();
        v.push(i);
        FaceIndexSet::new(v)
    }

    pub fn is_subset(&self, other: &FaceIndexSet) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    pub fn in_range(&self, n: usize) -> bool {
        self.0.iter().all(|&i| i < n)
    }
}

impl fmt::Display for FaceIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    /// First redundant facet.
    pub witness: Option<usize>,
}

/// Facet `j` is essential iff some point violates it while satisfying all
/// the other facets.
pub fn facet_is_essential(p: &PolyhedralSet, j: usize) -> Result<bool, PolyError> {
    let mut cs: Vec<Constraint> = Vec::with_capacity(p.len());
    for (i, f) in p.facets().iter().enumerate() {
        if i == j {
            cs.push(Constraint::gt(&f.eta, f.kappa.clone()));
        } else {
            cs.push(Constraint::from_ints(&f.eta, Relation::Le, f.kappa.clone()));
        }
    }
    Ok(feasible(p.dim(), &cs, p.limits())?.feasible)
}

pub fn is_minimal(p: &PolyhedralSet) -> Result<MinimalityVerdict, PolyError> {
    for j in 0..p.len() {
        if !facet_is_essential(p, j)? {
            return Ok(MinimalityVerdict {
                minimal: false,
                witness: Some(j),
            });
        }
    }
    Ok(MinimalityVerdict {
        minimal: true,
        witness: None,
    })
}

/// Constraints describing `F_I`: the set itself with the facets of `I`
/// tightened to equalities.
pub fn face_constraints(p: &PolyhedralSet, face: &FaceIndexSet) -> Vec<Constraint> {
    p.facets()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let rel = if face.contains(i) {
                Relation::Eq
            } else {
                Relation::Le
            };
            Constraint::from_ints(&f.eta, rel, f.kappa.clone())
        })
        .collect()
}

/// A point of `F_I` (excluding the apex for cones), if there is one.
pub fn face_point(
    p: &PolyhedralSet,
    face: &FaceIndexSet,
) -> Result<Option<Vec<BigRational>>, PolyError> {
    let base = face_constraints(p, face);
    if !p.is_cone() {
        return Ok(feasible(p.dim(), &base, p.limits())?.witness);
    }
    // F_I is a cone; it has a nonzero point iff some coordinate can be
    // pushed to +-1.
    for axis in 0..p.dim() {
        for sign in [1i64, -1] {
            let mut e = vec![0i64; p.dim()];
            e[axis] = sign;
            let mut cs = base.clone();
            cs.push(Constraint::ge(&e, BigRational::one()));
            if let Some(w) = feasible(p.dim(), &cs, p.limits())?.witness {
                debug_assert!(w.iter().any(|v| !v.is_zero()));
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// All `I` with `F_I` meeting the set (meeting `C \ {0}` for cones), ordered
/// by size and then lexicographically. Always starts with `I = {}` for a
/// nonempty set.
pub fn active_faces(p: &PolyhedralSet) -> Result<Vec<FaceIndexSet>, PolyError> {
    if p.len() > p.limits().max_enumerated_facets {
        return Err(PolyError::ScaleLimitExceeded {
            what: "facet count for face enumeration",
            found: p.len(),
            limit: p.limits().max_enumerated_facets,
        });
    }
    let mut out = Vec::new();
    if face_point(p, &FaceIndexSet::empty())?.is_none() {
        return Ok(out);
    }
    out.push(FaceIndexSet::empty());
    let mut layer = vec![FaceIndexSet::empty()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for face in &layer {
            let start = face.indices().last().map_or(0, |&m| m + 1);
            for i in start..p.len() {
                let cand = face.with(i);
                // the active family is closed under taking subsets
                let subsets_active = cand.indices().iter().all(|&drop| {
                    let sub = FaceIndexSet::new(
                        cand.indices().iter().copied().filter(|&k| k != drop).collect(),
                    );
                    layer.binary_search(&sub).is_ok()
                });
                if subsets_active && face_point(p, &cand)?.is_some() {
                    next.push(cand);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::polylattice::{Facet, SetKind};

    fn sets(v: &[&[usize]]) -> Vec<FaceIndexSet> {
        v.iter().map(|s| FaceIndexSet::from_one_based(s)).collect()
    }

    #[test]
    fn interval_is_minimal() {
        let v = is_minimal(&fixtures::f1()).unwrap();
        assert!(v.minimal);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn redundant_bound_detected() {
        let p = PolyhedralSet::upper(
            1,
            SetKind::General,
            vec![Facet::integral(vec![1], 1), Facet::integral(vec![1], 2)],
        )
        .unwrap();
        let v = is_minimal(&p).unwrap();
        assert!(!v.minimal);
        assert_eq!(v.witness, Some(1));
    }

    #[test]
    fn half_space_is_minimal() {
        let p = PolyhedralSet::upper(2, SetKind::General, vec![Facet::integral(vec![-1, 0], 0)])
            .unwrap();
        assert!(is_minimal(&p).unwrap().minimal);
    }

    #[test]
    fn interval_faces() {
        assert_eq!(active_faces(&fixtures::f1()).unwrap(), sets(&[&[], &[1], &[2]]));
    }

    #[test]
    fn quadrant_apex_excluded() {
        let faces = active_faces(&fixtures::f4()).unwrap();
        assert_eq!(faces, sets(&[&[], &[1], &[2]]));
        assert!(!faces.contains(&FaceIndexSet::from_one_based(&[1, 2])));
    }

    #[test]
    fn ray_faces() {
        let p = PolyhedralSet::upper(1, SetKind::General, vec![Facet::integral(vec![-1], 0)])
            .unwrap();
        assert_eq!(active_faces(&p).unwrap(), sets(&[&[], &[1]]));
    }

    #[test]
    fn triangle_faces() {
        assert_eq!(
            active_faces(&fixtures::f2()).unwrap(),
            sets(&[&[], &[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]])
        );
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(FaceIndexSet::new(vec![2, 1]).to_string(), "{2,3}");
    }
}
