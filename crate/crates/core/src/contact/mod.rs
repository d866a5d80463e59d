//! Contact toric cones: generators, Reeb vectors, the Sasakian/K-contact
//! classification, and the structures induced on the unit-sphere slice.
//!
//! Cones are written `{x | <x, eta_i> >= 0}` with inward conormals when
//! reported; internally they are stored in the upper convention.

mod acm;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::kahler::KahlerError;
use crate::polylattice::lattice::{nullspace, primitive_integer, rat_matrix, row_hermite, RatMatrix};
use crate::polylattice::{
    convexity_class, feasible, is_good_cone, Constraint, ConvexityClass, ConvexityReport,
    FaceIndexSet, PolyError, PolyhedralSet, Relation,
};

pub use acm::{
    canonical_contact_form, canonical_contact_form_exact, cone_metric_defect,
    cone_metric_defect_at, contact_point, induced_acm_structure, normalize_moment,
    AlmostContactMetric, ContactForm, ContactPoint, MetricKind, ACM_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContactError {
    #[error("operation requires a cone")]
    NotACone,
    #[error("cone is not good: face {0} has a non-saturated set of conormals")]
    NotGood(FaceIndexSet),
    #[error("cone is weakly convex (k = {0}); it has no Reeb vector")]
    WeaklyConvex(usize),
    #[error("the zero vector has no normalization")]
    ZeroPoint,
    #[error("point is not on the unit sphere (norm {0})")]
    NotOnSphere(f64),
    #[error("point is outside the cone: facet {} has value {value:e}", .index + 1)]
    PointOutside { index: usize, value: f64 },
    #[error("identity check failed: {0}")]
    IdentityViolation(String),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Poly(PolyError),
}

impl From<PolyError> for ContactError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::NotACone => ContactError::NotACone,
            other => ContactError::Poly(other),
        }
    }
}

/// The closed moment cone `Delta + {0}`: same facet data, apex included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentCone {
    pub set: PolyhedralSet,
    pub includes_apex: bool,
}

pub fn moment_cone(p: &PolyhedralSet) -> Result<MomentCone, ContactError> {
    if !p.is_cone() {
        return Err(ContactError::NotACone);
    }
    Ok(MomentCone {
        set: p.clone(),
        includes_apex: true,
    })
}

/// Conormals in the `<x, eta> >= 0` orientation.
pub fn inward_conormals(p: &PolyhedralSet) -> Vec<Vec<i64>> {
    p.facets()
        .iter()
        .map(|f| f.eta.iter().map(|e| -e).collect())
        .collect()
}

/// `C = pointed part + lineality space`, all vectors primitive integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    /// Extreme rays of `C` intersected with the orthogonal complement of the
    /// lineality space, sorted.
    pub rays: Vec<Vec<i64>>,
    /// Hermite basis of `{x | <x, eta_i> = 0 for all i}`.
    pub lineality: Vec<Vec<i64>>,
}

impl ConeGenerators {
    /// Rays plus both signs of each lineality vector: a conic generating set.
    pub fn all(&self) -> Vec<Vec<i64>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|v| -v).collect());
        }
        out
    }
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>, ContactError> {
    v.iter()
        .map(|x| {
            x.to_i64().ok_or_else(|| {
                ContactError::Poly(PolyError::ScaleLimitExceeded {
                    what: "generator entry bit length",
                    found: x.bits() as usize,
                    limit: 63,
                })
            })
        })
        .collect()
}

fn rat_row(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

pub fn cone_generators(p: &PolyhedralSet) -> Result<ConeGenerators, ContactError> {
    if !p.is_cone() {
        return Err(ContactError::NotACone);
    }
    let n = p.dim();
    if p.len() > p.limits().max_enumerated_facets {
        return Err(PolyError::ScaleLimitExceeded {
            what: "facet count for ray enumeration",
            found: p.len(),
            limit: p.limits().max_enumerated_facets,
        }
        .into());
    }
    let etas = p.etas();
    let lin_raw: Vec<Vec<BigInt>> = nullspace(&rat_matrix(&etas), n)
        .iter()
        .map(|v| primitive_integer(v))
        .collect();
    let lineality_big = row_hermite(&lin_raw, n);
    let lineality: Vec<Vec<i64>> = lineality_big
        .iter()
        .map(|v| to_i64(v))
        .collect::<Result<_, _>>()?;
    let k = lineality.len();

    let mut rays: Vec<Vec<i64>> = Vec::new();
    if n > k {
        let lin_rows: RatMatrix = lineality.iter().map(|l| rat_row(l)).collect();
        for subset in (0..p.len()).combinations(n - 1 - k) {
            let mut rows = lin_rows.clone();
            rows.extend(subset.iter().map(|&i| rat_row(&etas[i])));
            let null = nullspace(&rows, n);
            if null.len() != 1 {
                continue;
            }
            let d = primitive_integer(&null[0]);
            for sign in [1i64, -1] {
                let cand: Vec<BigInt> = d.iter().map(|v| v * sign).collect();
                let inside = etas.iter().all(|eta| {
                    let dot: BigInt = eta.iter().zip(&cand).map(|(&e, c)| c * e).sum();
                    !dot.is_positive()
                });
                if inside {
                    let r = to_i64(&cand)?;
                    if !rays.contains(&r) {
                        rays.push(r);
                    }
                }
            }
        }
    }
    rays.sort();
    Ok(ConeGenerators { rays, lineality })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReebCertificate {
    /// `X` with `<g, X> >= 1` on every generator.
    Positive(Vec<BigRational>),
    /// A nonzero point of the cone annihilated by every conormal.
    Annihilated(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebTypeVerdict {
    pub reeb_type: bool,
    pub certificate: ReebCertificate,
}

fn require_good(p: &PolyhedralSet) -> Result<(), ContactError> {
    let (good, report) = is_good_cone(p)?;
    if !good {
        let witness = report
            .saturation_witness
            .or_else(|| report.primitive_witness.map(|i| FaceIndexSet::new(vec![i])))
            .or_else(|| report.vertex_witness.map(|v| v.active))
            .or_else(|| report.minimal_witness.map(|i| FaceIndexSet::new(vec![i])))
            .unwrap_or_default();
        return Err(ContactError::NotGood(witness));
    }
    Ok(())
}

fn annihilated_point(p: &PolyhedralSet) -> Result<Option<Vec<BigRational>>, ContactError> {
    let n = p.dim();
    let base: Vec<Constraint> = p
        .facets()
        .iter()
        .map(|f| Constraint::from_ints(&f.eta, Relation::Eq, BigRational::zero()))
        .collect();
    for axis in 0..n {
        for sign in [1i64, -1] {
            let mut e = vec![0i64; n];
            e[axis] = sign;
            let mut cs = base.clone();
            cs.push(Constraint::ge(&e, BigRational::one()));
            if let Some(w) = feasible(n, &cs, p.limits())?.witness {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Exact test for a positive functional on the cone, cross-checked against
/// the rank computation.
pub fn is_reeb_type(p: &PolyhedralSet) -> Result<ReebTypeVerdict, ContactError> {
    require_good(p)?;
    let generators = cone_generators(p)?.all();
    let n = p.dim();
    let cs: Vec<Constraint> = generators
        .iter()
        .map(|g| Constraint::ge(g, BigRational::one()))
        .collect();
    let result = feasible(n, &cs, p.limits())?;
    let strongly = convexity_class(p).class == ConvexityClass::StronglyConvex;
    if result.feasible != strongly {
        return Err(ContactError::IdentityViolation(format!(
            "positive functional exists = {}, but strongly convex = {strongly}",
            result.feasible
        )));
    }
    if let Some(x) = result.witness {
        return Ok(ReebTypeVerdict {
            reeb_type: true,
            certificate: ReebCertificate::Positive(x),
        });
    }
    let x = annihilated_point(p)?.ok_or_else(|| {
        ContactError::IdentityViolation("weakly convex cone without an annihilated point".into())
    })?;
    Ok(ReebTypeVerdict {
        reeb_type: false,
        certificate: ReebCertificate::Annihilated(x),
    })
}

/// The sum of the inward conormals.
pub fn reeb_vector(p: &PolyhedralSet) -> Result<Vec<i64>, ContactError> {
    if !p.is_cone() {
        return Err(ContactError::NotACone);
    }
    let conv = convexity_class(p);
    if conv.k > 0 {
        return Err(ContactError::WeaklyConvex(conv.k));
    }
    let n = p.dim();
    let mut sum = vec![0i64; n];
    for eta in inward_conormals(p) {
        for (s, e) in sum.iter_mut().zip(eta) {
            *s += e;
        }
    }
    for r in cone_generators(p)?.rays {
        let dot: i64 = r.iter().zip(&sum).map(|(a, b)| a * b).sum();
        if dot <= 0 {
            return Err(ContactError::IdentityViolation(format!(
                "Reeb vector {sum:?} is not positive on ray {r:?}"
            )));
        }
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeLabel {
    SasakianType,
    NonSasakianType,
}

impl TypeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypeLabel::SasakianType => "sasakian_type",
            TypeLabel::NonSasakianType => "non_sasakian_type",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactClassification {
    pub good: bool,
    pub convexity: ConvexityReport,
    pub reeb_vector: Option<Vec<i64>>,
    pub type_label: TypeLabel,
    pub k_contact: bool,
    pub reeb_type: ReebTypeVerdict,
}

/// Sasakian and K-contact type hold exactly for strongly convex good cones.
pub fn classify(p: &PolyhedralSet) -> Result<ContactClassification, ContactError> {
    let reeb_type = is_reeb_type(p)?;
    let convexity = convexity_class(p);
    let strongly = convexity.class == ConvexityClass::StronglyConvex;
    Ok(ContactClassification {
        good: true,
        reeb_vector: if strongly { Some(reeb_vector(p)?) } else { None },
        type_label: if strongly {
            TypeLabel::SasakianType
        } else {
            TypeLabel::NonSasakianType
        },
        k_contact: strongly,
        convexity,
        reeb_type,
    })
}
