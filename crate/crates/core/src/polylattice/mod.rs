//! Exact convex and lattice geometry of rational polyhedral sets.
//!
//! A [`PolyhedralSet`] is the half-space description
//! `{x | <x, eta_i> <= kappa_i}` with primitive-or-not integer conormals
//! `eta_i` and rational offsets `kappa_i`. Sets are always stored in this
//! "upper" convention; cones given as `<x, eta_i> >= 0` are negated on the
//! way in. Facet indices are 0-based in the API and 1-based when displayed.

pub mod faces;
pub mod feasibility;
pub mod lattice;
pub mod split;
pub mod unimodular;

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use faces::{active_faces, is_minimal, FaceIndexSet, MinimalityVerdict};
pub use feasibility::{feasible, maximize, Constraint, Feasibility, Relation};
pub use split::{homotopy_report, split_weakly_convex, HomotopyReport, SplittingReport};
pub use unimodular::{
    convexity_class, is_good_cone, saturation_check, unimodularity_report, ConvexityClass,
    ConvexityReport, UnimodularityReport,
};

/// Desk-scale bounds enforced by the exact kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
    pub max_constraints: usize,
    /// Largest facet count for which face lattices are enumerated.
    pub max_enumerated_facets: usize,
    /// Cap on rows produced while eliminating a variable.
    pub max_intermediate_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 8,
            max_constraints: 64,
            max_enumerated_facets: 16,
            max_intermediate_rows: 20_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("facet {} has a zero conormal", .index + 1)]
    ZeroConormal { index: usize },
    #[error("cone facet {} has nonzero offset", .index + 1)]
    ConeWithNonzeroOffset { index: usize },
    #[error("facet {} has conormal of length {found}, expected {expected}", .index + 1)]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("a polyhedral set needs at least one facet and positive dimension")]
    Empty,
    #[error("scale limit exceeded: {what} is {found}, limit {limit}")]
    ScaleLimitExceeded {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    #[error("operation requires a cone")]
    NotACone,
    #[error("set is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("supremum is not attained")]
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    General,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `<x, eta> <= kappa`
    Upper,
    /// `<x, eta> >= kappa`
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub eta: Vec<i64>,
    pub kappa: BigRational,
}

impl Facet {
    pub fn new(eta: Vec<i64>, kappa: BigRational) -> Self {
        Facet { eta, kappa }
    }

    pub fn integral(eta: Vec<i64>, kappa: i64) -> Self {
        Facet {
            eta,
            kappa: BigRational::from_integer(kappa.into()),
        }
    }

    /// `kappa - <x, eta>` evaluated exactly.
    pub fn slack(&self, x: &[BigRational]) -> BigRational {
        let dot = self
            .eta
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (&e, xi)| acc + xi * BigRational::from_integer(e.into()));
        &self.kappa - dot
    }

    pub fn slack_f64(&self, x: &[f64]) -> f64 {
        let kappa = num_traits::ToPrimitive::to_f64(&self.kappa).unwrap_or(f64::NAN);
        kappa - self.eta.iter().zip(x).map(|(&e, xi)| e as f64 * xi).sum::<f64>()
    }
}

/// Input description, in whichever orientation the caller uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPolyhedralSet {
    pub dim: usize,
    pub kind: SetKind,
    pub orientation: Orientation,
    pub facets: Vec<Facet>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Divide each conormal (and its offset) by the gcd of its entries.
    pub auto_primitivize: bool,
}

/// A validated polyhedral set in the upper convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralSet {
    dim: usize,
    kind: SetKind,
    input_orientation: Orientation,
    facets: Vec<Facet>,
    limits: Limits,
}

pub fn normalize(
    raw: &RawPolyhedralSet,
    options: NormalizeOptions,
) -> Result<PolyhedralSet, PolyError> {
    if raw.dim == 0 || raw.facets.is_empty() {
        return Err(PolyError::Empty);
    }
    let mut facets = Vec::with_capacity(raw.facets.len());
    for (index, f) in raw.facets.iter().enumerate() {
        if f.eta.len() != raw.dim {
            return Err(PolyError::DimensionMismatch {
                index,
                expected: raw.dim,
                found: f.eta.len(),
            });
        }
        if f.eta.iter().all(|&e| e == 0) {
            return Err(PolyError::ZeroConormal { index });
        }
        if raw.kind == SetKind::Cone && !f.kappa.is_zero() {
            return Err(PolyError::ConeWithNonzeroOffset { index });
        }
        let (mut eta, mut kappa) = (f.eta.clone(), f.kappa.clone());
        if raw.orientation == Orientation::Lower {
            eta.iter_mut().for_each(|e| *e = -*e);
            kappa = -kappa;
        }
        if options.auto_primitivize {
            let g = lattice::gcd_slice(&eta);
            if g > 1 {
                eta.iter_mut().for_each(|e| *e /= g);
                kappa /= BigRational::from_integer(g.into());
            }
        }
        facets.push(Facet { eta, kappa });
    }
    Ok(PolyhedralSet {
        dim: raw.dim,
        kind: raw.kind,
        input_orientation: raw.orientation,
        facets,
        limits: Limits::default(),
    })
}

impl PolyhedralSet {
    /// Shorthand for normalizing an upper-convention description.
    pub fn upper(dim: usize, kind: SetKind, facets: Vec<Facet>) -> Result<Self, PolyError> {
        normalize(
            &RawPolyhedralSet {
                dim,
                kind,
                orientation: Orientation::Upper,
                facets,
            },
            NormalizeOptions::default(),
        )
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn is_cone(&self) -> bool {
        self.kind == SetKind::Cone
    }

    pub fn input_orientation(&self) -> Orientation {
        self.input_orientation
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn etas(&self) -> Vec<Vec<i64>> {
        self.facets.iter().map(|f| f.eta.clone()).collect()
    }

    /// The upper-convention description of this set.
    pub fn to_raw(&self) -> RawPolyhedralSet {
        RawPolyhedralSet {
            dim: self.dim,
            kind: self.kind,
            orientation: Orientation::Upper,
            facets: self.facets.clone(),
        }
    }

    /// Conormal `i` in the orientation the set was given in.
    pub fn input_eta(&self, i: usize) -> Vec<i64> {
        match self.input_orientation {
            Orientation::Upper => self.facets[i].eta.clone(),
            Orientation::Lower => self.facets[i].eta.iter().map(|e| -e).collect(),
        }
    }

    /// Constraints `<x, eta_i> <= kappa_i` for the feasibility kernel.
    pub fn constraints(&self) -> Vec<Constraint> {
        self.facets
            .iter()
            .map(|f| Constraint::from_ints(&f.eta, Relation::Le, f.kappa.clone()))
            .collect()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub(crate) fn check_dim(&self) -> Result<(), PolyError> {
        if self.dim > self.limits.max_dim {
            return Err(PolyError::ScaleLimitExceeded {
                what: "dimension",
                found: self.dim,
                limit: self.limits.max_dim,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PolyhedralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SetKind::General => "set",
            SetKind::Cone => "cone",
        };
        write!(f, "{kind} in R^{} {{", self.dim)?;
        for (i, facet) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "<x,{:?}> <= {}", facet.eta, facet.kappa)?;
        }
        write!(f, "}}")
    }
}
