//! Points of the cut space `M_Delta = mu^{-1}(0) / T^N`.
//!
//! An ambient point is `(x, theta, z)` in `R^n x T^n x C^N`. It lies on the
//! zero level when `|z_i|^2 = l_i(x)` for every facet. The torus `T^N` acts by
//! `t . (x, theta, z) = (x, theta + sum t_i eta_i, e^{i t_i} z_i)`, and a
//! quotient point is stored through the gauge where every `z_i` is real and
//! nonnegative.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::kahler::{self, KahlerError};
use crate::polylattice::faces::face_point;
use crate::polylattice::lattice::{
    column_echelon, int_matrix, mat_vec, row_hermite, smith_normal_form, IntMatrix,
};
use crate::polylattice::{saturation_check, FaceIndexSet, PolyError, PolyhedralSet};

/// Slacks below this count as active for float input.
pub const ACTIVE_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance of the moment-level equations.
pub const LEVEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("point is not on the zero level: facet {} is off by {defect:e}", .index + 1)]
    NotOnLevel { index: usize, defect: f64 },
    #[error("point lies outside the set: facet {} has slack {slack}", .index + 1)]
    PointOutside { index: usize, slack: String },
    #[error("face {0} does not meet the set")]
    EmptyFace(FaceIndexSet),
    #[error("facet index {} is out of range or already in the face", .0 + 1)]
    BadFacetIndex(usize),
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The integral data of `0 -> k -> R^N -> R^n -> 0` with
/// `pi(e_i) = -eta_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantKernel {
    /// `n x N`.
    pub pi_matrix: IntMatrix,
    /// Hermite-reduced basis of `ker pi` in `Z^N`.
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub surjective_onto_lattice: bool,
}

pub fn delzant_kernel(p: &PolyhedralSet) -> DelzantKernel {
    let n = p.dim();
    let big_n = p.len();
    let pi: IntMatrix = (0..n)
        .map(|a| {
            p.facets()
                .iter()
                .map(|f| BigInt::from(-f.eta[a]))
                .collect()
        })
        .collect();
    let snf = smith_normal_form(&pi, big_n);
    let r = snf.rank();
    // pi * right = left^{-1} D, so the trailing columns of `right` span the kernel
    let raw: IntMatrix = (r..big_n)
        .map(|c| snf.right.iter().map(|row| row[c].clone()).collect())
        .collect();
    let kernel_basis = row_hermite(&raw, big_n);
    DelzantKernel {
        surjective_onto_lattice: r == n && snf.is_unit(),
        pi_matrix: pi,
        kernel_basis,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint {
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub z: Vec<Complex64>,
}

impl AmbientPoint {
    /// The action of `t in T^N`.
    pub fn act(&self, p: &PolyhedralSet, t: &[f64]) -> AmbientPoint {
        let mut theta = self.theta.clone();
        for (f, ti) in p.facets().iter().zip(t) {
            for (th, &e) in theta.iter_mut().zip(&f.eta) {
                *th += ti * e as f64;
            }
        }
        let z = self
            .z
            .iter()
            .zip(t)
            .map(|(z, ti)| z * Complex64::from_polar(1.0, *ti))
            .collect();
        AmbientPoint {
            x: self.x.clone(),
            theta,
            z,
        }
    }

    fn check_shape(&self, p: &PolyhedralSet) -> Result<(), CutError> {
        for (expected, found) in [
            (p.dim(), self.x.len()),
            (p.dim(), self.theta.len()),
            (p.len(), self.z.len()),
        ] {
            if expected != found {
                return Err(CutError::DimensionMismatch { expected, found });
            }
        }
        Ok(())
    }
}

/// A point of the cut space in canonical gauge.
#[derive(Clone, Debug, PartialEq)]
pub struct CutPoint {
    pub x: Vec<f64>,
    pub active: FaceIndexSet,
    /// Canonical angle, each entry in `[0, 2 pi)`.
    pub theta: Vec<f64>,
}

fn level_defect(p: &PolyhedralSet, a: &AmbientPoint) -> Option<(usize, f64)> {
    p.facets()
        .iter()
        .zip(&a.z)
        .map(|(f, z)| f.slack_f64(&a.x) - z.norm_sqr())
        .enumerate()
        .find(|(_, d)| !(d.abs() <= LEVEL_TOLERANCE))
}

pub fn moment_level_membership(p: &PolyhedralSet, a: &AmbientPoint) -> bool {
    a.check_shape(p).is_ok() && level_defect(p, a).is_none()
}

/// Componentwise reduction into `[0, 2 pi)`.
pub fn wrap_angle(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance on the circle `R / 2 pi Z`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

/// Reduces `theta` modulo `span_R{eta_i : i in active} + 2 pi Z^n`.
///
/// With `U` unimodular carrying the span onto the first `r` coordinates, the
/// class of `theta` is determined by the last `n - r` entries of `U theta`
/// modulo `2 pi`; the representative is `U^{-1}` of those entries padded with
/// zeros.
pub fn reduce_angle(p: &PolyhedralSet, active: &FaceIndexSet, theta: &[f64]) -> Vec<f64> {
    let n = p.dim();
    if active.is_empty() {
        return theta.iter().map(|&t| wrap_angle(t)).collect();
    }
    let rows: Vec<Vec<i64>> = active
        .indices()
        .iter()
        .map(|&i| p.facets()[i].eta.clone())
        .collect();
    let ech = column_echelon(&int_matrix(&rows), n);
    let to_f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
    // U = V^T, U^{-1} = (V^{-1})^T
    let mut c: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| to_f(&ech.right[k][i]) * theta[k]).sum())
        .collect();
    for (i, ci) in c.iter_mut().enumerate() {
        *ci = if i < ech.rank { 0.0 } else { wrap_angle(*ci) };
    }
    (0..n)
        .map(|i| wrap_angle((0..n).map(|k| to_f(&ech.right_inv[k][i]) * c[k]).sum()))
        .collect()
}

fn float_active(p: &PolyhedralSet, x: &[f64]) -> Result<FaceIndexSet, CutError> {
    let mut active = Vec::new();
    for (i, f) in p.facets().iter().enumerate() {
        let l = f.slack_f64(x);
        if !(l >= -ACTIVE_TOLERANCE) {
            return Err(CutError::PointOutside {
                index: i,
                slack: format!("{l:e}"),
            });
        }
        if l < ACTIVE_TOLERANCE {
            active.push(i);
        }
    }
    Ok(FaceIndexSet::new(active))
}

pub fn canonical_representative(p: &PolyhedralSet, a: &AmbientPoint) -> Result<CutPoint, CutError> {
    a.check_shape(p)?;
    if let Some((index, defect)) = level_defect(p, a) {
        return Err(CutError::NotOnLevel { index, defect });
    }
    let active = float_active(p, &a.x)?;
    let mut theta = a.theta.clone();
    for (i, (f, z)) in p.facets().iter().zip(&a.z).enumerate() {
        if active.contains(i) || z.norm_sqr() == 0.0 {
            continue;
        }
        // t_i = -arg z_i makes z_i real positive
        let t = -z.arg();
        for (th, &e) in theta.iter_mut().zip(&f.eta) {
            *th += t * e as f64;
        }
    }
    Ok(CutPoint {
        theta: reduce_angle(p, &active, &theta),
        x: a.x.clone(),
        active,
    })
}

/// `(x, theta) -> (x, theta, sqrt(l_1(x)), .., sqrt(l_N(x)))`.
pub fn sigma_embed(p: &PolyhedralSet, x: &[f64], theta: &[f64]) -> Result<AmbientPoint, CutError> {
    let pt = kahler::interior_point(p, x)?;
    if theta.len() != p.dim() {
        return Err(CutError::DimensionMismatch {
            expected: p.dim(),
            found: theta.len(),
        });
    }
    Ok(AmbientPoint {
        x: x.to_vec(),
        theta: theta.to_vec(),
        z: pt.l_values.iter().map(|l| Complex64::new(l.sqrt(), 0.0)).collect(),
    })
}

pub fn moment_map(cp: &CutPoint) -> Vec<f64> {
    cp.x.clone()
}

/// The isotropy subtorus at a point of the set, as its lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub active: FaceIndexSet,
    pub basis: Vec<Vec<i64>>,
    pub saturated: bool,
}

fn stabilizer_of(p: &PolyhedralSet, active: FaceIndexSet) -> Stabilizer {
    let basis: Vec<Vec<i64>> = active
        .indices()
        .iter()
        .map(|&i| p.facets()[i].eta.clone())
        .collect();
    Stabilizer {
        saturated: saturation_check(&basis),
        basis,
        active,
    }
}

pub fn stabilizer(p: &PolyhedralSet, x: &[f64]) -> Result<Stabilizer, CutError> {
    if x.len() != p.dim() {
        return Err(CutError::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    Ok(stabilizer_of(p, float_active(p, x)?))
}

pub fn stabilizer_exact(p: &PolyhedralSet, x: &[BigRational]) -> Result<Stabilizer, CutError> {
    if x.len() != p.dim() {
        return Err(CutError::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    let mut active = Vec::new();
    for (i, f) in p.facets().iter().enumerate() {
        let l = f.slack(x);
        if l.is_negative() {
            return Err(CutError::PointOutside {
                index: i,
                slack: l.to_string(),
            });
        }
        if l.is_zero() {
            active.push(i);
        }
    }
    Ok(stabilizer_of(p, FaceIndexSet::new(active)))
}

/// Whether cutting along facet `j` after the facets of `face` acts freely:
/// the conormals of `face + {j}` must span a saturated lattice.
pub fn free_action_certificate(
    p: &PolyhedralSet,
    face: &FaceIndexSet,
    j: usize,
) -> Result<bool, CutError> {
    if j >= p.len() || face.contains(j) {
        return Err(CutError::BadFacetIndex(j));
    }
    if !face.in_range(p.len()) {
        return Err(CutError::BadFacetIndex(
            *face.indices().last().expect("nonempty when out of range"),
        ));
    }
    let joined = face.with(j);
    if face_point(p, &joined)?.is_none() {
        return Err(CutError::EmptyFace(joined));
    }
    let etas: Vec<Vec<i64>> = joined
        .indices()
        .iter()
        .map(|&i| p.facets()[i].eta.clone())
        .collect();
    Ok(saturation_check(&etas))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessEntry {
    pub face: FaceIndexSet,
    pub added: usize,
    pub free: bool,
}

/// `free_action_certificate` for every active face split as `I + {j}`.
pub fn freeness_table(p: &PolyhedralSet) -> Result<Vec<FreenessEntry>, CutError> {
    let faces = crate::polylattice::active_faces(p)?;
    let mut out = Vec::new();
    for joined in faces.iter().filter(|f| !f.is_empty()) {
        for &j in joined.indices() {
            let face = FaceIndexSet::new(
                joined.indices().iter().copied().filter(|&k| k != j).collect(),
            );
            let etas: Vec<Vec<i64>> = joined
                .indices()
                .iter()
                .map(|&i| p.facets()[i].eta.clone())
                .collect();
            out.push(FreenessEntry {
                face,
                added: j,
                free: saturation_check(&etas),
            });
        }
    }
    Ok(out)
}

/// `pi_matrix * v` for checking exactness.
pub fn apply_pi(kernel: &DelzantKernel, v: &[BigInt]) -> Vec<BigInt> {
    mat_vec(&kernel.pi_matrix, v)
}
