//! The canonical Kähler structure on the interior of a unimodular set.
//!
//! Everything here is evaluated in action coordinates `x`; the angle
//! coordinates never enter. With `l_i(x) = kappa_i - <x, eta_i>`,
//!
//! * `Sp(x) = |x|^2/2 + (1/2) sum l_i log l_i - l_inf/2`,
//! * `G = Hess Sp = I + (1/2) sum eta_i eta_i^T / l_i`,
//! * `grad Sp = gtilde(x) = x - (1/2) sum log(l_i) eta_i`.

mod newton;
mod tensors;

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::polylattice::{PolyError, PolyhedralSet};

pub use newton::{invert_legendre, InversionResult, NewtonOptions};
pub use tensors::{block_tensors, compatibility_residuals, BlockTensors, Compatibility};

/// Points with some `l_i` below this are rejected even when positive.
pub const INTERIOR_MARGIN: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KahlerError {
    #[error("point is not interior: facet {} has slack {slack:e}", .index + 1)]
    NotInterior { index: usize, slack: f64 },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Float copy of the facet data of a set.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatFacets {
    /// Row `i` is `eta_i`.
    pub etas: DMatrix<f64>,
    pub kappas: DVector<f64>,
}

impl FloatFacets {
    pub fn of(p: &PolyhedralSet) -> Self {
        let n = p.dim();
        let etas = DMatrix::from_fn(p.len(), n, |i, j| p.facets()[i].eta[j] as f64);
        let kappas = DVector::from_iterator(
            p.len(),
            p.facets()
                .iter()
                .map(|f| f.kappa.to_f64().unwrap_or(f64::NAN)),
        );
        FloatFacets { etas, kappas }
    }

    pub fn dim(&self) -> usize {
        self.etas.ncols()
    }

    pub fn len(&self) -> usize {
        self.etas.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.nrows() == 0
    }

    pub fn slacks(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.kappas - &self.etas * x
    }
}

/// A strictly interior point together with its slacks.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorPoint {
    pub x: DVector<f64>,
    pub l_values: DVector<f64>,
    pub l_infinity: f64,
    facets: FloatFacets,
}

impl InteriorPoint {
    pub fn facets(&self) -> &FloatFacets {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

pub fn interior_point(p: &PolyhedralSet, x: &[f64]) -> Result<InteriorPoint, KahlerError> {
    interior_point_in(&FloatFacets::of(p), x)
}

pub fn interior_point_in(facets: &FloatFacets, x: &[f64]) -> Result<InteriorPoint, KahlerError> {
    if x.len() != facets.dim() {
        return Err(KahlerError::DimensionMismatch {
            expected: facets.dim(),
            found: x.len(),
        });
    }
    let x = DVector::from_column_slice(x);
    let l = facets.slacks(&x);
    if let Some((index, &slack)) = l
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v >= INTERIOR_MARGIN))
    {
        return Err(KahlerError::NotInterior { index, slack });
    }
    Ok(InteriorPoint {
        l_infinity: l.sum(),
        x,
        l_values: l,
        facets: facets.clone(),
    })
}

fn entropy_sum(pt: &InteriorPoint) -> f64 {
    0.5 * pt.l_values.iter().map(|l| l * l.ln()).sum::<f64>() - 0.5 * pt.l_infinity
}

/// The canonical symplectic potential `Sp`.
pub fn sp_potential(pt: &InteriorPoint) -> f64 {
    0.5 * pt.x.norm_squared() + entropy_sum(pt)
}

/// Guillemin's potential: `Sp` without the `|x|^2/2` term.
pub fn guillemin_potential(pt: &InteriorPoint) -> f64 {
    entropy_sum(pt)
}

/// `(1/2) sum eta_i eta_i^T / l_i`, the Hessian of Guillemin's potential.
pub fn guillemin_hessian(pt: &InteriorPoint) -> DMatrix<f64> {
    let n = pt.dim();
    let mut h = DMatrix::zeros(n, n);
    for (i, l) in pt.l_values.iter().enumerate() {
        let eta = pt.facets.etas.row(i).transpose();
        h += (&eta * eta.transpose()) * (0.5 / l);
    }
    h
}

/// The Hessian `G` of `Sp`.
pub fn metric_g(pt: &InteriorPoint) -> DMatrix<f64> {
    let n = pt.dim();
    DMatrix::identity(n, n) + guillemin_hessian(pt)
}

/// Jacobian of the Legendre map. Shares its closed form with `metric_g`.
pub fn legendre_jacobian(pt: &InteriorPoint) -> DMatrix<f64> {
    metric_g(pt)
}

/// Inverse through a Cholesky factorization, symmetrized.
pub fn metric_g_inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>, KahlerError> {
    if !g.is_square() || g.iter().any(|v| !v.is_finite()) {
        return Err(KahlerError::NotSpd);
    }
    if (g - g.transpose()).amax() > 1e-12 * g.amax().max(1.0) {
        return Err(KahlerError::NotSpd);
    }
    let chol = g.clone().cholesky().ok_or(KahlerError::NotSpd)?;
    let inv = chol.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Inverse of `I + eta eta^T / (2l)` by the rank-one update formula
/// `I - eta eta^T / (2l + |eta|^2)`.
pub fn one_cut_inverse(eta: &[i64], l: f64) -> DMatrix<f64> {
    let n = eta.len();
    let e = DVector::from_iterator(n, eta.iter().map(|&v| v as f64));
    DMatrix::identity(n, n) - (&e * e.transpose()) / (2.0 * l + e.norm_squared())
}

/// The Legendre map `gtilde(x) = x - (1/2) sum log(l_i) eta_i`.
pub fn legendre_map(pt: &InteriorPoint) -> DVector<f64> {
    let logs = pt.l_values.map(f64::ln);
    &pt.x - pt.facets.etas.transpose() * logs * 0.5
}

/// Everything the structure assigns to one interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct KahlerPointData {
    pub sp: f64,
    pub guillemin: f64,
    pub g_matrix: DMatrix<f64>,
    pub g_inverse: DMatrix<f64>,
    pub gtilde: DVector<f64>,
    pub tensors: BlockTensors,
}

pub fn point_data(pt: &InteriorPoint) -> Result<KahlerPointData, KahlerError> {
    let g = metric_g(pt);
    let g_inv = metric_g_inverse(&g)?;
    let tensors = tensors::assemble(&g, &g_inv);
    Ok(KahlerPointData {
        sp: sp_potential(pt),
        guillemin: guillemin_potential(pt),
        g_matrix: g,
        g_inverse: g_inv,
        gtilde: legendre_map(pt),
        tensors,
    })
}

/// Central finite-difference steps used by the consistency checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDifference {
    pub gradient_step: f64,
    pub hessian_step: f64,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        FiniteDifference {
            gradient_step: 1e-5,
            hessian_step: 1e-5,
        }
    }
}

impl FiniteDifference {
    pub fn gradient(&self, f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
        let h = self.gradient_step * scale(x);
        (0..x.len())
            .map(|i| {
                let (mut a, mut b) = (x.to_vec(), x.to_vec());
                a[i] += h;
                b[i] -= h;
                (f(&a) - f(&b)) / (2.0 * h)
            })
            .collect()
    }

    pub fn hessian(&self, f: impl Fn(&[f64]) -> f64, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let h = self.hessian_step * scale(x);
        let eval = |di: usize, si: f64, dj: usize, sj: f64| {
            let mut y = x.to_vec();
            y[di] += si * h;
            y[dj] += sj * h;
            f(&y)
        };
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let mut a = x.to_vec();
                let mut b = x.to_vec();
                a[i] += h;
                b[i] -= h;
                (f(&a) - 2.0 * f(x) + f(&b)) / (h * h)
            } else {
                (eval(i, 1.0, j, 1.0) - eval(i, 1.0, j, -1.0) - eval(i, -1.0, j, 1.0)
                    + eval(i, -1.0, j, -1.0))
                    / (4.0 * h * h)
            }
        })
    }

    pub fn jacobian(&self, f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64]) -> DMatrix<f64> {
        let h = self.gradient_step * scale(x);
        let n = x.len();
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let (mut a, mut b) = (x.to_vec(), x.to_vec());
            a[j] += h;
            b[j] -= h;
            let (fa, fb) = (f(&a), f(&b));
            for i in 0..n {
                jac[(i, j)] = (fa[i] - fb[i]) / (2.0 * h);
            }
        }
        jac
    }
}

fn scale(x: &[f64]) -> f64 {
    x.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}
