use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;

use super::ContactError;
use crate::kahler::{self, guillemin_hessian, metric_g, metric_g_inverse, KahlerError};
use crate::polylattice::PolyhedralSet;

/// Tolerance for the almost contact metric identities.
pub const ACM_TOLERANCE: f64 = 1e-9;
const SPHERE_TOLERANCE: f64 = 1e-12;

/// A point of the contact hypersurface `{|x| = 1}` over the interior of a
/// cone, with angle `theta` and radial coordinate `t` in the
/// symplectization.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactPoint {
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub t: f64,
}

impl ContactPoint {
    /// Moment coordinates of the point at radius `e^t`.
    pub fn scaled_x(&self) -> Vec<f64> {
        let s = self.t.exp();
        self.x.iter().map(|v| v * s).collect()
    }
}

pub fn contact_point(
    p: &PolyhedralSet,
    x: &[f64],
    theta: &[f64],
) -> Result<ContactPoint, ContactError> {
    if !p.is_cone() {
        return Err(ContactError::NotACone);
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= SPHERE_TOLERANCE) {
        return Err(ContactError::NotOnSphere(norm));
    }
    kahler::interior_point(p, x)?;
    if theta.len() != p.dim() {
        return Err(KahlerError::DimensionMismatch {
            expected: p.dim(),
            found: theta.len(),
        }
        .into());
    }
    Ok(ContactPoint {
        x: x.to_vec(),
        theta: theta.to_vec(),
        t: 0.0,
    })
}

/// `alpha = sum x_i d theta_i` and `xi = sum x_i d/d theta_i` in the
/// `(x, theta)` frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactForm {
    pub alpha: Vec<f64>,
    pub reeb: Vec<f64>,
    pub alpha_of_reeb: f64,
}

pub fn canonical_contact_form(x: &[f64]) -> ContactForm {
    let n = x.len();
    let mut alpha = vec![0.0; 2 * n];
    alpha[n..].copy_from_slice(x);
    let alpha_of_reeb = x.iter().map(|v| v * v).sum();
    ContactForm {
        reeb: alpha.clone(),
        alpha,
        alpha_of_reeb,
    }
}

/// `alpha(xi) = |x|^2`, evaluated exactly.
pub fn canonical_contact_form_exact(x: &[BigRational]) -> BigRational {
    x.iter().fold(BigRational::zero(), |acc, v| acc + v * v)
}

/// `x / |x|` for a nonzero point of the closed cone.
pub fn normalize_moment(p: &PolyhedralSet, x: &[f64]) -> Result<Vec<f64>, ContactError> {
    if !p.is_cone() {
        return Err(ContactError::NotACone);
    }
    if x.len() != p.dim() {
        return Err(KahlerError::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        }
        .into());
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(ContactError::ZeroPoint);
    }
    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
    for (index, f) in p.facets().iter().enumerate() {
        let value = f.slack_f64(&unit);
        if value < -1e-12 {
            return Err(ContactError::PointOutside { index, value });
        }
    }
    Ok(unit)
}

/// `(Phi, xi, alpha, g)` on the tangent space of `{|x| = 1}`, written in the
/// frame `frame` (its columns: an orthonormal basis of `x^perp` in the action
/// directions followed by the angle directions).
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostContactMetric {
    pub frame: DMatrix<f64>,
    pub alpha: DVector<f64>,
    pub xi: DVector<f64>,
    pub phi: DMatrix<f64>,
    pub metric: DMatrix<f64>,
    /// `xi` in the ambient `(x, theta)` chart.
    pub xi_ambient: DVector<f64>,
    /// `|xi - sum x_i d/d theta_i|` in the ambient chart.
    pub reeb_difference: f64,
    pub residuals: AcmResiduals,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcmResiduals {
    pub phi_squared: f64,
    pub phi_xi: f64,
    pub alpha_xi: f64,
    pub compatibility: f64,
}

impl AcmResiduals {
    pub fn max(&self) -> f64 {
        self.phi_squared
            .max(self.phi_xi)
            .max(self.alpha_xi)
            .max(self.compatibility)
    }
}

/// Orthonormal basis of the orthogonal complement of a unit vector.
fn complement_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    // Gram-Schmidt over the coordinate axes, least aligned first
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    for axis in axes {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = DVector::zeros(n);
        v[axis] = 1.0;
        v -= x * x.dot(&v);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    DMatrix::from_columns(&basis)
}

pub fn induced_acm_structure(
    p: &PolyhedralSet,
    cp: &ContactPoint,
) -> Result<AlmostContactMetric, ContactError> {
    let pt = kahler::interior_point(p, &cp.x)?;
    let n = pt.dim();
    let g = metric_g(&pt);
    let g_inv = metric_g_inverse(&g)?;
    let x = pt.x.clone();

    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&g);
    h.view_mut((n, n), (n, n)).copy_from(&g_inv);
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    j.view_mut((0, n), (n, n)).copy_from(&(-&g_inv));
    j.view_mut((n, 0), (n, n)).copy_from(&g);

    // h-unit normal pointing towards the apex
    let g_inv_x = &g_inv * &x;
    let s = x.dot(&g_inv_x).sqrt();
    let mut nu = DVector::zeros(2 * n);
    nu.rows_mut(0, n).copy_from(&(-&g_inv_x / s));
    let xi_amb = -(&j * &nu);
    let alpha_amb = &h * &xi_amb;

    let mut frame = DMatrix::zeros(2 * n, 2 * n - 1);
    if n > 1 {
        frame
            .view_mut((0, 0), (n, n - 1))
            .copy_from(&complement_basis(&x));
    }
    frame
        .view_mut((n, n - 1), (n, n))
        .copy_from(&DMatrix::identity(n, n));

    // Phi = h-orthogonal projection onto the tangent space after J
    let proj = DMatrix::identity(2 * n, 2 * n) - &nu * (nu.transpose() * &h);
    let phi = frame.transpose() * proj * &j * &frame;
    let xi = frame.transpose() * &xi_amb;
    let alpha = frame.transpose() * &alpha_amb;
    let metric = frame.transpose() * &h * &frame;

    let m = 2 * n - 1;
    let id = DMatrix::<f64>::identity(m, m);
    let residuals = AcmResiduals {
        phi_squared: (&phi * &phi + &id - &xi * alpha.transpose()).amax(),
        phi_xi: (&phi * &xi).amax(),
        alpha_xi: (alpha.dot(&xi) - 1.0).abs(),
        compatibility: (phi.transpose() * &metric * &phi - &metric + &alpha * alpha.transpose())
            .amax(),
    };
    if !(residuals.max() <= ACM_TOLERANCE) {
        return Err(ContactError::IdentityViolation(format!(
            "almost contact metric residuals {residuals:?}"
        )));
    }

    let mut canonical = DVector::zeros(2 * n);
    canonical.rows_mut(n, n).copy_from(&x);
    Ok(AlmostContactMetric {
        reeb_difference: (&xi_amb - canonical).norm(),
        frame,
        alpha,
        xi,
        phi,
        metric,
        xi_ambient: xi_amb,
        residuals,
    })
}

/// Which Hessian metric `diag(G, G^{-1})` to test for the cone property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    /// `G = Hess Sp`, the canonical cut metric.
    Canonical,
    /// `G = Hess` of Guillemin's potential (strongly convex cones only).
    Guillemin,
}

fn hessian_metric(p: &PolyhedralSet, x: &[f64], kind: MetricKind) -> Result<DMatrix<f64>, ContactError> {
    let pt = kahler::interior_point(p, x)?;
    let n = pt.dim();
    let g = match kind {
        MetricKind::Canonical => metric_g(&pt),
        MetricKind::Guillemin => guillemin_hessian(&pt),
    };
    let g_inv = metric_g_inverse(&g)?;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&g);
    h.view_mut((n, n), (n, n)).copy_from(&g_inv);
    Ok(h)
}

/// `|d/dt rho_t^* h - h|_inf` at `x`, with `rho_t(x, theta) = (e^t x, theta)`.
/// A cone metric `dr^2 + r^2 g_S` with `r^2` proportional to `|x|` is
/// homogeneous of degree one under `rho_t` and gives zero.
pub fn cone_metric_defect_at(
    p: &PolyhedralSet,
    x: &[f64],
    kind: MetricKind,
) -> Result<f64, ContactError> {
    let n = x.len();
    let pulled = |t: f64| -> Result<DMatrix<f64>, ContactError> {
        let s = t.exp();
        let y: Vec<f64> = x.iter().map(|v| v * s).collect();
        let mut h = hessian_metric(p, &y, kind)?;
        // d(e^t x) = e^t dx on the action block
        h.view_mut((0, 0), (n, n)).scale_mut(s * s);
        Ok(h)
    };
    let step = 1e-5;
    let derivative = (pulled(step)? - pulled(-step)?) / (2.0 * step);
    Ok((derivative - pulled(0.0)?).amax())
}

pub fn cone_metric_defect(p: &PolyhedralSet, cp: &ContactPoint) -> Result<f64, ContactError> {
    cone_metric_defect_at(p, &cp.scaled_x(), MetricKind::Canonical)
}
