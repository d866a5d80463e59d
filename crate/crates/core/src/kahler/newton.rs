use nalgebra::DVector;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{
    interior_point_in, legendre_map, metric_g, sp_potential, FloatFacets, InteriorPoint,
    KahlerError,
};
use crate::polylattice::{maximize, Constraint, Limits, PolyError, PolyhedralSet, Relation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Stop as soon as `|gtilde(x) - y|_inf` drops below this.
    pub target: f64,
    /// Residual still accepted when float resolution stalls progress.
    pub accept: f64,
    /// Each slack may shrink to at most this fraction per step.
    pub boundary_fraction: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 200,
            target: 1e-10,
            accept: 1e-8,
            boundary_fraction: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversionResult {
    pub point: InteriorPoint,
    pub residual: f64,
    pub iterations: usize,
}

/// A strictly interior starting point: maximize `t` subject to
/// `<x, eta_i> + t <= kappa_i` and `t <= 1`, solved exactly.
pub fn chebyshev_start(p: &PolyhedralSet) -> Result<Vec<f64>, KahlerError> {
    let n = p.dim();
    let one = BigRational::one();
    let mut cs: Vec<Constraint> = p
        .facets()
        .iter()
        .map(|f| {
            let mut coeffs: Vec<BigRational> = f
                .eta
                .iter()
                .map(|&e| BigRational::from_integer(e.into()))
                .collect();
            coeffs.push(one.clone());
            Constraint::new(coeffs, Relation::Le, f.kappa.clone())
        })
        .collect();
    let mut cap = vec![BigRational::zero(); n];
    cap.push(one.clone());
    cs.push(Constraint::new(cap, Relation::Le, one));
    let limits = Limits {
        max_dim: p.limits().max_dim + 1,
        max_constraints: p.limits().max_constraints + 1,
        ..*p.limits()
    };
    let (t, x) = maximize(n + 1, &cs, n, &limits)?.ok_or(PolyError::Empty)?;
    if !(t > BigRational::zero()) {
        return Err(PolyError::Empty.into());
    }
    Ok(x[..n].iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Solves `gtilde(x) = y` by damped Newton on `Sp(x) - <x, y>`.
pub fn invert_legendre(
    p: &PolyhedralSet,
    y: &[f64],
    opts: &NewtonOptions,
) -> Result<InversionResult, KahlerError> {
    let facets = FloatFacets::of(p);
    if y.len() != facets.dim() {
        return Err(KahlerError::DimensionMismatch {
            expected: facets.dim(),
            found: y.len(),
        });
    }
    let start = chebyshev_start(p)?;
    newton_from(&facets, &start, &DVector::from_column_slice(y), opts)
}

fn merit(pt: &InteriorPoint, y: &DVector<f64>) -> f64 {
    sp_potential(pt) - pt.x.dot(y)
}

pub(crate) fn newton_from(
    facets: &FloatFacets,
    start: &[f64],
    y: &DVector<f64>,
    opts: &NewtonOptions,
) -> Result<InversionResult, KahlerError> {
    let mut pt = interior_point_in(facets, start)?;
    let mut grad = legendre_map(&pt) - y;
    let mut residual = grad.amax();
    // consecutive steps that failed to halve the residual
    let mut stalls = 0usize;
    for iteration in 0..opts.max_iterations {
        if stalls >= 5 && residual < opts.accept {
            return Ok(InversionResult {
                point: pt,
                residual,
                iterations: iteration,
            });
        }
        if residual < opts.target {
            return Ok(InversionResult {
                point: pt,
                residual,
                iterations: iteration,
            });
        }
        let g = metric_g(&pt);
        let Some(chol) = g.cholesky() else {
            return Err(KahlerError::NotSpd);
        };
        let step = -chol.solve(&grad);

        // largest step keeping every slack above the boundary fraction
        let rates = &facets.etas * &step;
        let mut alpha = 1.0f64;
        for (rate, l) in rates.iter().zip(pt.l_values.iter()) {
            if *rate > 0.0 {
                alpha = alpha.min((1.0 - opts.boundary_fraction) * l / rate);
            }
        }

        let phi = merit(&pt, y);
        let slope = grad.dot(&step);
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &pt.x + &step * alpha;
            if let Ok(next) = interior_point_in(facets, trial.as_slice()) {
                let next_grad = legendre_map(&next) - y;
                let next_res = next_grad.amax();
                let armijo = merit(&next, y) <= phi + 1e-4 * alpha * slope;
                if armijo || next_res < residual {
                    accepted = Some((next, next_grad, next_res));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((next, next_grad, next_res)) if next.x != pt.x => {
                stalls = if next_res > 0.5 * residual { stalls + 1 } else { 0 };
                pt = next;
                grad = next_grad;
                residual = next_res;
            }
            _ => {
                // no representable progress left
                if residual < opts.accept {
                    return Ok(InversionResult {
                        point: pt,
                        residual,
                        iterations: iteration,
                    });
                }
                return Err(KahlerError::NoConvergence {
                    iterations: iteration,
                    residual,
                });
            }
        }
    }
    if residual < opts.accept {
        return Ok(InversionResult {
            point: pt,
            residual,
            iterations: opts.max_iterations,
        });
    }
    Err(KahlerError::NoConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}
