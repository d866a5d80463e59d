use nalgebra::DMatrix;

use super::{metric_g, metric_g_inverse, InteriorPoint, KahlerError};

/// `omega`, `J` and `g` as `2n x 2n` matrices in `(x, theta)` order.
///
/// `omega(u, v) = u^T omega v` and `g(u, v) = omega(u, J v)`, so
/// `g = omega * J` as matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTensors {
    pub omega: DMatrix<f64>,
    pub j: DMatrix<f64>,
    pub g: DMatrix<f64>,
}

pub(crate) fn assemble(g_matrix: &DMatrix<f64>, g_inv: &DMatrix<f64>) -> BlockTensors {
    let n = g_matrix.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    omega.view_mut((0, n), (n, n)).copy_from(&id);
    omega.view_mut((n, 0), (n, n)).copy_from(&(-&id));
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    j.view_mut((0, n), (n, n)).copy_from(&(-g_inv));
    j.view_mut((n, 0), (n, n)).copy_from(g_matrix);
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(g_matrix);
    g.view_mut((n, n), (n, n)).copy_from(g_inv);
    BlockTensors { omega, j, g }
}

pub fn block_tensors(pt: &InteriorPoint) -> Result<BlockTensors, KahlerError> {
    let g = metric_g(pt);
    let g_inv = metric_g_inverse(&g)?;
    Ok(assemble(&g, &g_inv))
}

/// Sup-norm residuals of the compatibility identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Compatibility {
    /// `|J^2 + I|`
    pub j_squared: f64,
    /// `|g - omega J|`
    pub metric: f64,
    /// `|J^T omega J - omega|`
    pub omega_invariance: f64,
    /// `|g - g^T|`
    pub symmetry: f64,
}

impl Compatibility {
    pub fn max(&self) -> f64 {
        self.j_squared
            .max(self.metric)
            .max(self.omega_invariance)
            .max(self.symmetry)
    }
}

pub fn compatibility_residuals(t: &BlockTensors) -> Compatibility {
    let m = t.j.nrows();
    let id = DMatrix::<f64>::identity(m, m);
    Compatibility {
        j_squared: (&t.j * &t.j + &id).amax(),
        metric: (&t.g - &t.omega * &t.j).amax(),
        omega_invariance: (t.j.transpose() * &t.omega * &t.j - &t.omega).amax(),
        symmetry: (&t.g - t.g.transpose()).amax(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kahler::interior_point;

    #[test]
    fn interval_blocks() {
        let t = block_tensors(&interior_point(&fixtures::f1(), &[0.5]).unwrap()).unwrap();
        let expect_j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0 / 3.0, 3.0, 0.0]);
        assert!((&t.j - expect_j).amax() < 1e-15);
        assert_eq!(t.omega, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert!(compatibility_residuals(&t).max() < 1e-12);
    }

    #[test]
    fn triangle_blocks() {
        let third = 1.0 / 3.0;
        let t = block_tensors(&interior_point(&fixtures::f2(), &[third, third]).unwrap()).unwrap();
        let top = t.g.view((0, 0), (2, 2)).into_owned();
        assert!((top - DMatrix::from_row_slice(2, 2, &[4.0, 1.5, 1.5, 4.0])).amax() < 1e-14);
        let c = compatibility_residuals(&t);
        assert!(c.max() < 1e-10, "{c:?}");
        assert!(t.g.clone().cholesky().is_some());
    }
}
