use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::lattice::{column_echelon, int_matrix, rat_matrix, rref, smith_normal_form, IntMatrix};
use super::unimodular::{convexity_class, unimodularity_report, ConvexityClass};
use super::{Facet, PolyError, PolyhedralSet};

/// The decomposition `Delta = Delta' x R^k` after an integral change of basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub k: usize,
    /// Columns of the conormal matrix that carry its rank (0-based).
    pub coordinate_indices: Vec<usize>,
    /// `M` with `det M = +-1`; `M eta_i` vanishes in its last `k` entries.
    pub unimodular_change: IntMatrix,
    /// `M^{-1}`, so that `x' = M^{-T} x` are the split coordinates.
    pub unimodular_change_inv: IntMatrix,
    pub projected_set: PolyhedralSet,
}

impl SplittingReport {
    /// `M eta`.
    pub fn transform(&self, eta: &[i64]) -> Vec<BigInt> {
        self.unimodular_change
            .iter()
            .map(|row| row.iter().zip(eta).map(|(m, &e)| m * BigInt::from(e)).sum())
            .collect()
    }
}

pub fn split_weakly_convex(p: &PolyhedralSet) -> Result<SplittingReport, PolyError> {
    p.check_dim()?;
    let n = p.dim();
    let etas = p.etas();
    let conv = convexity_class(p);
    let k = conv.k;
    let r = conv.rank;

    let (_, pivots) = rref(&rat_matrix(&etas), n);

    let (change, change_inv, conormals) = if k == 0 {
        (super::lattice::identity(n), super::lattice::identity(n), etas.clone())
    } else {
        let snf = smith_normal_form(&int_matrix(&etas), n);
        if !snf.is_unit() {
            let factors: Vec<String> = snf
                .invariant_factors
                .iter()
                .filter(|d| **d != BigInt::from(0))
                .map(|d| d.to_string())
                .collect();
            return Err(PolyError::NotUnimodular(format!(
                "integer span of the conormals is not saturated (invariant factors {})",
                factors.join(",")
            )));
        }
        let ech = column_echelon(&int_matrix(&etas), n);
        debug_assert_eq!(ech.rank, r);
        // E V = H, so M = V^T and M^{-1} = (V^{-1})^T
        let m = super::lattice::transpose(&ech.right, n);
        let m_inv = super::lattice::transpose(&ech.right_inv, n);
        let mut conormals = Vec::with_capacity(etas.len());
        for row in &ech.h {
            debug_assert!(row[r..].iter().all(|v| *v == BigInt::from(0)));
            let head: Option<Vec<i64>> = row[..r].iter().map(|v| v.to_i64()).collect();
            conormals.push(head.ok_or_else(|| {
                PolyError::NotUnimodular("transformed conormal overflows i64".into())
            })?);
        }
        (m, m_inv, conormals)
    };

    let facets = conormals
        .into_iter()
        .zip(p.facets())
        .map(|(eta, f)| Facet::new(eta, f.kappa.clone()))
        .collect();
    let projected = PolyhedralSet::upper(r, p.kind(), facets)?.with_limits(*p.limits());

    if convexity_class(&projected).class != ConvexityClass::StronglyConvex {
        return Err(PolyError::NotUnimodular(
            "projected set is not strongly convex".into(),
        ));
    }
    let verdict = unimodularity_report(&projected)?;
    if !verdict.is_unimodular {
        return Err(PolyError::NotUnimodular(
            "projected set fails the unimodularity checks".into(),
        ));
    }

    Ok(SplittingReport {
        k,
        coordinate_indices: pivots,
        unimodular_change: change,
        unimodular_change_inv: change_inv,
        projected_set: projected,
    })
}

/// Homotopy groups of `M_Delta` in terms of those of the strongly convex core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    pub k: usize,
    pub pi0: String,
    pub pi1: String,
    pub higher: String,
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .bytes()
        .map(|b| DIGITS[(b - b'0') as usize])
        .collect()
}

pub fn homotopy_report(split: &SplittingReport) -> HomotopyReport {
    let pi1 = if split.k == 0 {
        "π₁ = π₁(M_{Δ′})".to_string()
    } else {
        format!("π₁ = ℤ{} × π₁(M_{{Δ′}})", superscript(split.k))
    };
    HomotopyReport {
        k: split.k,
        pi0: "π₀ = 0".to_string(),
        pi1,
        higher: "π_m = π_m(M_{Δ′}) for m ≥ 2".to_string(),
    }
}
