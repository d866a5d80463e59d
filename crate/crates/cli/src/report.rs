//! JSON and CSV rendering. Object keys come out sorted and floats use the
//! shortest representation that round-trips, so reports are byte-stable.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use toric_core::cutmodel::{ACTIVE_TOLERANCE, LEVEL_TOLERANCE};
use toric_core::kahler::{FiniteDifference, NewtonOptions, INTERIOR_MARGIN};
use toric_core::polylattice::{FaceIndexSet, PolyhedralSet};

use crate::input::InputDocument;

pub fn matrix(m: &DMatrix<f64>) -> Value {
    Value::from(
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>())
            .collect::<Vec<_>>(),
    )
}

pub fn vector(v: &DVector<f64>) -> Value {
    Value::from(v.iter().copied().collect::<Vec<f64>>())
}

pub fn rationals(v: &[BigRational]) -> Value {
    Value::from(v.iter().map(|q| q.to_string()).collect::<Vec<_>>())
}

/// Integers that fit in `i64` as numbers, larger ones as strings.
pub fn integer(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn integer_matrix(m: &[Vec<BigInt>]) -> Value {
    Value::from(
        m.iter()
            .map(|row| Value::from(row.iter().map(integer).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    )
}

pub fn face(f: &FaceIndexSet) -> Value {
    Value::from(f.one_based())
}

pub fn set(p: &PolyhedralSet) -> Value {
    json!({
        "n": p.dim(),
        "kind": if p.is_cone() { "cone" } else { "general" },
        "orientation": "upper",
        "facets": p.facets().iter().map(|f| json!({
            "eta": f.eta,
            "kappa": f.kappa.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn provenance(newton: &NewtonOptions) -> Value {
    let fd = FiniteDifference::default();
    json!({
        "tool": "toric",
        "version": env!("CARGO_PKG_VERSION"),
        "tolerances": {
            "interior_margin": INTERIOR_MARGIN,
            "active_tolerance": ACTIVE_TOLERANCE,
            "level_tolerance": LEVEL_TOLERANCE,
            "newton_target": newton.target,
            "newton_accept": newton.accept,
            "newton_max_iterations": newton.max_iterations,
            "boundary_fraction": newton.boundary_fraction,
            "acm_tolerance": toric_core::contact::ACM_TOLERANCE,
            "finite_difference_step": fd.gradient_step,
        },
    })
}

/// The full report: the input echo, the command payload, and provenance.
pub fn document(command: &str, input: &InputDocument, newton: &NewtonOptions, payload: Value) -> String {
    let doc = json!({
        "command": command,
        "input": serde_json::to_value(input).expect("input serializes"),
        "result": payload,
        "provenance": provenance(newton),
    });
    let mut out = serde_json::to_string(&doc).expect("report serializes");
    out.push('\n');
    out
}

/// Shortest round-trip decimal, as in the JSON output.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).expect("finite float serializes")
    } else {
        v.to_string()
    }
}
