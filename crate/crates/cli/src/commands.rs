use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use toric_core::contact::{self, ContactError, ReebCertificate};
use toric_core::cutmodel::{self, AmbientPoint, CutError};
use toric_core::kahler::{
    self, compatibility_residuals, guillemin_potential, legendre_map, one_cut_inverse, point_data,
    sp_potential, KahlerError,
};
use toric_core::polylattice::{
    convexity_class, homotopy_report, is_good_cone, split_weakly_convex, unimodularity_report,
    PolyError, UnimodularityReport,
};

use crate::input::{self, Loaded};
use crate::report::{self, face, float, integer_matrix, matrix, rationals, vector};
use crate::CliError;

/// What a command prints and how the process should exit.
pub struct Outcome {
    pub stdout: String,
    pub exit: u8,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            exit: 0,
            diagnostics: Vec::new(),
        }
    }
}

fn kahler_error(e: KahlerError) -> CliError {
    match e {
        KahlerError::Poly(p) => input::poly_error(p),
        KahlerError::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn unimodularity_json(r: &UnimodularityReport) -> Value {
    json!({
        "minimal": r.minimal,
        "minimal_witness": r.minimal_witness.map(|i| i + 1),
        "primitive": r.primitive,
        "primitive_witness": r.primitive_witness.map(|i| i + 1),
        "simple_vertices": r.simple_vertices,
        "vertex_witness": r.vertex_witness.as_ref().map(|w| json!({
            "point": rationals(&w.point),
            "active": face(&w.active),
        })),
        "saturated_faces": r.saturated_faces,
        "saturation_witness": r.saturation_witness.as_ref().map(face),
        "is_unimodular": r.is_unimodular,
        "active_faces": r.active_faces.iter().map(face).collect::<Vec<_>>(),
    })
}

fn failure_notes(r: &UnimodularityReport) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(j) = r.minimal_witness {
        notes.push(format!("facet {} is redundant", j + 1));
    }
    if let Some(j) = r.primitive_witness {
        notes.push(format!("conormal {} is not primitive", j + 1));
    }
    if let Some(w) = &r.vertex_witness {
        notes.push(format!("vertex with active facets {} is not simple", w.active));
    }
    if let Some(f) = &r.saturation_witness {
        notes.push(format!("conormals of face {f} do not span a saturated lattice"));
    }
    notes
}

pub fn validate(l: &Loaded) -> Result<Outcome, CliError> {
    let r = unimodularity_report(&l.set).map_err(input::poly_error)?;
    let mut payload = json!({ "unimodularity": unimodularity_json(&r) });
    if l.set.is_cone() {
        let (good, _) = is_good_cone(&l.set).map_err(input::poly_error)?;
        payload["good_cone"] = Value::from(good);
    }
    let stdout = report::document("validate", &l.document, &l.newton, payload);
    if r.is_unimodular {
        return Ok(Outcome::ok(stdout));
    }
    let mut diagnostics = vec!["validation failed".to_string()];
    diagnostics.extend(failure_notes(&r));
    Ok(Outcome {
        stdout,
        exit: 3,
        diagnostics,
    })
}

fn certificate_json(c: &ReebCertificate) -> Value {
    match c {
        ReebCertificate::Positive(x) => json!({"kind": "positive_functional", "vector": rationals(x)}),
        ReebCertificate::Annihilated(x) => json!({"kind": "annihilated_point", "vector": rationals(x)}),
    }
}

pub fn classify(l: &Loaded) -> Result<Outcome, CliError> {
    let conv = convexity_class(&l.set);
    let convexity = json!({"rank": conv.rank, "k": conv.k, "class": conv.class.as_str()});
    let mut payload = json!({ "convexity": convexity.clone() });
    let mut diagnostics = Vec::new();

    match split_weakly_convex(&l.set) {
        Ok(s) => {
            let h = homotopy_report(&s);
            payload["splitting"] = json!({
                "k": s.k,
                "coordinate_indices": s.coordinate_indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "unimodular_change": integer_matrix(&s.unimodular_change),
                "projected_set": report::set(&s.projected_set),
            });
            payload["homotopy"] = json!({"k": h.k, "pi0": h.pi0, "pi1": h.pi1, "higher": h.higher});
        }
        Err(e @ PolyError::ScaleLimitExceeded { .. }) => return Err(input::poly_error(e)),
        Err(e) => {
            diagnostics.push(format!("splitting failed: {e}"));
            payload["splitting"] = json!({ "error": e.to_string() });
        }
    }

    if l.set.is_cone() {
        match contact::classify(&l.set) {
            Ok(c) => {
                payload["contact"] = json!({
                    "good": c.good,
                    "convexity": convexity,
                    "reeb_vector": c.reeb_vector,
                    "type_label": c.type_label.as_str(),
                    "k_contact": c.k_contact,
                    "reeb_type": c.reeb_type.reeb_type,
                    "certificate": certificate_json(&c.reeb_type.certificate),
                });
            }
            Err(ContactError::NotGood(w)) => {
                diagnostics.push(format!("cone is not good: witness {w}"));
                payload["contact"] = json!({"good": false, "witness": face(&w)});
            }
            Err(ContactError::Poly(e)) => return Err(input::poly_error(e)),
            Err(e) => return Err(CliError::Internal(e.to_string())),
        }
    }

    let stdout = report::document("classify", &l.document, &l.newton, payload);
    let exit = if diagnostics.is_empty() { 0 } else { 3 };
    Ok(Outcome {
        stdout,
        exit,
        diagnostics,
    })
}

pub fn potential(l: &Loaded, points: &[Vec<f64>]) -> Result<Outcome, CliError> {
    let n = l.set.dim();
    let rows: Vec<Result<String, String>> = points
        .par_iter()
        .map(|x| match kahler::interior_point(&l.set, x) {
            Ok(pt) => {
                let mut cells: Vec<String> = x.iter().map(|v| float(*v)).collect();
                cells.push(float(sp_potential(&pt)));
                cells.push(float(guillemin_potential(&pt)));
                cells.extend(legendre_map(&pt).iter().map(|v| float(*v)));
                Ok(cells.join(","))
            }
            Err(e) => Err(e.to_string()),
        })
        .collect();

    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("sp".into());
    header.push("guillemin".into());
    header.extend((1..=n).map(|i| format!("gtilde{i}")));
    let mut out = header.join(",");
    out.push('\n');
    let mut skipped = 0usize;
    for (i, (row, x)) in rows.iter().zip(points).enumerate() {
        match row {
            Ok(line) => out.push_str(line),
            Err(reason) => {
                skipped += 1;
                let coords: Vec<String> = x.iter().map(|v| float(*v)).collect();
                out.push_str(&format!("# skipped row {}: x=({}) {reason}", i + 1, coords.join(",")));
            }
        }
        out.push('\n');
    }
    out.push_str(&format!("# skipped: {skipped}\n"));
    Ok(Outcome::ok(out))
}

pub fn metric(l: &Loaded, points: &[Vec<f64>]) -> Result<Outcome, CliError> {
    let single = (l.set.len() == 1).then(|| l.set.facets()[0].eta.clone());
    let entries: Vec<Result<Value, CliError>> = points
        .par_iter()
        .map(|x| {
            let pt = match kahler::interior_point(&l.set, x) {
                Ok(pt) => pt,
                Err(e @ KahlerError::NotInterior { .. }) => {
                    return Ok(json!({"x": x, "error": e.to_string()}));
                }
                Err(e) => return Err(kahler_error(e)),
            };
            let d = point_data(&pt).map_err(kahler_error)?;
            let n = pt.dim();
            let c = compatibility_residuals(&d.tensors);
            let inverse_residual = (&d.g_matrix * &d.g_inverse - DMatrix::identity(n, n)).amax();
            let mut entry = json!({
                "x": x,
                "G": matrix(&d.g_matrix),
                "G_inv": matrix(&d.g_inverse),
                "omega": matrix(&d.tensors.omega),
                "J": matrix(&d.tensors.j),
                "g": matrix(&d.tensors.g),
                "residuals": {
                    "G_G_inv": inverse_residual,
                    "J_squared": c.j_squared,
                    "g_omega_J": c.metric,
                    "omega_invariance": c.omega_invariance,
                },
            });
            if let Some(eta) = &single {
                let closed = one_cut_inverse(eta, pt.l_values[0]);
                entry["one_cut"] = json!({
                    "G_inv": matrix(&closed),
                    "difference": (&closed - &d.g_inverse).amax(),
                });
            }
            Ok(entry)
        })
        .collect();
    let entries: Vec<Value> = entries.into_iter().collect::<Result<_, _>>()?;
    let payload = json!({ "points": entries });
    Ok(Outcome::ok(report::document("metric", &l.document, &l.newton, payload)))
}

pub fn invert(l: &Loaded, target: &[f64]) -> Result<Outcome, CliError> {
    let r = kahler::invert_legendre(&l.set, target, &l.newton).map_err(kahler_error)?;
    let payload = json!({
        "target": target,
        "x": vector(&r.point.x),
        "gtilde": vector(&legendre_map(&r.point)),
        "residual": r.residual,
        "iterations": r.iterations,
    });
    Ok(Outcome::ok(report::document("invert", &l.document, &l.newton, payload)))
}

fn cut_error(e: CutError) -> Result<(Value, String), CliError> {
    match e {
        CutError::Poly(p) => Err(input::poly_error(p)),
        CutError::DimensionMismatch { .. } => Err(CliError::Parse(e.to_string())),
        other => Ok((json!({ "error": other.to_string() }), other.to_string())),
    }
}

pub fn cut(l: &Loaded, ambient: Option<&input::AmbientField>) -> Result<Outcome, CliError> {
    let k = cutmodel::delzant_kernel(&l.set);
    let table = cutmodel::freeness_table(&l.set).map_err(|e| match e {
        CutError::Poly(p) => input::poly_error(p),
        other => CliError::Internal(other.to_string()),
    })?;
    let mut payload = json!({
        "kernel": {
            "pi_matrix": integer_matrix(&k.pi_matrix),
            "kernel_basis": integer_matrix(&k.kernel_basis),
            "surjective_onto_lattice": k.surjective_onto_lattice,
        },
        "freeness": table.iter().map(|e| json!({
            "face": face(&e.face),
            "added": e.added + 1,
            "free": e.free,
        })).collect::<Vec<_>>(),
    });
    let mut diagnostics = Vec::new();
    if let Some(a) = ambient {
        let point = AmbientPoint {
            x: a.x.clone(),
            theta: a.theta.clone(),
            z: a.z.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
        };
        let on_level = cutmodel::moment_level_membership(&l.set, &point);
        let mut section = json!({ "on_level": on_level });
        match cutmodel::canonical_representative(&l.set, &point) {
            Ok(cp) => {
                section["representative"] = json!({
                    "x": cp.x,
                    "active": face(&cp.active),
                    "theta": cp.theta,
                    "moment": cutmodel::moment_map(&cp),
                });
                match cutmodel::stabilizer(&l.set, &cp.x) {
                    Ok(s) => {
                        section["stabilizer"] = json!({"basis": s.basis, "saturated": s.saturated});
                    }
                    Err(e) => {
                        let (v, msg) = cut_error(e)?;
                        section["stabilizer"] = v;
                        diagnostics.push(msg);
                    }
                }
            }
            Err(e) => {
                let (v, msg) = cut_error(e)?;
                section["representative"] = v;
                diagnostics.push(msg);
            }
        }
        payload["ambient"] = section;
    }
    let stdout = report::document("cut", &l.document, &l.newton, payload);
    let exit = if diagnostics.is_empty() { 0 } else { 3 };
    Ok(Outcome {
        stdout,
        exit,
        diagnostics,
    })
}
