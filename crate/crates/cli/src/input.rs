use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use toric_core::kahler::NewtonOptions;
use toric_core::polylattice::{
    normalize, Facet, Limits, NormalizeOptions, Orientation, PolyError, PolyhedralSet,
    RawPolyhedralSet, SetKind,
};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KindField {
    General,
    Cone,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OrientationField {
    Upper,
    Lower,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FacetField {
    pub eta: Vec<i64>,
    pub kappa: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_accept: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsField {
    #[serde(default)]
    pub auto_primitivize: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema_version: String,
    pub n: usize,
    pub kind: KindField,
    pub orientation: OrientationField,
    pub facets: Vec<FacetField>,
    #[serde(default)]
    pub options: OptionsField,
}

/// A parsed and normalized input file.
pub struct Loaded {
    pub document: InputDocument,
    pub set: PolyhedralSet,
    pub newton: NewtonOptions,
}

pub fn limits_from_env() -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var("TORIC_MAX_DIM") {
        limits.max_dim = v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("TORIC_MAX_DIM must be a positive integer, got {v:?}")))?;
    }
    Ok(limits)
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Loaded, CliError> {
    let document: InputDocument =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid input: {e}")))?;
    if document.schema_version != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
            document.schema_version
        )));
    }
    let limits = limits_from_env()?;
    if document.n > limits.max_dim {
        return Err(CliError::Scale(format!(
            "dimension {} exceeds the limit {} (raise with TORIC_MAX_DIM)",
            document.n, limits.max_dim
        )));
    }
    if document.facets.len() > limits.max_constraints {
        return Err(CliError::Scale(format!(
            "{} facets exceed the limit {}",
            document.facets.len(),
            limits.max_constraints
        )));
    }
    let mut facets = Vec::with_capacity(document.facets.len());
    for (i, f) in document.facets.iter().enumerate() {
        let kappa = BigRational::from_str(f.kappa.trim()).map_err(|e| {
            CliError::Parse(format!("facet {}: kappa {:?} is not a rational: {e}", i + 1, f.kappa))
        })?;
        facets.push(Facet::new(f.eta.clone(), kappa));
    }
    let raw = RawPolyhedralSet {
        dim: document.n,
        kind: match document.kind {
            KindField::General => SetKind::General,
            KindField::Cone => SetKind::Cone,
        },
        orientation: match document.orientation {
            OrientationField::Upper => Orientation::Upper,
            OrientationField::Lower => Orientation::Lower,
        },
        facets,
    };
    let set = normalize(
        &raw,
        NormalizeOptions {
            auto_primitivize: document.options.auto_primitivize,
        },
    )
    .map_err(poly_error)?
    .with_limits(limits);

    let defaults = NewtonOptions::default();
    let t = &document.options.tolerances;
    let newton = NewtonOptions {
        target: t.newton_target.unwrap_or(defaults.target),
        accept: t.newton_accept.unwrap_or(defaults.accept),
        max_iterations: t.max_iterations.unwrap_or(defaults.max_iterations),
        ..defaults
    };
    Ok(Loaded {
        document,
        set,
        newton,
    })
}

pub fn poly_error(e: PolyError) -> CliError {
    match e {
        PolyError::ScaleLimitExceeded { .. } => CliError::Scale(e.to_string()),
        other => CliError::Parse(other.to_string()),
    }
}

/// A JSON array of points, each an array of `n` numbers.
pub fn load_points(path: &Path, n: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let points: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("invalid points file: {e}")))?;
    check_lengths(&points, n)?;
    Ok(points)
}

pub fn check_lengths(points: &[Vec<f64>], n: usize) -> Result<(), CliError> {
    if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != n) {
        return Err(CliError::Parse(format!(
            "point {} has {} coordinates, expected {n}",
            i + 1,
            p.len()
        )));
    }
    Ok(())
}

/// `min:max:steps` per axis; `steps` subdivisions give `steps + 1` samples.
pub fn grid_points(ranges: &[String], n: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if ranges.len() != n {
        return Err(CliError::Parse(format!(
            "need one --grid per axis: got {}, expected {n}",
            ranges.len()
        )));
    }
    let mut axes = Vec::with_capacity(n);
    for range in ranges {
        let parts: Vec<&str> = range.split(':').collect();
        let bad = || CliError::Parse(format!("grid range {range:?} is not min:max:steps"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        let axis: Vec<f64> = if steps == 0 {
            vec![lo]
        } else {
            (0..=steps)
                .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
                .collect()
        };
        axes.push(axis);
    }
    let mut points = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    Ok(points)
}

pub fn parse_target(text: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|_| CliError::Parse(format!("target {text:?} is not a comma-separated list of numbers")))?;
    if values.len() != n || values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Parse(format!(
            "target needs {n} finite coordinates, got {text:?}"
        )));
    }
    Ok(values)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientField {
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub z: Vec<[f64; 2]>,
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load_ambient(arg: &str) -> Result<AmbientField, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid ambient point: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: &str = r#"{"schema_version":"1","n":2,"kind":"general","orientation":"upper",
        "facets":[{"eta":[-1,0],"kappa":"0"},{"eta":[0,-1],"kappa":"0"},{"eta":[1,1],"kappa":"1"}]}"#;

    #[test]
    fn parses_triangle() {
        let l = parse(F2).unwrap();
        assert_eq!(l.set.len(), 3);
        assert_eq!(l.set.facets()[2].kappa, BigRational::from_integer(1.into()));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("{"), Err(CliError::Parse(_))));
        let bad_kappa = F2.replace("\"1\"}", "\"1/0\"}");
        assert!(matches!(parse(&bad_kappa), Err(CliError::Parse(_))));
        let bad_version = F2.replace("\"1\",\"n\"", "\"2\",\"n\"");
        assert!(matches!(parse(&bad_version), Err(CliError::Parse(_))));
    }

    #[test]
    fn grid_expands_row_major() {
        let g = grid_points(&["0:1:2".into(), "5:6:1".into()], 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![0.0, 5.0]);
        assert_eq!(g[1], vec![0.0, 6.0]);
        assert_eq!(g[5], vec![1.0, 6.0]);
        assert!(grid_points(&["0:1".into()], 1).is_err());
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("-0.5, 2", 2).unwrap(), vec![-0.5, 2.0]);
        assert!(parse_target("1", 2).is_err());
        assert!(parse_target("a", 1).is_err());
    }
}
