//! Built-in example scenes with their known invariants.

use std::f64::consts::PI;

use serde::Serialize;

use crate::scene::{CurveSpec, Options, SceneFile, SurfaceSpec};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Parameter {
    pub name: &'static str,
    pub default: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub description: &'static str,
    pub parameters: Vec<Parameter>,
    /// Closed forms and point values the scene should reproduce.
    pub expected: Vec<&'static str>,
}

const CUBIC_NAMES: [&str; 7] = ["a20", "a11", "a02", "a30", "a21", "a12", "a03"];
const CUBIC_MONOMIALS: [&str; 7] = ["u1^2", "u1*u2", "u2^2", "u1^3", "u1^2*u2", "u1*u2^2", "u2^3"];
const CUBIC_DEFAULTS: [f64; 7] = [0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0];

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "plane",
            title: "flat spacelike plane",
            description: "unit circle in the plane x0 = 0, traversed so that κ_g = +1",
            parameters: vec![],
            expected: vec![
                "κ_n ≡ 0 and τ_g ≡ 0",
                "κ_g = 1 (Euclidean curvature of the unit circle)",
                "δ for Tr ≡ 0",
                "Tr image is the constant −e0",
                "Sr undefined; So and Lo undefined (κ_n = τ_g = 0)",
            ],
        },
        CatalogEntry {
            id: "hyperbolic",
            title: "hyperbolic plane (Lorentzian Sabban frame)",
            description: "curve u1 = 1 + 0.25 sin t, u2 = −t on H²(−1) in polar coordinates, turning so that κ_g > 0",
            parameters: vec![],
            expected: vec![
                "κ_n ≡ 1 and τ_g ≡ 0",
                "δ for Tr ≡ 1, so the Tr image has no singular points",
                "Tr image equals −γ",
                "δ for So equals κ_g",
                "Sr undefined everywhere",
            ],
        },
        CatalogEntry {
            id: "cylinder",
            title: "hyperbolic cylinder",
            description: "x0 = √(x² + 1) over the (x, y) plane; curve with f′(s)²(s² + 1) = s², f(s) = √(s² + 1) − 1, s ∈ [0.1, 1]",
            parameters: vec![],
            expected: vec![
                "arc length equals the parameter",
                "So image is the constant (0, 0, 1), parallel to the director curve",
                "δ for So ≡ 0",
            ],
        },
        CatalogEntry {
            id: "cubic-graph",
            title: "graph of a cubic",
            description: "x0 = a20 u1² + a11 u1 u2 + a02 u2² + a30 u1³ + a21 u1² u2 + a12 u1 u2² + a03 u2³, curve (t, 0) through the origin",
            parameters: CUBIC_NAMES
                .iter()
                .zip(CUBIC_DEFAULTS)
                .map(|(&name, default)| Parameter { name, default })
                .collect(),
            expected: vec![
                "at s = 0: κ_n = 2 a20, κ_g = 0, τ_g = −a11 (future-pointing normal)",
                "Sr image has an ordinary cusp at s = 0 when a20 = 0 and a30 ≠ 0",
                "δ′(0) = 18 a30 for Sr when a20 = 0",
                "δ(0) = 4 a20 for Sr when a11 = 1",
            ],
        },
    ]
}

pub fn entry(id: &str) -> Result<CatalogEntry, CliError> {
    entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| {
            let ids: Vec<&str> = entries().iter().map(|e| e.id).collect();
            CliError::Catalog(format!("unknown catalog id '{}' (known: {})", id, ids.join(", ")))
        })
}

fn surface(x: [&str; 3], vars: [&str; 2], domain: [[f64; 2]; 2]) -> SurfaceSpec {
    SurfaceSpec {
        x0: x[0].to_string(),
        x1: x[1].to_string(),
        x2: x[2].to_string(),
        vars: vars.map(str::to_string),
        domain,
    }
}

fn curve(u1: &str, u2: &str, interval: [f64; 2], anchor: Option<f64>) -> CurveSpec {
    CurveSpec {
        u1: u1.to_string(),
        u2: u2.to_string(),
        interval,
        anchor,
    }
}

/// Build the scene for a catalog id, with parameter overrides.
pub fn scene(id: &str, params: &[(String, f64)]) -> Result<SceneFile, CliError> {
    let e = entry(id)?;
    for (k, _) in params {
        if !e.parameters.iter().any(|p| p.name == k) {
            return Err(CliError::Catalog(format!("catalog scene '{}' has no parameter '{}'", id, k)));
        }
    }
    let value = |name: &str, default: f64| {
        params
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map_or(default, |(_, v)| *v)
    };
    let (surface, curve) = match id {
        "plane" => (
            surface(["0", "u1", "u2"], ["u1", "u2"], [[-2.0, 2.0], [-2.0, 2.0]]),
            curve("cos(t)", "-sin(t)", [0.0, 2.0 * PI], None),
        ),
        "hyperbolic" => (
            surface(
                ["cosh(u1)", "sinh(u1)*cos(u2)", "sinh(u1)*sin(u2)"],
                ["u1", "u2"],
                [[0.1, 2.0], [-6.5, 0.1]],
            ),
            curve("1 + 0.25*sin(t)", "-t", [0.0, 2.0 * PI], None),
        ),
        "cylinder" => (
            surface(["sqrt(x^2 + 1)", "x", "y"], ["x", "y"], [[0.0, 1.5], [-1.0, 1.0]]),
            curve("t", "sqrt(t^2 + 1) - 1", [0.1, 1.0], Some(0.0)),
        ),
        "cubic-graph" => {
            let terms: Vec<String> = CUBIC_NAMES
                .iter()
                .zip(CUBIC_MONOMIALS)
                .zip(CUBIC_DEFAULTS)
                .map(|((name, mono), default)| (value(name, default), mono))
                .filter(|(a, _)| *a != 0.0)
                .map(|(a, mono)| format!("({:?})*{}", a, mono))
                .collect();
            let x0 = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            (
                surface([x0.as_str(), "u1", "u2"], ["u1", "u2"], [[-0.3, 0.3], [-0.2, 0.2]]),
                curve("t", "0", [-0.25, 0.25], Some(0.0)),
            )
        }
        _ => unreachable!("entry() accepted an id without a scene"),
    };
    Ok(SceneFile {
        name: Some(id.to_string()),
        surface,
        curve,
        options: Options::default(),
    })
}

/// Human-readable listing.
pub fn listing() -> String {
    let mut out = String::new();
    for e in entries() {
        out.push_str(&format!("{} {}\n", e.id, e.title));
        out.push_str(&format!("  {}\n", e.description));
        if !e.parameters.is_empty() {
            let ps: Vec<String> = e.parameters.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
            out.push_str(&format!("  parameters: {}\n", ps.join(" ")));
        }
        for x in &e.expected {
            out.push_str(&format!("  - {}\n", x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Validation;

    #[test]
    fn every_entry_builds() {
        for e in entries() {
            let s = scene(e.id, &[]).unwrap().build(Validation::Fail).unwrap();
            assert!(s.warnings.is_empty(), "{}", e.id);
        }
    }

    #[test]
    fn cubic_parameters_override_defaults() {
        let s = scene("cubic-graph", &[("a20".into(), 0.5)]).unwrap();
        assert_eq!(s.surface.x0, "(0.5)*u1^2 + (1.0)*u1*u2 + (1.0)*u1^3");
        assert!(scene("cubic-graph", &[("b".into(), 1.0)]).is_err());
        assert!(scene("plane", &[("a20".into(), 1.0)]).is_err());
    }

    #[test]
    fn listing_names_the_scenes() {
        let l = listing();
        assert!(l.contains("hyperbolic hyperbolic plane (Lorentzian Sabban frame)"));
        assert!(l.contains("cubic-graph"));
        assert!(l.contains("cylinder"));
        assert!(entry("torus").is_err());
    }
}
