//! Scene files: a surface patch, a curve on it, and analysis options.

use serde::{Deserialize, Serialize};

use darboux_core::curve::CurveOnSurface;
use darboux_core::expr::{parse, Expr};
use darboux_core::jet::DEFAULT_ORDER;
use darboux_core::singular::DEFAULT_GRID;
use darboux_core::surface::SurfacePatch;

use crate::CliError;

/// Environment variable overriding the default jet order.
pub const ORDER_ENV: &str = "DARBOUX_JET_ORDER";
/// Grid used for the load-time spacelike check.
pub const VALIDATION_GRID: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub x0: String,
    pub x1: String,
    pub x2: String,
    #[serde(default = "default_vars")]
    pub vars: [String; 2],
    pub domain: [[f64; 2]; 2],
}

fn default_vars() -> [String; 2] {
    ["u1".to_string(), "u2".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub u1: String,
    pub u2: String,
    pub interval: [f64; 2],
    /// Parameter value where arc length is zero; defaults to the start of
    /// the interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub orthonormality: f64,
    pub frenet: f64,
    pub sphere: f64,
    pub duality: f64,
    pub derivative_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthonormality: 1e-9,
            frenet: 1e-8,
            sphere: 1e-9,
            duality: 1e-8,
            derivative_identity: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<usize>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub surface: SurfaceSpec,
    pub curve: CurveSpec,
    #[serde(default)]
    pub options: Options,
}

/// How to treat a surface that fails the load-time spacelike check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    #[default]
    Fail,
    Warn,
}

/// A loaded, validated scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub file: SceneFile,
    pub curve: CurveOnSurface,
    pub warnings: Vec<String>,
}

fn expr(field: &str, src: &str) -> Result<Expr, CliError> {
    parse(src).map_err(|error| CliError::Parse {
        field: field.to_string(),
        error,
    })
}

impl SceneFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Scene(e.to_string()))
    }

    pub fn build(self, validation: Validation) -> Result<Scene, CliError> {
        let s = &self.surface;
        let coords = [expr("surface.x0", &s.x0)?, expr("surface.x1", &s.x1)?, expr("surface.x2", &s.x2)?];
        let vars = [s.vars[0].as_str(), s.vars[1].as_str()];
        let patch = SurfacePatch::new(coords, vars, s.domain).map_err(|e| CliError::Scene(e.to_string()))?;

        let mut warnings = Vec::new();
        let report = patch.validate_spacelike(VALIDATION_GRID);
        if !report.passed {
            let msg = format!(
                "NotSpacelikeHere: surface is not spacelike at {} of {} samples (worst margin {:e} at ({}, {}))",
                report.failures,
                report.samples.len(),
                report.worst_margin,
                report.worst_at[0],
                report.worst_at[1]
            );
            match validation {
                Validation::Fail => return Err(CliError::NotSpacelike(msg)),
                Validation::Warn => warnings.push(msg),
            }
        }

        let c = &self.curve;
        let u1 = expr("curve.u1", &c.u1)?;
        let u2 = expr("curve.u2", &c.u2)?;
        let mut curve =
            CurveOnSurface::new(patch, u1, u2, "t", c.interval).map_err(|e| CliError::Scene(e.to_string()))?;
        if let Some(a) = c.anchor {
            curve = curve.with_anchor(a).map_err(|e| CliError::Scene(e.to_string()))?;
        }
        Ok(Scene {
            file: self,
            curve,
            warnings,
        })
    }
}

impl Scene {
    /// Jet order: command-line flag, then scene option, then the
    /// environment, then the built-in default.
    pub fn jet_order(&self, flag: Option<usize>) -> Result<usize, CliError> {
        if let Some(k) = flag.or(self.file.options.jet_order) {
            return Ok(k);
        }
        match std::env::var(ORDER_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Scene(format!("{} must be a non-negative integer, got '{}'", ORDER_ENV, v))),
            Err(_) => Ok(DEFAULT_ORDER),
        }
    }

    pub fn samples(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.options.samples).unwrap_or(64).max(1)
    }

    pub fn grid(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.options.grid).unwrap_or(DEFAULT_GRID).max(2)
    }

    pub fn tolerances(&self) -> Tolerances {
        self.file.options.tolerances
    }

    /// `n` arc-length values spread evenly over the curve, endpoints included.
    pub fn sample_s(&self, n: usize) -> Vec<f64> {
        let [a, b] = self.curve.s_range();
        if n == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }
}
