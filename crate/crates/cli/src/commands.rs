//! The subcommands, as functions from a loaded scene to output text.

use serde::Serialize;

use darboux_core::curve::FrameSample;
use darboux_core::darboux::{delta, derivative_identity_residual, domain_predicate, image, ImageKind};
use darboux_core::singular::{find_singularities, verify_duality, SingularError, SingularityReport};

use crate::output::{cell, fmt_f64, svg, to_csv, to_json};
use crate::scene::{Scene, SceneFile, Validation};
use crate::{catalog, CliError};

/// Text produced by a command, and whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub ok: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, ok: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format '{}' (csv, json, svg, text)", s)),
        }
    }
}

/// Load a scene from a file path or `catalog:<id>`.
pub fn load(arg: &str, params: &[(String, f64)], validation: Validation) -> Result<Scene, CliError> {
    let file = match arg.strip_prefix("catalog:") {
        Some(id) => catalog::scene(id, params)?,
        None => {
            if !params.is_empty() {
                return Err(CliError::Usage("--param only applies to catalog scenes".into()));
            }
            let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io {
                path: arg.to_string(),
                message: e.to_string(),
            })?;
            SceneFile::from_json(&text)?
        }
    };
    file.build(validation)
}

/// Parse a `name=value` parameter override.
pub fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{}'", s))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("'{}' is not a number", v))?;
    Ok((k.trim().to_string(), v))
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn frame(scene: &Scene, s: f64, order: usize) -> Result<FrameSample, CliError> {
    scene.curve.frame_at_s(s, order).map_err(compute)
}

#[derive(Debug, Serialize)]
struct PerKind<T> {
    #[serde(rename = "Tr")]
    tr: T,
    #[serde(rename = "Sr")]
    sr: T,
    #[serde(rename = "Lr")]
    lr: T,
    #[serde(rename = "So")]
    so: T,
    #[serde(rename = "Lo")]
    lo: T,
}

impl<T> PerKind<T> {
    fn build(mut f: impl FnMut(ImageKind) -> T) -> Self {
        PerKind {
            tr: f(ImageKind::RectTimelike),
            sr: f(ImageKind::RectSpacelike),
            lr: f(ImageKind::RectLightlike),
            so: f(ImageKind::OscSpacelike),
            lo: f(ImageKind::OscLightlike),
        }
    }

    fn values(&self) -> [&T; 5] {
        [&self.tr, &self.sr, &self.lr, &self.so, &self.lo]
    }
}

#[derive(Debug, Serialize)]
struct DomainFlag {
    satisfied: bool,
    margin: f64,
    /// The guard that fails, when it does.
    #[serde(skip_serializing_if = "Option::is_none")]
    violated: Option<&'static str>,
}

#[derive(Debug, Serialize)]
struct AnalyzeRow {
    s: f64,
    t_param: f64,
    kappa_n: f64,
    kappa_g: f64,
    tau_g: f64,
    delta: PerKind<Option<f64>>,
    domain: PerKind<DomainFlag>,
    frenet_residual: f64,
}

#[derive(Debug, Serialize)]
struct AnalyzeTable<'a> {
    scene: Option<&'a str>,
    jet_order: usize,
    rows: Vec<AnalyzeRow>,
}

pub fn analyze(scene: &Scene, samples: Option<usize>, order: Option<usize>, format: Format) -> Result<Report, CliError> {
    let k = scene.jet_order(order)?;
    if k < 3 {
        return Err(CliError::Usage(format!("analyze needs jet order at least 3, got {}", k)));
    }
    let mut rows = Vec::new();
    for s in scene.sample_s(scene.samples(samples)) {
        let f = frame(scene, s, k)?;
        rows.push(AnalyzeRow {
            s: f.s,
            t_param: f.t_param,
            kappa_n: f.kappa_n.value(),
            kappa_g: f.kappa_g.value(),
            tau_g: f.tau_g.value(),
            delta: PerKind::build(|kind| delta(kind, &f).ok().map(|d| d.value())),
            domain: PerKind::build(|kind| {
                let v = domain_predicate(kind, &f);
                DomainFlag {
                    satisfied: v.satisfied,
                    margin: v.margin,
                    violated: (!v.satisfied).then(|| kind.guard()),
                }
            }),
            frenet_residual: f.frenet_residual(),
        });
    }
    let text = match format {
        Format::Json => to_json(&AnalyzeTable {
            scene: scene.file.name.as_deref(),
            jet_order: k,
            rows,
        }),
        Format::Csv => {
            let mut header = vec!["s", "t_param", "kappa_n", "kappa_g", "tau_g"];
            header.extend(["delta_Tr", "delta_Sr", "delta_Lr", "delta_So", "delta_Lo"]);
            header.extend(["domain_Tr", "domain_Sr", "domain_Lr", "domain_So", "domain_Lo"]);
            header.push("frenet_residual");
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut out: Vec<String> = [r.s, r.t_param, r.kappa_n, r.kappa_g, r.tau_g]
                        .into_iter()
                        .map(fmt_f64)
                        .collect();
                    out.extend(r.delta.values().into_iter().map(|d| cell(*d)));
                    out.extend(r.domain.values().into_iter().map(|d| match d.violated {
                        None => "ok".to_string(),
                        Some(g) => format!("violated: {}", g),
                    }));
                    out.push(fmt_f64(r.frenet_residual));
                    out
                })
                .collect();
            to_csv(&header, &table)
        }
        other => return Err(CliError::Usage(format!("analyze writes csv or json, not {:?}", other))),
    };
    Ok(Report::ok(text))
}

fn singularities(scene: &Scene, kind: ImageKind, grid: Option<usize>, order: usize) -> Result<SingularityReport, CliError> {
    find_singularities(&scene.curve, kind, scene.curve.s_range(), scene.grid(grid), order).map_err(|e| match e {
        SingularError::DomainViolation { .. } => CliError::DomainViolation(e.to_string()),
        SingularError::OrderTooSmall(_) => CliError::Usage(e.to_string()),
        other => compute(other),
    })
}

pub fn classify(scene: &Scene, kind: ImageKind, grid: Option<usize>, order: Option<usize>) -> Result<Report, CliError> {
    let k = scene.jet_order(order)?;
    let report = singularities(scene, kind, grid, k)?;
    Ok(Report::ok(to_json(&report)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Worst residual over the samples where the check applies.
    pub worst: Option<f64>,
    pub tolerance: f64,
    pub samples_used: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply anywhere on this scene.
    Skipped,
}

impl Check {
    fn new(name: String, worst: Option<f64>, tolerance: f64, samples_used: usize) -> Self {
        let status = match worst {
            None => Status::Skipped,
            Some(w) if w <= tolerance => Status::Pass,
            Some(_) => Status::Fail,
        };
        Check {
            name,
            worst,
            tolerance,
            samples_used,
            status,
        }
    }
}

/// Running maximum over the samples where a quantity is defined.
#[derive(Default)]
struct Worst {
    max: Option<f64>,
    used: usize,
}

impl Worst {
    fn add(&mut self, v: Option<f64>) {
        if let Some(v) = v {
            // NaN must register as a failure, so it wins over any number.
            self.max = Some(match self.max {
                Some(m) if !(v > m) && !v.is_nan() => m,
                _ => v,
            });
            self.used += 1;
        }
    }
}

/// Every numerical check on a scene.
pub fn verify_checks(scene: &Scene, samples: Option<usize>, order: Option<usize>) -> Result<Vec<Check>, CliError> {
    let k = scene.jet_order(order)?;
    if k < 3 {
        return Err(CliError::Usage(format!("verify needs jet order at least 3, got {}", k)));
    }
    let n = scene.samples(samples);
    let tol = scene.tolerances();
    let mut ortho = Worst::default();
    let mut frenet = Worst::default();
    let mut sphere: Vec<Worst> = ImageKind::ALL.iter().map(|_| Worst::default()).collect();
    let mut ident: Vec<Worst> = ImageKind::ALL.iter().map(|_| Worst::default()).collect();
    for s in scene.sample_s(n) {
        let f = frame(scene, s, k)?;
        ortho.add(Some(f.orthonormality_residual()));
        frenet.add(Some(f.frenet_residual()));
        for (i, kind) in ImageKind::ALL.into_iter().enumerate() {
            sphere[i].add(image(kind, &f).ok().map(|v| kind.sphere().residual(&v.value()).abs()));
            ident[i].add(derivative_identity_residual(kind, &f).ok());
        }
    }
    let mut checks = vec![
        Check::new("orthonormality".into(), ortho.max, tol.orthonormality, ortho.used),
        Check::new("frenet".into(), frenet.max, tol.frenet, frenet.used),
    ];
    for (kind, w) in ImageKind::ALL.into_iter().zip(&sphere) {
        checks.push(Check::new(format!("sphere {}", kind), w.max, tol.sphere, w.used));
    }
    for statement in 1..=5u8 {
        let r = verify_duality(&scene.curve, statement, n, k).map_err(compute)?;
        let worst = (r.samples_used > 0).then(|| r.pairing_residual.max(r.isotropy_residual));
        checks.push(Check::new(
            format!("duality {} ({})", statement, r.kind),
            worst,
            tol.duality,
            r.samples_used,
        ));
    }
    for (kind, w) in ImageKind::ALL.into_iter().zip(&ident) {
        checks.push(Check::new(
            format!("derivative identity {}", kind),
            w.max,
            tol.derivative_identity,
            w.used,
        ));
    }
    Ok(checks)
}

pub fn verify(scene: &Scene, samples: Option<usize>, order: Option<usize>, format: Format) -> Result<Report, CliError> {
    let checks = verify_checks(scene, samples, order)?;
    let ok = checks.iter().all(|c| c.status != Status::Fail);
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                passed: bool,
                checks: &'a [Check],
            }
            to_json(&Out { passed: ok, checks: &checks })
        }
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                let worst = c.worst.map_or("-".to_string(), |w| format!("{:.3e}", w));
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                out.push_str(&format!(
                    "{:<4} {:<28} worst {:>10}  tol {:.0e}  samples {}\n",
                    status, c.name, worst, c.tolerance, c.samples_used
                ));
            }
            out.push_str(if ok { "all checks passed\n" } else { "some checks failed\n" });
            out
        }
        other => return Err(CliError::Usage(format!("verify writes text or json, not {:?}", other))),
    };
    Ok(Report { text, ok })
}

/// Which two coordinates the SVG shows.
pub fn parse_projection(s: &str) -> Result<[usize; 2], String> {
    match s.to_ascii_lowercase().as_str() {
        "xy" | "x1x2" => Ok([1, 2]),
        "x0x1" => Ok([0, 1]),
        "x0x2" => Ok([0, 2]),
        _ => Err(format!("unknown projection '{}' (xy, x0x1, x0x2)", s)),
    }
}

#[derive(Debug, Serialize)]
struct ExportPoint {
    s: f64,
    point: Option<[f64; 3]>,
}

#[derive(Debug, Serialize)]
struct ExportJson<'a> {
    scene: Option<&'a str>,
    image: ImageKind,
    points: Vec<ExportPoint>,
}

pub const EXPORT_SAMPLES: usize = 512;

pub fn export(
    scene: &Scene,
    kind: ImageKind,
    format: Format,
    projection: [usize; 2],
    samples: Option<usize>,
    order: Option<usize>,
) -> Result<Report, CliError> {
    let k = scene.jet_order(order)?;
    let n = samples.unwrap_or(EXPORT_SAMPLES).max(2);
    let mut points = Vec::with_capacity(n);
    for s in scene.sample_s(n) {
        let f = frame(scene, s, k)?;
        points.push(ExportPoint {
            s: f.s,
            point: image(kind, &f).ok().map(|v| v.value().0),
        });
    }
    if points.iter().all(|p| p.point.is_none()) {
        return Err(CliError::DomainViolation(format!(
            "image {} is undefined on the whole curve: {} fails",
            kind,
            kind.guard()
        )));
    }
    let text = match format {
        Format::Json => to_json(&ExportJson {
            scene: scene.file.name.as_deref(),
            image: kind,
            points,
        }),
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| {
                    let mut r = vec![fmt_f64(p.s)];
                    r.extend((0..3).map(|i| cell(p.point.map(|x| x[i]))));
                    r
                })
                .collect();
            to_csv(&["s", "x0", "x1", "x2"], &rows)
        }
        Format::Svg => {
            let mut segments: Vec<Vec<[f64; 2]>> = vec![Vec::new()];
            for p in &points {
                match p.point {
                    Some(x) => segments.last_mut().expect("never empty").push([x[projection[0]], x[projection[1]]]),
                    None if !segments.last().expect("never empty").is_empty() => segments.push(Vec::new()),
                    None => {}
                }
            }
            // Markers need δ′, so they are drawn only when the order allows it.
            let mut markers = Vec::new();
            if let Ok(report) = singularities(scene, kind, None, k) {
                for p in report.points() {
                    let f = frame(scene, p.s0, k)?;
                    if let Ok(v) = image(kind, &f) {
                        let x = v.value().0;
                        markers.push([x[projection[0]], x[projection[1]]]);
                    }
                }
            }
            svg(&segments, &markers)
        }
        Format::Text => return Err(CliError::Usage("export writes csv, json or svg".into())),
    };
    Ok(Report::ok(text))
}

pub fn catalog_listing(format: Format) -> Result<Report, CliError> {
    Ok(Report::ok(match format {
        Format::Json => to_json(&catalog::entries()),
        Format::Text => catalog::listing(),
        other => return Err(CliError::Usage(format!("catalog writes text or json, not {:?}", other))),
    }))
}
