//! Singular points of the Darboux images, height functions, duality
//! residuals and constancy checks.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, CurveOnSurface, FrameSample};
use crate::darboux::{delta, domain_predicate, image, DarbouxError, DirectionField, ImageKind};
use crate::jet::{Jet, JetVector};
use crate::minkowski::MinkVector;

pub const DEFAULT_GRID: usize = 2048;
/// Bisection stops once the bracket is this narrow in arc length.
pub const ROOT_TOL: f64 = 1e-12;
/// `|δ|` below this counts as zero.
pub const ZERO_TOL: f64 = 1e-9;
/// Cusp iff `|δ′| > CUSP_TOL · (1 + |δ″|)`.
pub const CUSP_TOL: f64 = 1e-8;
/// Smallest jet order that still carries `δ″`.
pub const MIN_CLASSIFY_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("image {kind} is undefined on the whole interval: {guard} fails")]
    DomainViolation { kind: ImageKind, guard: &'static str },
    #[error("jet order {0} is too small here (need at least {MIN_CLASSIFY_ORDER})")]
    OrderTooSmall(usize),
    #[error("vector is off the parameter pseudo-sphere of family {family} (residual {residual:e})")]
    VNotOnSphere { family: ImageKind, residual: f64 },
    #[error("duality statements are numbered 1 to 5, got {0}")]
    BadStatement(u8),
    #[error("empty arc-length interval")]
    EmptyInterval,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Cusp,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    pub kind: ImageKind,
    pub s0: f64,
    pub t_param: f64,
    pub classification: Classification,
    pub delta0: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Arc-length bracket the point was found in.
    pub bracket: [f64; 2],
    /// `|δ(s0)|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SingularVerdict {
    Points { points: Vec<SingularPoint> },
    /// `δ` vanishes on every admissible grid node.
    IdenticallyZero { max_abs_delta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub kind: ImageKind,
    pub interval: [f64; 2],
    pub grid: usize,
    #[serde(flatten)]
    pub verdict: SingularVerdict,
    /// Arc-length sub-intervals where the guard fails.
    pub excluded: Vec<[f64; 2]>,
}

impl SingularityReport {
    pub fn points(&self) -> &[SingularPoint] {
        match &self.verdict {
            SingularVerdict::Points { points } => points,
            SingularVerdict::IdenticallyZero { .. } => &[],
        }
    }
}

fn classify(d1: f64, d2: f64) -> Classification {
    if d1.abs() > CUSP_TOL * (1.0 + d2.abs()) {
        Classification::Cusp
    } else {
        Classification::Degenerate
    }
}

fn delta_at(curve: &CurveOnSurface, kind: ImageKind, t: f64, order: usize) -> Option<(FrameSample, Jet)> {
    let f = curve.frame_at(t, order).ok()?;
    let d = delta(kind, &f).ok()?;
    Some((f, d))
}

fn t_range(curve: &CurveOnSurface, s_interval: [f64; 2]) -> Result<[f64; 2], SingularError> {
    let [a, b] = s_interval;
    if !(a < b) {
        return Err(SingularError::EmptyInterval);
    }
    Ok([curve.t_of_s(a)?, curve.t_of_s(b)?])
}

/// Locate the zeros of `δ` for `kind` on an arc-length interval.
///
/// `δ` is sampled on `grid` equal steps of the curve parameter. Sign changes
/// are refined by bisection; nodes where `|δ|` dips below [`ZERO_TOL`]
/// without a sign change are reported as degenerate.
pub fn find_singularities(
    curve: &CurveOnSurface,
    kind: ImageKind,
    s_interval: [f64; 2],
    grid: usize,
    order: usize,
) -> Result<SingularityReport, SingularError> {
    if order < MIN_CLASSIFY_ORDER {
        return Err(SingularError::OrderTooSmall(order));
    }
    let grid = grid.max(2);
    let [ta, tb] = t_range(curve, s_interval)?;
    let ts: Vec<f64> = (0..=grid).map(|i| ta + (tb - ta) * i as f64 / grid as f64).collect();
    let values: Vec<Option<f64>> = ts
        .iter()
        .map(|&t| delta_at(curve, kind, t, order).map(|(_, d)| d.value()))
        .collect();
    let ss: Vec<f64> = ts.iter().map(|&t| curve.s_of_t(t)).collect::<Result<_, _>>()?;

    let mut excluded = Vec::new();
    let mut run: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match (v, run) {
            (None, None) => run = Some(i),
            (Some(_), Some(start)) => {
                excluded.push([ss[start], ss[i - 1]]);
                run = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run {
        excluded.push([ss[start], ss[grid]]);
    }

    let admissible: Vec<f64> = values.iter().flatten().copied().collect();
    if admissible.is_empty() {
        return Err(SingularError::DomainViolation {
            kind,
            guard: kind.guard(),
        });
    }
    let max_abs = admissible.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let report = |verdict| SingularityReport {
        kind,
        interval: s_interval,
        grid,
        verdict,
        excluded: excluded.clone(),
    };
    if max_abs < ZERO_TOL {
        return Ok(report(SingularVerdict::IdenticallyZero { max_abs_delta: max_abs }));
    }

    let point_at = |t: f64, bracket: [f64; 2]| -> Result<Option<SingularPoint>, SingularError> {
        let Some((f, d)) = delta_at(curve, kind, t, order) else {
            return Ok(None);
        };
        let (d1, d2) = (d.coeff(1), 2.0 * d.coeff(2));
        Ok(Some(SingularPoint {
            kind,
            s0: f.s,
            t_param: t,
            classification: classify(d1, d2),
            delta0: d.value(),
            delta1: d1,
            delta2: d2,
            bracket,
            residual: d.value().abs(),
        }))
    };

    let mut points = Vec::new();
    let mut near_root = vec![false; ts.len()];
    for i in 0..grid {
        let (Some(da), Some(db)) = (values[i], values[i + 1]) else {
            continue;
        };
        if da == 0.0 {
            if let Some(p) = point_at(ts[i], [ss[i], ss[i]])? {
                points.push(p);
            }
            near_root[i] = true;
            near_root[i.saturating_sub(1)] = true;
            near_root[(i + 1).min(grid)] = true;
            continue;
        }
        if da * db >= 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut dlo) = (ts[i], ts[i + 1], da);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let width = (hi - lo) * curve.speed(mid)?;
            if width < ROOT_TOL || mid <= lo || mid >= hi {
                break;
            }
            match delta_at(curve, kind, mid, order) {
                Some((_, d)) if d.value() == 0.0 => {
                    lo = mid;
                    hi = mid;
                    break;
                }
                Some((_, d)) if (d.value() < 0.0) == (dlo < 0.0) => {
                    lo = mid;
                    dlo = d.value();
                }
                Some(_) => hi = mid,
                None => break,
            }
        }
        if let Some(p) = point_at(0.5 * (lo + hi), [ss[i], ss[i + 1]])? {
            points.push(p);
        }
        for j in i.saturating_sub(1)..=(i + 2).min(grid) {
            near_root[j] = true;
        }
    }

    // Tangential zeros: local minima of |δ| below the zero tolerance.
    for i in 0..=grid {
        let Some(d) = values[i] else { continue };
        if near_root[i] || d.abs() >= ZERO_TOL {
            continue;
        }
        let left = if i > 0 { values[i - 1] } else { None };
        let right = if i < grid { values[i + 1] } else { None };
        let is_min = left.map_or(true, |l| l.abs() >= d.abs()) && right.map_or(true, |r| r.abs() > d.abs());
        if !is_min {
            continue;
        }
        let bracket = [ss[i.saturating_sub(1)], ss[(i + 1).min(grid)]];
        if let Some(mut p) = point_at(ts[i], bracket)? {
            p.classification = Classification::Degenerate;
            points.push(p);
        }
    }
    points.sort_by(|a, b| a.s0.total_cmp(&b.s0));
    Ok(report(SingularVerdict::Points { points }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightEvaluation {
    pub family: ImageKind,
    pub s: f64,
    pub v: MinkVector,
    pub h: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

/// Dual-side curve `w` for a family: `b` or `n`.
fn dual_curve(kind: ImageKind, f: &FrameSample) -> &JetVector {
    match kind.dual_field() {
        DirectionField::Normal => &f.normal,
        _ => &f.binormal,
    }
}

/// Height function `⟨w(s), v⟩ − c` of the family matching `kind`, with its
/// first three arc-length derivatives.
pub fn height_eval(
    curve: &CurveOnSurface,
    family: ImageKind,
    s: f64,
    v: MinkVector,
    order: usize,
) -> Result<HeightEvaluation, SingularError> {
    if order < 4 {
        return Err(SingularError::OrderTooSmall(order));
    }
    let residual = family.sphere().residual(&v).abs();
    if !(residual <= 1e-8) {
        return Err(SingularError::VNotOnSphere { family, residual });
    }
    let f = curve.frame_at_s(s, order)?;
    let h = dual_curve(family, &f).pairing_const(&v).add_scalar(-family.pairing_constant());
    let d = |k| h.derivative(k).map_err(|e| SingularError::Darboux(e.into()));
    Ok(HeightEvaluation {
        family,
        s: f.s,
        v,
        h: h.value(),
        h1: d(1)?,
        h2: d(2)?,
        h3: d(3)?,
    })
}

/// The image paired with each duality statement, 1 to 5.
pub fn duality_kind(statement: u8) -> Result<ImageKind, SingularError> {
    Ok(match statement {
        1 => ImageKind::OscSpacelike,
        2 => ImageKind::OscLightlike,
        3 => ImageKind::RectTimelike,
        4 => ImageKind::RectLightlike,
        5 => ImageKind::RectSpacelike,
        other => return Err(SingularError::BadStatement(other)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub statement: u8,
    pub kind: ImageKind,
    pub constant: f64,
    /// Worst `|⟨w, v⟩ − c|`.
    pub pairing_residual: f64,
    /// Worst `|⟨w′, v⟩|`.
    pub isotropy_residual: f64,
    pub samples_used: usize,
    pub samples_skipped: usize,
}

/// Check the constant pairing and the isotropy condition between the
/// dual-side curve and the image at `samples` evenly spaced parameter values.
pub fn verify_duality(
    curve: &CurveOnSurface,
    statement: u8,
    samples: usize,
    order: usize,
) -> Result<DualityReport, SingularError> {
    let kind = duality_kind(statement)?;
    let [t0, t1] = curve.interval();
    let mut rep = DualityReport {
        statement,
        kind,
        constant: kind.pairing_constant(),
        pairing_residual: 0.0,
        isotropy_residual: 0.0,
        samples_used: 0,
        samples_skipped: 0,
    };
    for i in 0..samples {
        let t = t0 + (t1 - t0) * (i as f64 + 0.5) / samples as f64;
        let f = curve.frame_at(t, order)?;
        let Ok(v) = image(kind, &f) else {
            rep.samples_skipped += 1;
            continue;
        };
        let w = dual_curve(kind, &f);
        let v0 = v.value();
        let pairing = (w.value().pairing(&v0) - rep.constant).abs();
        let isotropy = w.deriv().value().pairing(&v0).abs();
        rep.pairing_residual = rep.pairing_residual.max(pairing);
        rep.isotropy_residual = rep.isotropy_residual.max(isotropy);
        rep.samples_used += 1;
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstancyVerdict {
    pub kind: ImageKind,
    /// Image at the middle of the interval.
    pub value: MinkVector,
    /// `max ‖D(s) − D(s_mid)‖`.
    pub constancy: f64,
    /// `max |δ(s)|`.
    pub delta_max: f64,
    /// `max |⟨w(s), D(s_mid)⟩ − c|` for the dual-side curve `w`.
    pub planarity: f64,
}

impl ConstancyVerdict {
    pub fn is_constant(&self, tol: f64) -> bool {
        self.constancy < tol && self.delta_max < tol && self.planarity < tol
    }
}

/// Measure how far the image is from a constant vector on an interval.
pub fn constancy_check(
    curve: &CurveOnSurface,
    kind: ImageKind,
    s_interval: [f64; 2],
    samples: usize,
    order: usize,
) -> Result<ConstancyVerdict, SingularError> {
    let [a, b] = s_interval;
    if !(a < b) {
        return Err(SingularError::EmptyInterval);
    }
    let samples = samples.max(2);
    let eval = |s: f64| -> Result<(FrameSample, MinkVector, f64), SingularError> {
        let f = curve.frame_at_s(s, order)?;
        if !domain_predicate(kind, &f).satisfied {
            return Err(SingularError::DomainViolation {
                kind,
                guard: kind.guard(),
            });
        }
        let v = image(kind, &f)?.value();
        let d = delta(kind, &f)?.value();
        Ok((f, v, d))
    };
    let (_, mid, _) = eval(0.5 * (a + b))?;
    let mut out = ConstancyVerdict {
        kind,
        value: mid,
        constancy: 0.0,
        delta_max: 0.0,
        planarity: 0.0,
    };
    for i in 0..samples {
        let s = a + (b - a) * i as f64 / (samples - 1) as f64;
        let (f, v, d) = eval(s)?;
        out.constancy = out.constancy.max((v - mid).euclid_norm());
        out.delta_max = out.delta_max.max(d.abs());
        let w = dual_curve(kind, &f).value();
        out.planarity = out.planarity.max((w.pairing(&mid) - kind.pairing_constant()).abs());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::surface::SurfacePatch;
    use std::f64::consts::PI;

    fn curve(x: [&str; 3], domain: [[f64; 2]; 2], u1: &str, u2: &str, interval: [f64; 2]) -> CurveOnSurface {
        let p = SurfacePatch::new(x.map(|s| parse(s).unwrap()), ["u1", "u2"], domain).unwrap();
        CurveOnSurface::new(p, parse(u1).unwrap(), parse(u2).unwrap(), "t", interval).unwrap()
    }

    fn hyperbolic() -> CurveOnSurface {
        curve(
            ["cosh(u1)", "sinh(u1)*cos(u2)", "sinh(u1)*sin(u2)"],
            [[0.1, 2.0], [-0.1, 6.5]],
            "1 + 0.25*sin(t)",
            "t",
            [0.0, 2.0 * PI],
        )
    }

    fn circle() -> CurveOnSurface {
        curve(["0", "u1", "u2"], [[-2.0, 2.0], [-2.0, 2.0]], "cos(t)", "-sin(t)", [0.0, 2.0 * PI])
    }

    #[test]
    fn hyperbolic_rect_timelike_has_no_singularities() {
        let c = hyperbolic();
        let r = find_singularities(&c, ImageKind::RectTimelike, c.s_range(), 256, 7).unwrap();
        assert!(r.points().is_empty());
        assert!(r.excluded.is_empty());
        let e = find_singularities(&c, ImageKind::RectSpacelike, c.s_range(), 64, 7).unwrap_err();
        assert!(matches!(e, SingularError::DomainViolation { .. }));
    }

    #[test]
    fn flat_circle_delta_vanishes_identically() {
        let c = circle();
        let r = find_singularities(&c, ImageKind::RectTimelike, c.s_range(), 256, 7).unwrap();
        assert!(matches!(r.verdict, SingularVerdict::IdenticallyZero { .. }));
        let v = constancy_check(&c, ImageKind::RectTimelike, c.s_range(), 32, 7).unwrap();
        assert!(v.is_constant(1e-8), "{:?}", v);
        assert!(v.value.max_abs_diff(&MinkVector::new(-1.0, 0.0, 0.0)) < 1e-12);
    }

    #[test]
    fn hyperbolic_constancy_fails() {
        let c = hyperbolic();
        let v = constancy_check(&c, ImageKind::RectTimelike, c.s_range(), 32, 7).unwrap();
        assert!(v.constancy > 0.1);
        assert!((v.delta_max - 1.0).abs() < 1e-8);
    }

    #[test]
    fn simple_root_is_found_and_classified() {
        // Graph of x³ + xy over the plane; along y = 0 the rectifying
        // spacelike image has a simple zero of δ at the origin.
        let c = curve(["u1^3 + u1*u2", "u1", "u2"], [[-0.4, 0.4], [-0.2, 0.2]], "t", "0", [-0.3, 0.3])
            .with_anchor(0.0)
            .unwrap();
        let r = find_singularities(&c, ImageKind::RectSpacelike, c.s_range(), 512, 7).unwrap();
        let pts = r.points();
        assert_eq!(pts.len(), 1, "{:?}", pts);
        let p = &pts[0];
        assert_eq!(p.classification, Classification::Cusp);
        assert!(p.s0.abs() < 1e-9);
        assert!(p.residual < 1e-10);
        assert!(p.bracket[0] <= p.s0 && p.s0 <= p.bracket[1]);

        let f = c.frame_at_s(p.s0, 7).unwrap();
        let v = image(ImageKind::RectSpacelike, &f).unwrap().value();
        let h = height_eval(&c, ImageKind::RectSpacelike, p.s0, v, 7).unwrap();
        assert!(h.h.abs() < 1e-8 && h.h1.abs() < 1e-8 && h.h2.abs() < 1e-7);
        assert!(h.h3.abs() > 1e-6);
    }

    #[test]
    fn height_function_vanishes_to_first_order_on_the_image() {
        let c = hyperbolic();
        for s in [0.5, 2.0, 4.0] {
            let f = c.frame_at_s(s, 7).unwrap();
            for k in [ImageKind::RectTimelike, ImageKind::OscSpacelike] {
                let v = image(k, &f).unwrap().value();
                let h = height_eval(&c, k, s, v, 7).unwrap();
                assert!(h.h.abs() < 1e-8 && h.h1.abs() < 1e-8, "{:?}", h);
            }
        }
        let e = height_eval(&c, ImageKind::RectTimelike, 1.0, MinkVector::E1, 7).unwrap_err();
        assert!(matches!(e, SingularError::VNotOnSphere { .. }));
    }

    #[test]
    fn duality_on_hyperbolic_plane() {
        let c = hyperbolic();
        for st in 1..=5 {
            let r = verify_duality(&c, st, 16, 7).unwrap();
            if st == 5 {
                assert_eq!(r.samples_used, 0);
                continue;
            }
            assert_eq!(r.samples_used, 16);
            assert!(r.pairing_residual < 1e-9 && r.isotropy_residual < 1e-9, "{:?}", r);
        }
        assert!(matches!(verify_duality(&c, 6, 4, 7), Err(SingularError::BadStatement(6))));
    }
}
