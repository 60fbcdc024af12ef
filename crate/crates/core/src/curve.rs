//! Curves on a surface patch, arc length, and the Lorentzian Darboux frame
//! `{t, n, b}` with its invariants `κ_n`, `κ_g`, `τ_g` as jets in arc length.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::jet::{Jet, JetError, JetVector};
use crate::minkowski::MinkVector;
use crate::surface::{SurfaceError, SurfacePatch};

/// Speeds below this make the curve non-regular.
pub const REGULARITY_TOL: f64 = 1e-8;
/// Default quadrature tolerance for arc length.
pub const QUADRATURE_TOL: f64 = 1e-12;
/// Panels in the arc-length table.
const TABLE_PANELS: usize = 256;
/// Threshold under which a regularity flag counts as failed.
const FLAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("curve expression uses '{0}', which is not the curve parameter")]
    UnknownVariable(String),
    #[error("empty or non-finite parameter interval")]
    EmptyInterval,
    #[error("curve is not regular at t = {t} (speed {speed:e})")]
    NonRegularCurve { t: f64, speed: f64 },
    #[error("curve tangent is not spacelike at t = {t}")]
    NonSpacelikeTangent { t: f64 },
    #[error("arc length {s} is outside [{lo}, {hi}]")]
    OutsideArcLength { s: f64, lo: f64, hi: f64 },
    #[error("jet order {0} is too small (need at least 2)")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<JetError> for CurveError {
    fn from(e: JetError) -> Self {
        CurveError::Eval(EvalError::Jet(e))
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, CurveError>
where
    F: Fn(f64) -> Result<f64, CurveError>,
{
    fn rec<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64, CurveError>
    where
        F: Fn(f64) -> Result<f64, CurveError>,
    {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm)?, f(rm)?);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Monotone table `t ↦ s`, anchored so that `s(anchor) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthMap {
    nodes_t: Vec<f64>,
    nodes_s: Vec<f64>,
    tol: f64,
    /// Change in total length when the table is rebuilt at a sixteenth of
    /// the tolerance.
    refinement_change: f64,
}

impl ArcLengthMap {
    pub fn s_range(&self) -> [f64; 2] {
        [self.nodes_s[0], *self.nodes_s.last().unwrap()]
    }

    pub fn t_range(&self) -> [f64; 2] {
        [self.nodes_t[0], *self.nodes_t.last().unwrap()]
    }

    pub fn length(&self) -> f64 {
        let [a, b] = self.s_range();
        b - a
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn refinement_change(&self) -> f64 {
        self.refinement_change
    }

    fn panel_of_t(&self, t: f64) -> usize {
        let i = self.nodes_t.partition_point(|&x| x <= t);
        i.clamp(1, self.nodes_t.len() - 1) - 1
    }

    fn panel_of_s(&self, s: f64) -> usize {
        let i = self.nodes_s.partition_point(|&x| x <= s);
        i.clamp(1, self.nodes_s.len() - 1) - 1
    }
}

/// A curve `t ↦ X(u1(t), u2(t))` on a surface patch.
#[derive(Debug, Clone)]
pub struct CurveOnSurface {
    surface: SurfacePatch,
    u: [Expr; 2],
    du: [Expr; 2],
    param: String,
    interval: [f64; 2],
    map: ArcLengthMap,
}

impl CurveOnSurface {
    /// Build the curve and its arc-length table with `s(t0) = 0`.
    pub fn new(surface: SurfacePatch, u1: Expr, u2: Expr, param: &str, interval: [f64; 2]) -> Result<Self, CurveError> {
        let [t0, t1] = interval;
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(CurveError::EmptyInterval);
        }
        for e in [&u1, &u2] {
            if let Some(v) = e.variables().into_iter().find(|v| v != param) {
                return Err(CurveError::UnknownVariable(v));
            }
        }
        let du = [u1.diff(param), u2.diff(param)];
        let mut c = CurveOnSurface {
            surface,
            u: [u1, u2],
            du,
            param: param.to_string(),
            interval,
            map: ArcLengthMap {
                nodes_t: vec![],
                nodes_s: vec![],
                tol: QUADRATURE_TOL,
                refinement_change: 0.0,
            },
        };
        c.map = c.build_map(t0, QUADRATURE_TOL)?;
        Ok(c)
    }

    /// Move the arc-length origin to parameter value `anchor`, which may lie
    /// outside the interval.
    pub fn with_anchor(mut self, anchor: f64) -> Result<Self, CurveError> {
        self.map = self.build_map(anchor, self.map.tol)?;
        Ok(self)
    }

    fn build_map(&self, anchor: f64, tol: f64) -> Result<ArcLengthMap, CurveError> {
        let table = |tol: f64| -> Result<(Vec<f64>, Vec<f64>), CurveError> {
            let [t0, t1] = self.interval;
            let nodes_t: Vec<f64> = (0..=TABLE_PANELS)
                .map(|i| t0 + (t1 - t0) * i as f64 / TABLE_PANELS as f64)
                .collect();
            let panel_tol = tol / TABLE_PANELS as f64;
            let mut nodes_s = Vec::with_capacity(nodes_t.len());
            let mut acc = self.arc_length(anchor, t0, tol)?;
            nodes_s.push(acc);
            for w in nodes_t.windows(2) {
                acc += self.arc_length(w[0], w[1], panel_tol)?;
                nodes_s.push(acc);
            }
            Ok((nodes_t, nodes_s))
        };
        let (nodes_t, nodes_s) = table(tol)?;
        let (_, fine) = table(tol / 16.0)?;
        let len = |v: &[f64]| v[v.len() - 1] - v[0];
        Ok(ArcLengthMap {
            refinement_change: (len(&nodes_s) - len(&fine)).abs(),
            nodes_t,
            nodes_s,
            tol,
        })
    }

    pub fn surface(&self) -> &SurfacePatch {
        &self.surface
    }

    pub fn interval(&self) -> [f64; 2] {
        self.interval
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn expressions(&self) -> &[Expr; 2] {
        &self.u
    }

    pub fn arc_length_map(&self) -> &ArcLengthMap {
        &self.map
    }

    pub fn s_range(&self) -> [f64; 2] {
        self.map.s_range()
    }

    /// Surface parameters `(u1(t), u2(t))`.
    pub fn params_at(&self, t: f64) -> Result<[f64; 2], CurveError> {
        let b = [(self.param.as_str(), t)];
        Ok([self.u[0].eval_scalar(&b)?, self.u[1].eval_scalar(&b)?])
    }

    pub fn point_at(&self, t: f64) -> Result<MinkVector, CurveError> {
        Ok(self.surface.point(self.params_at(t)?)?)
    }

    /// `‖dγ/dt‖`, from the symbolic partials and the chain rule.
    pub fn speed(&self, t: f64) -> Result<f64, CurveError> {
        let b = [(self.param.as_str(), t)];
        let u = self.params_at(t)?;
        let (du1, du2) = (self.du[0].eval_scalar(&b)?, self.du[1].eval_scalar(&b)?);
        let (xu, xv) = self.surface.partials_at(u)?;
        let v = du1 * xu + du2 * xv;
        let q = v.pairing(&v);
        if q < 0.0 && q.abs() > REGULARITY_TOL * REGULARITY_TOL {
            return Err(CurveError::NonSpacelikeTangent { t });
        }
        let speed = q.max(0.0).sqrt();
        if !(speed >= REGULARITY_TOL) {
            return Err(CurveError::NonRegularCurve { t, speed });
        }
        Ok(speed)
    }

    /// `∫_ta^tb ‖dγ/dt‖ dt` (negative when `tb < ta`).
    pub fn arc_length(&self, ta: f64, tb: f64, tol: f64) -> Result<f64, CurveError> {
        adaptive_simpson(&|t| self.speed(t), ta, tb, tol)
    }

    pub fn s_of_t(&self, t: f64) -> Result<f64, CurveError> {
        let i = self.map.panel_of_t(t);
        Ok(self.map.nodes_s[i] + self.arc_length(self.map.nodes_t[i], t, self.map.tol / TABLE_PANELS as f64)?)
    }

    /// Inverse of [`s_of_t`](Self::s_of_t) by Newton's method, safeguarded
    /// by bisection inside the table panel.
    pub fn t_of_s(&self, s: f64) -> Result<f64, CurveError> {
        let [lo, hi] = self.map.s_range();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if s < lo - slack || s > hi + slack {
            return Err(CurveError::OutsideArcLength { s, lo, hi });
        }
        let i = self.map.panel_of_s(s);
        let (mut a, mut b) = (self.map.nodes_t[i], self.map.nodes_t[i + 1]);
        let (sa, sb) = (self.map.nodes_s[i], self.map.nodes_s[i + 1]);
        let mut t = a + (b - a) * ((s - sa) / (sb - sa)).clamp(0.0, 1.0);
        for _ in 0..100 {
            let r = self.s_of_t(t)? - s;
            if r.abs() <= 1e-15 * (1.0 + s.abs()) {
                break;
            }
            if r > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let next = t - r / self.speed(t)?;
            t = if next > a && next < b { next } else { 0.5 * (a + b) };
            if b - a <= f64::EPSILON * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }

    /// Darboux frame at parameter value `t` with `γ` expanded to `order`.
    pub fn frame_at(&self, t: f64, order: usize) -> Result<FrameSample, CurveError> {
        if order < 2 {
            return Err(CurveError::OrderTooSmall(order));
        }
        self.speed(t)?;
        let s = self.s_of_t(t)?;
        let h = Jet::variable(t, order);
        let b = [(self.param.as_str(), h)];
        let u1 = self.u[0].eval_jet(&b, order)?;
        let u2 = self.u[1].eval_jet(&b, order)?;
        if !self.surface.contains([u1.value(), u2.value()]) {
            return Err(SurfaceError::OutsideDomain(u1.value(), u2.value()).into());
        }
        let pj = self.surface.jets(&u1, &u2)?;
        let normal_t = self.surface.normal_jet(&pj)?;
        let gamma_t = pj.position;

        // s(h) = ∫σ, inverted to h(s) and composed in.
        let vel = gamma_t.deriv();
        let sigma = vel.pairing(&vel).sqrt()?;
        let h_of_s = sigma.integrate(0.0).invert_series()?;
        let gamma = gamma_t.compose(&h_of_s)?;
        let normal = normal_t.compose(&h_of_s)?;

        let tangent = gamma.deriv();
        let normal = normal.truncate(order - 1);
        let binormal = tangent.wedge(&normal);
        let dt = tangent.deriv();
        let db = binormal.deriv();
        let kappa_n = -dt.pairing(&normal);
        let kappa_g = dt.pairing(&binormal);
        let tau_g = -db.pairing(&normal);

        let (kn, kg, tg) = (kappa_n.value(), kappa_g.value(), tau_g.value());
        Ok(FrameSample {
            s,
            t_param: t,
            u: [u1.value(), u2.value()],
            gamma,
            tangent,
            normal,
            binormal,
            kappa_n,
            kappa_g,
            tau_g,
            tangent_derivative_nonzero: (kg * kg - kn * kn).abs() > FLAG_TOL,
            binormal_derivative_nonzero: (kg * kg - tg * tg).abs() > FLAG_TOL,
        })
    }

    /// Darboux frame at arc length `s`.
    pub fn frame_at_s(&self, s: f64, order: usize) -> Result<FrameSample, CurveError> {
        self.frame_at(self.t_of_s(s)?, order)
    }
}

/// Frame and invariants at one point, all as jets in arc length.
///
/// `gamma` has the requested order `K`; `tangent`, `normal`, `binormal`
/// have order `K-1`; the curvatures have order `K-2`.
#[derive(Debug, Clone)]
pub struct FrameSample {
    pub s: f64,
    pub t_param: f64,
    pub u: [f64; 2],
    pub gamma: JetVector,
    pub tangent: JetVector,
    pub normal: JetVector,
    pub binormal: JetVector,
    pub kappa_n: Jet,
    pub kappa_g: Jet,
    pub tau_g: Jet,
    /// `‖t′‖ ≠ 0`, i.e. `κ_g² − κ_n² ≠ 0`.
    pub tangent_derivative_nonzero: bool,
    /// `‖b′‖ ≠ 0`, i.e. `κ_g² − τ_g² ≠ 0`.
    pub binormal_derivative_nonzero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CurveClass {
    Geodesic,
    Asymptotic,
    Principal,
}

impl FrameSample {
    /// Largest coefficient of the three Frenet-type residuals
    /// `t′ − κ_n n − κ_g b`, `n′ − κ_n t − τ_g b`, `b′ + κ_g t − τ_g n`.
    pub fn frenet_residual(&self) -> f64 {
        let (t, n, b) = (&self.tangent, &self.normal, &self.binormal);
        let r1 = &(&t.deriv() - &n.mul_jet(&self.kappa_n)) - &b.mul_jet(&self.kappa_g);
        let r2 = &(&n.deriv() - &t.mul_jet(&self.kappa_n)) - &b.mul_jet(&self.tau_g);
        let r3 = &(&b.deriv() + &t.mul_jet(&self.kappa_g)) - &n.mul_jet(&self.tau_g);
        r1.max_abs().max(r2.max_abs()).max(r3.max_abs())
    }

    /// Worst deviation of the six 0-jet pairings from `(1, −1, 1, 0, 0, 0)`
    /// and of `b` from `t ∧ n`.
    pub fn orthonormality_residual(&self) -> f64 {
        let (t, n, b) = (self.tangent.value(), self.normal.value(), self.binormal.value());
        [
            t.pairing(&t) - 1.0,
            n.pairing(&n) + 1.0,
            b.pairing(&b) - 1.0,
            t.pairing(&n),
            t.pairing(&b),
            n.pairing(&b),
            b.max_abs_diff(&t.wedge(&n)),
        ]
        .into_iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Curvatures read off the other Frenet equations:
    /// `κ_n = ⟨n′, t⟩`, `κ_g = −⟨b′, t⟩`, `τ_g = ⟨n′, b⟩`.
    pub fn invariants_from_derivatives(&self) -> (Jet, Jet, Jet) {
        let dn = self.normal.deriv();
        let db = self.binormal.deriv();
        (
            dn.pairing(&self.tangent),
            -db.pairing(&self.tangent),
            dn.pairing(&self.binormal),
        )
    }

    pub fn geometric_class(&self, tol: f64) -> BTreeSet<CurveClass> {
        let mut out = BTreeSet::new();
        if self.kappa_g.value().abs() <= tol {
            out.insert(CurveClass::Geodesic);
        }
        if self.kappa_n.value().abs() <= tol {
            out.insert(CurveClass::Asymptotic);
        }
        if self.tau_g.value().abs() <= tol {
            out.insert(CurveClass::Principal);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn patch(x: [&str; 3], domain: [[f64; 2]; 2]) -> SurfacePatch {
        SurfacePatch::new(x.map(|s| parse(s).unwrap()), ["u1", "u2"], domain).unwrap()
    }

    fn curve(p: SurfacePatch, u1: &str, u2: &str, interval: [f64; 2]) -> CurveOnSurface {
        CurveOnSurface::new(p, parse(u1).unwrap(), parse(u2).unwrap(), "t", interval).unwrap()
    }

    fn plane() -> SurfacePatch {
        patch(["0", "u1", "u2"], [[-2.0, 2.0], [-2.0, 2.0]])
    }

    fn hyperbolic() -> SurfacePatch {
        patch(
            ["cosh(u1)", "sinh(u1)*cos(u2)", "sinh(u1)*sin(u2)"],
            [[0.1, 2.0], [-0.1, 6.5]],
        )
    }

    #[test]
    fn arc_lengths() {
        let c = curve(plane(), "cos(t)", "sin(t)", [0.0, 2.0 * PI]);
        assert_abs_diff_eq!(c.arc_length_map().length(), 2.0 * PI, epsilon = 1e-11);
        let c = curve(plane(), "0", "t", [0.0, 1.5]);
        assert_abs_diff_eq!(c.arc_length(0.0, 1.5, 1e-12).unwrap(), 1.5, epsilon = 1e-13);
        let r: f64 = 1.3;
        let c = curve(hyperbolic(), "1.3", "t", [0.0, 2.0 * PI]);
        let len = c.arc_length_map().length();
        assert_abs_diff_eq!(len, 2.0 * PI * r.sinh(), epsilon = 1e-10);
        assert!(c.arc_length_map().refinement_change() < 1e-11);
    }

    #[test]
    fn s_and_t_are_inverse() {
        let c = curve(hyperbolic(), "1 + 0.25*sin(t)", "t", [0.0, 2.0 * PI]);
        for t in [0.0, 0.3, 1.7, 4.4, 2.0 * PI] {
            let s = c.s_of_t(t).unwrap();
            assert_abs_diff_eq!(c.t_of_s(s).unwrap(), t, epsilon = 1e-11);
        }
        assert_eq!(c.s_of_t(0.0).unwrap(), 0.0);
    }

    #[test]
    fn anchor_moves_origin() {
        let c = curve(plane(), "t", "0", [-0.5, 0.5]).with_anchor(0.0).unwrap();
        assert_abs_diff_eq!(c.s_of_t(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(c.s_range(), [-0.5, 0.5]);
    }

    #[test]
    fn hyperbolic_plane_frame() {
        let c = curve(hyperbolic(), "1 + 0.25*sin(t)", "t", [0.0, 2.0 * PI]);
        for t in [0.1, 1.0, 2.5, 5.0] {
            let f = c.frame_at(t, 7).unwrap();
            assert!(f.kappa_n.add_scalar(-1.0).max_abs() < 1e-9, "{:?}", f.kappa_n);
            assert!(f.tau_g.max_abs() < 1e-9);
            assert!(f.frenet_residual() < 1e-9);
            assert!(f.orthonormality_residual() < 1e-12);
            assert!(f.normal.value().max_abs_diff(&f.gamma.value()) < 1e-12);
        }
    }

    #[test]
    fn flat_circle_frame() {
        let c = curve(plane(), "cos(t)", "-sin(t)", [0.0, 2.0 * PI]);
        for t in [0.0, 1.0, 3.0] {
            let f = c.frame_at(t, 7).unwrap();
            assert!(f.kappa_n.max_abs() < 1e-12);
            assert!(f.tau_g.max_abs() < 1e-12);
            assert!(f.kappa_g.add_scalar(-1.0).max_abs() < 1e-9);
            assert!(f.frenet_residual() < 1e-9);
            assert_eq!(
                f.geometric_class(1e-9),
                BTreeSet::from([CurveClass::Asymptotic, CurveClass::Principal])
            );
        }
    }

    #[test]
    fn unit_speed_after_reparametrization() {
        let c = curve(
            patch(["0.3*u1^2 + u1*u2 + 0.2*u2^3", "u1", "u2"], [[-0.5, 0.5], [-0.5, 0.5]]),
            "0.4*sin(t)",
            "0.3*sin(2*t + 0.5)",
            [0.0, 3.0],
        );
        let f = c.frame_at(1.1, 8).unwrap();
        let q = f.tangent.pairing(&f.tangent);
        assert_abs_diff_eq!(q.value(), 1.0, epsilon = 1e-12);
        assert!(q.coeffs()[1..].iter().all(|x| x.abs() < 1e-8), "{:?}", q);
        assert!(f.frenet_residual() < 1e-8);
        let (kn, kg, tg) = f.invariants_from_derivatives();
        assert_abs_diff_eq!(kn.value(), f.kappa_n.value(), epsilon = 1e-9);
        assert_abs_diff_eq!(kg.value(), f.kappa_g.value(), epsilon = 1e-9);
        assert_abs_diff_eq!(tg.value(), f.tau_g.value(), epsilon = 1e-9);
        assert!(f.geometric_class(1e-9).is_empty());
    }

    #[test]
    fn cubic_graph_values_at_origin() {
        // X = (x² + 2xy, x, y) along y = 0. With the future-directed normal,
        // κ_n(0) = f_xx = 2·a20 and τ_g(0) = −a11.
        let c = curve(
            patch(["u1^2 + 2*u1*u2", "u1", "u2"], [[-0.5, 0.5], [-0.5, 0.5]]),
            "t",
            "0",
            [-0.3, 0.3],
        );
        let f = c.frame_at(0.0, 7).unwrap();
        assert_abs_diff_eq!(f.kappa_n.value(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.tau_g.value(), -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.kappa_g.value(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        let e = CurveOnSurface::new(plane(), parse("s").unwrap(), parse("t").unwrap(), "t", [0.0, 1.0]);
        assert_eq!(e.unwrap_err(), CurveError::UnknownVariable("s".into()));
        let e = CurveOnSurface::new(plane(), parse("t^2").unwrap(), parse("0").unwrap(), "t", [-1.0, 1.0]);
        assert!(matches!(e.unwrap_err(), CurveError::NonRegularCurve { .. }));
        let c = curve(plane(), "t", "0", [0.0, 1.0]);
        assert!(matches!(c.t_of_s(2.0), Err(CurveError::OutsideArcLength { .. })));
        assert!(matches!(c.frame_at(0.5, 1), Err(CurveError::OrderTooSmall(1))));
    }
}
