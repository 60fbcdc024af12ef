//! Spacelike surface patches `X(u1, u2)` given by closed-form expressions.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::jet::{Jet, JetError, JetVector};
use crate::minkowski::MinkVector;

/// Relative size below which the tangent plane counts as degenerate.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("surface expression uses '{0}', which is not a surface parameter")]
    UnknownVariable(String),
    #[error("empty or non-finite parameter domain")]
    EmptyDomain,
    #[error("surface parameters must have two distinct names")]
    BadParameterNames,
    #[error("point ({0}, {1}) lies outside the parameter domain")]
    OutsideDomain(f64, f64),
    #[error("tangent plane is degenerate at ({0}, {1})")]
    DegenerateTangentPlane(f64, f64),
    #[error("surface is not spacelike at ({u1}, {u2}) (margin {margin:e})")]
    NotSpacelikeHere { u1: f64, u2: f64, margin: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<JetError> for SurfaceError {
    fn from(e: JetError) -> Self {
        SurfaceError::Eval(EvalError::Jet(e))
    }
}

/// Unit normal together with whether the raw wedge had to be flipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitNormal {
    pub normal: MinkVector,
    pub flipped: bool,
}

/// Position and first partials pushed through jets.
#[derive(Debug, Clone)]
pub struct PatchJets {
    /// Parameter values at the expansion point.
    pub u: [f64; 2],
    pub position: JetVector,
    pub d_u1: JetVector,
    pub d_u2: JetVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleVerdict {
    pub u: [f64; 2],
    /// Smallest of the three relative margins; positive means spacelike.
    pub margin: f64,
    pub spacelike: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacelikeReport {
    pub passed: bool,
    pub worst_margin: f64,
    pub worst_at: [f64; 2],
    pub failures: usize,
    pub samples: Vec<SampleVerdict>,
}

#[derive(Debug, Clone)]
pub struct SurfacePatch {
    coords: [Expr; 3],
    partials: [[Expr; 3]; 2],
    vars: [String; 2],
    domain: [[f64; 2]; 2],
}

impl SurfacePatch {
    pub fn new(coords: [Expr; 3], vars: [&str; 2], domain: [[f64; 2]; 2]) -> Result<Self, SurfaceError> {
        if vars[0] == vars[1] || vars.iter().any(|v| v.is_empty()) {
            return Err(SurfaceError::BadParameterNames);
        }
        for [lo, hi] in domain {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SurfaceError::EmptyDomain);
            }
        }
        for c in &coords {
            if let Some(v) = c.variables().into_iter().find(|v| !vars.contains(&v.as_str())) {
                return Err(SurfaceError::UnknownVariable(v));
            }
        }
        let partials = [0, 1].map(|k| std::array::from_fn(|i| coords[i].diff(vars[k])));
        Ok(SurfacePatch {
            coords,
            partials,
            vars: vars.map(str::to_string),
            domain,
        })
    }

    pub fn coords(&self) -> &[Expr; 3] {
        &self.coords
    }

    /// Symbolic partials; `partial(0)` is `X_{u1}`.
    pub fn partial(&self, k: usize) -> &[Expr; 3] {
        &self.partials[k]
    }

    pub fn vars(&self) -> [&str; 2] {
        [self.vars[0].as_str(), self.vars[1].as_str()]
    }

    pub fn domain(&self) -> [[f64; 2]; 2] {
        self.domain
    }

    /// Domain membership with a small relative slack at the edges.
    pub fn contains(&self, u: [f64; 2]) -> bool {
        self.domain.iter().zip(u).all(|([lo, hi], x)| {
            let slack = 1e-9 * (hi - lo);
            x >= lo - slack && x <= hi + slack
        })
    }

    fn check_domain(&self, u: [f64; 2]) -> Result<(), SurfaceError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(SurfaceError::OutsideDomain(u[0], u[1]))
        }
    }

    fn eval3(&self, e: &[Expr; 3], u: [f64; 2]) -> Result<MinkVector, SurfaceError> {
        let b = [(self.vars[0].as_str(), u[0]), (self.vars[1].as_str(), u[1])];
        Ok(MinkVector([e[0].eval_scalar(&b)?, e[1].eval_scalar(&b)?, e[2].eval_scalar(&b)?]))
    }

    pub fn point(&self, u: [f64; 2]) -> Result<MinkVector, SurfaceError> {
        self.eval3(&self.coords, u)
    }

    pub fn partials_at(&self, u: [f64; 2]) -> Result<(MinkVector, MinkVector), SurfaceError> {
        Ok((self.eval3(&self.partials[0], u)?, self.eval3(&self.partials[1], u)?))
    }

    /// Smallest relative margin of the three spacelike conditions
    /// (`⟨X_u1,X_u1⟩ > 0`, `⟨X_u2,X_u2⟩ > 0`, wedge timelike).
    fn margin(xu: &MinkVector, xv: &MinkVector, w: &MinkVector) -> f64 {
        let rel = |q: f64, v: &MinkVector| q / v.euclid_norm_sq().max(f64::MIN_POSITIVE);
        rel(xu.pairing(xu), xu)
            .min(rel(xv.pairing(xv), xv))
            .min(rel(-w.pairing(w), w))
    }

    /// Future-directed timelike unit normal `±X_u1∧X_u2/‖X_u1∧X_u2‖`.
    pub fn normal_at(&self, u: [f64; 2]) -> Result<UnitNormal, SurfaceError> {
        self.check_domain(u)?;
        let (xu, xv) = self.partials_at(u)?;
        let w = xu.wedge(&xv);
        if w.euclid_norm() <= DEGENERATE_TOL * xu.euclid_norm() * xv.euclid_norm() || w.euclid_norm() == 0.0 {
            return Err(SurfaceError::DegenerateTangentPlane(u[0], u[1]));
        }
        let margin = Self::margin(&xu, &xv, &w);
        if margin <= 0.0 {
            return Err(SurfaceError::NotSpacelikeHere { u1: u[0], u2: u[1], margin });
        }
        let n = w.scale(1.0 / w.norm());
        let flipped = n[0] < 0.0;
        Ok(UnitNormal {
            normal: if flipped { -n } else { n },
            flipped,
        })
    }

    /// Position and partials evaluated on jet arguments.
    pub fn jets(&self, u1: &Jet, u2: &Jet) -> Result<PatchJets, SurfaceError> {
        let order = u1.order().min(u2.order());
        let b = [(self.vars[0].as_str(), u1.clone()), (self.vars[1].as_str(), u2.clone())];
        let ev = |e: &[Expr; 3]| -> Result<JetVector, SurfaceError> {
            Ok(JetVector::new(
                e[0].eval_jet(&b, order)?,
                e[1].eval_jet(&b, order)?,
                e[2].eval_jet(&b, order)?,
            ))
        };
        Ok(PatchJets {
            u: [u1.value(), u2.value()],
            position: ev(&self.coords)?,
            d_u1: ev(&self.partials[0])?,
            d_u2: ev(&self.partials[1])?,
        })
    }

    /// Future-directed unit normal as a jet, from jets of the partials.
    pub fn normal_jet(&self, pj: &PatchJets) -> Result<JetVector, SurfaceError> {
        let u = pj.u;
        let (xu, xv) = (pj.d_u1.value(), pj.d_u2.value());
        let w = pj.d_u1.wedge(&pj.d_u2);
        let w0 = w.value();
        if w0.euclid_norm() <= DEGENERATE_TOL * xu.euclid_norm() * xv.euclid_norm() || w0.euclid_norm() == 0.0 {
            return Err(SurfaceError::DegenerateTangentPlane(u[0], u[1]));
        }
        let margin = Self::margin(&xu, &xv, &w0);
        if margin <= 0.0 {
            return Err(SurfaceError::NotSpacelikeHere { u1: u[0], u2: u[1], margin });
        }
        let n = w.normalized()?;
        Ok(if n.value()[0] < 0.0 { -&n } else { n })
    }

    /// Sample the domain on an `n × n` grid (endpoints included).
    pub fn validate_spacelike(&self, n: usize) -> SpacelikeReport {
        let n = n.max(2);
        let mut samples = Vec::with_capacity(n * n);
        let at = |k: usize, i: usize| {
            let [lo, hi] = self.domain[k];
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        };
        for i in 0..n {
            for j in 0..n {
                let u = [at(0, i), at(1, j)];
                let margin = match self.partials_at(u) {
                    Ok((xu, xv)) => {
                        let m = Self::margin(&xu, &xv, &xu.wedge(&xv));
                        if m.is_nan() {
                            f64::NEG_INFINITY
                        } else {
                            m
                        }
                    }
                    Err(_) => f64::NEG_INFINITY,
                };
                samples.push(SampleVerdict {
                    u,
                    margin,
                    spacelike: margin > 0.0,
                });
            }
        }
        let worst = samples
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
            .copied()
            .expect("grid is nonempty");
        let failures = samples.iter().filter(|s| !s.spacelike).count();
        SpacelikeReport {
            passed: failures == 0,
            worst_margin: worst.margin,
            worst_at: worst.u,
            failures,
            samples,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::minkowski::DEFAULT_CAUSAL_TOL;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn patch(x: [&str; 3], vars: [&str; 2], domain: [[f64; 2]; 2]) -> SurfacePatch {
        SurfacePatch::new(x.map(|s| parse(s).unwrap()), vars, domain).unwrap()
    }

    fn hyperbolic() -> SurfacePatch {
        patch(
            ["cosh(u1)", "sinh(u1)*cos(u2)", "sinh(u1)*sin(u2)"],
            ["u1", "u2"],
            [[0.1, 2.0], [0.0, 6.3]],
        )
    }

    #[test]
    fn flat_graph_normal_is_e0_after_flip() {
        let p = patch(["0", "x", "y"], ["x", "y"], [[-1.0, 1.0], [-1.0, 1.0]]);
        let n = p.normal_at([0.3, -0.2]).unwrap();
        assert_eq!(n.normal, MinkVector::E0);
        assert!(n.flipped);
    }

    #[test]
    fn hyperbolic_normal_is_position() {
        let p = hyperbolic();
        for u in [[0.5, 0.3], [1.2, 4.0], [1.9, 2.2]] {
            let n = p.normal_at(u).unwrap().normal;
            assert!(n.max_abs_diff(&p.point(u).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn cylinder_normal_is_future_directed() {
        let p = patch(["sqrt(x^2+1)", "x", "y"], ["x", "y"], [[0.0, 1.5], [-1.0, 1.0]]);
        let x: f64 = 0.7;
        let n = p.normal_at([x, 0.4]).unwrap().normal;
        let want = MinkVector::new((x * x + 1.0).sqrt(), x, 0.0);
        assert!(n.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn normal_invariants_at_random_points() {
        let p = patch(
            ["0.3*x^2 + x*y - 0.2*y^3", "x", "y"],
            ["x", "y"],
            [[-0.5, 0.5], [-0.5, 0.5]],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            let n = p.normal_at(u).unwrap().normal;
            let (xu, xv) = p.partials_at(u).unwrap();
            assert!(n.pairing(&xu).abs() < DEFAULT_CAUSAL_TOL);
            assert!(n.pairing(&xv).abs() < DEFAULT_CAUSAL_TOL);
            assert_abs_diff_eq!(n.pairing(&n), -1.0, epsilon = 1e-10);
            assert!(n[0] > 0.0);
        }
    }

    #[test]
    fn normal_jet_matches_pointwise_normal() {
        let p = hyperbolic();
        let u1 = Jet::from_coeffs(vec![1.0, 0.2, -0.1, 0.05]).unwrap();
        let u2 = Jet::from_coeffs(vec![0.4, 1.0, 0.0, 0.0]).unwrap();
        let pj = p.jets(&u1, &u2).unwrap();
        let n = p.normal_jet(&pj).unwrap();
        // on the hyperboloid the normal equals the position, as a whole jet
        let diff = &n - &pj.position;
        assert!(diff.max_abs() < 1e-12);
        let q = n.pairing(&n);
        assert_abs_diff_eq!(q.value(), -1.0, epsilon = 1e-12);
        assert!(q.coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn validation_reports() {
        assert!(hyperbolic().validate_spacelike(64).passed);
        assert!(patch(["0", "u1", "u2"], ["u1", "u2"], [[0.0, 1.0], [0.0, 1.0]])
            .validate_spacelike(64)
            .passed);
        let bad = patch(["2*x", "x", "y"], ["x", "y"], [[0.0, 1.0], [0.0, 1.0]]);
        let r = bad.validate_spacelike(64);
        assert!(!r.passed);
        assert_eq!(r.failures, 64 * 64);
        assert!(matches!(bad.normal_at([0.5, 0.5]), Err(SurfaceError::NotSpacelikeHere { .. })));
    }

    #[test]
    fn construction_errors() {
        let e = SurfacePatch::new(
            ["0", "u1", "w"].map(|s| parse(s).unwrap()),
            ["u1", "u2"],
            [[0.0, 1.0], [0.0, 1.0]],
        );
        assert_eq!(e.unwrap_err(), SurfaceError::UnknownVariable("w".into()));
        let e = SurfacePatch::new(
            ["0", "u1", "u2"].map(|s| parse(s).unwrap()),
            ["u1", "u2"],
            [[1.0, 1.0], [0.0, 1.0]],
        );
        assert_eq!(e.unwrap_err(), SurfaceError::EmptyDomain);
        let flat = patch(["0", "u1", "u1"], ["u1", "u2"], [[0.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(
            flat.normal_at([0.5, 0.5]),
            Err(SurfaceError::DegenerateTangentPlane(..))
        ));
        assert!(matches!(
            hyperbolic().normal_at([3.0, 0.0]),
            Err(SurfaceError::OutsideDomain(..))
        ));
    }
}
