//! Linear algebra of Lorentz–Minkowski 3-space ℝ³₁.
//!
//! Vectors are written in the canonical basis `e0, e1, e2` with the pairing
//! `⟨x, y⟩ = −x0·y0 + x1·y1 + x2·y2`. The first coordinate is the timelike
//! direction.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used by the causal and pseudo-sphere predicates.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("zero vector has no causal character")]
    ZeroVector,
    #[error("vector is not timelike (⟨a,a⟩ = {0:e})")]
    NotTimelike(f64),
    #[error("pseudo-normal of a plane must be nonzero")]
    ZeroPseudoNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkVector(pub [f64; 3]);

impl MinkVector {
    pub const ZERO: MinkVector = MinkVector([0.0, 0.0, 0.0]);
    pub const E0: MinkVector = MinkVector([1.0, 0.0, 0.0]);
    pub const E1: MinkVector = MinkVector([0.0, 1.0, 0.0]);
    pub const E2: MinkVector = MinkVector([0.0, 0.0, 1.0]);

    pub const fn new(x0: f64, x1: f64, x2: f64) -> Self {
        MinkVector([x0, x1, x2])
    }

    pub fn pairing(&self, other: &MinkVector) -> f64 {
        pairing(self, other)
    }

    pub fn wedge(&self, other: &MinkVector) -> MinkVector {
        wedge(self, other)
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, k: f64) -> MinkVector {
        MinkVector([k * self.0[0], k * self.0[1], k * self.0[2]])
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &MinkVector) -> f64 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for MinkVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for MinkVector {
    type Output = MinkVector;
    fn add(self, rhs: MinkVector) -> MinkVector {
        MinkVector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for MinkVector {
    type Output = MinkVector;
    fn sub(self, rhs: MinkVector) -> MinkVector {
        MinkVector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        self.scale(-1.0)
    }
}

impl Mul<MinkVector> for f64 {
    type Output = MinkVector;
    fn mul(self, rhs: MinkVector) -> MinkVector {
        rhs.scale(self)
    }
}

impl fmt::Display for MinkVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// The pseudo-scalar product `−a0·b0 + a1·b1 + a2·b2`.
pub fn pairing(a: &MinkVector, b: &MinkVector) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2]
}

/// Lorentzian wedge product: the determinant with first row `(−e0, e1, e2)`.
///
/// The result is pseudo-orthogonal to both factors.
pub fn wedge(a: &MinkVector, b: &MinkVector) -> MinkVector {
    let [a0, a1, a2] = a.0;
    let [b0, b1, b2] = b.0;
    MinkVector([
        -(a1 * b2 - a2 * b1),
        -(a0 * b2 - a2 * b0),
        a0 * b1 - a1 * b0,
    ])
}

/// `√|⟨a,a⟩|`.
pub fn norm(a: &MinkVector) -> f64 {
    pairing(a, a).abs().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Causal {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Causal verdict together with `⟨a,a⟩ / ‖a‖²_euclid`, the signed relative
/// distance of the vector from the lightcone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalCharacter {
    pub kind: Causal,
    pub margin: f64,
}

/// Classify `a` by the sign of `⟨a,a⟩`, treating `|⟨a,a⟩| ≤ tol·‖a‖²_euclid`
/// as lightlike.
pub fn causal_character(a: &MinkVector, tol: f64) -> Result<CausalCharacter, MinkowskiError> {
    let scale = a.euclid_norm_sq();
    if scale == 0.0 {
        return Err(MinkowskiError::ZeroVector);
    }
    let margin = pairing(a, a) / scale;
    let kind = if margin.abs() <= tol {
        Causal::Lightlike
    } else if margin > 0.0 {
        Causal::Spacelike
    } else {
        Causal::Timelike
    };
    Ok(CausalCharacter { kind, margin })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PseudoSphere {
    /// H²(−1): ⟨x,x⟩ = −1.
    Hyperbolic,
    /// S²₁: ⟨x,x⟩ = +1.
    DeSitter,
    /// LC*: ⟨x,x⟩ = 0, x ≠ 0.
    Lightcone,
}

impl PseudoSphere {
    /// Right-hand side of the defining equation `⟨x,x⟩ = c`.
    pub fn level(self) -> f64 {
        match self {
            PseudoSphere::Hyperbolic => -1.0,
            PseudoSphere::DeSitter => 1.0,
            PseudoSphere::Lightcone => 0.0,
        }
    }

    /// Signed residual of the defining equation.
    ///
    /// For the lightcone the residual is relative to the Euclidean size of the
    /// vector, otherwise it is absolute.
    pub fn residual(self, a: &MinkVector) -> f64 {
        match self {
            PseudoSphere::Lightcone => {
                let scale = a.euclid_norm_sq();
                if scale == 0.0 {
                    f64::INFINITY
                } else {
                    pairing(a, a) / scale
                }
            }
            _ => pairing(a, a) - self.level(),
        }
    }
}

impl fmt::Display for PseudoSphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PseudoSphere::Hyperbolic => "H2(-1)",
            PseudoSphere::DeSitter => "S2_1",
            PseudoSphere::Lightcone => "LC*",
        })
    }
}

pub fn on_pseudo_sphere(a: &MinkVector, s: PseudoSphere, tol: f64) -> bool {
    if !a.is_finite() {
        return false;
    }
    s.residual(a).abs() <= tol
}

/// Future-directed means `⟨a, e0⟩ < 0`, i.e. `a0 > 0`.
pub fn is_future_directed(a: &MinkVector) -> Result<bool, MinkowskiError> {
    let q = pairing(a, a);
    if q >= 0.0 {
        return Err(MinkowskiError::NotTimelike(q));
    }
    Ok(pairing(a, &MinkVector::E0) < 0.0)
}

/// Affine plane `P(v, c) = {x : ⟨x, v⟩ = c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkPlane {
    v: MinkVector,
    c: f64,
}

impl MinkPlane {
    pub fn new(v: MinkVector, c: f64) -> Result<Self, MinkowskiError> {
        if v.euclid_norm_sq() == 0.0 {
            return Err(MinkowskiError::ZeroPseudoNormal);
        }
        Ok(MinkPlane { v, c })
    }

    pub fn pseudo_normal(&self) -> MinkVector {
        self.v
    }

    pub fn offset(&self) -> f64 {
        self.c
    }

    pub fn residual(&self, x: &MinkVector) -> f64 {
        pairing(x, &self.v) - self.c
    }

    pub fn contains(&self, x: &MinkVector, tol: f64) -> bool {
        self.residual(x).abs() <= tol
    }

    /// Spacelike plane for timelike pseudo-normal, and so on.
    pub fn causal_type(&self, tol: f64) -> Causal {
        match causal_character(&self.v, tol).map(|c| c.kind) {
            Ok(Causal::Timelike) => Causal::Spacelike,
            Ok(Causal::Spacelike) => Causal::Timelike,
            _ => Causal::Lightlike,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E0: MinkVector = MinkVector::E0;
    const E1: MinkVector = MinkVector::E1;
    const E2: MinkVector = MinkVector::E2;

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&E0, &E0), -1.0);
        let l = MinkVector::new(1.0, 1.0, 0.0);
        assert_eq!(pairing(&l, &l), 0.0);
        assert_eq!(
            pairing(&MinkVector::new(0.0, 1.0, 2.0), &MinkVector::new(3.0, 4.0, 5.0)),
            14.0
        );
    }

    #[test]
    fn wedge_of_basis_vectors() {
        assert_eq!(wedge(&E0, &E1), E2);
        assert_eq!(wedge(&E1, &E2), -E0);
        assert_eq!(wedge(&E2, &E0), E1);
        let a = MinkVector::new(0.3, -1.2, 4.0);
        assert_eq!(wedge(&a, &a), MinkVector::ZERO);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&E0), 1.0);
        assert_eq!(norm(&MinkVector::new(1.0, 1.0, 0.0)), 0.0);
        assert_eq!(norm(&MinkVector::new(0.0, 3.0, 4.0)), 5.0);
    }

    #[test]
    fn causal_examples() {
        let c = |v| causal_character(&v, DEFAULT_CAUSAL_TOL).unwrap().kind;
        assert_eq!(c(E0), Causal::Timelike);
        assert_eq!(c(MinkVector::new(1.0, 1.0, 0.0)), Causal::Lightlike);
        assert_eq!(c(E1), Causal::Spacelike);
        assert_eq!(
            causal_character(&MinkVector::ZERO, 1e-9),
            Err(MinkowskiError::ZeroVector)
        );
        // relative band: a huge nearly-null vector is still lightlike
        let big = MinkVector::new(1e8, 1e8 + 1e-3, 0.0);
        assert_eq!(c(big), Causal::Lightlike);
    }

    #[test]
    fn pseudo_sphere_membership() {
        let h = MinkVector::new(1f64.cosh(), 1f64.sinh(), 0.0);
        assert!(on_pseudo_sphere(&h, PseudoSphere::Hyperbolic, 1e-12));
        assert!(on_pseudo_sphere(&E1, PseudoSphere::DeSitter, 1e-12));
        assert!(on_pseudo_sphere(&MinkVector::new(1.0, 1.0, 0.0), PseudoSphere::Lightcone, 1e-12));
        assert!(!on_pseudo_sphere(&MinkVector::ZERO, PseudoSphere::Lightcone, 1e-12));
        assert!(!on_pseudo_sphere(&E1, PseudoSphere::Hyperbolic, 1e-12));
    }

    #[test]
    fn future_direction() {
        assert_eq!(is_future_directed(&E0), Ok(true));
        assert_eq!(is_future_directed(&-E0), Ok(false));
        assert_eq!(is_future_directed(&MinkVector::new(2.0, 1.0, 0.0)), Ok(true));
        assert!(matches!(is_future_directed(&E1), Err(MinkowskiError::NotTimelike(_))));
    }

    #[test]
    fn plane_membership() {
        let p = MinkPlane::new(E0, -1.0).unwrap();
        assert!(p.contains(&MinkVector::new(1.0, 5.0, -2.0), 1e-12));
        assert_eq!(p.causal_type(1e-9), Causal::Spacelike);
        assert_eq!(MinkPlane::new(E1, 0.0).unwrap().causal_type(1e-9), Causal::Timelike);
        assert_eq!(
            MinkPlane::new(MinkVector::new(1.0, 0.0, 1.0), 1.0).unwrap().causal_type(1e-9),
            Causal::Lightlike
        );
        assert_eq!(MinkPlane::new(MinkVector::ZERO, 0.0), Err(MinkowskiError::ZeroPseudoNormal));
    }

    fn vec3() -> impl Strategy<Value = MinkVector> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b, c)| MinkVector::new(a, b, c))
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(a in vec3(), b in vec3(), c in vec3(), k in -5.0..5.0f64) {
            let scale = 1.0 + a.euclid_norm() * (b.euclid_norm() + c.euclid_norm());
            prop_assert!((pairing(&a, &b) - pairing(&b, &a)).abs() <= 1e-12 * scale);
            let lhs = pairing(&(k * a + b), &c);
            let rhs = k * pairing(&a, &c) + pairing(&b, &c);
            let scale = 1.0 + (k.abs() * a.euclid_norm() + b.euclid_norm()) * c.euclid_norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale * 10.0);
        }

        #[test]
        fn wedge_is_pseudo_orthogonal_and_antisymmetric(a in vec3(), b in vec3()) {
            let w = wedge(&a, &b);
            let scale = 1.0 + a.euclid_norm() * b.euclid_norm() * (a.euclid_norm() + b.euclid_norm());
            prop_assert!(pairing(&w, &a).abs() <= 1e-10 * scale);
            prop_assert!(pairing(&w, &b).abs() <= 1e-10 * scale);
            prop_assert_eq!(w, -wedge(&b, &a));
        }

        #[test]
        fn causal_character_is_scale_invariant(a in vec3(), k in 0.001..1000.0f64) {
            prop_assume!(a.euclid_norm() > 1e-6);
            let c1 = causal_character(&a, DEFAULT_CAUSAL_TOL).unwrap();
            let c2 = causal_character(&a.scale(k), DEFAULT_CAUSAL_TOL).unwrap();
            prop_assert_eq!(c1.kind, c2.kind);
        }
    }
}
