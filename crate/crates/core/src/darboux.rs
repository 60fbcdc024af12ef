//! The five pseudo-spherical Darboux images, their `δ` invariants and the
//! normalized direction fields `T_t`, `T_n`, `T_b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::FrameSample;
use crate::jet::{Jet, JetError, JetVector};
use crate::minkowski::PseudoSphere;

/// Domain margins at or below this are treated as violated.
pub const MARGIN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DarbouxError {
    #[error("image {kind} is undefined here: {guard} fails (margin {margin:e})")]
    DomainViolation {
        kind: ImageKind,
        guard: &'static str,
        margin: f64,
    },
    #[error("{0} has a degenerate derivative here")]
    DegenerateDerivative(DirectionField),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImageKind {
    /// `(τ_g t − κ_g n)/√(κ_g² − τ_g²)` in the hyperbolic plane.
    RectTimelike,
    /// `(τ_g t − κ_g n)/√(τ_g² − κ_g²)` in de Sitter space.
    RectSpacelike,
    /// Rectifying timelike image plus `b`, in the lightcone.
    RectLightlike,
    /// `(τ_g t − κ_n b)/√(κ_n² + τ_g²)` in de Sitter space.
    OscSpacelike,
    /// Osculating spacelike image plus `n`, in the lightcone.
    OscLightlike,
}

impl ImageKind {
    pub const ALL: [ImageKind; 5] = [
        ImageKind::RectTimelike,
        ImageKind::RectSpacelike,
        ImageKind::RectLightlike,
        ImageKind::OscSpacelike,
        ImageKind::OscLightlike,
    ];

    /// Short code used on the command line.
    pub fn code(self) -> &'static str {
        match self {
            ImageKind::RectTimelike => "Tr",
            ImageKind::RectSpacelike => "Sr",
            ImageKind::RectLightlike => "Lr",
            ImageKind::OscSpacelike => "So",
            ImageKind::OscLightlike => "Lo",
        }
    }

    pub fn sphere(self) -> PseudoSphere {
        match self {
            ImageKind::RectTimelike => PseudoSphere::Hyperbolic,
            ImageKind::RectSpacelike | ImageKind::OscSpacelike => PseudoSphere::DeSitter,
            ImageKind::RectLightlike | ImageKind::OscLightlike => PseudoSphere::Lightcone,
        }
    }

    /// Guard, as text.
    pub fn guard(self) -> &'static str {
        match self {
            ImageKind::RectTimelike | ImageKind::RectLightlike => "κ_g² > τ_g²",
            ImageKind::RectSpacelike => "τ_g² > κ_g²",
            ImageKind::OscSpacelike | ImageKind::OscLightlike => "(κ_n, τ_g) ≠ (0, 0)",
        }
    }

    /// The frame vector the image is dual to: `b` for the rectifying kinds,
    /// `n` for the osculating ones.
    pub fn dual_field(self) -> DirectionField {
        match self {
            ImageKind::OscSpacelike | ImageKind::OscLightlike => DirectionField::Normal,
            _ => DirectionField::Binormal,
        }
    }

    /// Field along which the image moves: `(image)′ = δ · field`.
    pub fn matched_field(self) -> DirectionField {
        self.dual_field()
    }

    /// Constant `c` in `⟨w, v⟩ = c` between the image `v` and its dual-side
    /// curve `w`.
    pub fn pairing_constant(self) -> f64 {
        match self {
            ImageKind::RectLightlike => 1.0,
            ImageKind::OscLightlike => -1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for ImageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ImageKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ImageKind::ALL
            .into_iter()
            .find(|k| k.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown image kind '{}' (expected Tr, Sr, Lr, So or Lo)", s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirectionField {
    Tangent,
    Normal,
    Binormal,
}

impl fmt::Display for DirectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectionField::Tangent => "T_t",
            DirectionField::Normal => "T_n",
            DirectionField::Binormal => "T_b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainVerdict {
    pub kind: ImageKind,
    pub satisfied: bool,
    pub margin: f64,
}

fn margin_jet(kind: ImageKind, f: &FrameSample) -> Jet {
    let (kn, kg, tg) = (&f.kappa_n, &f.kappa_g, &f.tau_g);
    match kind {
        ImageKind::RectTimelike | ImageKind::RectLightlike => &(kg * kg) - &(tg * tg),
        ImageKind::RectSpacelike => &(tg * tg) - &(kg * kg),
        ImageKind::OscSpacelike | ImageKind::OscLightlike => &(kn * kn) + &(tg * tg),
    }
}

pub fn domain_predicate(kind: ImageKind, f: &FrameSample) -> DomainVerdict {
    let margin = margin_jet(kind, f).value();
    DomainVerdict {
        kind,
        satisfied: margin > MARGIN_TOL,
        margin,
    }
}

fn guarded_margin(kind: ImageKind, f: &FrameSample) -> Result<Jet, DarbouxError> {
    let m = margin_jet(kind, f);
    if m.value() > MARGIN_TOL {
        Ok(m)
    } else {
        Err(DarbouxError::DomainViolation {
            kind,
            guard: kind.guard(),
            margin: m.value(),
        })
    }
}

/// The image as a jet in arc length (order `K-2`).
pub fn image(kind: ImageKind, f: &FrameSample) -> Result<JetVector, DarbouxError> {
    let root = guarded_margin(kind, f)?.sqrt()?;
    let (t, n, b) = (&f.tangent, &f.normal, &f.binormal);
    Ok(match kind {
        ImageKind::RectTimelike | ImageKind::RectSpacelike | ImageKind::RectLightlike => {
            let v = (&t.mul_jet(&f.tau_g) - &n.mul_jet(&f.kappa_g)).div_jet(&root)?;
            if kind == ImageKind::RectLightlike {
                &v + b
            } else {
                v
            }
        }
        ImageKind::OscSpacelike | ImageKind::OscLightlike => {
            let v = (&t.mul_jet(&f.tau_g) - &b.mul_jet(&f.kappa_n)).div_jet(&root)?;
            if kind == ImageKind::OscLightlike {
                &v + n
            } else {
                v
            }
        }
    })
}

/// The invariant `δ` as a jet in arc length (order `K-3`).
pub fn delta(kind: ImageKind, f: &FrameSample) -> Result<Jet, DarbouxError> {
    let m = guarded_margin(kind, f)?;
    let (kn, kg, tg) = (&f.kappa_n, &f.kappa_g, &f.tau_g);
    Ok(match kind {
        ImageKind::RectTimelike | ImageKind::RectSpacelike | ImageKind::RectLightlike => {
            // (κ_g τ_g′ − κ_g′ τ_g) over the margin; for the spacelike kind the
            // margin has the opposite sign and the quotient is added.
            let num = &(kg * &tg.deriv()) - &(&kg.deriv() * tg);
            let q = num.try_div(&m)?;
            match kind {
                ImageKind::RectTimelike => kn - &q,
                ImageKind::RectSpacelike => kn + &q,
                _ => &(kn - &q) + &m.sqrt()?,
            }
        }
        ImageKind::OscSpacelike | ImageKind::OscLightlike => {
            let num = &(kn * &tg.deriv()) - &(&kn.deriv() * tg);
            let d = kg + &num.try_div(&m)?;
            if kind == ImageKind::OscLightlike {
                &d + &m.sqrt()?
            } else {
                d
            }
        }
    })
}

/// Normalization of `t′`, `n′` or `b′` by its own pseudo-norm.
pub fn direction_field(which: DirectionField, f: &FrameSample) -> Result<JetVector, DarbouxError> {
    let v = match which {
        DirectionField::Tangent => f.tangent.deriv(),
        DirectionField::Normal => f.normal.deriv(),
        DirectionField::Binormal => f.binormal.deriv(),
    };
    if v.pairing(&v).value().abs() <= MARGIN_TOL {
        return Err(DarbouxError::DegenerateDerivative(which));
    }
    Ok(v.normalized()?)
}

/// `‖(image)′ − δ · T‖` at the point, with `T` the matched direction field.
pub fn derivative_identity_residual(kind: ImageKind, f: &FrameSample) -> Result<f64, DarbouxError> {
    let d_image = image(kind, f)?.deriv();
    let d = delta(kind, f)?;
    let field = direction_field(kind.matched_field(), f)?;
    let r = &d_image - &field.mul_jet(&d);
    Ok(r.value().euclid_norm())
}
