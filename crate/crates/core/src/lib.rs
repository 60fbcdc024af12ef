//! Darboux frames of curves on spacelike surfaces in Minkowski 3-space,
//! their pseudo-spherical images and the singularities of those images.

pub mod curve;
pub mod darboux;
pub mod expr;
pub mod jet;
pub mod minkowski;
pub mod singular;
pub mod surface;
