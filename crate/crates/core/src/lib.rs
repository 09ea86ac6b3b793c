//! Focal curves and focal curvatures of good curves in Euclidean space.
//!
//! Start from [`curvespec`] to describe a curve, then [`frenet`] for its
//! Frenet apparatus, [`focal`] for the focal curve, [`contact`] for contact
//! orders with spheres and affine subspaces, and [`events`] for vertex,
//! pseudo-vertex and flattening detection along a sample grid.

pub mod contact;
pub mod curvespec;
pub mod error;
pub mod events;
pub mod focal;
pub mod frenet;
pub mod grid;
pub mod jets;
pub mod linalg;
pub mod verify;

pub use curvespec::{builtin, builtin_names, parse_curve, print_curve, CurveModel};
pub use error::{Error, Location, Result};
pub use jets::{Jet, VecJet, MAX_ORDER};

/// Jet order `2m + 3` used by default, capped at [`MAX_ORDER`].
pub fn default_order(m: usize) -> usize {
    (2 * m + 3).min(MAX_ORDER)
}
