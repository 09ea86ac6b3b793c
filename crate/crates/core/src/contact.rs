//! Order of contact with spheres and affine subspaces.
//!
//! A curve has k-point contact with `{g_1 = … = g_r = 0}` at `θ0` when every
//! `g_i ∘ γ` vanishes there to order `k`. Multiplicities are read off the
//! arc-length jets, so the thresholds below carry the right length units.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::focal::FocalData;
use crate::frenet::{arc_normalize, FrenetData};
use crate::jets::{Jet, VecJet};
use crate::linalg::{axpy, dot, norm, projector};

/// Relative threshold below which a normalized jet coefficient counts as zero.
pub const VANISHING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactQuery {
    Sphere { center: Vec<f64>, radius: f64 },
    /// `basepoint + span(directions)`; directions need not be orthonormal.
    Affine {
        basepoint: Vec<f64>,
        directions: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactOrder {
    Exact(usize),
    /// Every coefficient up to the jet order vanished.
    AtLeast(usize),
}

impl ContactOrder {
    /// Lower bound on the order.
    pub fn at_least(self) -> usize {
        match self {
            ContactOrder::Exact(k) | ContactOrder::AtLeast(k) => k,
        }
    }

    pub fn is_at_least(self, k: usize) -> bool {
        self.at_least() >= k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactResult {
    pub order: ContactOrder,
    /// First non-vanishing Taylor coefficient in arc length (0 if none).
    pub leading_coefficient: f64,
}

/// Index of the first coefficient above `tol(k)`.
fn multiplicity(f: &Jet, tol: impl Fn(usize) -> f64) -> ContactResult {
    for (k, &a) in f.coeffs().iter().enumerate() {
        if a.abs() >= tol(k) {
            return ContactResult {
                order: ContactOrder::Exact(k),
                leading_coefficient: a,
            };
        }
    }
    ContactResult {
        order: ContactOrder::AtLeast(f.order() + 1),
        leading_coefficient: 0.0,
    }
}

fn min_contact(results: impl IntoIterator<Item = ContactResult>) -> Option<ContactResult> {
    results.into_iter().min_by_key(|r| match r.order {
        ContactOrder::Exact(k) => (k, 0),
        ContactOrder::AtLeast(k) => (k, 1),
    })
}

/// Curvature length scale `1 / max_k ‖a_k‖^{1/(k−1)}` of an arc-length jet.
fn curvature_length(arc: &VecJet) -> f64 {
    let rate = (2..=arc.order())
        .map(|k| norm(&arc.coefficient(k)).powf(1.0 / (k as f64 - 1.0)))
        .fold(0.0, f64::max);
    if rate > 0.0 && rate.is_finite() {
        1.0 / rate
    } else {
        1.0
    }
}

fn sphere_contact(arc: &VecJet, center: &[f64], radius: f64) -> ContactResult {
    let offset = VecJet::new(
        arc.components()
            .iter()
            .zip(center)
            .map(|(g, q)| *g - *q)
            .collect(),
    )
    .expect("matching orders");
    let f = offset.norm_squared().scale(0.5) - 0.5 * radius * radius;
    let length = radius.max(f64::MIN_POSITIVE);
    multiplicity(&f, |k| VANISHING_TOL * length.powi(2 - k as i32))
}

fn functional_contacts(arc: &VecJet, basepoint: &[f64], normals: &[Vec<f64>]) -> Vec<ContactResult> {
    let length = curvature_length(arc);
    normals
        .iter()
        .map(|w| {
            let f = arc
                .components()
                .iter()
                .zip(w)
                .fold(Jet::constant(-dot(w, basepoint), arc.order()), |acc, (g, wi)| {
                    acc + g.scale(*wi)
                });
            multiplicity(&f, |k| VANISHING_TOL * length.powi(1 - k as i32))
        })
        .collect()
}

/// Orthonormal basis of the orthogonal complement of `span(directions)`.
fn annihilator(directions: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |v: &[f64], basis: &mut Vec<Vec<f64>>| {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                w = axpy(&w, -dot(&w, b), b);
            }
        }
        let n = norm(&w);
        if n > 1e-10 * norm(v).max(1e-300) {
            basis.push(w.iter().map(|x| x / n).collect());
        }
    };
    for d in directions {
        push(d, &mut basis);
    }
    let span_rank = basis.len();
    let p = projector(&basis, dim);
    for j in 0..dim {
        let mut e: Vec<f64> = (0..dim).map(|i| -p[(i, j)]).collect();
        e[j] += 1.0;
        push(&e, &mut basis);
    }
    basis.split_off(span_rank)
}

/// Contact order of the curve jet `v` (any regular parameter) with `query` at
/// its expansion point. Coefficients up to `n_max` are examined.
pub fn contact_order(v: &VecJet, query: &ContactQuery, n_max: usize) -> Result<ContactResult> {
    if v.order() < n_max {
        return Err(Error::InsufficientOrder {
            needed: n_max,
            have: v.order(),
        });
    }
    let arc = arc_normalize(&v.truncate(n_max))?.jet;
    match query {
        ContactQuery::Sphere { center, radius } => {
            if center.len() != arc.dim() || radius.is_nan() || *radius <= 0.0 {
                return Err(Error::DimensionError("sphere query does not fit the curve".into()));
            }
            Ok(sphere_contact(&arc, center, *radius))
        }
        ContactQuery::Affine {
            basepoint,
            directions,
        } => {
            if basepoint.len() != arc.dim() || directions.iter().any(|d| d.len() != arc.dim()) {
                return Err(Error::DimensionError("affine query does not fit the curve".into()));
            }
            let normals = annihilator(directions, arc.dim());
            Ok(min_contact(functional_contacts(&arc, basepoint, &normals)).unwrap_or(
                ContactResult {
                    order: ContactOrder::AtLeast(n_max + 1),
                    leading_coefficient: 0.0,
                },
            ))
        }
    }
}

/// Contact with the osculating `l`-sphere: centre `γ_l`, radius `R_l`, inside
/// the osculating `(l+1)`-plane. `l = m` is the osculating hypersphere.
pub fn osculating_sphere_contact(
    v: &VecJet,
    frenet: &FrenetData,
    focal: &FocalData,
    l: usize,
    n_max: usize,
) -> Result<ContactResult> {
    let m = frenet.m();
    if l == 0 || l > m {
        return Err(Error::DimensionError(format!("sphere dimension {l} outside 1..={m}")));
    }
    if v.order() < n_max {
        return Err(Error::InsufficientOrder {
            needed: n_max,
            have: v.order(),
        });
    }
    let arc = arc_normalize(&v.truncate(n_max))?.jet;
    let sphere = sphere_contact(&arc, &focal.partial_centers[l - 1], focal.radii[l - 1]);
    let gamma = arc.value();
    let planes = functional_contacts(&arc, &gamma, &frenet.frame[l + 1..]);
    Ok(min_contact(std::iter::once(sphere).chain(planes)).expect("sphere result present"))
}

/// Contact with the osculating `k`-plane `γ + span(t, n_1, …, n_{k−1})`.
pub fn osculating_plane_contact(
    v: &VecJet,
    frenet: &FrenetData,
    k: usize,
    n_max: usize,
) -> Result<ContactResult> {
    let m = frenet.m();
    if k == 0 || k > m {
        return Err(Error::DimensionError(format!("plane dimension {k} outside 1..={m}")));
    }
    let query = ContactQuery::Affine {
        basepoint: v.value(),
        directions: frenet.frame[..k].to_vec(),
    };
    contact_order(v, &query, n_max)
}
