//! Arc-length normalization, Frenet frames and Euclidean curvatures.
//!
//! Everything here runs in jet arithmetic, so the frame vectors and the
//! curvatures come out as jets in the arc-length variable `s`. Downstream code
//! differentiates them freely (focal curvatures, the focal curve's own frame).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{Jet, VecJet};
use crate::linalg::{determinant, dot, norm};

/// Leading normalized Gram determinants of `(γ', …, γ^(m))` must exceed this.
pub const GOODNESS_TOL: f64 = 1e-10;
/// `|κ_m| < FLATTENING_TOL · κ_1` marks a flattening.
pub const FLATTENING_TOL: f64 = 1e-9;
const SPEED_TOL: f64 = 1e-12;

/// A curve jet re-expanded in its arc-length parameter about the same point.
#[derive(Debug, Clone)]
pub struct ArcJet {
    /// `γ(s)` with `s = 0` at the expansion point.
    pub jet: VecJet,
    /// `ds/dθ` at the expansion point.
    pub speed: f64,
    /// `θ(s) - θ0`.
    pub param_of_arc: Jet,
}

impl ArcJet {
    pub fn order(&self) -> usize {
        self.jet.order()
    }

    pub fn dim(&self) -> usize {
        self.jet.dim()
    }
}

/// Re-expands `v` (a jet in any regular parameter) in arc length: integrate the
/// speed jet, revert `s(θ)`, compose.
pub fn arc_normalize(v: &VecJet) -> Result<ArcJet> {
    if v.order() == 0 {
        return Err(Error::InsufficientOrder { needed: 1, have: 0 });
    }
    let velocity = v.derivative()?;
    let speed_sq = velocity.norm_squared();
    let speed0 = speed_sq.value().max(0.0).sqrt();
    if speed0 <= SPEED_TOL * norm(&v.value()).max(1.0) {
        return Err(Error::SingularParametrization(speed0));
    }
    let arc_of_param = speed_sq.sqrt()?.integrate(0.0)?;
    let param_of_arc = arc_of_param.revert()?;
    let offsets = VecJet::new(
        v.components()
            .iter()
            .map(|c| {
                let mut shifted = *c;
                shifted = shifted - c.value();
                shifted
            })
            .collect(),
    )?;
    let composed = offsets.compose(&param_of_arc)?;
    let base = v.value();
    let jet = VecJet::new(
        composed
            .components()
            .iter()
            .zip(&base)
            .map(|(c, b)| *c + *b)
            .collect(),
    )?;
    Ok(ArcJet {
        jet,
        speed: speed0,
        param_of_arc,
    })
}

/// Frame vectors and curvatures as jets in arc length.
#[derive(Debug, Clone)]
pub struct FrenetJets {
    /// `t, n_1, …, n_m`.
    pub frame: Vec<VecJet>,
    /// `κ_1, …, κ_m`.
    pub curvatures: Vec<Jet>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrenetData {
    /// Rows `t, n_1, …, n_m`.
    pub frame: Vec<Vec<f64>>,
    pub curvatures: Vec<f64>,
    /// `ds/dθ`.
    pub speed: f64,
    #[serde(skip)]
    pub arc_jets: Option<FrenetJets>,
}

impl FrenetData {
    pub fn m(&self) -> usize {
        self.curvatures.len()
    }

    pub fn tangent(&self) -> &[f64] {
        &self.frame[0]
    }

    /// `n_i` for `i = 1..=m`.
    pub fn normal(&self, i: usize) -> &[f64] {
        &self.frame[i]
    }

    pub fn jets(&self) -> Option<&FrenetJets> {
        self.arc_jets.as_ref()
    }
}

/// Frenet frame and curvatures at the expansion point only.
pub fn frenet_at(arc: &ArcJet, m: usize) -> Result<FrenetData> {
    let mut data = frenet_jets(arc, m, 0)?;
    data.arc_jets = None;
    Ok(data)
}

/// Frenet apparatus with every frame vector and curvature as a jet of order
/// `order` in arc length. Needs `arc.order() >= m + 1 + order`.
pub fn frenet_jets(arc: &ArcJet, m: usize, order: usize) -> Result<FrenetData> {
    let dim = arc.dim();
    if m + 1 != dim || m == 0 {
        return Err(Error::DimensionError(format!(
            "m = {m} does not match ambient dimension {dim}"
        )));
    }
    let needed = m + 1 + order;
    if arc.order() < needed {
        return Err(Error::InsufficientOrder {
            needed,
            have: arc.order(),
        });
    }
    // Frame jets carry one extra order so that curvatures reach `order`.
    let frame_order = order + 1;
    let mut derivs = Vec::with_capacity(m);
    let mut d = arc.jet.clone();
    for _ in 0..m {
        d = d.derivative()?;
        derivs.push(d.truncate(frame_order));
    }

    let mut frame: Vec<VecJet> = Vec::with_capacity(m + 1);
    let mut gram_ratio = 1.0;
    for (k, dk) in derivs.iter().enumerate() {
        let raw = norm(&dk.value());
        let w = orthogonalize(dk, &frame);
        let residual = norm(&w.value());
        let ratio = if raw > 0.0 { residual / raw } else { 0.0 };
        gram_ratio *= ratio * ratio;
        if gram_ratio <= GOODNESS_TOL || !gram_ratio.is_finite() {
            let _ = k;
            return Err(Error::NotGoodCurve(gram_ratio));
        }
        frame.push(normalize(&w)?);
    }
    frame.push(completion(&frame, dim, frame_order)?);

    let mut curvatures = Vec::with_capacity(m);
    for i in 1..=m {
        let de = frame[i - 1].derivative()?;
        curvatures.push(de.dot(&frame[i].truncate(order)));
    }
    let frame: Vec<VecJet> = frame.iter().map(|f| f.truncate(order)).collect();

    Ok(FrenetData {
        frame: frame.iter().map(VecJet::value).collect(),
        curvatures: curvatures.iter().map(Jet::value).collect(),
        speed: arc.speed,
        arc_jets: Some(FrenetJets { frame, curvatures }),
    })
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
fn orthogonalize(v: &VecJet, basis: &[VecJet]) -> VecJet {
    let mut w = v.clone();
    for _ in 0..2 {
        for e in basis {
            let c = w.dot(e);
            w = w.add_scaled(&(-c), e);
        }
    }
    w
}

fn normalize(w: &VecJet) -> Result<VecJet> {
    let inv = w.norm_squared().sqrt()?.recip()?;
    Ok(w.scale(&inv))
}

/// The unit vector completing `basis` (dim - 1 orthonormal jets) to a
/// positively oriented orthonormal frame.
fn completion(basis: &[VecJet], dim: usize, order: usize) -> Result<VecJet> {
    let values: Vec<Vec<f64>> = basis.iter().map(VecJet::value).collect();
    let best = (0..dim)
        .map(|j| {
            let residual_sq = 1.0 - values.iter().map(|b| b[j] * b[j]).sum::<f64>();
            (j, residual_sq)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .unwrap_or(0);
    let mut axis = vec![0.0; dim];
    axis[best] = 1.0;
    let w = orthogonalize(&VecJet::constant(&axis, order), basis);
    let mut n = normalize(&w)?;
    let mut rows = values;
    rows.push(n.value());
    if determinant(&rows) < 0.0 {
        n = n.scale_f64(-1.0);
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoodnessReport {
    pub is_good: bool,
    /// Smallest leading Gram determinant of `(γ', …, γ^(m))`, normalized by the
    /// product of squared norms (so it lies in `[0, 1]`).
    pub min_gram_det: f64,
    pub is_flattening: bool,
}

/// `true` when the last curvature is negligible against the first, i.e. the
/// osculating hypersphere's centre is at infinity. For plane curves only an
/// exactly vanishing (or non-finite) curvature counts.
pub fn is_flattening_curvatures(curvatures: &[f64]) -> bool {
    let m = curvatures.len();
    let last = curvatures[m - 1];
    if !last.is_finite() {
        return true;
    }
    if m == 1 {
        last == 0.0
    } else {
        last.abs() < FLATTENING_TOL * curvatures[0].abs()
    }
}

/// Checks the good-curve condition at the expansion point of `v`. Never fails;
/// insufficient order is reported as not good.
pub fn is_good(v: &VecJet, m: usize) -> GoodnessReport {
    let bad = GoodnessReport {
        is_good: false,
        min_gram_det: 0.0,
        is_flattening: false,
    };
    if v.order() < m || v.dim() != m + 1 {
        return bad;
    }
    let derivs: Vec<Vec<f64>> = (1..=m).map(|k| v.derivative_at(k)).collect();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut ratio = 1.0f64;
    let mut min_ratio = 1.0f64;
    for d in &derivs {
        let raw = norm(d);
        let w = scalar_orthogonalize(d, &ortho);
        let res = norm(&w);
        let r = if raw > 0.0 { res / raw } else { 0.0 };
        ratio *= r * r;
        min_ratio = min_ratio.min(ratio);
        if res > 0.0 {
            ortho.push(w.iter().map(|x| x / res).collect());
        }
    }
    let good = min_ratio > GOODNESS_TOL;
    if !good {
        return GoodnessReport {
            min_gram_det: min_ratio,
            ..bad
        };
    }
    let is_flattening = if v.order() < m + 1 {
        false
    } else if m == 1 {
        let d1 = &derivs[0];
        let d2 = v.derivative_at(2);
        let cross = d1[0] * d2[1] - d1[1] * d2[0];
        cross.abs() <= FLATTENING_TOL * norm(d1) * norm(&d2)
    } else {
        match arc_normalize(v).and_then(|a| frenet_at(&a, m)) {
            Ok(f) => is_flattening_curvatures(&f.curvatures),
            Err(_) => false,
        }
    };
    GoodnessReport {
        is_good: true,
        min_gram_det: min_ratio,
        is_flattening,
    }
}

fn scalar_orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for e in basis {
            let c = dot(&w, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
    }
    w
}

/// `K · frame` for the tridiagonal antisymmetric Frenet matrix `K`.
pub fn frenet_matrix_times(curvatures: &[f64], rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = curvatures.len();
    (0..=m)
        .map(|i| {
            let mut out = vec![0.0; rows[i].len()];
            if i >= 1 {
                for (o, x) in out.iter_mut().zip(&rows[i - 1]) {
                    *o -= curvatures[i - 1] * x;
                }
            }
            if i < m {
                for (o, x) in out.iter_mut().zip(&rows[i + 1]) {
                    *o += curvatures[i] * x;
                }
            }
            out
        })
        .collect()
}
