//! Focal curve, focal curvatures, osculating sphere centres and focal planes.
//!
//! The centre of the osculating hypersphere is the solution `q` of
//! `γ^(k) · q = g^(k)`, `k = 1..=m+1`, with `g = ½‖γ‖²`. Here that system is
//! solved in jet arithmetic, so `C_γ(s)` and the focal curvatures
//! `c_i = ⟨C_γ − γ, n_i⟩` come out as jets in arc length.

use serde::Serialize;

use crate::curvespec::CurveModel;
use crate::default_order;
use crate::error::{Error, Result};
use crate::frenet::{arc_normalize, frenet_jets, is_flattening_curvatures, ArcJet, FrenetData};
use crate::grid::{map_samples, Grid};
use crate::jets::{Jet, VecJet};
use crate::linalg::{axpy, distance, norm, solve_jet_system};

/// Condition numbers of the equilibrated system above this are refused.
pub const CONDITION_LIMIT: f64 = 1e13;

#[derive(Debug, Clone)]
pub struct FocalJets {
    /// `C_γ(s)`.
    pub center: VecJet,
    /// `c_1(s), …, c_m(s)`.
    pub focal_curvatures: Vec<Jet>,
    /// `c_m' + c_{m-1} κ_m`, one order lower than the focal curvatures.
    pub vertex_residual: Jet,
    /// `‖C_γ − γ‖²`.
    pub radius_sq: Jet,
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalData {
    pub center: Vec<f64>,
    pub focal_curvatures: Vec<f64>,
    /// `R_l = sqrt(c_1² + … + c_l²)`.
    pub radii: Vec<f64>,
    /// `γ_l = γ + c_1 n_1 + … + c_l n_l`, `l = 1..=m`.
    pub partial_centers: Vec<Vec<f64>>,
    /// `c_m' + c_{m-1} κ_m` (with `c_0 = 0`).
    pub vertex_residual: f64,
    /// `d/ds c_i`.
    pub focal_curvature_derivatives: Vec<f64>,
    /// `d/ds ‖C_γ − γ‖²`.
    pub radius_sq_derivative: f64,
    /// 1-norm condition number of the solved system.
    pub condition: f64,
    #[serde(skip)]
    pub jets: Option<FocalJets>,
}

impl FocalData {
    pub fn m(&self) -> usize {
        self.focal_curvatures.len()
    }

    /// `c_m' − (R_m²)'/(2 c_m)`, which equals `−c_{m−1} κ_m`; undefined where `c_m = 0`.
    pub fn correcting_term(&self) -> Option<f64> {
        let m = self.m();
        let cm = self.focal_curvatures[m - 1];
        (cm != 0.0).then(|| {
            self.focal_curvature_derivatives[m - 1] - self.radius_sq_derivative / (2.0 * cm)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocalPlane {
    pub codim: usize,
    pub basepoint: Vec<f64>,
    /// Orthonormal; empty for the terminal point `A^{m+1} = {C_γ}`.
    pub directions: Vec<Vec<f64>>,
}

fn check_flattening(frenet: &FrenetData) -> Result<()> {
    if is_flattening_curvatures(&frenet.curvatures) {
        return Err(Error::FlatteningPoint(frenet.curvatures[frenet.m() - 1]));
    }
    Ok(())
}

/// Solves the centre system to jet order `order` in arc length.
fn solve_center(arc: &ArcJet, m: usize, order: usize) -> Result<(VecJet, f64)> {
    let needed = m + 1 + order;
    if arc.order() < needed {
        return Err(Error::InsufficientOrder {
            needed,
            have: arc.order(),
        });
    }
    let g = arc.jet.norm_squared().scale(0.5);
    let mut rows = Vec::with_capacity(m + 1);
    let mut rhs = Vec::with_capacity(m + 1);
    let mut d = arc.jet.clone();
    let mut gk = g;
    for _ in 0..=m {
        d = d.derivative()?;
        gk = gk.derivative()?;
        rows.push(d.truncate(order));
        rhs.push(gk.truncate(order));
    }
    let sol = solve_jet_system(&rows, &rhs)?;
    if sol.condition > CONDITION_LIMIT {
        return Err(Error::IllConditionedSystem(sol.condition));
    }
    Ok((sol.solution, sol.condition))
}

/// Centre of the osculating hypersphere at the expansion point.
pub fn focal_center(arc: &ArcJet, frenet: &FrenetData) -> Result<Vec<f64>> {
    check_flattening(frenet)?;
    Ok(solve_center(arc, frenet.m(), 0)?.0.value())
}

/// Full focal apparatus at the expansion point. `frenet` must carry arc jets
/// of order at least 1.
pub fn focal_data(arc: &ArcJet, frenet: &FrenetData) -> Result<FocalData> {
    check_flattening(frenet)?;
    let m = frenet.m();
    let jets = frenet.jets().ok_or(Error::InsufficientOrder { needed: 1, have: 0 })?;
    let frame_order = jets.curvatures[0].order();
    let order = frame_order.min(arc.order().saturating_sub(m + 1));
    if order < 1 {
        return Err(Error::InsufficientOrder {
            needed: m + 2,
            have: arc.order(),
        });
    }
    let (center, condition) = solve_center(arc, m, order)?;
    let offset = center.sub(&arc.jet.truncate(order));

    let c: Vec<Jet> = (1..=m)
        .map(|i| offset.dot(&jets.frame[i].truncate(order)))
        .collect();
    let dc: Vec<Jet> = c.iter().map(Jet::derivative).collect::<Result<_>>()?;
    let kappa_m = jets.curvatures[m - 1].truncate(order - 1);
    let residual = if m == 1 {
        dc[0]
    } else {
        dc[m - 1] + c[m - 2].truncate(order - 1) * kappa_m
    };
    let radius_sq = offset.norm_squared();

    let gamma = arc.jet.value();
    let values: Vec<f64> = c.iter().map(Jet::value).collect();
    let mut radii = Vec::with_capacity(m);
    let mut partial_centers = Vec::with_capacity(m);
    let mut acc = 0.0;
    let mut point = gamma;
    for (i, ci) in values.iter().enumerate() {
        acc += ci * ci;
        radii.push(acc.sqrt());
        point = axpy(&point, *ci, &frenet.frame[i + 1]);
        partial_centers.push(point.clone());
    }
    // γ_m is C_γ by construction.
    let center_value = center.value();
    partial_centers[m - 1] = center_value.clone();

    Ok(FocalData {
        center: center_value,
        focal_curvatures: values,
        radii,
        partial_centers,
        vertex_residual: residual.value(),
        focal_curvature_derivatives: dc.iter().map(Jet::value).collect(),
        radius_sq_derivative: radius_sq.derivative_at(1),
        condition,
        jets: Some(FocalJets {
            center,
            focal_curvatures: c,
            vertex_residual: residual,
            radius_sq,
        }),
    })
}

/// Focal curvatures from the curvature jets alone:
/// `c_1 = 1/κ_1`, `c_{i+1} = (c_i' + c_{i−1} κ_i)/κ_{i+1}`. Each step costs one
/// jet order.
pub fn focal_curvature_jets_recursive(frenet: &FrenetData) -> Result<Vec<Jet>> {
    let m = frenet.m();
    let jets = frenet.jets().ok_or(Error::InsufficientOrder {
        needed: m.saturating_sub(1),
        have: 0,
    })?;
    let kappa = &jets.curvatures;
    let top = kappa[0].order();
    if top + 1 < m {
        return Err(Error::InsufficientOrder {
            needed: m - 1,
            have: top,
        });
    }
    let mut c: Vec<Jet> = Vec::with_capacity(m);
    c.push(kappa[0].recip()?);
    for i in 1..m {
        let k_next = kappa[i];
        if is_flattening_curvatures(&[frenet.curvatures[0], k_next.value()]) {
            return Err(Error::CurvatureZero { index: i + 1 });
        }
        let dc = c[i - 1].derivative()?;
        let ord = dc.order();
        let num = if i >= 2 {
            dc + c[i - 2].truncate(ord) * kappa[i - 1].truncate(ord)
        } else {
            dc
        };
        c.push(num.checked_div(&k_next.truncate(ord))?);
    }
    Ok(c)
}

pub fn focal_curvatures_recursive(frenet: &FrenetData) -> Result<Vec<f64>> {
    Ok(focal_curvature_jets_recursive(frenet)?
        .iter()
        .map(Jet::value)
        .collect())
}

/// The flag `A^1 ⊃ … ⊃ A^{m+1}` of focal planes at the expansion point.
pub fn focal_planes(arc: &ArcJet, frenet: &FrenetData, focal: &FocalData) -> Vec<FocalPlane> {
    let m = frenet.m();
    let gamma = arc.jet.value();
    (1..=m + 1)
        .map(|k| FocalPlane {
            codim: k,
            basepoint: if k == 1 {
                gamma.clone()
            } else {
                focal.partial_centers[k - 2].clone()
            },
            directions: frenet.frame[k..].to_vec(),
        })
        .collect()
}

/// Everything computed at one parameter value.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub theta: f64,
    pub arc: ArcJet,
    pub frenet: FrenetData,
    /// `Err(FlatteningPoint)` marks a centre at infinity.
    pub focal: Result<FocalData>,
}

/// Runs arc normalization, Frenet and focal stages at `theta` with jets of
/// order `order` (default `2m + 3`).
pub fn analyze_point(model: &CurveModel, theta: f64, order: Option<usize>) -> Result<PointAnalysis> {
    let m = model.m();
    let order = order.unwrap_or_else(|| default_order(m));
    let v = model.eval_jet(theta, order)?;
    let arc = arc_normalize(&v)?;
    let frame_order = order.checked_sub(m + 1).ok_or(Error::InsufficientOrder {
        needed: m + 1,
        have: order,
    })?;
    let frenet = frenet_jets(&arc, m, frame_order)?;
    let focal = focal_data(&arc, &frenet);
    Ok(PointAnalysis {
        theta,
        arc,
        frenet,
        focal,
    })
}

#[derive(Debug, Clone)]
pub struct FocalSample {
    pub theta: f64,
    pub focal: Result<FocalData>,
}

impl FocalSample {
    pub fn is_at_infinity(&self) -> bool {
        matches!(self.focal, Err(Error::FlatteningPoint(_)))
    }
}

/// Samples `C_γ` over `grid`. Flattenings and other per-sample failures are
/// kept in place, so the result always has `grid.samples` entries.
pub fn focal_curve(model: &CurveModel, grid: &Grid, order: Option<usize>) -> Vec<FocalSample> {
    map_samples(&grid.thetas(), |theta| FocalSample {
        theta,
        focal: analyze_point(model, theta, order).and_then(|p| p.focal),
    })
}

/// Largest distance between consecutive flag members that should coincide:
/// directions of `A^{k+1}` inside `A^k`, and basepoint offsets inside `A^k`.
pub fn flag_nesting_defect(planes: &[FocalPlane]) -> f64 {
    let mut worst: f64 = 0.0;
    for pair in planes.windows(2) {
        let (outer, inner) = (&pair[0], &pair[1]);
        let residual = |v: &[f64]| {
            let mut r = v.to_vec();
            for d in &outer.directions {
                let c: f64 = r.iter().zip(d).map(|(a, b)| a * b).sum();
                r = axpy(&r, -c, d);
            }
            norm(&r)
        };
        for d in &inner.directions {
            worst = worst.max(residual(d));
        }
        let offset: Vec<f64> = inner
            .basepoint
            .iter()
            .zip(&outer.basepoint)
            .map(|(a, b)| a - b)
            .collect();
        let scale = norm(&offset).max(1.0);
        worst = worst.max(residual(&offset) / scale);
    }
    worst
}

/// `‖γ_l − γ_{l−1}‖` with `γ_0 = γ`.
pub fn partial_center_gap(gamma: &[f64], focal: &FocalData, l: usize) -> f64 {
    let prev = if l == 1 {
        gamma
    } else {
        &focal.partial_centers[l - 2]
    };
    distance(&focal.partial_centers[l - 1], prev)
}
