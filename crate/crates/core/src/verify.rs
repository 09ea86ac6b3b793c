//! Residual suites for the identities relating curvatures, focal curvatures and
//! the focal curve. Each suite samples a grid and reports per-sample residuals;
//! samples where a quantity is undefined are skipped and listed.

use serde::Serialize;

use crate::curvespec::CurveModel;
use crate::default_order;
use crate::error::{Error, Result};
use crate::focal::{
    analyze_point, flag_nesting_defect, focal_curvature_jets_recursive, focal_planes,
    PointAnalysis,
};
use crate::frenet::{arc_normalize, frenet_at, is_good, GOODNESS_TOL};
use crate::grid::{map_samples, Grid};
use crate::jets::Jet;
use crate::linalg::{dot, fit_sphere, norm, projector, sub};

/// `max_abs` below this counts as passing unless a suite says otherwise.
pub const DEFAULT_PASS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub theorem_id: String,
    pub thetas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs: f64,
    /// Magnitude the residuals were divided by (1 when already dimensionless).
    pub scale: f64,
    pub skipped: Vec<f64>,
}

impl ResidualReport {
    fn build(id: &str, samples: Vec<(f64, Option<f64>)>, scale: f64) -> Self {
        let mut thetas = Vec::new();
        let mut residuals = Vec::new();
        let mut skipped = Vec::new();
        for (t, r) in samples {
            match r {
                Some(r) => {
                    thetas.push(t);
                    residuals.push(r);
                }
                None => skipped.push(t),
            }
        }
        let max_abs = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
        ResidualReport {
            theorem_id: id.to_string(),
            thetas,
            residuals,
            max_abs,
            scale,
            skipped,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        !self.residuals.is_empty() && self.max_abs < tol
    }
}

fn sample<F>(model: &CurveModel, grid: &Grid, f: F) -> Vec<(f64, Option<f64>)>
where
    F: Fn(&PointAnalysis) -> Option<f64> + Sync + Send,
{
    map_samples(&grid.thetas(), |t| {
        let r = analyze_point(model, t, None).ok().and_then(|p| f(&p));
        (t, r)
    })
}

/// `|a − b| / max(1, |a|, |b|)`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarFrenetForm {
    /// Rows exactly as stated for curves on a hypersphere.
    Spherical,
    /// Last row carries the `−(R_m²)'/(2c_m)` correction.
    Corrected,
}

/// Rows `1 − κ_1 c_1` and `c_i' − (−κ_i c_{i−1} + κ_{i+1} c_{i+1})`, each
/// relative to the largest term in it; per sample the worst row.
pub fn check_scalar_frenet(model: &CurveModel, grid: &Grid, form: ScalarFrenetForm) -> ResidualReport {
    let id = match form {
        ScalarFrenetForm::Spherical => "scalar_frenet",
        ScalarFrenetForm::Corrected => "scalar_frenet_corrected",
    };
    let samples = sample(model, grid, |p| {
        let f = p.focal.as_ref().ok()?;
        let m = f.m();
        let k = &p.frenet.curvatures;
        let c = &f.focal_curvatures;
        let dc = &f.focal_curvature_derivatives;
        let mut worst = (1.0 - k[0] * c[0]).abs();
        for i in 1..=m {
            let down = if i >= 2 { k[i - 1] * c[i - 2] } else { 0.0 };
            let up = if i < m { k[i] * c[i] } else { 0.0 };
            let mut lhs = dc[i - 1];
            if i == m && form == ScalarFrenetForm::Corrected {
                if c[m - 1].abs() < 1e-6 * f.radii[m - 1] {
                    return None;
                }
                lhs -= f.radius_sq_derivative / (2.0 * c[m - 1]);
            }
            let size = 1f64.max(lhs.abs()).max(down.abs()).max(up.abs());
            worst = worst.max((lhs - (up - down)).abs() / size);
        }
        Some(worst)
    });
    ResidualReport::build(id, samples, 1.0)
}

/// `κ_i` against `(Σ_{j<i} c_j c_j')/(c_{i−1} c_i)` for `i = 2..=m`, relative
/// to `|κ_i|`. Samples with `|c_{i−1} c_i|` below `1e−6 R_m²` are skipped.
pub fn check_curvature_formula(model: &CurveModel, grid: &Grid) -> ResidualReport {
    let samples = sample(model, grid, |p| {
        let f = p.focal.as_ref().ok()?;
        let m = f.m();
        if m < 2 {
            return None;
        }
        let c = &f.focal_curvatures;
        let dc = &f.focal_curvature_derivatives;
        let r2 = f.radii[m - 1].powi(2);
        let mut worst: f64 = 0.0;
        let mut sum = 0.0;
        for i in 2..=m {
            sum += c[i - 2] * dc[i - 2];
            let denom = c[i - 2] * c[i - 1];
            if denom.abs() < 1e-6 * r2 {
                return None;
            }
            let kappa = p.frenet.curvatures[i - 1];
            worst = worst.max((kappa - sum / denom).abs() / kappa.abs());
        }
        Some(worst)
    });
    ResidualReport::build("curvature_formula", samples, 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalFrameData {
    pub theta: f64,
    /// `T, N_1, …, N_m` of the focal curve.
    pub frame: Vec<Vec<f64>>,
    /// `K_1, …, K_m`.
    pub curvatures: Vec<f64>,
    /// Sign of `c_m' + c_{m−1} κ_m`.
    pub epsilon: f64,
    /// Sign of `(−1)^k ε κ_m`, `k = 1..=m`.
    pub deltas: Vec<f64>,
    /// Sign in `N_m = ±t` forced by positive orientation.
    pub sigma: f64,
    pub vertex_residual: f64,
    /// `t, n_1, …, n_m` of the curve itself.
    pub curve_frame: Vec<Vec<f64>>,
    pub curve_curvatures: Vec<f64>,
    /// `dC_γ/ds` of the curve's arc length.
    pub focal_velocity: Vec<f64>,
    /// Normalized Gram ratio of the focal curve's derivatives.
    pub focal_gram: f64,
}

/// Frenet apparatus of the focal curve at `theta`, from a jet of `C_γ` of
/// order `m + 2`.
pub fn focal_frenet(model: &CurveModel, theta: f64) -> Result<FocalFrameData> {
    let m = model.m();
    let p = analyze_point(model, theta, Some(default_order(m)))?;
    focal_frenet_from(&p)
}

fn focal_frenet_from(p: &PointAnalysis) -> Result<FocalFrameData> {
    let m = p.frenet.m();
    let focal = p.focal.as_ref().map_err(Clone::clone)?;
    let jets = focal.jets.as_ref().ok_or(Error::InsufficientOrder {
        needed: m + 2,
        have: 0,
    })?;
    let center = jets.center.truncate(jets.center.order().min(m + 2));
    if center.order() < m + 1 {
        return Err(Error::InsufficientOrder {
            needed: m + 1,
            have: center.order(),
        });
    }
    let arc = match arc_normalize(&center) {
        Ok(a) => a,
        Err(Error::SingularParametrization(_)) => return Err(Error::VertexPoint(p.theta)),
        Err(e) => return Err(e),
    };
    let fr = frenet_at(&arc, m)?;
    let rho = focal.vertex_residual;
    let epsilon = rho.signum();
    let kappa_m = p.frenet.curvatures[m - 1];
    let deltas: Vec<f64> = (1..=m)
        .map(|k| ((-1f64).powi(k as i32) * epsilon * kappa_m).signum())
        .collect();
    let reversal = if (m * (m + 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sigma = reversal * epsilon * deltas[..m - 1].iter().product::<f64>();
    Ok(FocalFrameData {
        theta: p.theta,
        frame: fr.frame,
        curvatures: fr.curvatures,
        epsilon,
        deltas,
        sigma,
        vertex_residual: rho,
        curve_frame: p.frenet.frame.clone(),
        curve_curvatures: p.frenet.curvatures.clone(),
        focal_velocity: center.derivative_at(1),
        focal_gram: is_good(&center, m).min_gram_det,
    })
}

impl FocalFrameData {
    /// Away from vertices and with a focal curve that is itself good enough
    /// for its frame to be resolved in double precision.
    pub fn is_resolved(&self) -> bool {
        self.vertex_residual.abs() >= 1e-6 && self.focal_gram >= GOODNESS_TOL
    }

    /// Worst of `|K_k| |ρ| / |κ_{m+1−k}| − 1` over `k`.
    pub fn ratio_defect(&self) -> f64 {
        let m = self.curvatures.len();
        (1..=m)
            .map(|k| {
                let lhs = self.curvatures[k - 1].abs() * self.vertex_residual.abs();
                let rhs = self.curve_curvatures[m - k].abs();
                (lhs / rhs - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Worst of `‖T − ε n_m‖`, `‖N_k − δ_k n_{m−k}‖`, `‖N_m − σ t‖`.
    pub fn frame_defect(&self) -> f64 {
        let m = self.curvatures.len();
        let diff = |a: &[f64], s: f64, b: &[f64]| {
            norm(&a.iter().zip(b).map(|(x, y)| x - s * y).collect::<Vec<_>>())
        };
        let mut worst = diff(&self.frame[0], self.epsilon, &self.curve_frame[m]);
        for k in 1..m {
            worst = worst.max(diff(&self.frame[k], self.deltas[k - 1], &self.curve_frame[m - k]));
        }
        worst.max(diff(&self.frame[m], self.sigma, &self.curve_frame[0]))
    }

    /// Largest gap between the osculating `k`-plane of the focal curve and the
    /// direction space of the focal plane `A^{m+1−k}`, `k = 1..=m`, measured
    /// as the largest entry of the difference of orthogonal projectors.
    pub fn flag_coincidence_defect(&self) -> f64 {
        let m = self.curvatures.len();
        let dim = m + 1;
        (1..=m)
            .map(|k| {
                let osc = projector(&self.frame[..k], dim);
                let plane = projector(&self.curve_frame[m + 1 - k..], dim);
                (osc - plane).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Components of `dC_γ/ds` along `t, n_1, …, n_{m−1}`, relative to its norm.
    pub fn velocity_defect(&self) -> f64 {
        let m = self.curvatures.len();
        let speed = norm(&self.focal_velocity);
        self.curve_frame[..m]
            .iter()
            .map(|e| dot(e, &self.focal_velocity).abs() / speed)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem5Report {
    pub ratios: ResidualReport,
    pub frame: ResidualReport,
}

/// Ratio chain and frame identifications of the focal curve. Vertices,
/// flattenings, samples with `|ρ| < 1e−6` and samples where the focal curve
/// fails the goodness test (near flattenings it degenerates) are skipped.
pub fn check_theorem5(model: &CurveModel, grid: &Grid) -> Theorem5Report {
    let data: Vec<(f64, Option<FocalFrameData>)> = map_samples(&grid.thetas(), |t| {
        let d = focal_frenet(model, t)
            .ok()
            .filter(FocalFrameData::is_resolved);
        (t, d)
    });
    let pick = |f: &dyn Fn(&FocalFrameData) -> f64| -> Vec<(f64, Option<f64>)> {
        data.iter().map(|(t, d)| (*t, d.as_ref().map(f))).collect()
    };
    Theorem5Report {
        ratios: ResidualReport::build("focal_ratio_chain", pick(&|d| d.ratio_defect()), 1.0),
        frame: ResidualReport::build("focal_frame_identification", pick(&|d| d.frame_defect()), 1.0),
    }
}

/// `(R_m²)' − 2 c_m (c_m' + c_{m−1} κ_m)` relative to
/// `max(R_m, |(R_m²)'|, |2 c_m ρ|)`.
pub fn check_equation3(model: &CurveModel, grid: &Grid) -> ResidualReport {
    let samples = sample(model, grid, |p| {
        let f = p.focal.as_ref().ok()?;
        let m = f.m();
        let lhs = f.radius_sq_derivative;
        let rhs = 2.0 * f.focal_curvatures[m - 1] * f.vertex_residual;
        let size = f.radii[m - 1].max(lhs.abs()).max(rhs.abs());
        Some((lhs - rhs).abs() / size)
    });
    ResidualReport::build("radius_derivative", samples, 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereFit {
    pub center: Vec<f64>,
    pub radius: f64,
    /// RMS of `‖γ − q‖ − r` over the grid.
    pub rms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphericalReport {
    pub is_spherical: bool,
    /// `c_m' + c_{m−1} κ_m` per sample.
    pub report: ResidualReport,
    /// For `m = 2`: `(R_1'/τ)' + R_1 τ` computed from curvature jets, compared
    /// with the general form.
    pub plane_form_agreement: Option<ResidualReport>,
    pub sphere_fit: Option<SphereFit>,
    /// Whether the least-squares fit agrees with `is_spherical`.
    pub fit_agrees: bool,
    /// Largest `|(R_m²)'|` relative to `R_m`.
    pub max_radius_drift: f64,
    pub note: Option<String>,
}

pub const SPHERICAL_TOL: f64 = 1e-7;
const FIT_TOL: f64 = 1e-6;

pub fn check_spherical(model: &CurveModel, grid: &Grid) -> SphericalReport {
    let m = model.m();
    // Per sample: vertex residual, plane-form gap, radius drift.
    type Row = (f64, Option<(f64, Option<f64>, f64)>);
    let rows: Vec<Row> = map_samples(&grid.thetas(), |t| {
        let r = analyze_point(model, t, None).ok().and_then(|p| {
            let f = p.focal.as_ref().ok()?;
            let drift = f.radius_sq_derivative.abs() / f.radii[m - 1];
            let plane = (m == 2).then(|| example4_form(&p)).flatten();
            Some((f.vertex_residual, plane.map(|e| rel(e, f.vertex_residual)), drift))
        });
        (t, r)
    });
    let report = ResidualReport::build(
        "spherical_residual",
        rows.iter().map(|(t, r)| (*t, r.map(|r| r.0))).collect(),
        1.0,
    );
    let plane_form_agreement = (m == 2).then(|| {
        ResidualReport::build(
            "spherical_plane_form",
            rows.iter().map(|(t, r)| (*t, r.and_then(|r| r.1))).collect(),
            1.0,
        )
    });
    let max_radius_drift = rows
        .iter()
        .filter_map(|(_, r)| r.map(|r| r.2))
        .fold(0.0, f64::max);
    let is_spherical = report.passes(SPHERICAL_TOL);

    let points: Vec<Vec<f64>> = grid
        .thetas()
        .iter()
        .filter_map(|t| model.eval_point(*t).ok())
        .collect();
    let sphere_fit = fit_sphere(&points).map(|(center, radius, rms)| SphereFit { center, radius, rms });
    let fit_agrees = match &sphere_fit {
        Some(f) => (f.rms < FIT_TOL * f.radius) == is_spherical,
        None => !is_spherical,
    };
    let note = (!is_spherical && max_radius_drift < SPHERICAL_TOL).then(|| {
        format!(
            "osculating hypersphere radius is constant ((R_m^2)' = 0 to {max_radius_drift:.1e}) \
             but the curve is not spherical (max |c_m' + c_(m-1) k_m| = {:.3e})",
            report.max_abs
        )
    });
    SphericalReport {
        is_spherical,
        report,
        plane_form_agreement,
        sphere_fit,
        fit_agrees,
        max_radius_drift,
        note,
    }
}

/// `(R_1'/τ)' + R_1 τ` with `R_1 = 1/κ_1`, `τ = κ_2`, from curvature jets only.
fn example4_form(p: &PointAnalysis) -> Option<f64> {
    let k = &p.frenet.jets()?.curvatures;
    let r1 = k[0].recip().ok()?;
    let dr1 = r1.derivative().ok()?;
    let tau = k[1].truncate(dr1.order());
    let inner = dr1.checked_div(&tau).ok()?;
    let outer = inner.derivative().ok()?;
    let tail = (r1.truncate(outer.order()) * tau.truncate(outer.order())).value();
    Some(outer.value() + tail)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SelfCongruence {
    Applicable { report: ResidualReport },
    /// Curvatures vary by more than the tolerance over the grid.
    NotSelfCongruent { max_variation: f64 },
}

const CONSTANT_CURVATURE_TOL: f64 = 1e-7;

/// For constant-curvature curves: `c_{2l} = 0` and
/// `c_{2l+1} = ∏_{j≤l} κ_{2j}/κ_{2j+1}` with `κ_0 = 1`.
pub fn check_self_congruent(model: &CurveModel, grid: &Grid) -> SelfCongruence {
    let points: Vec<Option<PointAnalysis>> =
        map_samples(&grid.thetas(), |t| analyze_point(model, t, None).ok());
    let kappas: Vec<&Vec<f64>> = points.iter().flatten().map(|p| &p.frenet.curvatures).collect();
    let Some(first) = kappas.first() else {
        return SelfCongruence::NotSelfCongruent {
            max_variation: f64::INFINITY,
        };
    };
    let max_variation = kappas
        .iter()
        .flat_map(|k| k.iter().zip(first.iter()).map(|(a, b)| rel(*a, *b)))
        .fold(0.0, f64::max);
    if max_variation > CONSTANT_CURVATURE_TOL {
        return SelfCongruence::NotSelfCongruent { max_variation };
    }
    let samples = points
        .iter()
        .zip(grid.thetas())
        .map(|(p, t)| {
            let r = p.as_ref().and_then(|p| {
                let f = p.focal.as_ref().ok()?;
                let m = f.m();
                let k = &p.frenet.curvatures;
                let kappa = |i: usize| if i == 0 { 1.0 } else { k[i - 1] };
                let scale = f.radii[m - 1];
                let mut worst: f64 = 0.0;
                let mut product = 1.0;
                for i in 1..=m {
                    let c = f.focal_curvatures[i - 1];
                    if i % 2 == 0 {
                        worst = worst.max(c.abs() / scale);
                    } else {
                        product *= kappa(i - 1) / kappa(i);
                        worst = worst.max((c - product).abs() / product.abs());
                    }
                }
                Some(worst)
            });
            (t, r)
        })
        .collect();
    SelfCongruence::Applicable {
        report: ResidualReport::build("self_congruent", samples, 1.0),
    }
}

/// Recursive focal curvatures against the projections of the solved centre,
/// relative to `R_m`.
pub fn check_recursion(model: &CurveModel, grid: &Grid) -> ResidualReport {
    let samples = sample(model, grid, |p| {
        let f = p.focal.as_ref().ok()?;
        let rec = focal_curvature_jets_recursive(&p.frenet).ok()?;
        let scale = f.radii[f.m() - 1];
        Some(
            rec.iter()
                .map(Jet::value)
                .zip(&f.focal_curvatures)
                .map(|(a, b)| (a - b).abs() / scale)
                .fold(0.0, f64::max),
        )
    });
    ResidualReport::build("focal_curvature_recursion", samples, 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagReport {
    /// `A^1 ⊃ … ⊃ A^{m+1}`.
    pub nesting: ResidualReport,
    /// Osculating flag of the focal curve against the focal flag.
    pub coincidence: ResidualReport,
    /// Focal-curve velocity off the last normal.
    pub velocity: ResidualReport,
}

pub fn check_focal_flag(model: &CurveModel, grid: &Grid) -> FlagReport {
    // Per sample: nesting defect, then coincidence and velocity defects.
    type Row = (f64, Option<f64>, Option<(f64, f64)>);
    let rows: Vec<Row> = map_samples(&grid.thetas(), |t| {
        let Ok(p) = analyze_point(model, t, None) else {
            return (t, None, None);
        };
        let nesting = p
            .focal
            .as_ref()
            .ok()
            .map(|f| flag_nesting_defect(&focal_planes(&p.arc, &p.frenet, f)));
        let frame = focal_frenet_from(&p)
            .ok()
            .filter(FocalFrameData::is_resolved)
            .map(|d| (d.flag_coincidence_defect(), d.velocity_defect()));
        (t, nesting, frame)
    });
    FlagReport {
        nesting: ResidualReport::build(
            "focal_flag_nesting",
            rows.iter().map(|r| (r.0, r.1)).collect(),
            1.0,
        ),
        coincidence: ResidualReport::build(
            "focal_flag_coincidence",
            rows.iter().map(|r| (r.0, r.2.map(|x| x.0))).collect(),
            1.0,
        ),
        velocity: ResidualReport::build(
            "focal_velocity_direction",
            rows.iter().map(|r| (r.0, r.2.map(|x| x.1))).collect(),
            1.0,
        ),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub max_abs: f64,
    pub threshold: f64,
    pub passed: bool,
    pub evaluated: usize,
    pub skipped: usize,
    /// `false` when every sample was skipped; such suites do not fail.
    pub applicable: bool,
}

impl SuiteOutcome {
    fn from_report(r: &ResidualReport, threshold: f64) -> Self {
        SuiteOutcome {
            name: r.theorem_id.clone(),
            max_abs: r.max_abs,
            threshold,
            passed: r.residuals.is_empty() || r.passes(threshold),
            evaluated: r.residuals.len(),
            skipped: r.skipped.len(),
            applicable: !r.residuals.is_empty(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub label: String,
    pub m: usize,
    pub samples: usize,
    pub suites: Vec<SuiteOutcome>,
    pub spherical: SphericalReport,
    pub self_congruent: SelfCongruence,
    /// Spherical-form rows; expected to hold only for spherical curves.
    pub scalar_frenet_spherical: SuiteOutcome,
    pub all_passed: bool,
}

/// Runs every suite. `tol` scales all pass thresholds (1 keeps the defaults).
pub fn verify_all(model: &CurveModel, samples: usize, tol: Option<f64>) -> VerifySummary {
    let grid = Grid::for_curve(model, samples);
    let t = tol.unwrap_or(DEFAULT_PASS_TOL);
    let loose = t * 10.0;
    let spherical = check_spherical(model, &grid);
    let thm5 = check_theorem5(model, &grid);
    let flag = check_focal_flag(model, &grid);
    let mut suites = vec![
        SuiteOutcome::from_report(
            &check_scalar_frenet(model, &grid, ScalarFrenetForm::Corrected),
            t,
        ),
        SuiteOutcome::from_report(&check_equation3(model, &grid), t),
        SuiteOutcome::from_report(&check_recursion(model, &grid), t),
        SuiteOutcome::from_report(&flag.nesting, loose),
        SuiteOutcome::from_report(&flag.coincidence, loose),
        SuiteOutcome::from_report(&flag.velocity, t),
        SuiteOutcome::from_report(&check_curvature_formula(model, &grid), loose),
        SuiteOutcome::from_report(&thm5.ratios, loose),
        SuiteOutcome::from_report(&thm5.frame, loose),
    ];
    if let Some(r) = &spherical.plane_form_agreement {
        suites.push(SuiteOutcome::from_report(r, t));
    }
    let scalar_frenet_spherical = SuiteOutcome::from_report(
        &check_scalar_frenet(model, &grid, ScalarFrenetForm::Spherical),
        t,
    );
    let self_congruent = check_self_congruent(model, &grid);
    let mut all_passed = suites.iter().all(|s| s.passed) && spherical.fit_agrees;
    if spherical.is_spherical {
        all_passed &= scalar_frenet_spherical.passed;
    }
    if let SelfCongruence::Applicable { report } = &self_congruent {
        all_passed &= report.passes(t);
    }
    VerifySummary {
        label: model.label().to_string(),
        m: model.m(),
        samples: grid.samples,
        suites,
        spherical,
        self_congruent,
        scalar_frenet_spherical,
        all_passed,
    }
}

/// Distance between two points, for callers comparing centres.
pub fn point_gap(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}
