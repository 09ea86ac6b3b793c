//! Vertices, pseudo-vertices, flattenings and critical radii along a curve.
//!
//! Every event is a zero of a smooth scalar channel. Channels are sampled on a
//! grid, sign changes are refined by bisection, and tangential zeros are found
//! by bracketing the channel's derivative instead.

use serde::Serialize;

use crate::curvespec::CurveModel;
use crate::error::Result;
use crate::focal::{analyze_point, PointAnalysis};
use crate::grid::{map_items, map_samples, Grid};
use crate::jets::Jet;

/// Bisection stops once the bracket is narrower than this.
pub const REFINE_TOL: f64 = 1e-10;
/// Roots closer than this (in θ) are merged.
pub const DEDUP_TOL: f64 = 1e-8;
/// `max |f| < IDENTICAL_TOL · scale` flags a channel as identically zero.
pub const IDENTICAL_TOL: f64 = 1e-9;
/// A refined bracket is a root only if `|f|` dropped by this factor; otherwise
/// it straddled a pole.
const POLE_RATIO: f64 = 1e-3;
const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "channel", content = "l", rename_all = "snake_case")]
pub enum Channel {
    /// `c_m' + c_{m−1} κ_m`.
    Vertex,
    /// `c_m`.
    PseudoVertex,
    /// `κ_m`.
    Flattening,
    /// `c_l` for `l < m`.
    FocalCurvatureZero(usize),
    /// A function with the sign of `R_l'`.
    CriticalRadius(usize),
}

impl Channel {
    /// Power of length carried by the channel.
    fn length_power(self) -> i32 {
        match self {
            Channel::Vertex => 0,
            Channel::PseudoVertex | Channel::FocalCurvatureZero(_) | Channel::CriticalRadius(_) => 1,
            Channel::Flattening => -1,
        }
    }

    pub fn all(m: usize) -> Vec<Channel> {
        let mut out = vec![Channel::Vertex, Channel::PseudoVertex, Channel::Flattening];
        out.extend((1..m).map(Channel::FocalCurvatureZero));
        out.extend((1..=m).map(Channel::CriticalRadius));
        out
    }
}

/// Value and arc-length derivative of `channel` at an analysed point.
pub fn channel_value(p: &PointAnalysis, channel: Channel) -> Option<(f64, f64)> {
    let m = p.frenet.m();
    let first_two = |j: Jet| -> Option<(f64, f64)> {
        (j.order() >= 1).then(|| (j.value(), j.derivative_at(1)))
    };
    if let Channel::Flattening = channel {
        let k = p.frenet.jets()?.curvatures[m - 1];
        return first_two(k);
    }
    let focal = p.focal.as_ref().ok()?;
    let jets = focal.jets.as_ref()?;
    let c = &jets.focal_curvatures;
    let jet = match channel {
        Channel::Vertex => jets.vertex_residual,
        Channel::PseudoVertex => c[m - 1],
        Channel::FocalCurvatureZero(l) => c[l - 1],
        Channel::CriticalRadius(l) if l == m => {
            let rho = jets.vertex_residual;
            c[m - 1].truncate(rho.order()) * rho
        }
        Channel::CriticalRadius(l) => {
            // c_l (c_l' + c_{l−1} κ_l) = R_l R_l'
            let dc = c[l - 1].derivative().ok()?;
            let ord = dc.order();
            let inner = if l >= 2 {
                let kappa = p.frenet.jets()?.curvatures[l - 1];
                dc + c[l - 2].truncate(ord) * kappa.truncate(ord)
            } else {
                dc
            };
            c[l - 1].truncate(ord) * inner
        }
        Channel::Flattening => unreachable!(),
    };
    first_two(jet)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub theta: f64,
    /// Function value at `theta`.
    pub value: f64,
    /// Found through the derivative (no sign change).
    pub double: bool,
    /// Bracket narrowed to [`REFINE_TOL`] (false for exact grid hits).
    pub refined: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootScan {
    pub roots: Vec<Root>,
    /// Largest `|f|` over the samples where `f` was defined.
    pub max_abs: f64,
    pub defined_samples: usize,
}

/// Zeros of a scalar function sampled on `grid`. `f` returns the value and
/// derivative, or `None` where undefined. `zero_tol` is the absolute size at
/// which a sample counts as zero and below which a tangential minimum is a
/// double root.
pub fn find_roots<F>(grid: &Grid, f: F, zero_tol: f64) -> RootScan
where
    F: Fn(f64) -> Option<(f64, f64)> + Sync + Send,
{
    let thetas = grid.thetas();
    let values = map_samples(&thetas, &f);
    let max_abs = values
        .iter()
        .flatten()
        .map(|v| v.0.abs())
        .fold(0.0, f64::max);
    let defined_samples = values.iter().flatten().count();
    let n = thetas.len();
    let period = grid.hi - grid.lo;

    let mut exact = Vec::new();
    let mut brackets = Vec::new();
    let pairs = if grid.periodic { n } else { n - 1 };
    for k in 0..n {
        if let Some((v, _)) = values[k] {
            if v.abs() <= zero_tol {
                exact.push(Root {
                    theta: thetas[k],
                    value: v,
                    double: false,
                    refined: false,
                });
            }
        }
    }
    for k in 0..pairs {
        let j = (k + 1) % n;
        let (Some(a), Some(b)) = (values[k], values[j]) else {
            continue;
        };
        let ta = thetas[k];
        let tb = if j == 0 { thetas[0] + period } else { thetas[j] };
        if a.0.abs() <= zero_tol || b.0.abs() <= zero_tol {
            continue;
        }
        if a.0.signum() != b.0.signum() {
            brackets.push((ta, tb, a.0, b.0, false));
        } else if a.1.signum() != b.1.signum() && a.1 != 0.0 && b.1 != 0.0 {
            // |f| must head down from both ends for a tangential zero
            let descending = a.0.signum() * a.1 < 0.0 && b.0.signum() * b.1 > 0.0;
            if descending {
                brackets.push((ta, tb, a.1, b.1, true));
            }
        }
    }

    let wrap = |t: f64| {
        if grid.periodic && t >= grid.hi {
            t - period
        } else {
            t
        }
    };
    let refined: Vec<Option<Root>> = map_items(&brackets, |&(mut lo, mut hi, fa, fb, double)| {
        let pick = |t: f64| -> Option<f64> {
            let (v, d) = f(wrap(t))?;
            Some(if double { d } else { v })
        };
        let mut flo = fa;
        while hi - lo > REFINE_TOL {
            let mid = 0.5 * (lo + hi);
            let fm = pick(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let theta = 0.5 * (lo + hi);
        let (value, _) = f(wrap(theta))?;
        let end_scale = if double {
            zero_tol
        } else {
            POLE_RATIO * fa.abs().max(fb.abs())
        };
        (value.abs() <= end_scale).then_some(Root {
            theta: wrap(theta),
            value,
            double,
            refined: true,
        })
    });

    let mut roots: Vec<Root> = exact.into_iter().chain(refined.into_iter().flatten()).collect();
    roots.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        let close = |a: f64, b: f64| {
            let d = (a - b).abs();
            d < DEDUP_TOL || (grid.periodic && (period - d).abs() < DEDUP_TOL)
        };
        if let Some(prev) = out.iter_mut().find(|p| close(p.theta, r.theta)) {
            if r.value.abs() < prev.value.abs() {
                *prev = r;
            }
        } else {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    RootScan {
        roots: out,
        max_abs,
        defined_samples,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Event {
    pub kind: Channel,
    pub theta: f64,
    pub residual: f64,
    pub refined: bool,
    /// Tangential zero (the channel keeps its sign).
    pub double_root: bool,
    /// Indices `l` of radii `R_l` this event makes critical.
    pub implied_critical_radii: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub vertices: usize,
    pub pseudo_vertices: usize,
    pub flattenings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum ScanWarning {
    /// Two events of one channel lie within two grid cells.
    GridTooCoarse { channel: Channel, theta_a: f64, theta_b: f64 },
    /// Fewer samples than the scan is designed for.
    FewSamples { samples: usize },
    /// Samples where the curve could not be analysed at all.
    Unevaluated { thetas: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct EventReport {
    pub label: String,
    pub m: usize,
    pub samples: usize,
    pub periodic: bool,
    pub events: Vec<Event>,
    /// `None` when a counted channel vanishes identically or has double roots.
    pub counts: Option<Counts>,
    /// Channels whose grid maximum is negligible against their natural scale.
    pub identically_zero: Vec<Channel>,
    /// Samples where the focal centre is at infinity.
    pub flattening_samples: Vec<f64>,
    pub warnings: Vec<ScanWarning>,
    /// `l` such that `R_l` is constant (its channel vanishes identically).
    pub degenerate_critical_radii: Vec<usize>,
    /// `V + P ≥ 2` and `V + P ≥ F`, checked on closed curves with counts.
    pub inequalities_hold: Option<bool>,
}

impl EventReport {
    pub fn of_kind(&self, kind: Channel) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub samples: usize,
    pub order: Option<usize>,
}

pub fn scan_events(model: &CurveModel, samples: usize) -> Result<EventReport> {
    scan_events_with(model, ScanOptions { samples, order: None })
}

pub fn scan_events_with(model: &CurveModel, opts: ScanOptions) -> Result<EventReport> {
    let m = model.m();
    let grid = Grid::for_curve(model, opts.samples);
    let thetas = grid.thetas();
    let points: Vec<Option<PointAnalysis>> =
        map_samples(&thetas, |t| analyze_point(model, t, opts.order).ok());

    let mut warnings = Vec::new();
    if opts.samples < MIN_SAMPLES {
        warnings.push(ScanWarning::FewSamples { samples: opts.samples });
    }
    let unevaluated: Vec<f64> = thetas
        .iter()
        .zip(&points)
        .filter(|(_, p)| p.is_none())
        .map(|(t, _)| *t)
        .collect();
    if !unevaluated.is_empty() {
        warnings.push(ScanWarning::Unevaluated { thetas: unevaluated });
    }
    let flattening_samples: Vec<f64> = points
        .iter()
        .flatten()
        .filter(|p| p.focal.is_err())
        .map(|p| p.theta)
        .collect();

    // Natural length: the largest radius of curvature on the grid.
    let length = points
        .iter()
        .flatten()
        .map(|p| 1.0 / p.frenet.curvatures[0])
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let mut events = Vec::new();
    let mut identically_zero = Vec::new();
    for channel in Channel::all(m) {
        let scale = length.powi(channel.length_power());
        let zero_tol = IDENTICAL_TOL * scale;
        let index_of = |t: f64| {
            let k = ((t - grid.lo) / grid.step()).round();
            (k >= 0.0 && (k as usize) < points.len() && (grid.theta(k as usize) - t).abs() == 0.0)
                .then_some(k as usize)
        };
        let f = |t: f64| match index_of(t) {
            Some(k) => points[k].as_ref().and_then(|p| channel_value(p, channel)),
            None => analyze_point(model, t, opts.order)
                .ok()
                .and_then(|p| channel_value(&p, channel)),
        };
        let scan = find_roots(&grid, f, zero_tol * 1e-4);
        if scan.defined_samples > 0 && scan.max_abs < zero_tol {
            identically_zero.push(channel);
            continue;
        }
        let mut channel_events: Vec<Event> = scan
            .roots
            .iter()
            .filter(|r| !r.double || r.value.abs() < zero_tol)
            .map(|r| Event {
                kind: channel,
                theta: r.theta,
                residual: r.value,
                refined: r.refined || !r.double,
                double_root: r.double,
                implied_critical_radii: Vec::new(),
            })
            .collect();
        for pair in channel_events.windows(2) {
            if pair[1].theta - pair[0].theta < 2.0 * grid.step() {
                warnings.push(ScanWarning::GridTooCoarse {
                    channel,
                    theta_a: pair[0].theta,
                    theta_b: pair[1].theta,
                });
            }
        }
        events.append(&mut channel_events);
    }
    events.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.kind.cmp(&b.kind)));

    let counted = [Channel::Vertex, Channel::PseudoVertex, Channel::Flattening];
    let generic = counted.iter().all(|c| !identically_zero.contains(c))
        && !events
            .iter()
            .any(|e| e.double_root && counted.contains(&e.kind));
    let count = |c: Channel| events.iter().filter(|e| e.kind == c).count();
    let counts = generic.then(|| Counts {
        vertices: count(Channel::Vertex),
        pseudo_vertices: count(Channel::PseudoVertex),
        flattenings: count(Channel::Flattening),
    });
    let inequalities_hold = counts.filter(|_| grid.periodic).map(|c| {
        let vp = c.vertices + c.pseudo_vertices;
        vp >= 2 && vp >= c.flattenings
    });
    let degenerate_critical_radii = identically_zero
        .iter()
        .filter_map(|c| match c {
            Channel::CriticalRadius(l) => Some(*l),
            _ => None,
        })
        .collect();

    Ok(EventReport {
        label: model.label().to_string(),
        m,
        samples: grid.samples,
        periodic: grid.periodic,
        events,
        counts,
        identically_zero,
        flattening_samples,
        warnings,
        degenerate_critical_radii,
        inequalities_hold,
    })
}

/// Annotates each zero of a focal curvature with the radii it makes critical:
/// `c_l = 0` makes `R_{l−1}` and `R_l` critical (so a pseudo-vertex makes
/// `R_{m−1}` and `R_m` critical), and a vertex makes `R_m` critical.
pub fn classify_critical_radii(mut report: EventReport) -> EventReport {
    let m = report.m;
    for e in &mut report.events {
        let l = match e.kind {
            Channel::FocalCurvatureZero(l) => l,
            Channel::PseudoVertex => m,
            Channel::Vertex => {
                e.implied_critical_radii = vec![m];
                continue;
            }
            _ => continue,
        };
        e.implied_critical_radii = (l.saturating_sub(1).max(1)..=l).collect();
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvespec::builtin;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn circular_gap(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn ellipse_has_four_vertices() {
        let r = scan_events(&builtin("ellipse_2_1").unwrap(), 512).unwrap();
        let v: Vec<f64> = r.of_kind(Channel::Vertex).map(|e| e.theta).collect();
        assert_eq!(v.len(), 4, "{v:?}");
        for target in [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2] {
            assert!(v.iter().any(|t| circular_gap(*t, target) < 1e-6), "{target}");
        }
        assert_eq!(
            r.counts,
            Some(Counts { vertices: 4, pseudo_vertices: 0, flattenings: 0 })
        );
        assert_eq!(r.inequalities_hold, Some(true));
    }

    #[test]
    fn helix_is_degenerate() {
        let r = classify_critical_radii(scan_events(&builtin("helix").unwrap(), 128).unwrap());
        assert!(r.events.is_empty(), "{:?}", r.events);
        assert!(r.identically_zero.contains(&Channel::PseudoVertex));
        assert!(r.degenerate_critical_radii.contains(&2));
        assert!(!r.identically_zero.contains(&Channel::Vertex));
        assert!(r.counts.is_none());
    }

    #[test]
    fn spherical_vertex_channel_vanishes() {
        let r = scan_events(&builtin("sphere_curve_r3").unwrap(), 256).unwrap();
        assert!(r.identically_zero.contains(&Channel::Vertex), "{:?}", r.identically_zero);
    }

    #[test]
    fn roots_of_sine() {
        let grid = Grid { lo: 0.0, hi: TAU, samples: 100, periodic: true };
        let scan = find_roots(&grid, |t| Some((t.sin(), t.cos())), 1e-14);
        let thetas: Vec<f64> = scan.roots.iter().map(|r| r.theta).collect();
        assert_eq!(thetas.len(), 2, "{thetas:?}");
        assert!(circular_gap(thetas[0], 0.0) < 1e-9 && (thetas[1] - PI).abs() < 1e-9);
    }

    #[test]
    fn double_root_and_pole() {
        let grid = Grid { lo: 0.0, hi: 3.0, samples: 64, periodic: false };
        let s = find_roots(&grid, |t| Some(((t - 1.3).powi(2), 2.0 * (t - 1.3))), 1e-12);
        assert_eq!(s.roots.len(), 1);
        assert!(s.roots[0].double && (s.roots[0].theta - 1.3).abs() < 1e-9);

        let p = find_roots(&grid, |t| Some((1.0 / (t - 1.31), -1.0 / (t - 1.31).powi(2))), 1e-12);
        assert!(p.roots.is_empty(), "{:?}", p.roots);
    }

    #[test]
    fn pseudo_vertex_annotations() {
        let r = classify_critical_radii(scan_events(&builtin("trefoil_like").unwrap(), 512).unwrap());
        for e in r.of_kind(Channel::PseudoVertex) {
            assert_eq!(e.implied_critical_radii, vec![1, 2]);
        }
        let c = r.counts.expect("generic");
        assert!(c.vertices + c.pseudo_vertices >= 2);
    }
}
