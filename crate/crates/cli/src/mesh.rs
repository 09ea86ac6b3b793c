//! OBJ export of the polar-line surface of a space curve.
//!
//! Each sample contributes the segment `γ_1 + u n_2`, `|u| ≤ u_max`, where
//! `γ_1 = γ + n_1/κ_1` is the centre of curvature. Consecutive segments are
//! joined by quads; the focal curve is appended as polylines broken at
//! samples where its point is at infinity.

use std::io::Write;

use focalis::grid::Grid;
use focalis::linalg::axpy;
use focalis::{CurveModel, Error};

use crate::commands::analyze_grid;
use crate::error::CliError;

pub struct Mesh {
    pub vertices: Vec<Vec<f64>>,
    /// 1-based vertex indices.
    pub faces: Vec<[usize; 4]>,
    pub lines: Vec<Vec<usize>>,
}

pub fn polar_surface(
    model: &CurveModel,
    samples: usize,
    order: Option<usize>,
    u_max: Option<f64>,
) -> Result<Mesh, CliError> {
    if model.dim() != 3 {
        return Err(Error::DimensionError(format!(
            "polar-line surfaces need a curve in 3-space, got dimension {}",
            model.dim()
        ))
        .into());
    }
    let grid = Grid::for_curve(model, samples);
    let points = analyze_grid(model, &grid, order)?;
    let u_max = match u_max {
        Some(u) if u > 0.0 && u.is_finite() => u,
        Some(u) => return Err(CliError::Input(format!("--u-max must be positive, got {u}"))),
        None => {
            let r = points
                .iter()
                .filter_map(|p| p.focal.as_ref().ok().map(|f| f.radii[1]))
                .fold(0.0, f64::max);
            if r > 0.0 {
                2.0 * r
            } else {
                2.0 / points.iter().map(|p| p.frenet.curvatures[0]).fold(f64::INFINITY, f64::min)
            }
        }
    };

    let mut mesh = Mesh {
        vertices: Vec::new(),
        faces: Vec::new(),
        lines: Vec::new(),
    };
    for p in &points {
        let gamma = p.arc.jet.value();
        let fr = &p.frenet;
        let centre = axpy(&gamma, 1.0 / fr.curvatures[0], &fr.frame[1]);
        mesh.vertices.push(axpy(&centre, -u_max, &fr.frame[2]));
        mesh.vertices.push(axpy(&centre, u_max, &fr.frame[2]));
    }
    let n = points.len();
    let quads = if grid.periodic { n } else { n - 1 };
    for k in 0..quads {
        let j = (k + 1) % n;
        mesh.faces.push([2 * k + 1, 2 * k + 2, 2 * j + 2, 2 * j + 1]);
    }

    let mut run: Vec<usize> = Vec::new();
    let mut first_run: Option<usize> = None;
    for p in &points {
        match &p.focal {
            Ok(f) => {
                mesh.vertices.push(f.center.clone());
                run.push(mesh.vertices.len());
            }
            Err(_) => {
                if !run.is_empty() {
                    first_run.get_or_insert(mesh.lines.len());
                    mesh.lines.push(std::mem::take(&mut run));
                }
            }
        }
    }
    if !run.is_empty() {
        if grid.periodic {
            // Close the loop, or join the tail to the run that started at θ_0.
            match (first_run, points[0].focal.is_ok()) {
                (None, true) => run.push(run[0]),
                (Some(i), true) => {
                    let head = mesh.lines.remove(i);
                    run.extend(head);
                }
                (_, false) => {}
            }
        }
        mesh.lines.push(run);
    }
    mesh.lines.retain(|l| l.len() >= 2);
    Ok(mesh)
}

impl Mesh {
    pub fn write_obj(&self, out: &mut dyn Write) -> Result<(), CliError> {
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {} {}", f[0], f[1], f[2], f[3])?;
        }
        for l in &self.lines {
            let idx: Vec<String> = l.iter().map(|i| i.to_string()).collect();
            writeln!(out, "l {}", idx.join(" "))?;
        }
        Ok(())
    }
}
