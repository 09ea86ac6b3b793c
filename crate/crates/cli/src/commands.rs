use std::io::Write;

use focalis::events::{classify_critical_radii, scan_events_with, Channel, ScanOptions};
use focalis::focal::{analyze_point, PointAnalysis};
use focalis::grid::{map_items, map_samples, Grid};
use focalis::linalg::norm;
use focalis::verify::verify_all;
use focalis::{builtin_names, CurveModel, Error};

use crate::error::CliError;
use crate::table::{numbered, write_json, Cell, Format, Table};

/// Five-point Gauss–Legendre nodes and weights on `[−1, 1]`.
const GAUSS_NODES: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

fn speed(model: &CurveModel, t: f64) -> Result<f64, CliError> {
    let v = model.eval_jet(t, 1).map_err(|e| CliError::at(t, e))?;
    Ok(norm(&v.derivative_at(1)))
}

/// Arc length from the start of the domain to each grid parameter.
fn arc_lengths(model: &CurveModel, thetas: &[f64]) -> Result<Vec<f64>, CliError> {
    let intervals: Vec<(f64, f64)> = thetas.windows(2).map(|w| (w[0], w[1])).collect();
    let pieces: Vec<Result<f64, CliError>> = map_items(&intervals, |&(a, b)| {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        GAUSS_NODES
            .iter()
            .try_fold(0.0, |acc, (x, w)| Ok(acc + w * half * speed(model, mid + half * x)?))
    });
    let mut s = 0.0;
    std::iter::once(Ok(0.0))
        .chain(pieces.into_iter().map(|p| {
            s += p?;
            Ok(s)
        }))
        .collect()
}

/// Analyses every grid sample; the first failure aborts with its parameter.
pub(crate) fn analyze_grid(model: &CurveModel, grid: &Grid, order: Option<usize>) -> Result<Vec<PointAnalysis>, CliError> {
    map_samples(&grid.thetas(), |t| analyze_point(model, t, order).map_err(|e| (t, e)))
        .into_iter()
        .map(|r| r.map_err(|(t, e)| CliError::at(t, e)))
        .collect()
}

pub fn frame(model: &CurveModel, samples: usize, order: Option<usize>) -> Result<Table, CliError> {
    let grid = Grid::for_curve(model, samples);
    let (n, m) = (model.dim(), model.m());
    let points = analyze_grid(model, &grid, order)?;
    let s = arc_lengths(model, &grid.thetas())?;

    let mut columns = vec!["theta".to_string(), "s".to_string()];
    columns.extend(numbered("t_", n));
    for i in 1..=m {
        columns.extend(numbered(&format!("n{i}_"), n));
    }
    columns.extend(numbered("kappa", m));
    let mut table = Table::new(columns);
    for (p, s) in points.iter().zip(s) {
        let mut row = vec![Cell::Num(p.theta), Cell::Num(s)];
        row.extend(p.frenet.frame.iter().flatten().map(|x| Cell::Num(*x)));
        row.extend(p.frenet.curvatures.iter().map(|x| Cell::Num(*x)));
        table.push(row);
    }
    Ok(table)
}

pub fn focal(model: &CurveModel, samples: usize, order: Option<usize>) -> Result<Table, CliError> {
    let grid = Grid::for_curve(model, samples);
    let (n, m) = (model.dim(), model.m());
    let points = analyze_grid(model, &grid, order)?;
    let s = arc_lengths(model, &grid.thetas())?;

    let mut columns = vec!["theta".to_string(), "s".to_string(), "at_infinity".to_string()];
    columns.extend(numbered("C_", n));
    columns.extend(numbered("c", m));
    columns.extend(numbered("R", m));
    columns.push("vertex_residual".to_string());
    let mut table = Table::new(columns);
    for (p, s) in points.iter().zip(s) {
        let mut row = vec![Cell::Num(p.theta), Cell::Num(s)];
        match &p.focal {
            Ok(f) => {
                row.push(Cell::Flag(false));
                row.extend(f.center.iter().map(|x| Cell::Num(*x)));
                row.extend(f.focal_curvatures.iter().map(|x| Cell::Num(*x)));
                row.extend(f.radii.iter().map(|x| Cell::Num(*x)));
                row.push(Cell::Num(f.vertex_residual));
            }
            // Numerically indistinguishable from a flattening.
            Err(Error::FlatteningPoint(_) | Error::IllConditionedSystem(_)) => {
                row.push(Cell::Flag(true));
                row.extend(std::iter::repeat_n(Cell::Missing, n + 2 * m + 1));
            }
            Err(e) => return Err(CliError::at(p.theta, e.clone())),
        }
        table.push(row);
    }
    Ok(table)
}

fn channel_name(c: Channel) -> (&'static str, Option<usize>) {
    match c {
        Channel::Vertex => ("vertex", None),
        Channel::PseudoVertex => ("pseudo_vertex", None),
        Channel::Flattening => ("flattening", None),
        Channel::FocalCurvatureZero(l) => ("focal_curvature_zero", Some(l)),
        Channel::CriticalRadius(l) => ("critical_radius", Some(l)),
    }
}

pub fn events(
    model: &CurveModel,
    samples: usize,
    order: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let report = classify_critical_radii(scan_events_with(model, ScanOptions { samples, order })?);
    match format {
        Format::Json => write_json(&report, out),
        Format::Csv => {
            let columns = ["kind", "l", "theta", "residual", "refined", "double_root"];
            let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
            for e in &report.events {
                let (kind, l) = channel_name(e.kind);
                table.push(vec![
                    Cell::Text(kind.into()),
                    l.map_or(Cell::Missing, Cell::Int),
                    Cell::Num(e.theta),
                    Cell::Num(e.residual),
                    Cell::Flag(e.refined),
                    Cell::Flag(e.double_root),
                ]);
            }
            table.write(Format::Csv, out)
        }
    }
}

pub fn verify(
    model: &CurveModel,
    samples: usize,
    tol: Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let summary = verify_all(model, samples, tol);
    match format {
        Format::Json => write_json(&summary, out),
        Format::Csv => {
            let columns = ["suite", "max_abs", "threshold", "passed", "evaluated", "skipped", "applicable"];
            let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
            for s in &summary.suites {
                table.push(vec![
                    Cell::Text(s.name.clone()),
                    Cell::Num(s.max_abs),
                    Cell::Num(s.threshold),
                    Cell::Flag(s.passed),
                    Cell::Int(s.evaluated),
                    Cell::Int(s.skipped),
                    Cell::Flag(s.applicable),
                ]);
            }
            table.write(Format::Csv, out)
        }
    }
}

pub fn builtins(format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(builtin_names(), out),
        Format::Csv => {
            let mut table = Table::new(vec!["name".into()]);
            for name in builtin_names() {
                table.push(vec![Cell::Text(name.to_string())]);
            }
            table.write(Format::Csv, out)
        }
    }
}
