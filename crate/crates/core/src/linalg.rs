//! Small dense helpers on `&[f64]` points and jet-valued linear systems.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jets::{Jet, VecJet};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    matrix_from_rows(rows).determinant()
}

/// Orthogonal projector onto the span of orthonormal `basis` vectors in `R^dim`.
pub fn projector(basis: &[Vec<f64>], dim: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(dim, dim);
    for b in basis {
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += b[i] * b[j];
            }
        }
    }
    p
}

/// Solution of a jet-valued square system `A(h) q(h) = b(h)`.
#[derive(Debug, Clone)]
pub struct JetSolution {
    pub solution: VecJet,
    /// 1-norm condition number of the row-equilibrated constant matrix.
    pub condition: f64,
}

/// Solves `A(h) q(h) = b(h)` order by order: with `A = Σ A_j h^j`,
/// `q_j = A_0^{-1} (b_j - Σ_{i=1..j} A_i q_{j-i})`.
///
/// `rows[i]` is row `i` of `A` as a vector jet; every jet must share one order.
pub fn solve_jet_system(rows: &[VecJet], rhs: &[Jet]) -> Result<JetSolution> {
    let n = rows.len();
    if n == 0 || rhs.len() != n || rows.iter().any(|r| r.dim() != n) {
        return Err(Error::DimensionError(
            "jet system must be square and match its right-hand side".into(),
        ));
    }
    let order = rows[0].order();

    // Row equilibration on the constant term.
    let row_scale: Vec<f64> = rows
        .iter()
        .map(|r| {
            let v = r.value();
            let nrm = norm(&v);
            if nrm > 0.0 {
                1.0 / nrm
            } else {
                1.0
            }
        })
        .collect();
    let coeff_matrix = |k: usize| {
        DMatrix::from_fn(n, n, |i, j| rows[i].component(j).coeff(k) * row_scale[i])
    };

    let a0 = coeff_matrix(0);
    let lu = a0.clone().lu();
    let Some(inv) = lu.try_inverse() else {
        return Err(Error::IllConditionedSystem(f64::INFINITY));
    };
    let condition = column_sum_norm(&a0) * column_sum_norm(&inv);
    let condition = if condition.is_finite() {
        condition
    } else {
        f64::INFINITY
    };

    let higher: Vec<DMatrix<f64>> = (1..=order).map(coeff_matrix).collect();
    let mut q: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut b = nalgebra::DVector::from_fn(n, |i, _| rhs[i].coeff(k) * row_scale[i]);
        for i in 1..=k {
            b -= &higher[i - 1] * &q[k - i];
        }
        q.push(&inv * b);
    }

    let components = (0..n)
        .map(|j| {
            let coeffs: Vec<f64> = q.iter().map(|qk| qk[j]).collect();
            Jet::new(&coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JetSolution {
        solution: VecJet::new(components)?,
        condition,
    })
}

fn column_sum_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Least-squares fit of a hypersphere `‖x - q‖ = r` through `points` via the
/// linear model `2⟨x, q⟩ + d = ‖x‖²`, `d = r² - ‖q‖²`. Returns `(centre, radius,
/// rms residual of ‖x - q‖ - r)`.
pub fn fit_sphere(points: &[Vec<f64>]) -> Option<(Vec<f64>, f64, f64)> {
    let dim = points.first()?.len();
    if points.len() < dim + 1 {
        return None;
    }
    let a = DMatrix::from_fn(points.len(), dim + 1, |i, j| {
        if j < dim {
            2.0 * points[i][j]
        } else {
            1.0
        }
    });
    let b = nalgebra::DVector::from_fn(points.len(), |i, _| dot(&points[i], &points[i]));
    let svd = a.svd(true, true);
    let sol = svd.solve(&b, 1e-14).ok()?;
    let centre: Vec<f64> = (0..dim).map(|j| sol[j]).collect();
    let r2 = sol[dim] + dot(&centre, &centre);
    if r2 <= 0.0 {
        return None;
    }
    let radius = r2.sqrt();
    let rms = (points
        .iter()
        .map(|p| (distance(p, &centre) - radius).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Some((centre, radius, rms))
}
