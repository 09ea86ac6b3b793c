//! Sample grids over a curve's parameter domain.
//!
//! Per-sample work is independent, so [`map_samples`] fans out over rayon when
//! the `parallel` feature is on and falls back to a plain loop otherwise.

use crate::curvespec::CurveModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    /// Periodic grids omit `hi`, which coincides with `lo`.
    pub periodic: bool,
}

impl Grid {
    pub fn for_curve(model: &CurveModel, samples: usize) -> Grid {
        let (lo, hi) = model.domain();
        Grid {
            lo,
            hi,
            samples: samples.max(2),
            periodic: model.is_periodic(),
        }
    }

    pub fn step(&self) -> f64 {
        let cells = if self.periodic {
            self.samples
        } else {
            self.samples - 1
        };
        (self.hi - self.lo) / cells as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        if !self.periodic && k + 1 == self.samples {
            self.hi
        } else {
            self.lo + self.step() * k as f64
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.samples).map(|k| self.theta(k)).collect()
    }
}

pub fn map_samples_sequential<T, F>(thetas: &[f64], f: F) -> Vec<T>
where
    F: Fn(f64) -> T,
{
    thetas.iter().map(|&t| f(t)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_samples_parallel<T, F>(thetas: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    thetas.par_iter().map(|&t| f(t)).collect()
}

/// Applies `f` at every parameter, in order.
pub fn map_samples<T, F>(thetas: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_samples_parallel(thetas, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_samples_sequential(thetas, f)
    }
}

/// [`map_samples`] for arbitrary work items.
pub fn map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
