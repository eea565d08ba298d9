//! Tensor grids and deterministic parallel evaluation over them.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// One axis `min:max:count`, sampled uniformly with both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|k| {
                if k == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (k as f64) / (last as f64)
                }
            })
            .collect()
    }
}

impl FromStr for AxisSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::usage(format!("grid axis {s:?} is not min:max:count"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !min.is_finite() || !max.is_finite() {
            return Err(CliError::usage(format!("grid axis {s:?} has non-finite bounds")));
        }
        if count < 2 {
            return Err(CliError::usage(format!("grid axis {s:?} needs at least 2 points")));
        }
        Ok(AxisSpec { min, max, count })
    }
}

/// Cartesian product of the axes, first axis slowest.
pub fn tensor_points(axes: &[AxisSpec]) -> Vec<Vec<f64>> {
    let per_axis: Vec<Vec<f64>> = axes.iter().map(AxisSpec::points).collect();
    let mut out = vec![Vec::new()];
    for pts in &per_axis {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pts.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn check_axes(axes: &[AxisSpec], n: usize, what: &str) -> CliResult<()> {
    if axes.len() != n {
        return Err(CliError::usage(format!("{what} has {} axes but the problem has dimension {n}", axes.len())));
    }
    Ok(())
}

/// Worker count from `AHG_THREADS`, or rayon's default when unset.
pub fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var("AHG_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::usage(format!("AHG_THREADS={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Maps `f` over `items` on a worker pool. Results keep the input order, so
/// the output does not depend on scheduling or on the worker count.
pub fn par_map<T, R, F>(items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> CliResult<R> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_count()? {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| CliError::usage(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}
