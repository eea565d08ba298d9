//! Sampled functions on a tensor grid, read from CSV and interpolated
//! multilinearly. Outside the sampled box the function is taken as zero.

use std::io::Read;

use ahg_core::Complex64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct SampledFunction {
    axes: Vec<Vec<f64>>,
    /// Values in row-major order, first axis slowest.
    values: Vec<Complex64>,
}

impl SampledFunction {
    /// Reads rows `r1,...,rn,re,im` with a header. Rows may come in any order
    /// but must cover the full tensor grid exactly once.
    pub fn from_csv(reader: impl Read, n: usize) -> CliResult<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let width = rdr.headers()?.len();
        if width != n + 2 {
            return Err(CliError::usage(format!("sample CSV has {width} columns, expected {} (r1..r{n},re,im)", n + 2)));
        }
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::usage(format!("sample CSV row {}: {e}", i + 1)))?;
            if row.iter().any(|x| !x.is_finite()) {
                return Err(CliError::usage(format!("sample CSV row {} has non-finite entries", i + 1)));
            }
            rows.push(row);
        }
        let mut axes: Vec<Vec<f64>> = (0..n).map(|k| rows.iter().map(|r| r[k]).collect()).collect();
        for a in &mut axes {
            a.sort_by(f64::total_cmp);
            a.dedup();
            if a.len() < 2 {
                return Err(CliError::usage("each sample axis needs at least 2 distinct coordinates"));
            }
        }
        let total: usize = axes.iter().map(Vec::len).product();
        if rows.len() != total {
            return Err(CliError::usage(format!("samples do not form a full tensor grid ({} rows, {total} cells)", rows.len())));
        }
        let mut values = vec![None; total];
        for row in &rows {
            let mut flat = 0;
            for (k, a) in axes.iter().enumerate() {
                let j = a.binary_search_by(|v| v.total_cmp(&row[k])).expect("coordinate taken from the rows");
                flat = flat * a.len() + j;
            }
            if values[flat].replace(Complex64::new(row[n], row[n + 1])).is_some() {
                return Err(CliError::usage(format!("duplicate sample at {:?}", &row[..n])));
            }
        }
        let values = values.into_iter().map(|v| v.expect("grid is complete")).collect();
        Ok(SampledFunction { axes, values })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn eval(&self, r: &[f64]) -> Complex64 {
        let n = self.axes.len();
        // per-axis lower cell index and fractional offset
        let mut cell = Vec::with_capacity(n);
        for (a, &x) in self.axes.iter().zip(r) {
            let (lo, hi) = (a[0], a[a.len() - 1]);
            if !(lo..=hi).contains(&x) {
                return Complex64::new(0.0, 0.0);
            }
            let j = a.partition_point(|&v| v <= x).clamp(1, a.len() - 1) - 1;
            cell.push((j, (x - a[j]) / (a[j + 1] - a[j])));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut flat = 0;
            for (k, &(j, t)) in cell.iter().enumerate() {
                let up = (corner >> k) & 1;
                w *= if up == 1 { t } else { 1.0 - t };
                flat = flat * self.axes[k].len() + j + up;
            }
            if w != 0.0 {
                acc += self.values[flat] * w;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_is_exact_on_bilinear_data() {
        let mut csv = String::from("r1,r2,re,im\n");
        for x in [-1.0, 0.0, 2.0] {
            for y in [0.0, 1.0] {
                csv += &format!("{x},{y},{},{}\n", 1.0 + 2.0 * x - y + x * y, x);
            }
        }
        let f = SampledFunction::from_csv(csv.as_bytes(), 2).unwrap();
        for (x, y) in [(-0.5, 0.25), (1.3, 0.9), (2.0, 1.0), (-1.0, 0.0)] {
            let v = f.eval(&[x, y]);
            assert!((v - Complex64::new(1.0 + 2.0 * x - y + x * y, x)).norm() < 1e-14, "{x} {y}");
        }
        assert_eq!(f.eval(&[2.5, 0.5]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_ragged_grids() {
        let csv = "r1,re,im\n0,1,0\n1,1,0\n1,2,0\n";
        assert!(SampledFunction::from_csv(csv.as_bytes(), 1).is_err());
        let csv = "r1,r2,re,im\n0,0,1,0\n1,0,1,0\n0,1,1,0\n";
        assert!(SampledFunction::from_csv(csv.as_bytes(), 2).is_err());
        assert!(SampledFunction::from_csv("r1,re\n0,1\n".as_bytes(), 1).is_err());
    }
}
