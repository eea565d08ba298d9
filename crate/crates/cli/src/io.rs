//! File formats: anisotropy and coefficient JSON, numeric CSV.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use ahg_core::{AnisotropyMatrix, CMat, Complex64, MultiIndex};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

/// `{"n": 2, "re": [[..], [..]], "im": [[..], [..]]}`; `im` defaults to zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_cmat(m: &CMat) -> Self {
        let n = m.dim();
        let re = (0..n).map(|j| m.row(j).iter().map(|z| z.re).collect()).collect();
        let im = (0..n).map(|j| m.row(j).iter().map(|z| z.im).collect()).collect();
        MatrixJson { n, re, im: Some(im) }
    }

    pub fn to_cmat(&self) -> CliResult<CMat> {
        if self.re.len() != self.n {
            return Err(CliError::usage(format!("matrix declares n = {} but has {} rows", self.n, self.re.len())));
        }
        CMat::from_parts(&self.re, self.im.as_deref()).map_err(CliError::input)
    }
}

/// Reads an anisotropy matrix from a JSON file, or from inline JSON when the
/// argument itself starts with `{`.
pub fn load_theta(arg: &str) -> CliResult<AnisotropyMatrix> {
    let text = read_arg(arg)?;
    let m: MatrixJson = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("theta JSON: {e}")))?;
    AnisotropyMatrix::new(m.to_cmat()?).map_err(CliError::input)
}

fn read_arg(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::usage(format!("cannot read {arg}: {e}")))
    }
}

/// Coefficient maps `{"2,1": [re, im], ...}`.
pub fn parse_coefficients(arg: &str) -> CliResult<BTreeMap<MultiIndex, Complex64>> {
    let text = read_arg(arg)?;
    let map: BTreeMap<String, [f64; 2]> =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("coefficient JSON: {e}")))?;
    let mut out = BTreeMap::new();
    for (k, [re, im]) in map {
        let nu: MultiIndex = k.parse().map_err(CliError::input)?;
        if out.insert(nu, Complex64::new(re, im)).is_some() {
            return Err(CliError::usage(format!("degree {k} listed twice")));
        }
    }
    if out.is_empty() {
        return Err(CliError::usage("coefficient map is empty"));
    }
    Ok(out)
}

pub fn coefficients_json<'a>(terms: impl IntoIterator<Item = (&'a MultiIndex, &'a Complex64)>) -> Value {
    let mut map = Map::new();
    for (nu, a) in terms {
        map.insert(nu.to_string(), json!([a.re, a.im]));
    }
    Value::Object(map)
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Numeric CSV with a header row.
pub fn write_csv(out: &mut dyn Write, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Opens `path` for writing, with `-` or no path meaning standard output.
pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(std::io::BufWriter::new(fs::File::create(p)?))),
        _ => Ok(Box::new(std::io::BufWriter::new(std::io::stdout().lock()))),
    }
}

pub fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Header names `prefix1..prefixn`.
pub fn axis_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}
