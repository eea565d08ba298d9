use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;

use ahg_core::hermite1d::hg1;
use ahg_core::oracle::expand;
use ahg_core::transforms::{
    fourier_closed, frft_closed, laplace_closed, lct_closed, Calibration, CalibrationStatus, LctOptions, PdCheck,
};
use ahg_core::wigner::WvdEngine;
use ahg_core::{AhgMode, AnisotropyMatrix, Complex64, LctParams, ModeExpansion, MultiIndex, PhasePoint, TransformedMode};
use serde_json::{json, Value};

use crate::cli::{CalibrationArg, EvalGridArgs, ExpandArgs, TransformArgs, WvdArgs};
use crate::error::{CliError, CliResult};
use crate::grid::{check_axes, par_map, tensor_points};
use crate::io::{
    axis_names, coefficients_json, complex_json, load_theta, open_output, parse_coefficients, write_csv, write_json,
    MatrixJson,
};
use crate::samples::SampledFunction;

fn check_degree(nu: &MultiIndex, n: usize) -> CliResult<()> {
    if nu.len() != n {
        return Err(CliError::usage(format!("degree {nu} has {} entries but Θ is {n}x{n}", nu.len())));
    }
    Ok(())
}

fn row(point: &[f64], z: Complex64) -> Vec<f64> {
    let mut r = point.to_vec();
    r.push(z.re);
    r.push(z.im);
    r
}

pub fn eval_grid(args: &EvalGridArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let n = theta.dim();
    check_degree(&args.degree, n)?;
    check_axes(&args.grid, n, "--grid")?;
    let mode = if args.dual {
        AhgMode::dual(theta, args.degree.clone())
    } else {
        AhgMode::new(theta, args.degree.clone())
    }
    .map_err(CliError::math)?;
    let points = tensor_points(&args.grid);
    let rows = par_map(&points, |r| Ok(row(r, mode.eval_real(r).map_err(CliError::math)?)))?;
    let mut header = axis_names("r", n);
    header.extend(["re".to_string(), "im".to_string()]);
    write_csv(&mut open_output(args.output.as_deref())?, &header, &rows)
}

/// The transform named by `--kind` or `--abcd`, with a label for the sidecar.
enum Kind {
    Fourier,
    Frft(f64),
    Laplace,
    Lct(LctParams),
}

fn parse_kind(args: &TransformArgs) -> CliResult<Kind> {
    if let Some(s) = &args.abcd {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| CliError::usage(format!("--abcd {s:?} is not a list of numbers")))?;
        let p = match v.len() {
            4 => LctParams::real(v[0], v[1], v[2], v[3]),
            8 => LctParams::new(
                Complex64::new(v[0], v[1]),
                Complex64::new(v[2], v[3]),
                Complex64::new(v[4], v[5]),
                Complex64::new(v[6], v[7]),
            ),
            k => return Err(CliError::usage(format!("--abcd needs 4 or 8 numbers, got {k}"))),
        }
        .map_err(CliError::input)?;
        return Ok(Kind::Lct(p));
    }
    let k = args.kind.as_deref().unwrap_or_default();
    match k {
        "ft" => Ok(Kind::Fourier),
        "laplace" => Ok(Kind::Laplace),
        _ => match k.strip_prefix("frft:") {
            Some(g) => {
                let g: f64 = g.trim().parse().map_err(|_| CliError::usage(format!("bad FrFT order in {k:?}")))?;
                if !g.is_finite() {
                    return Err(CliError::usage("FrFT order must be finite"));
                }
                Ok(Kind::Frft(g))
            }
            None => Err(CliError::usage(format!("unknown transform kind {k:?} (ft, frft:<gamma>, laplace)"))),
        },
    }
}

fn calibration_json(s: &CalibrationStatus) -> Value {
    match s {
        CalibrationStatus::NotRequested => json!({"status": "not-requested"}),
        CalibrationStatus::Applied { factor, ratio } => {
            json!({"status": "applied", "factor": complex_json(*factor), "ratio": complex_json(*ratio)})
        }
        CalibrationStatus::Unavailable(why) => json!({"status": "unavailable", "reason": why}),
    }
}

fn sidecar(kind: &Kind, nu: &MultiIndex, t: &TransformedMode) -> Value {
    let (label, abcd) = match kind {
        Kind::Fourier => ("ft".to_string(), Some(LctParams::fourier())),
        Kind::Frft(g) => (format!("frft:{g:?}"), Some(LctParams::frft(*g))),
        Kind::Laplace => ("laplace".to_string(), None),
        Kind::Lct(p) => ("lct".to_string(), Some(*p)),
    };
    json!({
        "kind": label,
        "abcd": abcd.map(|p| json!([complex_json(p.a), complex_json(p.b), complex_json(p.c), complex_json(p.d)])),
        "degree": nu.to_string(),
        "prefactor": complex_json(t.prefactor()),
        "sigma": t.sigma().map(MatrixJson::from_cmat),
        "xi": MatrixJson::from_cmat(t.xi().matrix()),
        "c": MatrixJson::from_cmat(t.quad_matrix()),
        "arg_map": MatrixJson::from_cmat(t.arg_map()),
        "calibration": calibration_json(t.calibration()),
    })
}

pub fn transform(args: &TransformArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let n = theta.dim();
    check_degree(&args.degree, n)?;
    check_axes(&args.grid, n, "--grid")?;
    let kind = parse_kind(args)?;
    let nu = &args.degree;
    let t = match &kind {
        Kind::Fourier => fourier_closed(&theta, nu),
        Kind::Frft(g) => frft_closed(*g, &theta, nu),
        Kind::Laplace => laplace_closed(&theta, nu),
        Kind::Lct(p) => {
            let opts = LctOptions {
                pd_check: if args.relaxed { PdCheck::Relaxed } else { PdCheck::Strict },
                calibration: match args.calibrate {
                    CalibrationArg::Auto => Calibration::Auto,
                    CalibrationArg::On => Calibration::On,
                    CalibrationArg::Off => Calibration::Off,
                },
            };
            lct_closed(p, &theta, nu, opts)
        }
    }
    .map_err(CliError::math)?;
    let points = tensor_points(&args.grid);
    let rows = par_map(&points, |z| Ok(row(z, t.eval_real(z).map_err(CliError::math)?)))?;
    let mut header = axis_names("z", n);
    header.extend(["re".to_string(), "im".to_string()]);
    write_csv(&mut open_output(args.output.as_deref())?, &header, &rows)?;
    let side = match (&args.sidecar, &args.output) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(o)) if o.as_os_str() != "-" => {
            let mut s = o.clone().into_os_string();
            s.push(".json");
            Some(PathBuf::from(s))
        }
        _ => None,
    };
    if let Some(p) = side {
        write_json(&p, &sidecar(&kind, nu, &t))?;
    }
    Ok(())
}

pub fn wvd(args: &WvdArgs) -> CliResult<()> {
    let theta = load_theta(&args.theta)?;
    let n = theta.dim();
    check_axes(&args.grid, n, "--grid")?;
    check_axes(&args.zeta_grid, n, "--zeta-grid")?;
    let terms = match (&args.coeffs, &args.degree) {
        (Some(c), _) => parse_coefficients(c)?,
        (None, Some(nu)) => BTreeMap::from([(nu.clone(), Complex64::new(1.0, 0.0))]),
        (None, None) => return Err(CliError::usage("wvd needs --coeffs or --degree")),
    };
    for nu in terms.keys() {
        check_degree(nu, n)?;
    }
    let max = terms.keys().map(MultiIndex::degree).max().unwrap_or(0);
    let engine = WvdEngine::new(&theta, max).map_err(CliError::math)?;
    let f = ModeExpansion::new(theta, terms, None).map_err(CliError::input)?;
    let rs = tensor_points(&args.grid);
    let zs = tensor_points(&args.zeta_grid);
    let points: Vec<(usize, usize)> = (0..rs.len()).flat_map(|i| (0..zs.len()).map(move |j| (i, j))).collect();
    let rows = par_map(&points, |&(i, j)| {
        let p = PhasePoint::new(rs[i].clone(), zs[j].clone()).map_err(CliError::input)?;
        let w = engine.expansion(&f, &p).map_err(CliError::math)?;
        let mut out = rs[i].clone();
        out.extend_from_slice(&zs[j]);
        out.push(w.re);
        out.push(w.im);
        Ok(out)
    })?;
    let mut header = axis_names("r", n);
    header.extend(axis_names("zeta", n));
    header.extend(["w_re".to_string(), "w_im".to_string()]);
    write_csv(&mut open_output(args.output.as_deref())?, &header, &rows)
}

/// Named test functions for `expand --builtin`.
pub enum Builtin {
    /// `π^{−n/4} e^{−|r|²/2}`, the isotropic unit-norm Gaussian.
    Gaussian,
    /// `HG^Θ_ν` for the job's own `Θ`.
    Mode(MultiIndex),
    /// The isotropic Gaussian centred at `s`.
    Shifted(Vec<f64>),
}

impl Builtin {
    pub fn parse(s: &str, n: usize) -> CliResult<Self> {
        let b = if s == "gaussian" {
            Builtin::Gaussian
        } else if let Some(nu) = s.strip_prefix("mode:") {
            let nu: MultiIndex = nu.parse().map_err(CliError::input)?;
            check_degree(&nu, n)?;
            Builtin::Mode(nu)
        } else if let Some(v) = s.strip_prefix("shifted-gaussian:") {
            let v = v
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|_| CliError::usage(format!("bad shift in {s:?}")))?;
            if v.len() != n || v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::usage(format!("shift in {s:?} needs {n} finite entries")));
            }
            Builtin::Shifted(v)
        } else {
            return Err(CliError::usage(format!(
                "unknown builtin {s:?} (gaussian, mode:<ν>, shifted-gaussian:<s>)"
            )));
        };
        Ok(b)
    }

    fn eval(&self, theta: &AnisotropyMatrix, mode: Option<&AhgMode>, r: &[f64]) -> Complex64 {
        let gauss = |shift: &[f64]| {
            r.iter()
                .zip(shift)
                .map(|(x, s)| hg1(0, Complex64::new(x - s, 0.0)))
                .product::<Complex64>()
        };
        match self {
            Builtin::Gaussian => gauss(&vec![0.0; theta.dim()]),
            Builtin::Shifted(s) => gauss(s),
            Builtin::Mode(_) => mode.and_then(|m| m.eval_real(r).ok()).unwrap_or_default(),
        }
    }
}

pub fn expand_job(args: &ExpandArgs) -> CliResult<Value> {
    let theta = load_theta(&args.theta)?;
    let n = theta.dim();
    if !(2..=256).contains(&args.nodes) {
        return Err(CliError::usage("--nodes must be between 2 and 256"));
    }
    let e = match (&args.builtin, &args.samples) {
        (Some(b), _) => {
            let b = Builtin::parse(b, n)?;
            let mode = match &b {
                Builtin::Mode(nu) => Some(AhgMode::new(theta.clone(), nu.clone()).map_err(CliError::math)?),
                _ => None,
            };
            expand(|r| b.eval(&theta, mode.as_ref(), r), &theta, args.max_order, args.nodes)
        }
        (None, Some(path)) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let f = SampledFunction::from_csv(file, n)?;
            expand(|r| f.eval(r), &theta, args.max_order, args.nodes)
        }
        (None, None) => return Err(CliError::usage("expand needs --builtin or --samples")),
    }
    .map_err(CliError::math)?;
    Ok(json!({
        "max_order": args.max_order,
        "nodes": args.nodes,
        "residual": e.residual,
        "tail_ratio": e.tail_ratio,
        "coefficients": coefficients_json(e.coefficients.terms()),
    }))
}

pub fn expand_cmd(args: &ExpandArgs) -> CliResult<()> {
    let v = expand_job(args)?;
    match args.output.as_deref() {
        Some(p) if p.as_os_str() != "-" => write_json(p, &v),
        _ => {
            let mut out = open_output(None)?;
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            out.write_all(s.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
