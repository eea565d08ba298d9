//! Acceptance run: one PASS/FAIL line per criterion, each followed by the
//! checks it is made of. Exits non-zero when any criterion fails.
//!
//! Criteria 1 to 13 run the verification suites in process with their default
//! parameters and tolerances; criterion 14 times the `ahg` binary end to end.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ahg_cli::verify::{run, Check, Suite, VerifyConfig};

const FULL_RUN_LIMIT: Duration = Duration::from_secs(300);

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [Suite],
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "orthonormality, n=2, |ν|,|μ|≤3, 80 nodes, < 1e-8, < 60 s", suites: &[Suite::Orthogonality] },
    Criterion { id: 2, title: "decomposition for Θ=I, n≤3, |ν|≤6, < 1e-12", suites: &[Suite::Decomposition] },
    Criterion { id: 3, title: "generating function, n≤2, ‖x‖≤0.3, order 30, rel < 1e-9", suites: &[Suite::Generating] },
    Criterion { id: 4, title: "derivatives vs finite differences < 1e-5, trace identity < 1e-12", suites: &[Suite::Derivatives] },
    Criterion { id: 5, title: "anisotropy re-expansion, 5 pairs, |ν|≤5, rel < 1e-9", suites: &[Suite::Anisotropy] },
    Criterion { id: 6, title: "offset and product expansions, |ν|,|μ|≤4, rel < 1e-9", suites: &[Suite::Offset, Suite::Product] },
    Criterion { id: 7, title: "value at origin, |ν|≤8, n≤3, < 1e-11", suites: &[Suite::Zero] },
    Criterion { id: 8, title: "Fourier closed form < 1e-7, eigenrelation and parity < 1e-12", suites: &[Suite::Fourier] },
    Criterion { id: 9, title: "LCT closed vs numeric < 1e-6, preconditions and failure path", suites: &[Suite::Lct] },
    Criterion { id: 10, title: "LCT eigenmodes for a=d=2, b=1, rel < 1e-8", suites: &[Suite::Eigen] },
    Criterion { id: 11, title: "FrFT at π/2, additivity, γ→0 limit", suites: &[Suite::Frft] },
    Criterion { id: 12, title: "Laplace eigenrelation rel < 1e-7, Gaussian < 1e-10", suites: &[Suite::Laplace] },
    Criterion { id: 13, title: "WVD closed vs numeric < 1e-6, realness < 1e-10, symmetry < 1e-12", suites: &[Suite::Wvd] },
];

fn line(pass: bool, id: u32, title: &str) -> String {
    format!("{} criterion {id:>2}: {title}", if pass { "PASS" } else { "FAIL" })
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let mut failed = Vec::new();

    for c in &CRITERIA {
        let mut checks: Vec<Check> = Vec::new();
        let mut setup_error = None;
        for &s in c.suites {
            match run(s, &cfg) {
                Ok(v) => checks.extend(v),
                Err(e) => setup_error = Some(e.to_string()),
            }
        }
        let pass = setup_error.is_none() && !checks.is_empty() && checks.iter().all(Check::passed);
        println!("{}", line(pass, c.id, c.title));
        for ch in &checks {
            println!("    {ch}");
        }
        if let Some(e) = setup_error {
            println!("    error: {e}");
        }
        if !pass {
            failed.push(c.id);
        }
    }

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ahg")).args(["verify", "--suite", "all"]).output();
    let elapsed = start.elapsed();
    let (pass, detail) = match out {
        Ok(o) => (
            o.status.success() && elapsed < FULL_RUN_LIMIT,
            format!("exit {:?}, {:.1} s (limit {} s)", o.status.code(), elapsed.as_secs_f64(), FULL_RUN_LIMIT.as_secs()),
        ),
        Err(e) => (false, format!("could not start ahg: {e}")),
    };
    println!("{}", line(pass, 14, "`ahg verify --suite all` succeeds in under 5 minutes"));
    println!("    {detail}");
    if !pass {
        failed.push(14);
    }

    if failed.is_empty() {
        println!("all 14 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
