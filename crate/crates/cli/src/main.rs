use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kysmooth::funk_hecke::{log_grid, sample_curve, Dispersion, Smoothing, SmoothingProblem};
use kysmooth::optimize::{sup_over_k_and_r, Equation, SearchOptions};
use kysmooth::oracle::{build_near_extremiser, run_suite, Suite};
use kysmooth::weights::WeightSpec;
use kysmooth::Error;

#[derive(Parser)]
#[command(name = "kysmooth", version, about = "Optimal constants of smoothing estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of CSV (curve, extremiser).
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search tolerance in ln r (constant, extremiser) or check tolerance override (verify).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Log-spaced radius grid r_min:r_max:n.
    #[arg(long, global = true, value_name = "R_MIN:R_MAX:N")]
    grid: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal constant report (JSON).
    Constant {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Level-set depth relative to the supremum.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        k_max: usize,
    },
    /// Tabulate a lambda curve (CSV with header r,value).
    Curve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Curve index (ignored by single-curve variants).
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Run a verification suite (JSON).
    Verify {
        /// funk-hecke, closed-form, decomposition-1d, dirac-1d, quadrature, legendre,
        /// algebra, propagator, scale-covariance, extremiser or all
        suite: String,
    },
    /// Near-extremiser supported in the level set.
    Extremiser {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Level-set depth relative to the supremum.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// schrodinger, dirac or dirac-radial
    #[arg(long = "eq", default_value = "schrodinger")]
    equation: String,
    #[arg(long)]
    d: usize,
    /// power:s=<s>, gauss:a=<a>, exp:a=<a> or table:<csv>, optionally ,c=<scale>
    #[arg(long)]
    weight: String,
    /// one, theorem-explicit, matched, power:p=<p>, powexp:p=<p>,b=<b> or expr:<csv>
    #[arg(long, default_value = "one")]
    psi: String,
    /// r2 or rel:m=<m>; defaults to rel:m=<m> when --m is given
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    m: Option<f64>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyLevelSet(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

impl ProblemArgs {
    fn equation(&self) -> Result<Equation, Failure> {
        Ok(self.equation.parse()?)
    }

    fn build(&self) -> Result<SmoothingProblem, Failure> {
        let phi = match (&self.phi, self.m) {
            (Some(key), m) => {
                let phi = Dispersion::parse(key)?;
                if let (Some(m), Some(pm)) = (m, phi.mass()) {
                    if m != pm {
                        return Err(usage(format!("--m {m} contradicts --phi {key}")));
                    }
                }
                if m.is_some() && phi.mass().is_none() {
                    return Err(usage("--m needs a relativistic --phi"));
                }
                phi
            }
            (None, Some(m)) => Dispersion::parse(&format!("rel:m={m}"))?,
            (None, None) => Dispersion::Schrodinger,
        };
        let weight = WeightSpec::parse(&self.weight, self.d)?;
        let psi = Smoothing::parse(&self.psi)?;
        Ok(SmoothingProblem::new(self.d, weight, psi, phi)?)
    }
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), Failure> {
    let bad = || usage(format!("--grid expects r_min:r_max:n, got '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && hi.is_finite() && n >= 2) {
        return Err(usage(format!("--grid needs 0 < r_min < r_max and n >= 2, got '{s}'")));
    }
    Ok((lo, hi, n))
}

fn search_options(cli: &Cli, eps: f64, k_max: usize) -> Result<SearchOptions, Failure> {
    let mut opts = SearchOptions { eps_rel: eps, k_max, ..Default::default() };
    if let Some(g) = &cli.grid {
        (opts.r_min, opts.r_max, opts.points) = parse_grid(g)?;
    }
    if let Some(t) = cli.tol {
        opts.tol = t;
    }
    opts.validate()?;
    Ok(opts)
}

fn output(cli: &Cli) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cli.out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| usage(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Constant { problem, eps, k_max } => {
            let p = problem.build()?;
            let opts = search_options(cli, *eps, *k_max)?;
            let rep = sup_over_k_and_r(&p, problem.equation()?, &opts)?;
            write_json(&mut *output(cli)?, &rep.to_json())?;
            if rep.attained && rep.sup_value.is_some() {
                Ok(0)
            } else {
                let why = if rep.sup_value.is_none() { "diverges" } else { "is not attained" };
                eprintln!("supremum {why}");
                Ok(2)
            }
        }
        Command::Curve { problem, k } => {
            let p = problem.build()?;
            let variant = problem.equation()?.variant(p.d, *k)?;
            let (lo, hi, n) = match &cli.grid {
                Some(g) => parse_grid(g)?,
                None => (1e-3, 1e3, 101),
            };
            let curve = sample_curve(&p, variant, &log_grid(lo, hi, n))?;
            let mut out = output(cli)?;
            if cli.json {
                write_json(&mut *out, &curve.to_json())?;
            } else {
                curve.write_csv(&mut out)?;
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let suites = Suite::parse_list(suite)?;
            let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, cli.seed, cli.tol)).collect();
            let all = reports.iter().all(|r| r.passed);
            for r in &reports {
                for c in r.failures() {
                    eprintln!("FAIL {}/{}: measured {:e}, tolerance {:e}", r.suite, c.name, c.measured, c.tolerance);
                }
            }
            let v = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::json!({
                    "schema": kysmooth::oracle::VERIFY_SCHEMA,
                    "suite": "all",
                    "seed": cli.seed,
                    "passed": all,
                    "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                })
            };
            write_json(&mut *output(cli)?, &v)?;
            Ok(if all { 0 } else { 1 })
        }
        Command::Extremiser { problem, eps } => {
            let p = problem.build()?;
            let opts = search_options(cli, *eps, 64)?;
            let rep = sup_over_k_and_r(&p, problem.equation()?, &opts)?;
            let e = build_near_extremiser(&p, &rep)?;
            let mut out = output(cli)?;
            if cli.json {
                let mut v = e.to_json();
                v["profile"] = serde_json::to_value(e.profile.rows()).map_err(|x| usage(x.to_string()))?;
                write_json(&mut *out, &v)?;
            } else {
                e.write_csv(&mut out)?;
                out.flush()?;
                let summary = serde_json::to_string(&e.to_json()).map_err(|x| usage(x.to_string()))?;
                if cli.out.is_some() {
                    println!("{summary}");
                } else {
                    eprintln!("{summary}");
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
