//! `randnorm`: norms induced by random vectors, from the command line.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 for
//! unreadable or malformed input, 3 when a mathematical precondition fails
//! (odd degree on an analytic path, missing moments, non-Hermitian input to a
//! Hermitian-only method).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use serde_json::json;

use randnorm::cumulants::DistributionSpec;
use randnorm::error::Error;
use randnorm::matrix::{hermitian_eigenvalues, ComplexMatrix, Matrix};
use randnorm::norm::{
    general_norm_pow, hermitian_norm_pow, hermitian_norm_pow_exact, series_norm_pow,
    series_norm_pow_exact,
};
use randnorm::oracle::mc_norm_pow;
use randnorm::scalar::{parse_rational, rational_to_f64, rel_diff};
use randnorm::symbolic::ParamPoly;
use randnorm::sympoly::{format_hunter, hunter_poly, hunter_poly_recursive};
use randnorm::verify::{self, Suite};
use randnorm::words::{symbolic_formula, Coefficient, TracePolynomial};
use randnorm::CumulantVector;

const MATRIX_HELP: &str = "Matrix files: {\"n\": N, \"re\": [[..]], \"im\": [[..]]}, row-major; \"im\" may be
omitted; entries may be numbers or fraction strings such as \"1/3\".";

fn after_help() -> String {
    format!(
        "Distributions (family:key=value,...):\n{}\n\n{MATRIX_HELP}",
        DistributionSpec::catalog_help()
    )
}

#[derive(Parser)]
#[command(name = "randnorm", version, about = "Matrix norms induced by random vectors", after_help = after_help())]
struct Cli {
    /// Worker threads for sampling and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate |||Z|||_{X,d} for a matrix file.
    Norm {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        dist: String,
        #[arg(long, short)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Method::Partition)]
        method: Method,
        /// Evaluate in exact rational arithmetic (real symmetric input only).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the trace-polynomial form of |||Z|||^d.
    Formula {
        /// Distribution; omit with --generic.
        #[arg(long, required_unless_present = "generic")]
        dist: Option<String>,
        #[arg(long, short)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Keep distribution parameters as symbols.
        #[arg(long)]
        symbolic: bool,
        /// Use the cumulants themselves as symbols k1, k2, ...
        #[arg(long, conflicts_with_all = ["dist", "symbolic"])]
        generic: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print H_{d,alpha} in the h_k basis, and evaluate it at --x.
    Hunter {
        #[arg(long, short)]
        degree: usize,
        #[arg(long)]
        alpha: usize,
        /// Comma-separated rationals.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of |||A|||_{X,d} for a Hermitian matrix file.
    Oracle {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        dist: String,
        #[arg(long, short)]
        degree: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, env = "RANDNORM_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run randomized property suites; prints a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "RANDNORM_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Partition,
    Series,
    Words,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Hermitian,
    General,
}

enum Failure {
    Usage(String),
    Precondition(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &str) -> std::result::Result<String, Failure> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn dist(s: &str) -> std::result::Result<DistributionSpec, Failure> {
    Ok(s.parse::<DistributionSpec>()?)
}

fn even(d: usize) -> std::result::Result<(), Failure> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: d }.into());
    }
    if d % 2 == 1 {
        return Err(Error::OddDegree(d).into());
    }
    Ok(())
}

fn run_norm(matrix: &str, spec: &str, d: usize, method: Method, exact: bool, as_json: bool) -> Outcome {
    let text = read(matrix)?;
    let spec = dist(spec)?;
    let z = ComplexMatrix::from_json_str(&text)?;
    even(d)?;
    let hermitian = z.is_hermitian(z.default_hermitian_tol());
    let method = match method {
        Method::Auto if !hermitian => Method::Words,
        m => m,
    };
    if exact && method == Method::Words {
        return Err(Failure::Precondition("--exact applies to the partition and series methods".into()));
    }

    // (method name, norm^d, exact norm^d)
    let mut results: Vec<(&str, f64, Option<BigRational>)> = Vec::new();
    let exact_matrix = if exact { Some(Matrix::from_json_str_exact(&text)?) } else { None };
    let partition = || -> std::result::Result<(&'static str, f64, Option<BigRational>), Failure> {
        Ok(match &exact_matrix {
            Some(q) => {
                let v = hermitian_norm_pow_exact(q, &spec, d)?;
                ("partition", rational_to_f64(&v), Some(v))
            }
            None => ("partition", hermitian_norm_pow(&z, &spec, d)?, None),
        })
    };
    let series = || -> std::result::Result<(&'static str, f64, Option<BigRational>), Failure> {
        Ok(match &exact_matrix {
            Some(q) => {
                let v = series_norm_pow_exact(q, &spec, d)?;
                ("series", rational_to_f64(&v), Some(v))
            }
            None => ("series", series_norm_pow(&z, &spec, d)?, None),
        })
    };
    match method {
        Method::Partition => results.push(partition()?),
        Method::Series => results.push(series()?),
        Method::Words => results.push(("words", general_norm_pow(&z, &spec, d)?, None)),
        Method::Auto => {
            results.push(partition()?);
            if spec.has_mgf() {
                results.push(series()?);
            }
        }
    }

    let discrepancy = (results.len() == 2).then(|| rel_diff(results[0].1, results[1].1));
    if as_json {
        let rows: Vec<_> = results
            .iter()
            .map(|(m, v, q)| {
                let mut o = json!({
                    "method": m,
                    "norm_pow": v,
                    "norm": v.max(0.0).powf(1.0 / d as f64),
                });
                if let Some(q) = q {
                    o["norm_pow_exact"] = json!(q.to_string());
                }
                o
            })
            .collect();
        let mut out = json!({ "degree": d, "dist": spec.to_string(), "results": rows });
        if let Some(x) = discrepancy {
            out["relative_discrepancy"] = json!(x);
        }
        return Ok(format!("{out}\n"));
    }
    let mut out = String::new();
    for (m, v, q) in &results {
        let _ = writeln!(out, "method: {m}");
        if let Some(q) = q {
            let _ = writeln!(out, "norm^{d} = {q}");
        } else {
            let _ = writeln!(out, "norm^{d} = {v}");
        }
        let _ = writeln!(out, "norm = {}", v.max(0.0).powf(1.0 / d as f64));
    }
    if let Some(x) = discrepancy {
        let _ = writeln!(out, "relative discrepancy: {x:e}");
    }
    Ok(out)
}

fn render<C: Coefficient>(f: &TracePolynomial<C>, as_json: bool) -> String {
    if as_json {
        format!("{}\n", f.to_json())
    } else {
        f.to_text()
    }
}

fn run_formula(spec: Option<&str>, d: usize, mode: Mode, symbolic: bool, generic: bool, as_json: bool) -> Outcome {
    let hermitian = mode == Mode::Hermitian;
    even(d)?;
    if generic {
        let k = CumulantVector::new((1..=d).map(|j| ParamPoly::symbol(&format!("k{j}"))).collect());
        return Ok(render(&symbolic_formula(&k, d, hermitian)?, as_json));
    }
    let spec = dist(spec.unwrap_or_default())?;
    spec.check_moments_exist(d)?;
    if symbolic {
        Ok(render(&symbolic_formula(&spec.symbolic_cumulants(d)?, d, hermitian)?, as_json))
    } else {
        Ok(render(&symbolic_formula(&spec.cumulants(d)?, d, hermitian)?, as_json))
    }
}

fn run_hunter(d: usize, alpha: usize, x: Option<&str>, as_json: bool) -> Outcome {
    even(d)?;
    if alpha == 0 {
        return Err(Failure::Precondition("alpha must be at least 1".into()));
    }
    let form = format_hunter(d, alpha);
    let values = match x {
        Some(s) => {
            let x = s
                .split(',')
                .map(|v| parse_rational(v.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            Some((hunter_poly(d, alpha, &x), hunter_poly_recursive(d, alpha, &x)))
        }
        None => None,
    };
    if as_json {
        let mut out = json!({ "degree": d, "alpha": alpha, "polynomial": form });
        if let Some((v, r)) = &values {
            out["value"] = json!(v.to_string());
            out["recursive"] = json!(r.to_string());
        }
        return Ok(format!("{out}\n"));
    }
    let mut out = format!("H_{{{d},{alpha}}} = {form}\n");
    if let Some((v, r)) = values {
        let _ = writeln!(out, "value = {v}\nrecursive = {r}");
    }
    Ok(out)
}

fn run_oracle(matrix: &str, spec: &str, d: usize, samples: usize, seed: u64, as_json: bool) -> Outcome {
    let text = read(matrix)?;
    let spec = dist(spec)?;
    let a = ComplexMatrix::from_json_str(&text)?;
    let lambdas = hermitian_eigenvalues(&a)?;
    let pow = mc_norm_pow(lambdas.as_slice(), &spec, d, samples, seed)?;
    let root = pow.root(d);
    if as_json {
        let out = json!({
            "degree": d,
            "dist": spec.to_string(),
            "norm_pow": pow,
            "norm": root,
        });
        return Ok(format!("{out}\n"));
    }
    Ok(format!(
        "norm^{d} = {} ± {}\nnorm = {} ± {}\nsamples = {}, seed = {}\n",
        pow.value, pow.stderr, root.value, root.stderr, samples, seed
    ))
}

fn run_verify(suite: &str, seed: u64, trials: usize) -> Outcome {
    let suite: Suite = suite.parse()?;
    let report = verify::run(suite, seed, trials);
    let text = format!("{}\n", serde_json::to_string(&report).expect("report serializes"));
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verify(text))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Norm {
            matrix,
            dist,
            degree,
            method,
            exact,
            json,
        } => run_norm(&matrix, &dist, degree, method, exact, json),
        Command::Formula {
            dist,
            degree,
            mode,
            symbolic,
            generic,
            json,
        } => run_formula(dist.as_deref(), degree, mode, symbolic, generic, json),
        Command::Hunter { degree, alpha, x, json } => run_hunter(degree, alpha, x.as_deref(), json),
        Command::Oracle {
            matrix,
            dist,
            degree,
            samples,
            seed,
            json,
        } => run_oracle(&matrix, &dist, degree, samples, seed, json),
        Command::Verify { suite, seed, trials } => run_verify(&suite, seed, trials),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verify(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
