//! Command-line front end: file validation, kernel application, symbols and
//! S-transforms, kernel expansion/reconstruction, and the verification
//! suites as exit-code-bearing commands.
//!
//! Exit codes: 0 on success, 1 when a verified property fails, 2 on usage
//! or format errors.

mod formats;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fockex::bounds::BoundGrid;
use fockex::expansion::{fock_expand, fock_expand_full, reconstruct};
use fockex::fock::s_transform;
use fockex::modespace::{ModeSpace, Ms};
use fockex::operator::{symbol_eval, OperatorMatrix, ParityClass};
use fockex::suites::{run_suite, SuiteReport};
use fockex::wedge::WedgeTensor;
use fockex::Rational;
use formats::{
    family_from_body, family_to_body, full_expansion_from_file, full_expansion_to_file,
    mode_space_from_file, operator_from_file, operator_to_file, vector_from_file, vector_to_file,
    wedge_from_file, CliScalar, FockVectorFile, ModeSpaceFile, OperatorFile, ValueRepr,
};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Arith {
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "fockex",
    version,
    about = "Finite-mode fermionic wedge calculus"
)]
struct Cli {
    /// Scalar arithmetic: exact rationals or binary64.
    #[arg(long, global = true, value_enum, default_value_t = Arith::Rational)]
    arith: Arith,

    /// Number of modes d.
    #[arg(long, global = true, default_value_t = 4)]
    modes: usize,

    /// Comma-separated eigenvalue weights (default: 2,3,...,d+1).
    #[arg(long, global = true)]
    lambdas: Option<String>,

    /// Hilbert-Schmidt exponent alpha.
    #[arg(long, global = true, default_value = "1")]
    alpha: String,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Report format for verify.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,

    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative tolerance for the float-mode bound suite.
    #[arg(long, global = true, default_value_t = fockex::bounds::DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a JSON file and check its invariants against the configuration.
    Validate { file: PathBuf },
    /// Apply a kernel family to a Fock vector.
    Apply {
        #[arg(long)]
        kernels: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Evaluate an operator symbol (or, with --phi, an S-transform).
    Symbol {
        #[arg(long)]
        operator: Option<PathBuf>,
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        zeta: PathBuf,
        #[arg(long)]
        eta: Option<PathBuf>,
    },
    /// Expand an operator matrix into kernel families (with residual).
    Expand {
        #[arg(long)]
        operator: PathBuf,
        /// Mode index j of the normalized transport vector f = e_j used for
        /// full-parity operators.
        #[arg(long, default_value_t = 1)]
        weyl_mode: usize,
    },
    /// Rebuild the operator matrix of a kernel family file.
    Reconstruct {
        #[arg(long)]
        kernels: PathBuf,
    },
    /// Run verification suites; exit 1 if any property fails.
    Verify {
        /// car | wedge | contract | bounds | expansion | full | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Bound-suite grid (only "default" is defined).
        #[arg(long, default_value = "default")]
        grid: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<bool> {
    match cli.arith {
        Arith::Rational => dispatch::<Rational>(cli),
        Arith::Float => dispatch::<f64>(cli),
    }
}

fn parse_scalar<S: CliScalar>(text: &str) -> Result<S> {
    S::parse_value(&ValueRepr::Str(text.to_string()))
}

fn build_mode_space<S: CliScalar>(cli: &Cli) -> Result<Ms<S>> {
    let lambdas: Vec<S> = match &cli.lambdas {
        None => (0..cli.modes).map(|j| S::from_int(j as i64 + 2)).collect(),
        Some(list) => list
            .split(',')
            .map(|s| parse_scalar::<S>(s.trim()))
            .collect::<Result<Vec<_>>>()
            .context("--lambdas")?,
    };
    let alpha = parse_scalar::<S>(&cli.alpha).context("--alpha")?;
    Ok(ModeSpace::new(cli.modes, lambdas, alpha)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.out {
        None => print!("{text}"),
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
    }
    Ok(())
}

fn emit_text(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        None => println!("{text}"),
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?,
    }
    Ok(())
}

fn dispatch<S: CliScalar>(cli: &Cli) -> Result<bool> {
    let ms = build_mode_space::<S>(cli)?;
    match &cli.cmd {
        Cmd::Validate { file } => cmd_validate::<S>(cli, &ms, file),
        Cmd::Apply { kernels, vector } => cmd_apply::<S>(cli, &ms, kernels, vector),
        Cmd::Symbol {
            operator,
            phi,
            zeta,
            eta,
        } => cmd_symbol::<S>(
            cli,
            &ms,
            operator.as_deref(),
            phi.as_deref(),
            zeta,
            eta.as_deref(),
        ),
        Cmd::Expand {
            operator,
            weyl_mode,
        } => cmd_expand::<S>(cli, &ms, operator, *weyl_mode),
        Cmd::Reconstruct { kernels } => cmd_reconstruct::<S>(cli, &ms, kernels),
        Cmd::Verify { suite, grid } => cmd_verify(cli, suite, grid),
    }
}

fn cmd_validate<S: CliScalar>(cli: &Cli, ms: &Ms<S>, file: &Path) -> Result<bool> {
    let value: serde_json::Value = read_json(file)?;
    let kind = if value.get("kind").is_some() {
        let op: OperatorFile = serde_json::from_value(value)?;
        match &op {
            OperatorFile::Matrix { parity, blocks } => {
                operator_from_file::<S>(ms, parity, blocks)?;
                "operator matrix"
            }
            OperatorFile::Kernels { body, .. } => {
                family_from_body::<S>(ms, body)?;
                "kernel family"
            }
            OperatorFile::KernelsFull { weyl, families, .. } => {
                full_expansion_from_file::<S>(ms, weyl, families)?;
                "full kernel expansion"
            }
        }
    } else if value.get("components").is_some() {
        let f: FockVectorFile = serde_json::from_value(value)?;
        vector_from_file::<S>(ms, &f)?;
        "fock vector"
    } else if value.get("dim").is_some() {
        let f: ModeSpaceFile = serde_json::from_value(value)?;
        mode_space_from_file::<S>(&f)?;
        "mode space"
    } else {
        bail!("unrecognized file shape (expected a mode space, vector, or operator)");
    };
    emit_text(cli, &format!("ok: valid {kind} ({} arithmetic)", S::ARITH))?;
    Ok(true)
}

/// Reads a kernels file (single family or full expansion) and returns the
/// reconstructed operator.
fn reconstruct_any<S: CliScalar>(ms: &Ms<S>, file: &Path) -> Result<OperatorMatrix<S>> {
    let op: OperatorFile = read_json(file)?;
    match &op {
        OperatorFile::Kernels { body, .. } => Ok(reconstruct(&family_from_body(ms, body)?)?),
        OperatorFile::KernelsFull { weyl, families, .. } => {
            Ok(full_expansion_from_file(ms, weyl, families)?.reconstruct()?)
        }
        OperatorFile::Matrix { .. } => bail!("expected a kernels file, found an operator matrix"),
    }
}

fn cmd_apply<S: CliScalar>(cli: &Cli, ms: &Ms<S>, kernels: &Path, vector: &Path) -> Result<bool> {
    let op = reconstruct_any::<S>(ms, kernels)?;
    let phi_file: FockVectorFile = read_json(vector)?;
    let phi = vector_from_file(ms, &phi_file)?;
    let result = if op.row_basis().parity() == op.col_basis().parity()
        && op.col_basis().parity() != ParityClass::Full
    {
        op.apply(&phi)?
    } else {
        op.embed(ParityClass::Full, ParityClass::Full).apply(&phi)?
    };
    emit(cli, &vector_to_file(&result))?;
    Ok(true)
}

fn cmd_symbol<S: CliScalar>(
    cli: &Cli,
    ms: &Ms<S>,
    operator: Option<&Path>,
    phi: Option<&Path>,
    zeta: &Path,
    eta: Option<&Path>,
) -> Result<bool> {
    let zeta_file: FockVectorFile = read_json(zeta)?;
    let zeta = wedge_from_file(ms, &zeta_file, 2)?;
    let value = match (operator, phi) {
        (Some(op_path), None) => {
            let op: OperatorFile = read_json(op_path)?;
            let OperatorFile::Matrix { parity, blocks } = &op else {
                bail!("--operator expects an operator matrix file");
            };
            let xi = operator_from_file::<S>(ms, parity, blocks)?;
            if !xi.is_even() {
                bail!("symbol evaluation needs an even-to-even operator");
            }
            let eta_path = eta.ok_or_else(|| anyhow!("--eta is required with --operator"))?;
            let eta_file: FockVectorFile = read_json(eta_path)?;
            let eta = wedge_from_file(ms, &eta_file, 2)?;
            symbol_eval(&xi, &zeta, &eta)?
        }
        (None, Some(phi_path)) => {
            let phi_file: FockVectorFile = read_json(phi_path)?;
            let phi = vector_from_file(ms, &phi_file)?;
            s_transform(&phi, &zeta)?
        }
        _ => bail!("pass exactly one of --operator (with --eta) or --phi"),
    };
    emit_text(cli, &render_scalar(&value))?;
    Ok(true)
}

fn render_scalar<S: CliScalar>(v: &S) -> String {
    match v.render() {
        ValueRepr::Str(s) => s,
        ValueRepr::Num(x) => format!("{x}"),
    }
}

fn cmd_expand<S: CliScalar>(
    cli: &Cli,
    ms: &Ms<S>,
    operator: &Path,
    weyl_mode: usize,
) -> Result<bool> {
    let op: OperatorFile = read_json(operator)?;
    let OperatorFile::Matrix { parity, blocks } = &op else {
        bail!("expand expects an operator matrix file");
    };
    let xi = operator_from_file::<S>(ms, parity, blocks)?;
    match xi.row_basis().parity() {
        ParityClass::Even => {
            let fam = fock_expand(&xi)?;
            let residual = reconstruct(&fam)?.max_abs_diff(&xi)?;
            let ok = residual.is_zero() || (!S::EXACT && residual.to_f64() <= cli.tol);
            let out = OperatorFile::Kernels {
                body: family_to_body(&fam),
                residual: Some(residual.render()),
            };
            emit(cli, &out)?;
            Ok(ok)
        }
        ParityClass::Full => {
            let f = WedgeTensor::basis_vector(ms, weyl_mode)?;
            let ex = fock_expand_full(&xi, &f)?;
            let residual = ex.reconstruct()?.max_abs_diff(&xi)?;
            let ok = residual.is_zero() || (!S::EXACT && residual.to_f64() <= cli.tol);
            let out = full_expansion_to_file(&ex, Some(residual.render()));
            emit(cli, &out)?;
            Ok(ok)
        }
        ParityClass::Odd => bail!("expand needs an even or full operator"),
    }
}

fn cmd_reconstruct<S: CliScalar>(cli: &Cli, ms: &Ms<S>, kernels: &Path) -> Result<bool> {
    let op = reconstruct_any::<S>(ms, kernels)?;
    emit(cli, &operator_to_file(&op))?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifyReport {
    suites: Vec<SuiteJson>,
    pass: bool,
}

#[derive(Serialize)]
struct SuiteJson {
    suite: String,
    pass: bool,
    checks: Vec<CheckJson>,
}

#[derive(Serialize)]
struct CheckJson {
    id: String,
    pass: bool,
    detail: String,
}

fn cmd_verify(cli: &Cli, suite: &str, grid: &str) -> Result<bool> {
    if grid != "default" {
        bail!("unknown grid '{grid}' (only 'default' is defined)");
    }
    let grid = BoundGrid {
        tol: cli.tol,
        ..Default::default()
    };
    let ms_q = build_mode_space::<Rational>(cli)?;
    let ms_f = build_mode_space::<f64>(cli)?;
    let reports = run_suite(suite, &ms_q, &ms_f, cli.seed, &grid)?;
    let pass = reports.iter().all(SuiteReport::pass);
    match cli.report {
        ReportFormat::Text => {
            let mut lines = Vec::new();
            for rep in &reports {
                for check in &rep.checks {
                    let status = if check.pass { "ok  " } else { "FAIL" };
                    let detail = if check.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", check.detail)
                    };
                    lines.push(format!("{status} {}{detail}", check.id));
                }
            }
            lines.push(format!(
                "verify: {}",
                if pass {
                    "all properties hold"
                } else {
                    "FAILURES"
                }
            ));
            emit_text(cli, &lines.join("\n"))?;
        }
        ReportFormat::Json => {
            let json = VerifyReport {
                suites: reports
                    .iter()
                    .map(|rep| SuiteJson {
                        suite: rep.suite.clone(),
                        pass: rep.pass(),
                        checks: rep
                            .checks
                            .iter()
                            .map(|c| CheckJson {
                                id: c.id.clone(),
                                pass: c.pass,
                                detail: c.detail.clone(),
                            })
                            .collect(),
                    })
                    .collect(),
                pass,
            };
            emit(cli, &json)?;
        }
    }
    Ok(pass)
}
