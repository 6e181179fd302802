use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use hermitia::blocks::{self, FamilyDoc};
use hermitia::json::MatrixDoc;
use hermitia::spectral::{self, GammaRule};
use hermitia::{axioms, calculus, lattice, states};
use hermitia::{commutes, Construction, HermitianMatrix, IterationReport, Method, Projection, ToleranceConfig};

mod text;

#[derive(Parser, Debug)]
#[command(name = "hermitia", version, about = "Order-theoretic functional calculus on Hermitian matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Iterative)]
    method: MethodArg,
    /// Tolerance override, e.g. `--tol conv=1e-12`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, env = "HERMITIA_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Iterative,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GammaArg {
    Left,
    Midpoint,
}

#[derive(Args, Debug)]
struct Input {
    /// Matrix JSON file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Second operand.
    #[arg(long = "with", value_name = "PATH")]
    with: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive square root.
    Sqrt(Input),
    /// Absolute value.
    Abs(Input),
    /// `|g|`, `g+` and `g-`.
    Parts(Input),
    /// Carrier projection `g°`.
    Carrier(Input),
    /// Polar decomposition.
    Polar(Input),
    /// Inverse of an invertible element.
    Invert(Input),
    /// Spectral bounds `L`, `U`.
    Bounds(Input),
    /// Spectral projection `p_λ`.
    Spectral {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Full spectral resolution.
    Resolution {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Step-function approximation over a uniform partition.
    StepApprox {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GammaArg::Left)]
        gamma: GammaArg,
        /// Include error, mesh and partition.
        #[arg(long)]
        report: bool,
    },
    /// Whether two elements commute.
    Commute(Pair),
    /// Meet of two projections.
    Meet(Pair),
    /// Join of two projections.
    Join(Pair),
    /// Atoms of the C-block generated by a commuting family.
    Block(Input),
    /// C-block meet and join of two commuting elements.
    CblockLattice(Pair),
    /// Observed range of vector states.
    StateRange {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run the axiom checks.
    CheckAxioms {
        /// Single dimension; all of 1..=8 when omitted.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = axioms::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in {s:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<hermitia::Error> for Failure {
    fn from(e: hermitia::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let raw = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| {
        Failure::Usage(format!("{}: malformed JSON at line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn read_matrix(path: &Path, tol: &ToleranceConfig) -> Outcome<HermitianMatrix> {
    let doc: MatrixDoc = read_json(path)?;
    Ok(doc.to_hermitian(Construction::Strict, tol)?)
}

fn read_projection(path: &Path, tol: &ToleranceConfig) -> Outcome<Projection> {
    Ok(Projection::new(read_matrix(path, tol)?, tol)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

/// Matrix document with an attached iteration report.
fn with_report<T: Serialize>(x: &T, report: &IterationReport) -> Value {
    let mut v = to_value(x);
    if let Value::Object(map) = &mut v {
        map.insert("report".into(), to_value(report));
    }
    v
}

fn config(g: &Global) -> Outcome<ToleranceConfig> {
    let mut tol = ToleranceConfig::default().with_method(match g.method {
        MethodArg::Iterative => Method::Iterative,
        MethodArg::Oracle => Method::Oracle,
    });
    for (k, v) in &g.tol {
        tol.set(k, *v).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(m) = g.max_iter {
        tol.max_iter = m;
        tol.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(tol)
}

fn run(cli: &Cli) -> Outcome<(Value, bool)> {
    let tol = config(&cli.global)?;
    let mut ok = true;
    let out = match &cli.command {
        Command::Sqrt(a) => {
            let (r, rep) = calculus::sqrt(&read_matrix(&a.input, &tol)?, &tol)?;
            with_report(&r, &rep)
        }
        Command::Abs(a) => {
            let (r, rep) = calculus::abs(&read_matrix(&a.input, &tol)?, &tol)?;
            with_report(&r, &rep)
        }
        Command::Parts(a) => {
            let (abs, pos, neg, rep) = calculus::parts(&read_matrix(&a.input, &tol)?, &tol)?;
            json!({"abs": to_value(&abs), "pos": to_value(&pos), "neg": to_value(&neg), "report": to_value(&rep)})
        }
        Command::Carrier(a) => {
            let (p, rep) = calculus::carrier(&read_matrix(&a.input, &tol)?, &tol)?;
            with_report(&p, &rep)
        }
        Command::Polar(a) => {
            let (parts, rep) = calculus::polar_decompose(&read_matrix(&a.input, &tol)?, &tol)?;
            with_report(&parts, &rep)
        }
        Command::Invert(a) => {
            let (r, rep) = calculus::invert(&read_matrix(&a.input, &tol)?, &tol)?;
            with_report(&r, &rep)
        }
        Command::Bounds(a) => to_value(&spectral::spectral_bounds(&read_matrix(&a.input, &tol)?, &tol)),
        Command::Spectral { input, lambda } => {
            let (p, rep) = spectral::spectral_projection(&read_matrix(&input.input, &tol)?, *lambda, &tol)?;
            with_report(&p, &rep)
        }
        Command::Resolution { input, grid } => {
            to_value(&spectral::full_resolution(&read_matrix(&input.input, &tol)?, *grid, &tol)?)
        }
        Command::StepApprox { input, n, gamma, report } => {
            let rule = match gamma {
                GammaArg::Left => GammaRule::Left,
                GammaArg::Midpoint => GammaRule::Midpoint,
            };
            let s = spectral::step_approximation(&read_matrix(&input.input, &tol)?, *n, rule, &tol)?;
            let mut v = to_value(&s.approximation);
            if *report {
                let map = v.as_object_mut().expect("matrix is an object");
                map.insert("error".into(), json!(s.error));
                map.insert("mesh".into(), json!(s.partition.mesh));
                map.insert("sum_residual".into(), json!(s.sum_residual));
                map.insert("gamma".into(), to_value(&s.gamma));
                map.insert("partition".into(), json!(s.partition.points));
            }
            v
        }
        Command::Commute(p) => {
            let g = read_matrix(&p.input, &tol)?;
            let h = read_matrix(&p.with, &tol)?;
            let c = commutes(&g, &h, &tol)?;
            json!({"commutes": c, "commutator_norm": g.commutator_norm(&h)})
        }
        Command::Meet(p) => {
            let r = lattice::meet(&read_projection(&p.input, &tol)?, &read_projection(&p.with, &tol)?, &tol)?;
            to_value(&r)
        }
        Command::Join(p) => {
            let r = lattice::join(&read_projection(&p.input, &tol)?, &read_projection(&p.with, &tol)?, &tol)?;
            to_value(&r)
        }
        Command::Block(a) => {
            let doc: FamilyDoc = read_json(&a.input)?;
            let family = doc
                .members
                .iter()
                .map(|m| hermitia::make_hermitian(m.as_cmatrix(), Construction::Strict, &tol))
                .collect::<Result<Vec<_>, _>>()?;
            let b = blocks::generate_block(&family, &tol)?;
            let mut v = to_value(&b);
            v.as_object_mut().expect("block is an object").insert("maximal".into(), json!(b.is_maximal()));
            v
        }
        Command::CblockLattice(p) => {
            let g = read_matrix(&p.input, &tol)?;
            let h = read_matrix(&p.with, &tol)?;
            let m = blocks::cblock_meet(&g, &h, &tol)?;
            let j = blocks::cblock_join(&g, &h, &tol)?;
            json!({"meet": to_value(&m), "join": to_value(&j)})
        }
        Command::StateRange { input, samples } => {
            let (lo, hi) = states::state_range(&read_matrix(&input.input, &tol)?, *samples, cli.global.seed)?;
            json!({"lower": lo, "upper": hi})
        }
        Command::CheckAxioms { dim, samples } => {
            let reports = match dim {
                Some(d) => {
                    if !(1..=hermitia::MAX_DIM).contains(d) {
                        return Err(Failure::Usage(format!("--dim must be in 1..={}", hermitia::MAX_DIM)));
                    }
                    axioms::run_suite([*d], *samples, cli.global.seed, &tol)?
                }
                None => axioms::run_suite(axioms::DEFAULT_DIMS, *samples, cli.global.seed, &tol)?,
            };
            ok = reports.iter().all(|r| r.pass);
            to_value(&reports)
        }
    };
    Ok((out, ok))
}

fn emit(value: &Value, global: &Global) -> std::io::Result<()> {
    let mut body = match global.format {
        Format::Json => serde_json::to_string_pretty(value).expect("values serialize"),
        Format::Text => text::render(value),
    };
    body.push('\n');
    match &global.out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            if let Err(e) = emit(&value, &cli.global) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if value.get("report").and_then(|r| r.get("converged")) == Some(&Value::Bool(false)) {
                eprintln!("warning: iteration did not converge; consider --method oracle");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: axiom checks failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
