//! Front end for `symk-core`: argument handling, dispatch, and the JSON, DOT
//! and text renderings of its results.

pub mod dot;
pub mod json;
pub mod text;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use symk_core::complexify::{
    complexify, poset_and_diagram, ComplexificationReport, IPoset, OrbitDiagram,
};
use symk_core::orbits::{enumerate_double_cosets, orbit_count, vk_orbits, OrbitCount};
use symk_core::tori::{classify_torus_classes, is_theta_stable, rank_krank, Classification, Torus};
use symk_core::{Error, FieldModel, NamedInvolution, DEFAULT_BUDGET};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Orbit count by Weyl quotients.
    Orbits,
    /// H_k-classes of θ-stable maximal k-split tori.
    Tori,
    /// Weyl groups and their H_k-parts per class.
    Weyl,
    /// I-poset and orbit diagram.
    Poset,
    /// The complexification map and its surjectivity.
    Complexify,
    /// Formula against brute-force enumeration (finite fields).
    Oracle,
    /// rank and k-rank of H.
    Ranks,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "symk",
    version,
    about = "Orbits of minimal parabolic subgroups on symmetric varieties of SL(n)"
)]
pub struct Args {
    pub command: Command,
    /// Group as `sl:N`.
    #[arg(long, conflicts_with = "n")]
    pub group: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Field model: Q, R, Qp:<p>, Fq:<q>, Cbar, or <base>(sqrt:<d>).
    #[arg(long, conflicts_with = "q")]
    pub field: Option<String>,
    /// Shorthand for `--field Fq:<q>`.
    #[arg(long)]
    pub q: Option<u32>,
    /// antidiag, symplectic, blockJ:n=N,i=I, Lx:m=M,x=X, transpose-inverse, inner:[[..]].
    #[arg(long)]
    pub involution: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cap on the number of group elements an exhaustive step may touch.
    #[arg(long, env = "SYMK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub field: FieldModel,
    pub involution: NamedInvolution,
    pub format: Format,
    pub budget: u64,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// A malformed flag value, with the offending input.
    Spec {
        flag: &'static str,
        input: String,
        source: Error,
    },
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec { .. } | CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(Error::Unsupported(_)) => 2,
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::CriteriaDisagree(_)) => 4,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Spec {
                flag,
                input,
                source,
            } => {
                write!(f, "--{flag}: {source}")?;
                if let Error::Parse { position, .. } = source {
                    write!(f, "\n  {input}\n  {}^", " ".repeat(*position))?;
                }
                Ok(())
            }
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn parse_group(s: &str) -> Result<usize, Error> {
    let rest = s.strip_prefix("sl:").ok_or(Error::Parse {
        position: 0,
        message: "expected sl:N".into(),
    })?;
    match rest.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(Error::Parse {
            position: 3,
            message: format!("expected a rank N >= 2, found `{rest}`"),
        }),
    }
}

fn spec(flag: &'static str, input: &str) -> impl FnOnce(Error) -> CliError {
    let input = input.to_string();
    move |source| CliError::Spec {
        flag,
        input,
        source,
    }
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<RunConfig, CliError> {
        let field = match (&args.field, args.q) {
            (Some(f), _) => f.parse::<FieldModel>().map_err(spec("field", f))?,
            (None, Some(q)) => FieldModel::finite(q).map_err(spec("q", &q.to_string()))?,
            (None, None) => {
                return Err(CliError::Usage("one of --field or --q is required".into()))
            }
        };
        let involution = args
            .involution
            .parse::<NamedInvolution>()
            .map_err(spec("involution", &args.involution))?;
        let n = match (&args.group, args.n) {
            (Some(g), _) => Some(parse_group(g).map_err(spec("group", g))?),
            (None, n) => n,
        };
        let n = involution.resolve_n(n)?;
        Ok(RunConfig {
            command: args.command,
            n,
            field,
            involution,
            format: args.format,
            budget: args.budget,
            out: args.out.clone(),
        })
    }
}

/// Everything a command computed, ready to render.
pub enum Outcome {
    /// The poset is computed only for DOT output.
    Orbits(OrbitCount, Option<(IPoset, OrbitDiagram)>),
    Tori(Classification),
    Weyl(OrbitCount),
    Poset(IPoset, OrbitDiagram),
    Complexify(Box<ComplexificationReport>),
    Oracle(OracleReport),
    Ranks {
        rank: usize,
        krank: usize,
    },
}

/// Three independent orbit counts over a finite field.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub q: u64,
    pub formula: u64,
    pub double_cosets: usize,
    /// Absent when the diagonal torus is not θ-stable.
    pub vk_orbits: Option<usize>,
    pub coset_sizes: Vec<u64>,
}

impl OracleReport {
    pub fn agree(&self) -> bool {
        self.formula as usize == self.double_cosets
            && self.vk_orbits.is_none_or(|v| v == self.double_cosets)
    }
}

pub fn compute(cfg: &RunConfig) -> Result<Outcome, Error> {
    let (k, n, theta, budget) = (&cfg.field, cfg.n, &cfg.involution, cfg.budget);
    Ok(match cfg.command {
        Command::Orbits => {
            let diagram = match cfg.format {
                Format::Dot => Some(poset_and_diagram(k, n, theta, budget)?),
                _ => None,
            };
            Outcome::Orbits(orbit_count(k, n, theta, budget)?, diagram)
        }
        Command::Tori => Outcome::Tori(classify_torus_classes(k, n, theta, budget)?),
        Command::Weyl => Outcome::Weyl(orbit_count(k, n, theta, budget)?),
        Command::Poset => {
            let (p, d) = poset_and_diagram(k, n, theta, budget)?;
            Outcome::Poset(p, d)
        }
        Command::Complexify => Outcome::Complexify(Box::new(complexify(k, n, theta, budget)?)),
        Command::Oracle => {
            let q = k.order().ok_or_else(|| {
                Error::Unsupported(format!("the oracle needs a finite field, got {k}"))
            })?;
            let spec = theta.to_spec(k, n)?;
            let formula = orbit_count(k, n, theta, budget)?
                .total
                .finite()
                .expect("finite fields give finite counts");
            let table = enumerate_double_cosets(k, &spec, budget)?;
            let vk = if is_theta_stable(k, &Torus::diagonal(k, n), &spec) {
                Some(vk_orbits(k, &spec, budget)?.len())
            } else {
                None
            };
            let report = OracleReport {
                q,
                formula,
                double_cosets: table.count(),
                vk_orbits: vk,
                coset_sizes: table.cosets.iter().map(|c| c.1).collect(),
            };
            if !report.agree() {
                return Err(Error::CriteriaDisagree(format!(
                    "formula {}, double cosets {}, V_k orbits {:?}",
                    report.formula, report.double_cosets, report.vk_orbits
                )));
            }
            Outcome::Oracle(report)
        }
        Command::Ranks => {
            let (rank, krank) = rank_krank(n, theta, k)?;
            Outcome::Ranks { rank, krank }
        }
    })
}

pub fn render(cfg: &RunConfig, outcome: &Outcome) -> Result<String, Error> {
    match cfg.format {
        Format::Json => {
            let v = json::render(cfg, outcome);
            Ok(serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n")
        }
        Format::Dot => dot::render(cfg, outcome),
        Format::Text => Ok(text::render(cfg, outcome)),
    }
}

pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let outcome = compute(cfg)?;
    Ok(render(cfg, &outcome)?)
}

/// Runs and writes the artifact to `--out` or standard output.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let out = run(cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, out).map_err(CliError::Io),
        None => std::io::stdout()
            .write_all(out.as_bytes())
            .map_err(CliError::Io),
    }
}

/// `sl:N over FIELD, θ = INVOLUTION`.
pub fn heading(cfg: &RunConfig) -> String {
    format!("SL({}) over {}, θ = {}", cfg.n, cfg.field, cfg.involution)
}

/// One-line notation, 1-based.
pub fn perm_string(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", parts.join(" "))
}

pub fn node_name(prefix: &str, (class, orbit): (usize, usize)) -> String {
    format!("{prefix}{}_{}", class + 1, orbit + 1)
}
