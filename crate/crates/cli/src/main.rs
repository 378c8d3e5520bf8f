//! `hyperenc` command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable or unparsable input, 2 spec that
//! does not fit the input (or unknown fixture), 3 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperenc::distinguish::{self, SurveyOptions};
use hyperenc::encode::EncodeError;
use hyperenc::format;
use hyperenc::hypercore::{clique_expansion, clique_lifting, srg_parameters};
use hyperenc::spectral;
use hyperenc::{
    compare, encode, AutoConvert, CompareOptions, EncodingKind, EncodingSpec, Input, LaplacianKind, SignMode,
    WalkScheme,
};

#[derive(Parser)]
#[command(name = "hyperenc", version, about = "Graph and hypergraph encodings and distinguishability checks")]
struct Cli {
    /// Comparison tolerance (default: 1e-6 for eigenvector encodings, 1e-9 otherwise).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the random eigenvector sign mode.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HYPERENC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an encoding and write it as CSV.
    Encode {
        input: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
        /// Output file (default: standard output).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare two inputs under one encoding; prints a JSON report.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
        /// Also accept encodings that agree up to a global scalar.
        #[arg(long)]
        scaling: bool,
    },
    /// Percentage of pairs distinguished, per encoding and category.
    Survey {
        /// CSV manifest `category,fileA,fileB`.
        manifest: PathBuf,
        /// Encoding spec `kind[:key=value]*`; repeatable. Without `convert=`,
        /// graph inputs are lifted for hypergraph encodings.
        #[arg(long = "spec", required = true)]
        specs: Vec<String>,
        #[arg(long)]
        scaling: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Clique-lift a graph or clique-expand a hypergraph.
    Convert {
        input: PathBuf,
        direction: Direction,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in graph in the text format.
    Fixtures {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Smallest eigenvalues of a Laplacian as CSV.
    Spectrum {
        input: PathBuf,
        #[arg(long, default_value = "graph-normalized")]
        laplacian: String,
        /// Number of eigenvalues (default: all).
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Lift,
    Expand,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum SignArg {
    Canonical,
    Random,
}

#[derive(Args)]
struct SpecArgs {
    /// ldp|h-ldp|lcp-frc|lcp-orc|hcp-frc|hcp-orc|rwpe|h-rwpe|lape|h-lape|lase|h-lase
    #[arg(long)]
    kind: String,
    /// Walk steps or number of eigenpairs.
    #[arg(long)]
    k: Option<usize>,
    /// uniform|en|ee|we
    #[arg(long)]
    scheme: Option<String>,
    /// graph-standard|graph-normalized|graph-rw|hodge-node|hodge-edge|hyper-normalized|hyper-rw
    #[arg(long)]
    laplacian: Option<String>,
    #[arg(long, value_enum, default_value = "canonical")]
    sign_mode: SignArg,
    /// Drop eigenvectors with eigenvalue ~0.
    #[arg(long)]
    skip_trivial: bool,
    #[arg(long, default_value = "none")]
    auto_convert: String,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn parse(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, error: error.into() }
    }

    fn incompatible(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, error: error.into() }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        let code = if e.is_incompatibility() { 2 } else { 3 };
        Failure { code, error: e.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::parse(e)
    }
}

type Outcome = Result<(), Failure>;

fn build_spec(args: &SpecArgs, seed: u64) -> Result<EncodingSpec, EncodeError> {
    let mut spec = EncodingSpec::new(args.kind.parse::<EncodingKind>()?);
    spec.k = args.k;
    spec.scheme = args.scheme.as_deref().map(str::parse::<WalkScheme>).transpose()?;
    spec.laplacian = args.laplacian.as_deref().map(str::parse::<LaplacianKind>).transpose()?;
    if args.sign_mode == SignArg::Random {
        spec.sign_mode = SignMode::Random(seed);
    }
    spec.skip_trivial = args.skip_trivial;
    spec.auto_convert = args.auto_convert.parse::<AutoConvert>()?;
    spec.validate()?;
    Ok(spec)
}

fn load(path: &Path) -> Result<Input, Failure> {
    let parsed = format::read_file(path).map_err(Failure::parse)?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.input)
}

fn write_out(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(Failure::parse),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Encode { input, spec, out } => {
            let spec = build_spec(&spec, cli.seed)?;
            let g = load(&input)?;
            let m = encode(&g, &spec)?;
            write_out(out.as_deref(), &m.to_csv())
        }
        Command::Compare { a, b, spec, scaling } => {
            let spec = build_spec(&spec, cli.seed)?;
            let (ga, gb) = (load(&a)?, load(&b)?);
            let ea = encode(&ga, &spec)?;
            let eb = encode(&gb, &spec)?;
            let mut opts = CompareOptions::for_kind(spec.kind.name());
            opts.scaling = scaling;
            let tol = cli.tol.unwrap_or(spec.kind.default_tolerance());
            let report = compare(&ea, &eb, &opts, tol);
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_out(None, &format!("{json}\n"))
        }
        Command::Survey { manifest, specs, scaling, out } => {
            let parsed = specs
                .iter()
                .map(|s| {
                    let mut spec = EncodingSpec::parse(s)?;
                    if let SignMode::Random(0) = spec.sign_mode {
                        if !s.contains("seed=") {
                            spec.sign_mode = SignMode::Random(cli.seed);
                        }
                    }
                    Ok(spec)
                })
                .collect::<Result<Vec<_>, EncodeError>>()?;
            let entries = distinguish::read_manifest(&manifest).map_err(Failure::parse)?;
            let opts = SurveyOptions {
                compare: CompareOptions { scaling, sign: false },
                tol: cli.tol,
                default_convert: AutoConvert::Lift,
            };
            let result = distinguish::survey(&entries, &parsed, &opts);
            for f in &result.failures {
                eprintln!("warning: pair {} excluded: {}", f.pair, f.message);
            }
            write_out(out.as_deref(), &result.render())
        }
        Command::Convert { input, direction, out } => {
            let converted: Input = match (load(&input)?, direction) {
                (Input::Graph(g), Direction::Lift) => clique_lifting(&g).into(),
                (Input::Hypergraph(h), Direction::Expand) => clique_expansion(&h).into(),
                (other, _) => {
                    return Err(Failure::incompatible(anyhow::anyhow!(
                        "cannot {} a {}",
                        if matches!(direction, Direction::Lift) { "lift" } else { "expand" },
                        other.domain_name()
                    )))
                }
            };
            write_out(out.as_deref(), &format::emit(&converted))
        }
        Command::Fixtures { name, out } => {
            let input = hyperenc::fixtures::by_name(&name).ok_or_else(|| {
                Failure::incompatible(anyhow::anyhow!(
                    "unknown fixture `{name}` (known: {})",
                    hyperenc::fixtures::FIXTURE_NAMES.join(", ")
                ))
            })?;
            if let ("rook" | "shrikhande", Input::Graph(g)) = (name.as_str(), &input) {
                let params = srg_parameters(g);
                if params != Some((16, 6, 2, 2)) {
                    return Err(Failure { code: 3, error: anyhow::anyhow!("{name} is not srg(16,6,2,2): {params:?}") });
                }
            }
            write_out(out.as_deref(), &format::emit(&input))
        }
        Command::Spectrum { input, laplacian, k } => {
            let kind: LaplacianKind = laplacian.parse().map_err(Failure::incompatible)?;
            let g = load(&input)?;
            let dim = spectral::build_laplacian(&g, kind).map_err(Failure::incompatible)?.nrows();
            let dec = spectral::spectrum(&g, kind, k.unwrap_or(dim)).map_err(|e| match e {
                spectral::SpectralError::ConvergenceFailure { .. } => Failure { code: 3, error: e.into() },
                e => Failure::incompatible(e),
            })?;
            let mut text = String::from("index,eigenvalue,degenerate\n");
            for (i, (l, d)) in dec.eigenvalues.iter().zip(&dec.degenerate).enumerate() {
                let l = if *l == 0.0 { 0.0 } else { *l };
                text.push_str(&format!("{i},{l},{d}\n"));
            }
            write_out(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
