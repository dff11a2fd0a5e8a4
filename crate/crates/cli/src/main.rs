//! `acol`: run, compile, disassemble, benchmark, generate and cross-check Acol programs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use acol::bench::{self, default_seeds, summarize, BadSeeds, BenchCase, BenchError, Measurement, Scale};
use acol::bytecode::{assemble, build_threaded, compile_blocks, compile_linear, disassemble, BytecodeImage, Flavor};
use acol::diff::{diff_seeds, DiffOptions, OffByOneAdd, SeedRange};
use acol::frontend::{parse_program, to_source, StmtList};
use acol::object_space::{parse_binding, Standard};
use acol::progen::{generate, initial_env, GenConfig};
use acol::{Backend, Boundary, Env, Error, Int, Prepared};

#[derive(Debug, Parser)]
#[command(name = "acol", version, about = "Interpreters, compilers and benchmarks for the Acol language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a program and print its final environment.
    Run(RunArgs),
    /// Compile a program to a bytecode image, a block program or a threaded graph.
    Compile(CompileArgs),
    /// Print the instruction listing of a `.acbc` image.
    Disasm {
        image: PathBuf,
    },
    /// Assemble a listing produced by `disasm` into a `.acbc` image.
    Asm {
        listing: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the bundled benchmarks on every backend.
    Bench(BenchArgs),
    /// Generate a random program and its initial environment.
    Gen(GenArgs),
    /// Check that every backend agrees with the reference interpreter on generated programs.
    Diff(DiffArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    source: PathBuf,
    /// Initial environment file (`name = value` per line).
    #[arg(long)]
    env: Option<PathBuf>,
    /// Initial binding; overrides the environment file.
    #[arg(long = "var", value_name = "NAME=VALUE", value_parser = parse_var)]
    vars: Vec<(String, Int)>,
    #[arg(long, default_value = "ast")]
    backend: Backend,
    #[arg(long, default_value = "static")]
    boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Acbc,
    Blocks,
    Threaded,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Acbc => "acbc",
            OutputFormat::Blocks => "blocks",
            OutputFormat::Threaded => "threaded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFlavor {
    Ast,
    Bc,
}

#[derive(Debug, clap::Args)]
struct CompileArgs {
    source: PathBuf,
    /// Output path; defaults to the source path with the format's extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "acbc")]
    format: OutputFormat,
    /// Node flavor for `--format threaded`.
    #[arg(long, value_enum, default_value = "ast")]
    flavor: GraphFlavor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Records,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Cases to run (prime, fib, fib_mod, generated1, generated2, generated3); all by default.
    #[arg(long, value_delimiter = ',')]
    cases: Vec<String>,
    /// Backends to time; all by default.
    #[arg(long, value_delimiter = ',')]
    backends: Vec<Backend>,
    /// Call-boundary modes to time.
    #[arg(long, value_delimiter = ',', default_value = "static")]
    boundaries: Vec<Boundary>,
    #[arg(long, default_value_t = bench::DEFAULT_REPS)]
    reps: usize,
    /// Size multiplier: tiny, small, full or a positive number.
    #[arg(long, default_value = "full")]
    scale: Scale,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
    #[arg(long, hide = true)]
    inject_fault: Option<Backend>,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Base name for `<out>.acol` and `<out>.env`; prints the source when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct DiffArgs {
    /// Inclusive seed range `A..B`, or a single seed.
    #[arg(long, default_value = "1..100")]
    seeds: SeedRange,
    #[arg(long, default_value_t = 1)]
    reps_per_seed: usize,
    /// Backends to check; all by default.
    #[arg(long, value_delimiter = ',')]
    backends: Vec<Backend>,
    #[arg(long, default_value = "static")]
    boundary: Boundary,
    #[arg(long, hide = true)]
    inject_fault: Option<Backend>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Acol(#[from] Error),
    #[error("{0}")]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Seeds(#[from] BadSeeds),
    #[error("unknown benchmark case `{0}`")]
    UnknownCase(String),
    #[error("{0}")]
    Failed(String),
}

fn parse_var(text: &str) -> Result<(String, Int), String> {
    parse_binding(text).map(|(name, value)| (name.to_string(), value))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_program(path: &Path) -> Result<StmtList, CliError> {
    parse_program(&read_text(path)?).map_err(|e| Error::from(e).into())
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let program = load_program(&args.source)?;
    let mut env = match &args.env {
        Some(path) => Env::parse(&read_text(path)?).map_err(Error::from)?,
        None => Env::new(),
    };
    for (name, value) in args.vars {
        env.set(&name, value);
    }
    let prepared = Prepared::prepare(args.backend, &program).map_err(Error::from)?;
    let out = prepared.run(env, args.boundary).map_err(Error::from)?;
    print!("{out}");
    Ok(())
}

fn cmd_compile(args: CompileArgs) -> Result<(), CliError> {
    let program = load_program(&args.source)?;
    let out = args.out.unwrap_or_else(|| args.source.with_extension(args.format.extension()));
    match args.format {
        OutputFormat::Acbc => write(&out, compile_linear(&program).map_err(Error::from)?.to_acbc()),
        OutputFormat::Blocks => write(&out, compile_blocks(&program).map_err(Error::from)?.dump()),
        OutputFormat::Threaded => {
            let flavor = match args.flavor {
                GraphFlavor::Ast => Flavor::Ast,
                GraphFlavor::Bc => Flavor::Bc,
            };
            write(&out, build_threaded(&program, flavor).render())
        }
    }
}

fn cmd_disasm(path: &Path) -> Result<(), CliError> {
    let image = BytecodeImage::from_acbc(&read_bytes(path)?).map_err(Error::from)?;
    print!("{}", disassemble(&image).map_err(Error::from)?);
    Ok(())
}

fn cmd_asm(listing: &Path, out: &Path) -> Result<(), CliError> {
    let image = assemble(&read_text(listing)?).map_err(Error::from)?;
    write(out, image.to_acbc())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let all = bench::builtin_cases(args.scale, &default_seeds()?);
    let cases: Vec<BenchCase> = if args.cases.is_empty() {
        all
    } else {
        args.cases
            .iter()
            .map(|name| all.iter().find(|c| &c.name == name).cloned().ok_or_else(|| CliError::UnknownCase(name.clone())))
            .collect::<Result<_, _>>()?
    };
    let backends = if args.backends.is_empty() { Backend::ALL.to_vec() } else { args.backends };

    let mut measurements = Vec::new();
    for case in &cases {
        let reference = bench::reference_env(case)?;
        for &backend in &backends {
            for &boundary in &args.boundaries {
                eprintln!("bench: {} {backend} ({boundary})", case.name);
                let samples = if args.inject_fault == Some(backend) {
                    bench::run_cell(case, backend, boundary, args.reps, &reference, &OffByOneAdd)?
                } else {
                    bench::run_cell(case, backend, boundary, args.reps, &reference, &Standard)?
                };
                measurements.push(Measurement { case: case.name.clone(), backend, boundary, samples });
            }
        }
    }
    let report = summarize(&measurements);
    match args.format {
        ReportFormat::Table => print!("{}", report.to_table()),
        ReportFormat::Records => print!("{}", report.to_records()),
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let source = to_source(&generate(&GenConfig::new(args.seed)));
    match args.out {
        Some(base) => {
            let with_ext = |ext: &str| {
                let mut name = base.clone().into_os_string();
                name.push(format!(".{ext}"));
                PathBuf::from(name)
            };
            write(&with_ext("acol"), source)?;
            write(&with_ext("env"), initial_env().to_env_file())
        }
        None => {
            print!("{source}");
            Ok(())
        }
    }
}

fn cmd_diff(args: DiffArgs) -> Result<(), CliError> {
    let opts = DiffOptions {
        backends: if args.backends.is_empty() { Backend::ALL.to_vec() } else { args.backends },
        boundary: args.boundary,
        reps_per_seed: args.reps_per_seed,
        fault: args.inject_fault,
    };
    let summary = diff_seeds(args.seeds.0, &GenConfig::default(), &opts).map_err(Error::from)?;
    if summary.passed() {
        println!("{summary}");
        Ok(())
    } else {
        Err(CliError::Failed(summary.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compile(args) => cmd_compile(args),
        Command::Disasm { image } => cmd_disasm(&image),
        Command::Asm { listing, out } => cmd_asm(&listing, &out),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Diff(args) => cmd_diff(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
