use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entprod::{Ising2Params, LogBase, SchattenIndex};
use entprod_cli::commands::{cmd_evolve, cmd_measure, cmd_period, cmd_thermal, Format};
use entprod_cli::spec::{parse_dims, parse_real, Model, SweepSpec, TimeUnits, Variable};
use entprod_cli::CliError;

#[derive(Parser)]
#[command(
    name = "entprod",
    version,
    about = "Entanglement production by evolution and Gibbs operators"
)]
struct Cli {
    /// Schatten index p >= 1, or `inf`
    #[arg(long, global = true, default_value = "2", value_parser = parse_schatten)]
    p: SchattenIndex,

    /// Logarithm base of the measure
    #[arg(long = "log-base", global = true, default_value = "e", value_parser = ["e", "2", "10"])]
    log_base: String,

    /// Seed for the random model
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path, or `stdout`
    #[arg(long, global = true, default_value = "stdout")]
    out: String,

    /// Output format; csv for sweeps and json for reports by default
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the evolutional measure ε(t) over a time grid
    Evolve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Time units: `j` reads grid values as J·t (two-qubit Ising only)
        #[arg(long, value_enum, default_value = "j")]
        units: UnitsArg,
    },
    /// Sweep the thermal measure over inverse temperature by both routes
    Thermal {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Classify ε(t) of the two-qubit Ising model as periodic or quasi-periodic
    Period {
        /// Field h; accepts forms like 5/7, sqrt(2), 3*pi/4
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        h: f64,
        /// Coupling J
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        j: f64,
        /// Grid points for the numerical period check
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Evaluate ε for an operator read from a file
    Measure {
        /// TOML operator file
        file: PathBuf,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "ising2")]
    model: ModelArg,
    /// Field h; accepts forms like 5/7, sqrt(2), 3*pi/4
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_real)]
    h: f64,
    /// Coupling J
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_real)]
    j: f64,
    /// Chain length for `ising-chain`
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Hamiltonian file for `operator-file`
    #[arg(long)]
    file: Option<PathBuf>,
    /// Local dimensions for `random`, e.g. 2,3
    #[arg(long, default_value = "2,2", value_parser = parse_dims)]
    dims: ::std::vec::Vec<usize>,
}

#[derive(Args)]
struct GridArgs {
    /// First grid value (t or beta); accepts forms like 8pi
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_real)]
    start: f64,
    /// Last grid value, included
    #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
    stop: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 1000)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ising2,
    IsingChain,
    OperatorFile,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    J,
    Absolute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_schatten(s: &str) -> Result<SchattenIndex, String> {
    if s.trim() == "inf" {
        return Ok(SchattenIndex::Infinity);
    }
    let p = parse_real(s)?;
    SchattenIndex::new(p).map_err(|e| e.to_string())
}

fn build_model(args: &ModelArgs) -> Result<Model, CliError> {
    Ok(match args.model {
        ModelArg::Ising2 => Model::Ising2(
            Ising2Params::new(args.h, args.j).map_err(|e| CliError::Usage(e.to_string()))?,
        ),
        ModelArg::IsingChain => Model::IsingChain {
            n: args.n,
            h: args.h,
            j: args.j,
        },
        ModelArg::OperatorFile => Model::OperatorFile(
            args.file
                .clone()
                .ok_or_else(|| CliError::Usage("--model operator-file needs --file".into()))?,
        ),
        ModelArg::Random => Model::Random {
            dims: args.dims.clone(),
        },
    })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let log_base: LogBase = cli
        .log_base
        .parse()
        .map_err(|e: entprod::Error| CliError::Usage(e.to_string()))?;
    let format = |default| match cli.format {
        None => default,
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
    };
    let sweep =
        |model: &ModelArgs, grid: &GridArgs, variable, units| -> Result<SweepSpec, CliError> {
            Ok(SweepSpec {
                model: build_model(model)?,
                variable,
                start: grid.start,
                stop: grid.stop,
                points: grid.points,
                p: cli.p,
                log_base,
                units,
                seed: cli.seed,
            })
        };
    match &cli.command {
        Command::Evolve { model, grid, units } => {
            let units = match units {
                UnitsArg::J => TimeUnits::InverseJ,
                UnitsArg::Absolute => TimeUnits::Absolute,
            };
            cmd_evolve(
                &sweep(model, grid, Variable::Time, units)?,
                format(Format::Csv),
            )
        }
        Command::Thermal { model, grid } => cmd_thermal(
            &sweep(model, grid, Variable::Beta, TimeUnits::Absolute)?,
            format(Format::Csv),
        ),
        Command::Period { h, j, points } => cmd_period(*h, *j, *points, format(Format::Json)),
        Command::Measure { file } => cmd_measure(file, cli.p, log_base, format(Format::Json)),
    }
}

fn emit(out: &str, text: &str) -> Result<(), CliError> {
    if out == "stdout" || out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()?;
    } else {
        std::fs::write(out, text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|text| emit(&cli.out, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entprod: {e}");
            e.exit_code()
        }
    }
}
