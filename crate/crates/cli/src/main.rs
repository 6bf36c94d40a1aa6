use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dglp::linalg::ComplementRule;
use dglp_cli::commands::{self, Builtin, Options, Outcome, Source};
use dglp_cli::report::Report;

#[derive(Parser)]
#[command(
    name = "dglp",
    version,
    about = "Exact computations with dg Loday-Pirashvili modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom of a problem file.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Write the canonical form of the input here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the differential and the higher brackets on V[1].
    Brackets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Lift an ordinary LP module along a resolution.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Complement::Pivot)]
        complement: Complement,
        /// Write the lifted structure here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generalized Jacobi identities, Atiyah cocycle and homotopy checks.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        leibniz_n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        random_tuples: usize,
        #[arg(long)]
        atiyah: bool,
        /// Second problem file on the same module.
        #[arg(long)]
        homotopy: Option<PathBuf>,
        /// Builtin to compare against instead of a file.
        #[arg(long, conflicts_with = "homotopy")]
        homotopy_builtin: Option<String>,
    },
    /// Chevalley-Eilenberg cohomology and the induced bracket.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Problem file.
    #[arg(required_unless_present = "builtin")]
    file: Option<PathBuf>,
    /// sl2-pair, sl2-pair-alt or sl2-killing.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Complement {
    Pivot,
    Reverse,
}

fn source(file: Option<PathBuf>, builtin: Option<String>) -> Result<Source, String> {
    match (file, builtin) {
        (_, Some(b)) => Builtin::parse(&b)
            .map(Source::Builtin)
            .ok_or_else(|| format!("unknown builtin {b:?}")),
        (Some(f), None) => Ok(Source::File(f)),
        (None, None) => Err("give a file or --builtin".into()),
    }
}

fn emit(outcome: Outcome, format: Format, output: Option<PathBuf>) -> ExitCode {
    let mut report = outcome.report;
    if let (Some(path), Some(f)) = (output, outcome.output) {
        if report.status != dglp_cli::report::Status::Error {
            if let Err(e) = commands::write_output(&path, &f) {
                report = Report::error(report.command, format!("{}: {e}", path.display()));
            }
        }
    }
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    ExitCode::from(commands::exit_code(&report) as u8)
}

type Runner = fn(&Source, &Options) -> Outcome;

fn run(cli: Cli) -> Result<ExitCode, String> {
    let (common, output, opts, which): (Common, Option<PathBuf>, Options, Runner) =
        match cli.command {
            Command::Validate { common, output } => {
                (common, output, Options::default(), commands::validate)
            }
            Command::Brackets { common, max_arity } => (
                common,
                None,
                Options {
                    max_arity,
                    ..Options::default()
                },
                commands::brackets,
            ),
            Command::Lift {
                common,
                complement,
                output,
            } => {
                let complement = match complement {
                    Complement::Pivot => ComplementRule::Pivot,
                    Complement::Reverse => ComplementRule::ReversePivot,
                };
                (
                    common,
                    output,
                    Options {
                        complement,
                        ..Options::default()
                    },
                    commands::lift,
                )
            }
            Command::Check {
                common,
                leibniz_n,
                random_tuples,
                atiyah,
                homotopy,
                homotopy_builtin,
            } => {
                let homotopy = match (homotopy, homotopy_builtin) {
                    (None, None) => None,
                    (f, b) => Some(source(f, b)?),
                };
                (
                    common,
                    None,
                    Options {
                        leibniz_n,
                        random_tuples,
                        atiyah,
                        homotopy,
                        ..Options::default()
                    },
                    commands::check,
                )
            }
            Command::Cohomology { common, module } => (
                common,
                None,
                Options {
                    module,
                    ..Options::default()
                },
                commands::cohomology,
            ),
        };
    let src = source(common.file, common.builtin)?;
    let opts = Options {
        seed: common.seed,
        timing: common.timing,
        ..opts
    };
    Ok(emit(which(&src, &opts), common.format, output))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
