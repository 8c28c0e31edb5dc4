use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elastimesh_cli::commands::{self, Axis, Format};
use elastimesh_cli::config::{self, Experiment, Overrides, Profile};
use elastimesh_cli::{init_threads, CliError};

#[derive(Parser)]
#[command(name = "elastimesh", version, about = "Structured quad meshes from a trained neural map")]
struct Cli {
    /// Experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base training profile; `train` entries in the config override it
    #[arg(long, global = true, value_enum, default_value_t = Profile::Desk)]
    profile: Profile,

    /// Overrides `train.seed`
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides `output_dir`
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one mesh with the configured method
    Generate,
    /// TFI against the network method, as a table and compare.csv
    Compare,
    /// Retrain over every activation or governing equation
    Ablate {
        #[arg(long, value_enum)]
        axis: Axis,
    },
    /// Convert a mesh CSV to another format
    Export {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Quality report of a mesh CSV
    Report {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Cli {
    fn experiment(&self) -> Result<Experiment, CliError> {
        let path = self.config.as_ref().ok_or_else(|| CliError::Config {
            path: "--config".into(),
            detail: "this command needs a config file".into(),
        })?;
        let ov = Overrides {
            profile: self.profile,
            seed: self.seed,
            output_dir: self.output_dir.clone(),
        };
        config::load(path, &ov)
    }
}

// clap's own value parser would exit with 1 on an unknown format
fn parse_format(s: &str) -> Result<Format, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "vtk" => Ok(Format::Vtk),
        "csv" => Ok(Format::Csv),
        other => Err(CliError::Config {
            path: "--format".into(),
            detail: format!("unknown format {other:?}, expected vtk or csv"),
        }),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    init_threads()?;
    match &cli.command {
        Command::Generate => commands::generate(&cli.experiment()?),
        Command::Compare => commands::compare(&cli.experiment()?),
        Command::Ablate { axis } => {
            let (table, path) = commands::ablate(&cli.experiment()?, *axis)?;
            Ok(format!("{table}wrote {}\n", path.display()))
        }
        Command::Export { mesh, format, out } => commands::export(mesh, parse_format(format)?, out),
        Command::Report { mesh, out } => commands::report(mesh, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are config errors in the exit-code contract
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
