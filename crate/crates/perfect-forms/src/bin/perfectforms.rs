use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use perfect_forms::commands::{self, CommandResult, ReduceMode, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "perfectforms", version, about = "Exact computations with perfect quadratic forms")]
struct Cli {
    /// Indent JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check perfection of a form and report its certificate
    Certify {
        file: PathBuf,
        /// Also compute the facets of the Voronoi domain (d ≤ 5)
        #[arg(long)]
        facets: bool,
    },
    /// Reduce a form and report the transform
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ReduceMode,
    },
    /// Evaluate the volumetric bounds for one dimension
    Bound {
        #[arg(long)]
        dim: u64,
        /// JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Enumerate perfect forms up to similarity
    Enumerate {
        #[arg(long)]
        dim: usize,
        /// Allow dimension 6
        #[arg(long)]
        cap_override: bool,
    },
    /// Export the binary partition of the trace plane
    Plot2d {
        #[arg(long)]
        csv: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, CommandResult> {
    std::fs::read_to_string(path).map_err(|e| CommandResult {
        exit_code: EXIT_USAGE,
        stdout: String::new(),
        stderr: Some(format!("cannot read {}: {e}", path.display())),
    })
}

fn finish(r: CommandResult) -> ExitCode {
    print!("{}", r.stdout);
    if let Some(msg) = r.stderr {
        eprintln!("error: {msg}");
    }
    ExitCode::from(r.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match cli.command {
        Command::Certify { file, facets } => {
            finish(read(&file).map_or_else(|e| e, |text| commands::certify(&text, facets, pretty)))
        }
        Command::Reduce { file, mode } => {
            finish(read(&file).map_or_else(|e| e, |text| commands::reduce(&text, mode, pretty)))
        }
        Command::Bound { dim, json } => match commands::precision_from_env() {
            Ok(bits) => finish(commands::bound(dim, json, bits, pretty)),
            Err(msg) => finish(CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: Some(msg) }),
        },
        Command::Enumerate { dim, cap_override } => {
            let stdout = std::io::stdout();
            let code = commands::enumerate(dim, cap_override, |line| {
                let mut lock = stdout.lock();
                let _ = lock.write_all(line.as_bytes());
                let _ = lock.flush();
            });
            ExitCode::from(code as u8)
        }
        Command::Plot2d { csv } => finish(commands::plot2d(csv, pretty)),
    }
}
