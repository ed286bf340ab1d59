use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qcat::commands::{run, CliError, Options, COMMANDS};
use qcat::instance::Instance;
use qcat_core::Quantale;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Check instances of quantale-enriched T-categories and run the theorem suite.
#[derive(Parser, Debug)]
#[command(name = "qcat", version)]
struct Args {
    /// One of: check-category, check-functor, adjoint, yoneda, presheaves,
    /// colim, cocomplete, injective, kan, kz, quotient, split-fork,
    /// inhabited, x-plus, topology, verify-all.
    command: String,
    /// Instance file (not used by verify-all).
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest carrier enumerated by verify-all and by injectivity suites.
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    /// Word-length bound for the word theory.
    #[arg(long)]
    word_bound: Option<usize>,
    /// Samples per sampled check over [0, ∞].
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quantale for verify-all: bool2, chainN or lawvere.
    #[arg(long)]
    quantale: Option<Quantale>,
    /// Restrict the command to one named entity of the instance.
    #[arg(long)]
    name: Option<String>,
}

fn execute(args: &Args) -> Result<qcat::report::Report, CliError> {
    if !COMMANDS.contains(&args.command.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown command `{}`; expected one of {}",
            args.command,
            COMMANDS.join(", ")
        )));
    }
    let inst = match &args.file {
        Some(path) if args.command != "verify-all" => {
            let text = std::fs::read_to_string(path)?;
            Some(Instance::parse(&text, args.word_bound).map_err(CliError::Instance)?)
        }
        _ => None,
    };
    let opts = Options {
        max_size: args.max_size,
        word_bound: args.word_bound,
        samples: args.samples,
        seed: args.seed,
        quantale: args.quantale,
        name: args.name.clone(),
    };
    run(&args.command, inst.as_ref(), &opts)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match execute(&args) {
        Ok(report) => {
            let text = match args.format {
                Format::Text => report.to_text(),
                Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n",
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
