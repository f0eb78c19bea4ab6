use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use geo_spinor_cli::{parse_label, run, CliError, Format, Options, Subcommand};

/// Exact combinatorics of generalized Eichler orders and spinor class fields.
///
/// Reads one JSON document (from --input, --json or stdin) and writes the
/// report to stdout. Exit codes: 0 ok, 2 bad input, 3 rank too large,
/// 4 rank mismatch, 5 invalid local type, 6 oracle mismatch.
#[derive(Debug, Parser)]
#[command(name = "geo-spinor", version)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,
    /// read the input document from a file
    #[arg(long, conflicts_with = "json")]
    input: Option<PathBuf>,
    /// inline input document
    #[arg(long)]
    json: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// base group element for the labeled complex, e.g. "0,0"
    #[arg(long, allow_hyphen_values = true)]
    label: Option<String>,
    /// orbit rank bound, or free-shift bound for commutative hosts
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// copy the input document into the JSON report
    #[arg(long)]
    echo: bool,
    /// timing on stderr
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn read_input(args: &Args) -> Result<String, CliError> {
    if let Some(s) = &args.json {
        return Ok(s.clone());
    }
    if let Some(p) = &args.input {
        return std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())));
    }
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(s)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let result = (|| {
        let text = read_input(&args)?;
        let opts = Options {
            format: args.format,
            label: args.label.as_deref().map(parse_label).transpose()?,
            bound: args.bound,
            echo: args.echo,
        };
        run(args.command, &text, &opts)
    })();
    if args.verbose > 0 {
        eprintln!("{:?} finished in {:.3}s", args.command, start.elapsed().as_secs_f64());
    }
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
