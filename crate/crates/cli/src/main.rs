//! `secat`: compute sectional-category invariants of chain models, check
//! certificates, estimate cohomological lower bounds and propagate bounds.
//!
//! Exit status: 0 success, 1 mathematical failure (REJECT, INCONSISTENT or a
//! failed example), 2 input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use secat_core::bounds::RuleId;
use secat_core::ganea::DEFAULT_CAP;

use commands::{CertifyKind, ChainSubject, Context, EstimateTarget};
use report::{Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "secat", version, about = "Sectional category, relative category and complexity")]
struct Cli {
    /// Highest tower stage (or cup-length) to try.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Print stage traces and derivations.
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Switch off a bounds rule (`R1`..`R17` or `DEF`); repeatable.
    #[arg(long = "disable-rule", global = true, value_name = "RULE", value_parser = parse_rule)]
    disable_rule: Vec<RuleId>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an invariant of a map or object in a `secat-chain v1` file.
    Chain {
        #[arg(value_enum)]
        subject: ChainSubject,
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        object: Option<String>,
    },
    /// Validate a certificate, or build and validate the suspension one.
    Certify {
        #[arg(value_enum)]
        kind: CertifyKind,
        file: PathBuf,
        /// Object to suspend (suspension only).
        #[arg(long)]
        object: Option<String>,
        /// Write the built certificate here (suspension only).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cup-length lower bound from a ring file or a builtin such as `sphere(2)`.
    Estimate {
        #[arg(value_enum)]
        target: EstimateTarget,
        source: String,
        #[arg(long)]
        ring: Option<String>,
        /// Defaults to the last hom in the file.
        #[arg(long)]
        hom: Option<String>,
    },
    /// Propagate a `secat-facts v1` file to its fixpoint.
    Bounds { file: PathBuf },
    /// Run the bundled reproductions and property suites.
    Examples {
        /// Enumerate the items without running them.
        #[arg(long)]
        list: bool,
        /// Restrict to these item ids; repeatable.
        #[arg(long = "item", value_name = "ID")]
        items: Vec<String>,
    },
}

fn parse_rule(s: &str) -> Result<RuleId, String> {
    RuleId::parse(s).ok_or_else(|| format!("unknown rule {s}; expected R1..R17 or DEF"))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::InputError.exit_code() } else { 0 });
        }
    };
    let mut command = vec!["secat".to_string()];
    command.extend(argv.into_iter().skip(1));
    let mut report = Report::new(command, cli.cap);
    let ctx = Context {
        cap: cli.cap,
        trace: cli.trace,
        disabled_rules: cli.disable_rule.clone(),
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Chain {
            subject,
            file,
            map,
            object,
        } => commands::chain(&ctx, &mut report, *subject, file, map.as_deref(), object.as_deref()),
        Command::Certify {
            kind,
            file,
            object,
            output,
        } => commands::certify(&mut report, *kind, file, object.as_deref(), output.as_deref()),
        Command::Estimate {
            target,
            source,
            ring,
            hom,
        } => commands::estimate(&ctx, &mut report, *target, source, ring.as_deref(), hom.as_deref()),
        Command::Bounds { file } => commands::bounds(&ctx, &mut report, file),
        Command::Examples { list, items } => commands::examples(&ctx, &mut report, *list, items),
    };
    report.elapsed = Some(start.elapsed());
    if let Err(e) = outcome {
        report.fail(Status::InputError, e);
    }
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => {
            if let (Status::InputError, Some(e)) = (report.status, &report.error) {
                eprintln!("{e}");
            }
            print!("{}", report.to_text(cli.trace));
        }
    }
    ExitCode::from(report.status.exit_code())
}
