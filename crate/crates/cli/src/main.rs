use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use knotgroup::coset::{DEFAULT_MAX_COSETS, MAX_COSETS_ENV};
use serde::Serialize;
use serde_json::Value;

mod commands;
mod ledger;

use commands::{AlexanderSource, EnumerateArgs, Output};
use ledger::LedgerRecord;

#[derive(Parser)]
#[command(name = "knotgroup", version, about = "Knot groups of twisted torus knots and their Dehn fillings")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Append a JSONL record of each result to this file.
    #[arg(long, global = true)]
    ledger: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Serialize)]
struct Family {
    #[arg(long, allow_negative_numbers = true)]
    u: i64,
    #[arg(long, allow_negative_numbers = true)]
    v: i64,
    /// Model builder: closed or derive.
    #[arg(long, default_value = "closed")]
    mode: String,
}

#[derive(Args, Serialize)]
struct Filling {
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, allow_negative_numbers = true)]
    q: i64,
    /// Longitude framing: paper or corrected.
    #[arg(long, default_value = "paper")]
    longitude: String,
}

#[derive(Subcommand)]
enum Command {
    /// Wirtinger presentation of a diagram (JSON or PD text; default: the built-in link).
    Wirtinger(WirtingerArgs),
    /// Knot group model for (u, v).
    Generate(Family),
    /// Replay the derivation checks for one (u, v) or a sweep.
    VerifyProof(VerifyArgs),
    /// Evaluate the slope criterion.
    CheckSlope {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        filling: Filling,
    },
    /// Least integer slope covered by the criterion.
    Bound(BoundArgs),
    /// First homology of the knot group or of a filling.
    H1(H1Args),
    /// Alexander polynomial of a family member or of a diagram.
    Alexander(AlexanderArgs),
    /// Coset enumeration on a Dehn filling.
    Enumerate(EnumerateCli),
}

#[derive(Args, Serialize)]
struct WirtingerArgs {
    #[arg(long)]
    diagram: Option<PathBuf>,
    /// Drop one redundant relator (single-component diagrams).
    #[arg(long)]
    knot: bool,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "sweep")]
    u: Option<i64>,
    #[arg(long, required_unless_present = "sweep")]
    v: Option<i64>,
    #[arg(long, requires_all = ["umin", "umax", "vmax"], conflicts_with_all = ["u", "v"])]
    sweep: bool,
    #[arg(long, allow_negative_numbers = true)]
    umin: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    umax: Option<i64>,
    #[arg(long, default_value_t = 0)]
    vmin: i64,
    #[arg(long)]
    vmax: Option<i64>,
}

#[derive(Args, Serialize)]
struct BoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: Family,
    #[arg(long, default_value = "paper")]
    longitude: String,
}

#[derive(Args, Serialize)]
struct H1Args {
    #[command(flatten)]
    #[serde(flatten)]
    family: Family,
    #[arg(long, allow_negative_numbers = true, requires = "q")]
    p: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "p")]
    q: Option<i64>,
    #[arg(long, default_value = "paper")]
    longitude: String,
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["u", "diagram"])))]
struct AlexanderArgs {
    #[arg(long, allow_negative_numbers = true, requires = "v", conflicts_with = "diagram")]
    u: Option<i64>,
    #[arg(long, requires = "u")]
    v: Option<i64>,
    #[arg(long, default_value = "closed")]
    mode: String,
    #[arg(long)]
    diagram: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EnumerateCli {
    #[command(flatten)]
    #[serde(flatten)]
    family: Family,
    #[command(flatten)]
    #[serde(flatten)]
    filling: Filling,
    #[arg(long, env = MAX_COSETS_ENV, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    #[arg(long, default_value = "hlt")]
    strategy: String,
}

fn params(x: &impl Serialize) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn run(command: &Command) -> anyhow::Result<(&'static str, Value, Output)> {
    Ok(match command {
        Command::Wirtinger(a) => ("wirtinger", params(a), commands::wirtinger(a.diagram.as_deref(), a.knot)?),
        Command::Generate(f) => ("generate", params(f), commands::generate(f.u, f.v, &f.mode)?),
        Command::VerifyProof(a) => {
            let out = match (a.sweep, a.u, a.v) {
                (true, ..) => commands::verify_sweep(
                    a.umin.unwrap_or_default(),
                    a.umax.unwrap_or_default(),
                    a.vmin,
                    a.vmax.unwrap_or_default(),
                )?,
                (false, Some(u), Some(v)) => commands::verify(u, v)?,
                _ => unreachable!("clap enforces --u/--v or --sweep"),
            };
            ("verify-proof", params(a), out)
        }
        Command::CheckSlope { family, filling } => {
            let p = serde_json::json!({ "family": params(family), "filling": params(filling) });
            let out = commands::check_slope(family.u, family.v, filling.p, filling.q, &filling.longitude, &family.mode)?;
            ("check-slope", p, out)
        }
        Command::Bound(a) => ("bound", params(a), commands::bound(a.family.u, a.family.v, &a.longitude, &a.family.mode)?),
        Command::H1(a) => {
            let filling = a.p.zip(a.q);
            ("h1", params(a), commands::h1(a.family.u, a.family.v, filling, &a.longitude, &a.family.mode)?)
        }
        Command::Alexander(a) => {
            let source = match a.u.zip(a.v) {
                Some((u, v)) => AlexanderSource::Family { u, v, mode: &a.mode },
                None => AlexanderSource::Diagram(a.diagram.as_deref()),
            };
            ("alexander", params(a), commands::alexander(source)?)
        }
        Command::Enumerate(a) => {
            let out = commands::enumerate(EnumerateArgs {
                u: a.family.u,
                v: a.family.v,
                p: a.filling.p,
                q: a.filling.q,
                longitude: &a.filling.longitude,
                mode: &a.family.mode,
                strategy: &a.strategy,
                max_cosets: a.max_cosets,
            })?;
            ("enumerate", params(a), out)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let (name, params, out) = match run(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let written = match cli.format {
        Format::Json => out.payloads.iter().try_for_each(|p| writeln!(stdout, "{p}")),
        Format::Text => stdout.write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Some(path) = &cli.ledger {
        let records: Vec<LedgerRecord> =
            out.payloads.into_iter().map(|r| LedgerRecord::new(name, params.clone(), r)).collect();
        if let Err(e) = ledger::append(path, &records) {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
