//! `superconf`: command-line front end for the exact verification engine.
//!
//! Exit codes: 0 when every check passes (witnesses count as passing), 1 when
//! any check fails, 2 on usage errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Context, IntertwineArgs};
use report::{Report, Status};
use superconf::algebra::Sector;

/// Invalid flags or values; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "superconf", version, about = "Exact checks for N=2 superconformal algebras and their cuspidal modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON array of reports instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized seeds and combinations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Algebra,
    Modules,
    Lemmas,
    Embedding,
}

#[derive(Args, Clone)]
struct ModuleArgs {
    /// Module family: a, at, rab, rabc.
    #[arg(long)]
    family: String,
    /// Exact rational such as 1/3.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c: String,
    /// Apply the parity-change functor.
    #[arg(long)]
    flip: bool,
    /// Label window LO:HI.
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true)]
    window: String,
    /// Largest |index| of the acting generators.
    #[arg(long, default_value_t = 3)]
    max_index: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        sector: Option<String>,
        #[arg(long)]
        family: Option<String>,
        /// Index bound for algebra and embedding sweeps.
        #[arg(long, default_value_t = 6)]
        max_index: i64,
        /// Corrupt one module table (negative-control fixture).
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
    /// Simplicity verdict with window witnesses.
    Classify(ModuleArgs),
    /// Verma weight-space dimensions against the product formula.
    Character {
        #[arg(long)]
        sector: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Proper invariant subspaces found in a window.
    Submodules(ModuleArgs),
    /// Intertwiners from a module (or the span of some of its slots) to another.
    Intertwine {
        #[command(flatten)]
        source: ModuleArgs,
        /// Restrict the source to the span of these slots, e.g. "v-,v+-".
        #[arg(long)]
        sub: Option<String>,
        #[arg(long)]
        to_family: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to_a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to_b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to_c: Option<String>,
        #[arg(long)]
        to_flip: bool,
        #[arg(long)]
        parity_reversing: bool,
    },
    /// Every suite plus the published examples.
    Report {
        /// Also write the JSON reports to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn sectors(flag: Option<&str>, default: &[Sector]) -> anyhow::Result<Vec<Sector>> {
    match flag {
        Some(s) => Ok(vec![commands::parse_sector(s)?]),
        None => Ok(default.to_vec()),
    }
}

fn spec(m: &ModuleArgs) -> anyhow::Result<superconf::modules::ModuleSpec> {
    commands::build_spec(&m.family, &m.a, &m.b, &m.c, m.flip)
}

fn run(cli: &Cli) -> anyhow::Result<Vec<Report>> {
    let ctx = Context { seed: cli.seed, timing: cli.timing };
    match &cli.command {
        Command::Verify { target, sector, family, max_index, perturb } => {
            let perturb = perturb.as_deref().map(commands::parse_perturbation).transpose()?;
            if family.is_some() && !matches!(target, Target::Modules) {
                return Err(UsageError("--family applies to `verify modules` only".into()).into());
            }
            match target {
                Target::Algebra => Ok(commands::verify_algebra(&ctx, &sectors(sector.as_deref(), &Sector::ALL)?, *max_index)),
                Target::Modules => commands::verify_modules(&ctx, family.as_deref(), perturb),
                Target::Lemmas => commands::verify_lemmas(&ctx),
                Target::Embedding => commands::verify_embedding(
                    &ctx,
                    &sectors(sector.as_deref(), &[Sector::N2Ramond, Sector::N2NeveuSchwarz])?,
                    *max_index,
                ),
            }
        }
        Command::Classify(m) => {
            Ok(vec![commands::classify(&ctx, &spec(m)?, commands::parse_window(&m.window)?, m.max_index)?])
        }
        Command::Character { sector, depth } => commands::character(&ctx, &sectors(sector.as_deref(), &Sector::ALL)?, *depth),
        Command::Submodules(m) => {
            Ok(vec![commands::submodules(&ctx, &spec(m)?, commands::parse_window(&m.window)?, m.max_index)?])
        }
        Command::Intertwine { source, sub, to_family, to_a, to_b, to_c, to_flip, parity_reversing } => {
            let target = commands::build_spec(
                to_family.as_deref().unwrap_or(&source.family),
                to_a.as_deref().unwrap_or(&source.a),
                to_b.as_deref().unwrap_or(&source.b),
                to_c.as_deref().unwrap_or(&source.c),
                *to_flip,
            )?;
            let args = IntertwineArgs {
                source: spec(source)?,
                target,
                sub: sub.as_deref().map(commands::parse_slots).transpose()?,
                window: commands::parse_window(&source.window)?,
                max_index: source.max_index,
                parity_reversing: *parity_reversing,
            };
            Ok(vec![commands::intertwine(&ctx, &args)?])
        }
        Command::Report { out } => {
            let reports = commands::full_report(&ctx)?;
            if let Some(path) = out {
                std::fs::write(path, report::to_json(&reports))?;
            }
            Ok(reports)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reports) => {
            if cli.json {
                print!("{}", report::to_json(&reports));
            } else {
                print!("{}", report::to_text(&reports));
            }
            if reports.iter().any(|r| r.status == Status::Fail) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
