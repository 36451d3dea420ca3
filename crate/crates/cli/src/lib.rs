//! Command-line front end for the `qident` toolkit.
//!
//! Results go to the output stream (or `--out`), diagnostics to the error
//! stream. Exit codes: 0 success, 1 a reproduced claim failed, 2 usage
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qident::hom::{Statistics, TwoParticleInput};
use qident::hvsearch::ModelKind;
use qident::qcore::ContextTable;
use qident::report::{self, Format, Outcome};
use qident::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qident", version, about = "GHZ contextuality and particle-identity hidden-variable toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Maximum number of solutions to list; counts are always complete.
    #[arg(long, global = true)]
    max_list: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Noncontextual,
    Contextual,
    Identity,
    IdentityFixed,
    Hybrid,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Noncontextual => ModelKind::Noncontextual,
            ModelArg::Contextual => ModelKind::Contextual,
            ModelArg::Identity => ModelKind::Identity,
            ModelArg::IdentityFixed => ModelKind::IdentityFixed,
            ModelArg::Hybrid => ModelKind::Hybrid,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsArg {
    Boson,
    Fermion,
    Distinguishable,
}

impl From<StatsArg> for Statistics {
    fn from(s: StatsArg) -> Self {
        match s {
            StatsArg::Boson => Statistics::Boson,
            StatsArg::Fermion => Statistics::Fermion,
            StatsArg::Distinguishable => Statistics::Distinguishable,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the four GHZ contexts on the GHZ state.
    GhzTable,
    /// Check the symmetrized three-boson construction.
    SymmCheck,
    /// Exhaustively classify a hidden-variable model family.
    Enumerate {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Targets of the XYY, YXY, YYX, XXX rows.
        #[arg(long, default_value = "+1,+1,+1,-1", allow_hyphen_values = true)]
        targets: String,
    },
    /// Two-particle beamsplitter interference.
    Hom {
        #[arg(long, value_enum)]
        stats: StatsArg,
        /// Transmission amplitude in [0, 1]; `1/sqrt2` is accepted.
        #[arg(long, value_parser = parse_transmissivity, allow_hyphen_values = true)]
        t: f64,
    },
    /// Re-run every reproduced claim and report pass/fail.
    VerifyPaper,
}

fn parse_transmissivity(s: &str) -> Result<f64, String> {
    match s {
        "1/sqrt2" | "1/sqrt(2)" => Ok(std::f64::consts::FRAC_1_SQRT_2),
        _ => s.parse().map_err(|e| format!("{e}")),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::GhzTable => report::ghz_table(),
        Command::SymmCheck => report::symm_check(),
        Command::Enumerate { model, targets } => {
            let table = ContextTable::ghz_with_targets(report::parse_targets(targets)?);
            Ok(report::enumerate((*model).into(), &table, cli.max_list))
        }
        Command::Hom { stats, t } => report::hom(&TwoParticleInput::new((*stats).into(), *t)?),
        Command::VerifyPaper => Ok(report::verify()),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };

    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e @ Error::Inconsistent { .. }) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VERIFY;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };

    let rendered = outcome.render(cli.format.into());
    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered.as_bytes()),
        None => out.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }

    if outcome.passed {
        EXIT_OK
    } else {
        let _ = writeln!(err, "verification failed");
        EXIT_VERIFY
    }
}
