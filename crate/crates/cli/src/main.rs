use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use igusa_core::report::{self, Config, Suite};

#[derive(Parser)]
#[command(name = "igusa", version, about = "Run verification suites and print a report")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the numerical geometry
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Largest half-width of the Heegner enumeration box
    #[arg(long = "box", global = true, default_value_t = 5)]
    box_half_width: i64,

    /// Degree-16 trials, 0 skips them
    #[arg(long, global = true, default_value_t = 20)]
    trials: u64,

    /// Quarter-steps kept in q-expansions
    #[arg(long, global = true, default_value_t = 16)]
    terms: usize,

    /// Eisenstein oracle tolerance
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Record per-check runtimes (makes output nondeterministic)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Type census and pairing table of A_N, orbit census of A_M
    Census,
    /// Image group, characters and the theta_V span
    Weil,
    /// Collapsed representation, Eisenstein series and product weights
    Obstruction,
    /// Eta multipliers and lift coefficients
    Lifting,
    /// Heegner divisors restricted to M
    Restriction,
    /// Lines, cubics and the degree-16 count on the quartic
    Geometry,
    /// Every suite
    All,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Md,
}

impl From<Command> for Suite {
    fn from(c: Command) -> Suite {
        match c {
            Command::Census => Suite::Census,
            Command::Weil => Suite::Weil,
            Command::Obstruction => Suite::Obstruction,
            Command::Lifting => Suite::Lifting,
            Command::Restriction => Suite::Restriction,
            Command::Geometry => Suite::Geometry,
            Command::All => Suite::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        seed: cli.seed,
        box_half_width: cli.box_half_width,
        trials: cli.trials,
        terms: cli.terms,
        tolerance: cli.tolerance,
        timings: cli.timings,
        ..Config::default()
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let doc = match report::run(cli.command.into(), &config) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Md => report::render_markdown(&doc),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if doc.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
