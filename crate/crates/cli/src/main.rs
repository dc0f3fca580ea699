use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use coevents::beables::CompletionMode;
use coevents::report::{run, Command, RunOptions, SetChoice};
use coevents::topos::SIEVE_CAP;
use coevents::{theory, Error};

#[derive(Parser, Debug)]
#[command(
    name = "coevents",
    version,
    about = "Analyse finite histories theories: sum rules, coevents, beables and the topos layer"
)]
struct Cli {
    /// Analysis to run
    #[arg(value_enum)]
    verb: Verb,

    /// Theory file (JSON)
    theory: PathBuf,

    /// Coevent space to work over
    #[arg(long, value_enum)]
    set: Option<SetArg>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include the dual of the empty event among the multiplicative coevents
    #[arg(long)]
    include_empty_dual: bool,

    /// Largest sample space for brute-force coevent enumeration (max 4)
    #[arg(long, value_name = "N")]
    cap: Option<usize>,

    /// Largest poset for sieve enumeration
    #[arg(long, value_name = "N", default_value_t = SIEVE_CAP)]
    sieve_cap: usize,

    /// Event as comma-separated labels; "" is the empty event
    #[arg(long, value_name = "LABELS")]
    event: Option<String>,

    /// Second event for `audit`
    #[arg(long, value_name = "LABELS")]
    other: Option<String>,

    /// Principal event of the context coevent for `topos`
    #[arg(long, value_name = "LABELS")]
    context: Option<String>,

    /// Completion mode for `complete`
    #[arg(long, value_enum, default_value_t = ModeArg::Upper)]
    mode: ModeArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    Validate,
    Coevents,
    Tau,
    Orders,
    Complete,
    Audit,
    Topos,
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    All,
    Classical,
    ClassicalPreclusive,
    Multiplicative,
    Scheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Upper,
    Boolean,
}

impl From<Verb> for Command {
    fn from(v: Verb) -> Self {
        match v {
            Verb::Validate => Command::Validate,
            Verb::Coevents => Command::Coevents,
            Verb::Tau => Command::Tau,
            Verb::Orders => Command::Orders,
            Verb::Complete => Command::Complete,
            Verb::Audit => Command::Audit,
            Verb::Topos => Command::Topos,
            Verb::Report => Command::Report,
        }
    }
}

impl From<SetArg> for SetChoice {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::All => SetChoice::All,
            SetArg::Classical => SetChoice::Classical,
            SetArg::ClassicalPreclusive => SetChoice::ClassicalPreclusive,
            SetArg::Multiplicative => SetChoice::Multiplicative,
            SetArg::Scheme => SetChoice::Scheme,
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) => 1,
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cli: &Cli) -> coevents::Result<String> {
    let theory = theory::load(&cli.theory)?;
    let opts = RunOptions {
        set: cli.set.map(Into::into),
        event: cli.event.clone(),
        other: cli.other.clone(),
        context: cli.context.clone(),
        mode: match cli.mode {
            ModeArg::Upper => CompletionMode::Upper,
            ModeArg::Boolean => CompletionMode::Boolean,
        },
        include_empty_dual: cli.include_empty_dual.then_some(true),
        cap: cli.cap,
        sieve_cap: cli.sieve_cap,
    };
    let report = run(cli.verb.into(), &theory, &opts)?;
    Ok(match cli.format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_machine(),
    })
}
