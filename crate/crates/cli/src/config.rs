use clap::{Args, Parser, Subcommand, ValueEnum};
use eb2dbc_core::animator::{DEFAULT_MAX_DEPTH, DEFAULT_PARAM_BOUND, DEFAULT_STATE_CAP};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "eb2dbc",
    version,
    about = "Translate Event-B machines into contract-annotated Eiffel classes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit Eiffel classes for a machine and the contexts it sees.
    Translate(TranslateArgs),
    /// Explore the state space and compare emitted contracts with the model.
    Check(CheckArgs),
    /// Replay a sequence of events from the initial state.
    Animate(AnimateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Machine file (`.ebm` text or Rodin `.bum`).
    pub machine: PathBuf,
    /// Context files (`.ebc` text or Rodin `.buc`).
    pub contexts: Vec<PathBuf>,
    /// Constant bindings, one `name=value` per line.
    #[arg(long)]
    pub bindings: Option<PathBuf>,
    /// Directory searched for seen contexts not given explicitly.
    #[arg(long)]
    pub search: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Render constants as `d` rather than `ctx.d`.
    #[arg(long)]
    pub bare_constants: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Integer parameters range over [-N, N].
    #[arg(long, default_value_t = DEFAULT_PARAM_BOUND as u64)]
    pub param_bound: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub max_depth: u64,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub state_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for exploration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
}

#[derive(Debug, Args)]
pub struct AnimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// One `event` or `event(arg, ...)` per line.
    #[arg(long)]
    pub script: PathBuf,
}

/// Everything a command needs, after argument parsing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub machine: PathBuf,
    pub contexts: Vec<PathBuf>,
    pub search: Option<PathBuf>,
    pub bindings: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub bare_constants: bool,
    pub param_bound: i64,
    pub max_depth: usize,
    pub state_cap: usize,
    pub jobs: usize,
    pub format: Format,
    pub script: Option<PathBuf>,
}

impl RunConfig {
    fn base(input: InputArgs) -> Self {
        RunConfig {
            machine: input.machine,
            contexts: input.contexts,
            search: input.search,
            bindings: input.bindings,
            out: None,
            bare_constants: false,
            param_bound: DEFAULT_PARAM_BOUND,
            max_depth: DEFAULT_MAX_DEPTH,
            state_cap: DEFAULT_STATE_CAP,
            jobs: 1,
            format: Format::Text,
            script: None,
        }
    }
}

impl From<TranslateArgs> for RunConfig {
    fn from(a: TranslateArgs) -> Self {
        RunConfig {
            out: Some(a.out),
            bare_constants: a.bare_constants,
            ..RunConfig::base(a.input)
        }
    }
}

fn clamp(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

impl From<CheckArgs> for RunConfig {
    fn from(a: CheckArgs) -> Self {
        RunConfig {
            param_bound: i64::try_from(a.param_bound).unwrap_or(i64::MAX),
            max_depth: clamp(a.max_depth),
            state_cap: clamp(a.state_cap),
            jobs: clamp(a.jobs),
            format: a.format,
            ..RunConfig::base(a.input)
        }
    }
}

impl From<AnimateArgs> for RunConfig {
    fn from(a: AnimateArgs) -> Self {
        RunConfig {
            script: Some(a.script),
            ..RunConfig::base(a.input)
        }
    }
}
