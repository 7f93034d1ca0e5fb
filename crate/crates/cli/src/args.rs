use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "loopcoh", version, about = "Cohomology of loop spaces of Thom spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verdict, evidence and generator counts per prime
    Classify(Common),
    /// Bidegree table of the E_2 page
    E2(Common),
    /// Poincaré series of the loop space
    Series(Common),
    /// Generator counts for the classified shape
    Generators(Common),
    /// Sphere-bundle relation, its transforms and the Wu-class check
    Massey(Common),
    /// Dimension form of the stable splitting
    SplitCheck(Common),
    /// Polynomiality over a localization of the integers
    LocalGlobal(LocalGlobalArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::E2(_) => "e2",
            Command::Series(_) => "series",
            Command::Generators(_) => "generators",
            Command::Massey(_) => "massey",
            Command::SplitCheck(_) => "split-check",
            Command::LocalGlobal(_) => "local-global",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Classify(c)
            | Command::E2(c)
            | Command::Series(c)
            | Command::Generators(c)
            | Command::Massey(c)
            | Command::SplitCheck(c) => c,
            Command::LocalGlobal(a) => &a.common,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "space"])))]
pub struct Common {
    /// Built-in space (cpinf-eta-plus-r, spin3, spin2-suspension, sphere-<n>, cpinf-eta)
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// JSON space description
    #[arg(long, value_name = "FILE")]
    pub space: Option<PathBuf>,
    /// Characteristic to compute in, 0 for the rationals (repeatable)
    #[arg(long = "prime", value_name = "P")]
    pub primes: Vec<u32>,
    /// Largest total degree [default: the spec's value, else 24]
    #[arg(long, value_name = "N")]
    pub max_degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when a verdict is unknown
    #[arg(long)]
    pub strict: bool,
}

#[derive(Clone, Debug, Default, Args)]
pub struct LocalGlobalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Prime to invert; classified and recorded but not sampled (repeatable)
    #[arg(long = "exclude", value_name = "P")]
    pub exclude: Vec<u32>,
}
