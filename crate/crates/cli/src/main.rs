mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

const GRAMMAR: &str = "\
GROUP DESCRIPTORS (case-insensitive, no whitespace):
  C<n>  D<n>  V4  S<n>  A<n>  PSL2_<q>  PGL2_<q>  SL2_<q>  F_<p>_<q>
  q must be a prime power; F_<p>_<q> needs primes with q | p-1.

EXIT CODES:
  0 success, 1 computation error, 2 usage error, 3 verification failure";

#[derive(Parser, Debug)]
#[command(
    name = "dessins",
    version,
    about = "Enumerate and cross-check the regular dessins with a given automorphism group",
    after_help = GRAMMAR
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Directory for cached lattices and censuses. DESSIN_CACHE_DIR takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads. Output does not depend on this.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    #[default]
    Natural,
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormulaName {
    #[value(name = "rC")]
    RC,
    #[value(name = "rD")]
    RD,
    #[value(name = "rL2p")]
    RL2p,
    #[value(name = "rL2_2e")]
    RL22e,
    #[value(name = "rSz")]
    RSz,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All regular dessins with the given group, with type, genus and commutator data.
    Census { group: String },
    /// Subgroup lattice summary and the Möbius function.
    Mobius { group: String },
    /// Orbits of the Nielsen moves on the census.
    Tsystems { group: String },
    /// Universal cover order, type and genus.
    Ucover {
        group: String,
        /// Only the cover of this Nielsen orbit.
        #[arg(long)]
        orbit: Option<usize>,
        /// Also report the cover of every Nielsen orbit.
        #[arg(long)]
        orbits: bool,
        /// Permutation representation used for each block.
        #[arg(long, value_enum, default_value_t)]
        layout: Layout,
        /// Allow whole covers far beyond A5 scale, such as PSL2_7 (order 168^57).
        #[arg(long)]
        attempt_l27: bool,
    },
    /// Evaluate a closed form for r(G): rC n, rD n, rL2p p, rL2_2e e, rSz e.
    Formula { name: FormulaName, n: u32 },
    /// Run every applicable cross-check and report pass/fail per check.
    Verify { group: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match commands::run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.exit_code();
            match (&err, format) {
                (CliError::Verification(out), _) => print!("{out}"),
                (_, Format::Json) => eprintln!("{}", err.to_json()),
                _ => eprintln!("error: {err}"),
            }
            ExitCode::from(code)
        }
    }
}
