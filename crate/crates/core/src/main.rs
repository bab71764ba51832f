use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tropref::appendix::Surface;
use tropref::cli::{self, CacheAction, Command, Emit, Identity, RunConfig};

#[derive(Parser)]
#[command(name = "tropref", version, about = "Refined tropical invariants of h-transverse polygons")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    emit: EmitArg,
    /// Invariant cache file (JSON lines); defaults to $TROPREF_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Fail on classes missing from a table instead of reporting them.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Refined invariants of one polygon.
    Compute {
        /// rect:a,b | sigma2:a,b | p2:d | path to a JSON file with "vertices".
        #[arg(long)]
        polygon: String,
        /// Genus, `n` or a range `a:b`.
        #[arg(long, default_value = "0", value_parser = cli::parse_range)]
        genus: (u32, u32),
        /// Pairs of complex conjugate points, `n` or `a:b` (genus 0 only).
        #[arg(long, default_value = "0", value_parser = cli::parse_range)]
        pairs: (u32, u32),
        /// Include every floor diagram with its multiplicity and markings.
        #[arg(long)]
        list_diagrams: bool,
        /// Include the recursion tree for s > 0.
        #[arg(long)]
        trace: bool,
    },
    /// Check identities and replay the reference tables.
    Verify {
        #[arg(long, value_enum)]
        identity: Vec<IdentityArg>,
        /// Range bound for the coefficient identities.
        #[arg(long, default_value_t = 12)]
        max: i64,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Replay the reference tables.
    Appendix {
        #[arg(long)]
        min_genus: Option<u32>,
        #[arg(long, value_enum)]
        surface: Option<SurfaceArg>,
        /// Fixture file to replay instead of the bundled tables.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Inspect or recheck the invariant cache.
    Cache {
        #[arg(value_enum)]
        action: CacheArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    UInversion,
    MainProof,
    ConjQuadric,
    Symmetry,
    MonotoneS,
    CutIndependence,
    WelRecursion,
    P2Coefficient,
    Increase,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Appendix,
}

#[derive(Clone, Copy, ValueEnum)]
enum SurfaceArg {
    Qh,
    Sigma2,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheArg {
    Stats,
    Verify,
}

fn identities(args: &[IdentityArg]) -> Vec<Identity> {
    let mut out = Vec::new();
    for a in args {
        match a {
            IdentityArg::All => out.extend(Identity::ALL),
            IdentityArg::UInversion => out.push(Identity::UInversion),
            IdentityArg::MainProof => out.push(Identity::MainProof),
            IdentityArg::ConjQuadric => out.push(Identity::ConjQuadric),
            IdentityArg::Symmetry => out.push(Identity::Symmetry),
            IdentityArg::MonotoneS => out.push(Identity::MonotoneS),
            IdentityArg::CutIndependence => out.push(Identity::CutIndependence),
            IdentityArg::WelRecursion => out.push(Identity::WelRecursion),
            IdentityArg::P2Coefficient => out.push(Identity::P2Coefficient),
            IdentityArg::Increase => out.push(Identity::Increase),
        }
    }
    out.sort();
    out.dedup();
    out
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Compute { polygon, genus, pairs, list_diagrams, trace } => {
            Command::Compute { polygon, genus, pairs, list_diagrams, trace }
        }
        Cmd::Verify { identity, max, suite } => {
            if identity.is_empty() && suite.is_none() {
                eprintln!("error: verify needs --identity or --suite");
                return ExitCode::from(cli::EXIT_USAGE as u8);
            }
            Command::Verify { identities: identities(&identity), max, appendix: suite.is_some() }
        }
        Cmd::Appendix { min_genus, surface, fixtures } => Command::Appendix {
            min_genus,
            surface: surface.map(|s| match s {
                SurfaceArg::Qh => Surface::QH,
                SurfaceArg::Sigma2 => Surface::Sigma2,
            }),
            fixtures,
        },
        Cmd::Cache { action } => Command::Cache {
            action: match action {
                CacheArg::Stats => CacheAction::Stats,
                CacheArg::Verify => CacheAction::Verify,
            },
        },
    };
    let emit = match args.emit {
        EmitArg::Text => Emit::Text,
        EmitArg::Json => Emit::Json,
        EmitArg::Csv => Emit::Csv,
    };
    let out = cli::run(&RunConfig { command, emit, cache: args.cache, workers: args.workers, strict: args.strict });
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
