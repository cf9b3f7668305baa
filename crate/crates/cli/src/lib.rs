//! Command-line front end: structure files in, text and JSON reports out.

pub mod commands;
pub mod report;
pub mod structure;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{Envelope, Status};

#[derive(Debug, Parser)]
#[command(name = "pomalg", version, about = "Finite pomonoids, S-posets, tensor products and amalgams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Step bound for the word search.
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: usize,
    /// Number of tower levels to build.
    #[arg(long, global = true, default_value_t = 4)]
    pub tower: usize,
    /// Tensor cell guard for towers; largest enumerated test object for
    /// bounded suites.
    #[arg(long, global = true)]
    pub size_cap: Option<usize>,
    /// Replay every certificate in the report.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Seed for sampled test objects.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the Hasse diagram of the result as DOT here.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and validate every structure in a file.
    Validate { file: PathBuf },
    /// `A ⊗_S B` for a right S-poset `A` and a left S-poset `B`.
    Tensor {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// `A/ν(R)`, or `A/θ(R)` with `--symmetric`, for pairs `x <= y`.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        sposet: String,
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        symmetric: bool,
    },
    /// The pushout of two S-poset maps out of a common source.
    Pushout {
        file: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// The free extension of `Y` along `f: X → Y`.
    FreeExt {
        file: PathBuf,
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        map: String,
    },
    /// The unitary conditions for a subpomonoid or an S-poset map.
    Unitary {
        file: PathBuf,
        #[arg(long)]
        sub: Option<String>,
        #[arg(long = "in")]
        within: Option<String>,
        #[arg(long)]
        map: Option<String>,
    },
    /// The poextension property of a subpomonoid, exhaustively over small
    /// test posets plus optional samples.
    Poext {
        file: PathBuf,
        #[command(flatten)]
        sub: SubArgs,
        /// Test this right U-poset instead of the enumerated family.
        #[arg(long)]
        x: Option<String>,
        /// Test the left property.
        #[arg(long)]
        left: bool,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Embeddability of an amalgam through the tower of free extensions.
    Amalgam {
        file: PathBuf,
        #[arg(long)]
        amalgam: String,
    },
    /// Bounded search for `lhs ≤ rhs` in the amalgamated free product.
    WordLe {
        file: PathBuf,
        #[arg(long)]
        amalgam: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Build the tower and check its bracket identities and monotonicity.
    Tower {
        file: PathBuf,
        #[arg(long)]
        amalgam: String,
    },
    /// The group completion of a commutative pocancellative pomonoid.
    Gcomplete {
        file: PathBuf,
        #[arg(long)]
        pomonoid: String,
    },
    /// Strong poembeddability of a commutative amalgam in its commutative tensor.
    CommutativeAmalgam {
        file: PathBuf,
        #[arg(long)]
        amalgam: String,
    },
    /// Search small commutative pocancellative amalgams for a failure of
    /// strong poembedding in a commutative pomonoid.
    ExperimentOpenProblem,
}

#[derive(Debug, Clone, Args)]
pub struct SubArgs {
    /// A pomonoid morphism, or a pomonoid mapped into `--in`.
    #[arg(long)]
    pub sub: String,
    #[arg(long = "in")]
    pub within: String,
}

impl Command {
    fn file(&self) -> Option<&PathBuf> {
        match self {
            Command::Validate { file }
            | Command::Tensor { file, .. }
            | Command::Quotient { file, .. }
            | Command::Pushout { file, .. }
            | Command::FreeExt { file, .. }
            | Command::Unitary { file, .. }
            | Command::Poext { file, .. }
            | Command::Amalgam { file, .. }
            | Command::WordLe { file, .. }
            | Command::Tower { file, .. }
            | Command::Gcomplete { file, .. }
            | Command::CommutativeAmalgam { file, .. } => Some(file),
            Command::ExperimentOpenProblem => None,
        }
    }
}

/// Runs one command line, printing to stdout and stderr; returns the exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::InputError.code() } else { 0 };
        }
    };
    let start = Instant::now();
    let bytes = match cli.command.file().map(std::fs::read).transpose() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return Status::InputError.code();
        }
    };
    let path = cli.command.file().map(|p| p.display().to_string());
    let outcome = commands::dispatch(&cli, bytes.as_deref());
    let envelope = Envelope {
        command: args,
        input: path.as_deref().zip(bytes.as_deref()),
        seed: cli.common.seed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
    };
    let (code, json) = match &outcome {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            if let Some(v) = &o.verification {
                if v.ok() {
                    println!("verified: {} certificate(s) replayed", v.replayed);
                } else {
                    for f in &v.failures {
                        println!("replay failed: {f}");
                    }
                }
            }
            println!("verdict: {} ({})", o.verdict, serde_json::to_value(o.scope).unwrap_or_default().as_str().unwrap_or(""));
            (o.status.code(), report::render(&envelope, o))
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            (Status::InputError.code(), report::render_error(&envelope, msg))
        }
    };
    if let Some(p) = &cli.common.json {
        let text = serde_json::to_string_pretty(&json).expect("reports serialize");
        if let Err(e) = report::write_atomically(p, &(text + "\n")) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return Status::InputError.code();
        }
    }
    if let (Some(p), Ok(o)) = (&cli.common.dot, &outcome) {
        match &o.dot {
            Some(d) => {
                if let Err(e) = report::write_atomically(p, d) {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    return Status::InputError.code();
                }
            }
            None => eprintln!("note: this command has no diagram to draw"),
        }
    }
    code
}
