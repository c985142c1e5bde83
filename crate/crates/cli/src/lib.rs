//! Command-line front end: argument parsing, document loading, command
//! dispatch and result serialization.

pub mod commands;
pub mod documents;
pub mod error;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use sha2::{Digest, Sha256};

pub use error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "hopfkit", version, about = "Protected objects of finite groups and crossed modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conjugation classes of homomorphisms from the surface group.
    RepVariety {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        genus: usize,
    },
    /// Flat labellings modulo gauge transformations.
    ProtectedSet {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
        graph: Option<PathBuf>,
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Protected groupoid of a crossed module.
    ProtectedCat {
        #[arg(long)]
        xmod: PathBuf,
        #[arg(long)]
        genus: usize,
    },
    /// Transports orbits along the reduction to the standard graph.
    VerifyInvariance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Orbits of the mapping class group action.
    McgOrbits {
        #[arg(long, conflicts_with = "xmod", required_unless_present = "xmod")]
        group: Option<PathBuf>,
        #[arg(long)]
        xmod: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        genus: usize,
        /// Generator-image words; defaults to the torus twists.
        #[arg(long)]
        automorphisms: Option<PathBuf>,
    },
    /// Braid and torsion relations of the torus twists on classes.
    McgRelations {
        #[arg(long, conflicts_with = "xmod", required_unless_present = "xmod")]
        group: Option<PathBuf>,
        #[arg(long)]
        xmod: Option<PathBuf>,
    },
    /// Classes of the nerve levels and the homotopy relation check.
    SimplicialLevels {
        #[arg(long)]
        xmod: PathBuf,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 2)]
        levels: usize,
    },
}

/// Raw inputs of a job, kept for the digest.
#[derive(Debug, Default)]
pub struct Inputs {
    parts: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn load<T: DeserializeOwned>(&mut self, role: &str, path: &Path) -> Result<T, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        let doc = serde_json::from_slice(&bytes).map_err(|source| CliError::Json { path: path.into(), source })?;
        self.parts.push((role.into(), bytes));
        Ok(doc)
    }

    pub fn param(&mut self, role: &str, value: impl ToString) {
        self.parts.push((role.into(), value.to_string().into_bytes()));
    }

    /// SHA-256 over length-prefixed `(role, bytes)` pairs.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (role, bytes) in &self.parts {
            for chunk in [role.as_bytes(), bytes.as_slice()] {
                h.update((chunk.len() as u64).to_le_bytes());
                h.update(chunk);
            }
        }
        hex::encode(h.finalize())
    }
}

/// Runs a parsed command line and returns the serialized result.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if std::env::var_os("HOPFKIT_SEED").is_some() {
        return Err(CliError::SeedRejected);
    }
    let job = || commands::execute(&cli.command, cli.format);
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(job),
        None => job(),
    }
}

/// Writes `text` to `--out` or standard output.
pub fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn error_document(err: &CliError) -> String {
    let doc = report::ErrorReport {
        schema: report::ERROR.into(),
        error: report::ErrorBody { code: err.code().into(), message: err.to_string() },
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}
