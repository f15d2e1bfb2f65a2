//! Write the seeded synthetic corpus to disk.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use assoc_nb::corpus_gen::{write_corpus, GenConfig};

#[derive(Parser)]
#[command(
    name = "gen-corpus",
    version,
    about = "Generate a reproducible synthetic training corpus (three categories)"
)]
struct Cli {
    /// Output directory; one subdirectory per category is created.
    #[arg(long)]
    out: PathBuf,
    /// Total number of documents (default: 60).
    #[arg(long, default_value_t = 60)]
    docs: usize,
    /// RNG seed (default: 13).
    #[arg(long, default_value_t = 13)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = GenConfig {
        total_docs: cli.docs,
        seed: cli.seed,
    };
    match write_corpus(&config, &cli.out) {
        Ok(count) => {
            println!("wrote {count} documents to {}", cli.out.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
