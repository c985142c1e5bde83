use clap::Parser;
use hopfkit_cli::{emit, error_document, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli).and_then(|text| emit(&cli, &text)) {
        eprint!("{}", error_document(&err));
        std::process::exit(err.exit_code());
    }
}
