mod args;
mod commands;
mod error;
mod output;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Converge(a) => commands::converge(a),
        Command::SternGerlach(a) => commands::stern_gerlach(a),
        Command::Finite(a) => commands::finite(a),
        Command::Gauge(a) => commands::gauge(a),
        Command::Dirac(a) => commands::dirac(a),
        Command::Wavefunctional(a) => commands::wavefunctional(a),
        Command::Partition(a) => commands::partition(a),
    };
    if let Err(e) = result {
        eprintln!("borncount: error: {e}");
        std::process::exit(e.exit_code());
    }
}
