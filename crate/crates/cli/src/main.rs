mod args;
mod commands;
mod config;

use clap::Parser;

use args::{Cli, Command, SECTIONS};
use config::{load_file, CliError};

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(config::config_err)?;
    }
    let file = match &cli.config {
        Some(p) => Some(load_file(p, &SECTIONS)?),
        None => None,
    };
    let file = file.as_ref();
    match &cli.command {
        Command::Sort(a) => commands::sort(a, file),
        Command::Select(a) => commands::select(a, file),
        Command::Oracle(a) => commands::oracle(a, file),
        Command::SortGrid(a) => commands::sort_grid(a, file),
        Command::Tau(a) => commands::tau(a, file),
        Command::Partition(a) => commands::partition(a, file),
        Command::Ga(a) => commands::ga(a, file),
        Command::Cmop(a) => commands::cmop(a, file),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("kpareto: {e}");
        std::process::exit(e.exit_code());
    }
}
