use clap::Parser;

fn main() {
    let cli = entlock_cli::Cli::parse();
    std::process::exit(entlock_cli::run(cli));
}
