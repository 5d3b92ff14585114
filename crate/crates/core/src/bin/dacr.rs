use clap::Parser;

fn main() {
    let cli = dacr::cli::Cli::parse();
    std::process::exit(dacr::cli::execute(&cli));
}
