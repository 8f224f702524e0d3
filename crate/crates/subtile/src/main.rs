use clap::Parser;

fn main() {
    let cli = subtile::cli::Cli::parse();
    std::process::exit(subtile::cli::run(cli));
}
