use clap::Parser;

fn main() {
    let config = circlift::cli::RunConfig::parse();
    std::process::exit(circlift::cli::run(config));
}
