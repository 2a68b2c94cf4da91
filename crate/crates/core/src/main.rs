use clap::Parser;

fn main() {
    let cli = berger_spectra::cli::Cli::parse();
    std::process::exit(berger_spectra::cli::run(cli));
}
