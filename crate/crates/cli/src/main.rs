use clap::Parser;

fn main() {
    let cli = domcftp_cli::Cli::parse();
    if let Err(e) = domcftp_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
