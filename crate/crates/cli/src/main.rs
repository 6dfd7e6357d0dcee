use clap::Parser;
use cdut_cli::{configure_threads, execute, Cli};

fn main() {
    let cli = Cli::parse();
    let result = configure_threads(std::env::var("CDUT_THREADS").ok().as_deref()).and_then(|()| execute(&cli));
    match result {
        Ok(output) => {
            print!("{}", output.text);
            std::process::exit(output.code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
