use std::process::ExitCode;

use briberon::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("BRIBERON_THREADS") {
        let pool = threads
            .parse::<usize>()
            .map_err(|e| e.to_string())
            .and_then(|n| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| e.to_string())
            });
        if let Err(e) = pool {
            eprintln!("briberon: BRIBERON_THREADS={threads:?}: {e}");
            return ExitCode::from(2);
        }
    }
    let code = run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
