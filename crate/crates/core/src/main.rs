use std::process::ExitCode;

use clap::Parser;

use cheegerlab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!("{}", serde_json::json!({ "error": msg.trim_end(), "kind": "input", "exit_code": 2 }));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = std::env::var("CHEEGERLAB_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let json = cli.command.common().json;
    match run(&cli) {
        Ok(out) => {
            if json {
                println!("{}", out.report);
            } else {
                print!("{}", out.human);
                for f in &out.files {
                    println!("wrote {}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
