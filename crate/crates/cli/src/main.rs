use clap::Parser;
use serde_json::json;

use pfl_cli::{error_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                println!("{}", out.text);
            }
            std::process::exit(out.code);
        }
        Err(e) => {
            let code = error_code(&e);
            if cli.json {
                println!("{}", json!({ "error": format!("{e:#}"), "code": code }));
            }
            eprintln!("error: {e:#}");
            std::process::exit(code);
        }
    }
}
