use std::process::ExitCode;

use clap::Parser as _;
use serde_json::json;

use helly_lab_cli::{run, Cli, Stage};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(threads) = std::env::var("HELLY_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            log::warn!("could not set thread count: {e}");
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let report = json!({
                "error": { "command": null, "stage": Stage::Config, "message": e.kind().to_string(), "causes": [e.render().to_string()] }
            });
            eprintln!("{report}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            for r in &out.rows {
                log::info!("{}: {} selected", r.experiment_id, r.selected_size);
            }
            println!("{}", out.csv.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let stage = e.downcast_ref::<Stage>().copied().unwrap_or(Stage::Run);
            let causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            let report = json!({
                "error": {
                    "command": cli.command.name(),
                    "stage": stage,
                    "message": causes.first().cloned().unwrap_or_else(|| e.to_string()),
                    "causes": causes,
                }
            });
            eprintln!("{report}");
            ExitCode::from(2)
        }
    }
}
