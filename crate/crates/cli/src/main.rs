use std::io::Write;
use std::process;

use clap::Parser;
use qsim_cli::experiments::run;
use qsim_cli::record::{render, write_atomic};
use qsim_cli::{Cli, ExitCode};

fn main() {
    let cli = Cli::parse();
    let mut code = ExitCode::Success;
    let mut records = Vec::new();
    for result in run(&cli) {
        match result {
            Ok(r) => {
                if r.agreement() == Some(false) {
                    eprintln!("qsim: {} disagrees with its oracle", r.config.instance.as_deref().unwrap_or(&r.experiment));
                    code = code.max(ExitCode::Consistency);
                }
                records.push(r);
            }
            Err(e) => {
                eprintln!("qsim: {e}");
                code = code.max(e.exit_code());
            }
        }
    }

    if !records.is_empty() {
        let emitted = render(&records, cli.format).and_then(|text| match &cli.out {
            Some(path) => write_atomic(path, &text),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| qsim_cli::CliError::Output(e.to_string())),
        });
        if let Err(e) = emitted {
            eprintln!("qsim: {e}");
            code = code.max(e.exit_code());
        }
    }
    process::exit(code as i32);
}
