use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use decoscat::args::{Cli, Command};
use decoscat::commands;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let res = match &cli.command {
        Command::Run(a) => commands::run(a, &mut out).map(|_| true),
        Command::Dispersion(a) => commands::dispersion(a, &mut out).map(|_| true),
        Command::PredictDr(a) => commands::predict_dr(a, &mut out).map(|_| true),
        Command::EstimateD(a) => commands::estimate_d(a, &mut out).map(|_| true),
        Command::Verify(a) => commands::verify(a, &mut out),
    };
    let _ = out.flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
