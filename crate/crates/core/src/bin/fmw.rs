use std::io::{self, BufRead, IsTerminal, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use framed_mw::lang::{run_batch, run_lines, selftest::selftest, Session, DEFAULT_BUDGET};

/// Calculator for Grothendieck-Witt rings, Milnor-Witt K-theory and framed correspondences.
#[derive(Parser)]
#[command(name = "fmw", version)]
struct Cli {
    /// Print one JSON object per statement.
    #[arg(long)]
    json: bool,
    /// Evaluate a file, one statement per line.
    #[arg(long, value_name = "FILE")]
    batch: Option<String>,
    /// Evaluate a single statement.
    #[arg(short, long, value_name = "EXPR")]
    eval: Option<String>,
    /// Seed for `selftest`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluation step and search budget per statement.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized consistency checks.
    Selftest {
        #[arg(default_value_t = 50)]
        samples: usize,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(Command::Selftest { samples }) = cli.command {
        let r = selftest(cli.seed, samples);
        for l in &r.lines {
            println!("{}", l);
        }
        return code(if r.failures == 0 { 0 } else { 1 });
    }
    let src = match (&cli.batch, &cli.eval) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("fmw: {}: {}", path, e);
                return code(1);
            }
        },
        (None, Some(e)) => Some(e.clone()),
        (None, None) => None,
    };
    if let Some(src) = src {
        let (out, c) = run_batch(&src, cli.json, cli.budget);
        print!("{}", out);
        return code(c);
    }
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut session = Session::new(cli.budget);
    let mut status = 0;
    loop {
        if interactive {
            print!("fmw> ");
            io::stdout().flush().ok();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        for r in run_lines(&mut session, line.trim_end(), cli.json) {
            println!("{}", r.text);
            if status == 0 {
                status = r.exit;
            }
        }
    }
    code(if interactive { 0 } else { status })
}
