use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dlcalc::commands::{Command, Options, Query, Session};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Normalize,
    Act,
    FreeBasis,
    Poincare,
    Closure,
    Suspend,
    PowTable,
    Obstruction,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Normalize => Command::Normalize,
            Cmd::Act => Command::Act,
            Cmd::FreeBasis => Command::FreeBasis,
            Cmd::Poincare => Command::Poincare,
            Cmd::Closure => Command::Closure,
            Cmd::Suspend => Command::Suspend,
            Cmd::PowTable => Command::PowTable,
            Cmd::Obstruction => Command::Obstruction,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Exact mod-2 calculator for Dyer-Lashof and Steenrod operations.
#[derive(Debug, Parser)]
#[command(name = "dlcalc", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Expression, operation word, degree, or suite name.
    input: Option<String>,
    /// Model algebra: A, MO or MU.
    #[arg(long)]
    model: Option<String>,
    /// Subalgebra of A: k(n), kZ(n), BP, X2image.
    #[arg(long)]
    sub: Option<String>,
    /// Comma-separated operations, or `all`.
    #[arg(long)]
    ops: Option<String>,
    /// Generator declarations `name:degree[:weight]`, comma-separated.
    #[arg(long)]
    gens: Option<String>,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    maxdeg: Option<u32>,
    /// En or Einf.
    #[arg(long)]
    flavor: Option<String>,
    /// Operadic level, an integer or `inf`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    times: Option<u32>,
    #[arg(long)]
    maxidx: Option<i64>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    let query = Query {
        command: cli.command.into(),
        input: cli.input,
        options: Options {
            model: cli.model,
            sub: cli.sub,
            ops: cli.ops,
            gens: cli.gens,
            cap: cli.cap,
            maxdeg: cli.maxdeg,
            flavor: cli.flavor,
            n: cli.n,
            times: cli.times,
            maxidx: cli.maxidx,
        },
    };
    let report = Session::new().run_report(&query);
    if cli.json {
        println!("{}", report.to_json());
    } else if report.exit_code() == 2 {
        eprintln!("{}", report.result_text);
    } else {
        println!("{}", report.text());
    }
    ExitCode::from(report.exit_code() as u8)
}
