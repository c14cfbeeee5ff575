use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dixon_core::harness::{
    errata_table, render_report, render_suite, run_errata, run_identity, run_suite, OutputFormat, RunConfig,
};
use dixon_core::Execution;

#[derive(Parser)]
#[command(name = "dixon-verify", version, about = "Evaluate both sides of Dixon-type identities and compare them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one identity at one parameter point.
    Verify {
        identity: String,
        #[command(flatten)]
        params: IdentityArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the full verification grid.
    Suite {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the identities whose printed forms disagree with the numbers.
    Errata {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated numerator parameters, e.g. `6,6,2,2`.
    #[arg(long, allow_hyphen_values = true)]
    num: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    den: Option<String>,
    #[arg(long)]
    depth: Option<String>,
}

impl IdentityArgs {
    fn map(&self) -> BTreeMap<String, String> {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("gamma", &self.gamma),
            ("q", &self.q),
            ("m", &self.m),
            ("n", &self.n),
            ("num", &self.num),
            ("den", &self.den),
            ("depth", &self.depth),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
    }
}

#[derive(Args)]
struct RunArgs {
    /// File of `key = value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    digits: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    kbound: Option<String>,
    #[arg(long)]
    prime_bound: Option<String>,
    #[arg(long)]
    term_budget: Option<String>,
    #[arg(long)]
    format: Option<String>,
    /// Record wall time in each report.
    #[arg(long)]
    timings: bool,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, String> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            c.apply_file_text(&text).map_err(|e| e.to_string())?;
        }
        let flags = [
            ("digits", &self.digits),
            ("tolerance", &self.tolerance),
            ("kBound", &self.kbound),
            ("primeBound", &self.prime_bound),
            ("termBudget", &self.term_budget),
            ("format", &self.format),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                c.set(k, v).map_err(|e| e.to_string())?;
            }
        }
        if self.timings {
            c.timings = true;
        }
        if self.sequential {
            c.execution = Execution::Sequential;
        }
        c.validate().map_err(|e| e.to_string())?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Verify { identity, params, run } => {
            let config = run.config()?;
            let report = run_identity(&identity, &params.map(), &config).map_err(|e| e.to_string())?;
            print!("{}", render_report(&report, config.format));
            Ok(if report.is_verified() { 0 } else { 1 })
        }
        Command::Suite { run } => {
            let config = run.config()?;
            let suite = run_suite(&config).map_err(|e| e.to_string())?;
            print!("{}", render_suite(&suite.reports, &suite.summary, config.format));
            for (id, e) in &suite.errors {
                eprintln!("{id}: {e}");
            }
            Ok(suite.exit_code())
        }
        Command::Errata { run } => {
            let config = run.config()?;
            let suite = run_errata(&config).map_err(|e| e.to_string())?;
            match config.format {
                OutputFormat::Text => print!("{}", errata_table(&suite.reports)),
                OutputFormat::Json => print!("{}", render_suite(&suite.reports, &suite.summary, config.format)),
            }
            Ok(suite.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
