use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sieve_harness::report::read_csv;
use sieve_harness::{run_sieve_grid, run_verify_suite, slope_report, write_records, ExperimentConfig, Format, HarnessError, Mode, Suite};

#[derive(Parser)]
#[command(name = "sieve", version, about = "Large sieve experiments over the Gaussian integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate sieve sums over a (family, Q, N, coefficient) grid.
    Run(RunArgs),
    /// Run a verification suite and print a JSON report.
    Verify {
        suite: Suite,
        #[arg(long)]
        max_norm: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit log-log slopes of the ratio columns of a CSV report.
    Slopes {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "Q", value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    family: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    coeff: Option<Vec<String>>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    format: Option<String>,
    /// Fill the elapsed_ms column.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(self) -> Result<ExperimentConfig, HarnessError> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.q {
            c.q_values = v;
        }
        if let Some(v) = self.n {
            c.n_values = v;
        }
        if let Some(v) = self.family {
            c.families = v;
        }
        if let Some(v) = self.coeff {
            c.coeff_specs = v;
        }
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.mode {
            c.mode = v.parse::<Mode>()?;
        }
        if let Some(v) = self.threads {
            c.threads = v;
        }
        if let Some(v) = self.format {
            c.format = v.parse::<Format>()?;
        }
        if self.out.is_some() {
            c.output_path = self.out;
        }
        c.timings |= self.timings;
        c.validate()?;
        Ok(c)
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Run(args) => {
            let config = args.config()?;
            let records = run_sieve_grid(&config)?;
            for r in &records {
                if let Some(note) = &r.note {
                    eprintln!("{} Q={} N={} {}: {note}", r.family, r.q, r.n, r.coeff);
                }
            }
            let mut out = output(config.output_path.as_ref())?;
            write_records(&records, config.format, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Verify { suite, max_norm, out } => {
            let report = run_verify_suite(suite, max_norm)?;
            let mut w = output(out.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
            w.flush()?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {} {}: expected {}, got {}", c.name, c.instance, c.expected, c.got);
            }
            Ok(report.passed)
        }
        Command::Slopes { input, out } => {
            let rows = read_csv(File::open(&input).map_err(|e| HarnessError::Config(format!("{}: {e}", input.display())))?)?;
            let fits = slope_report(&rows)?;
            let mut w = output(out.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &fits)?;
            writeln!(w)?;
            w.flush()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
