//! `ness` command-line interface.
//!
//! Exit codes: 0 success, 1 invalid input (configuration, parameters, I/O),
//! 2 solver failure in `point` mode, 3 a `verify` check failed.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ness_core::flags;
use ness_core::sweep::{emit, evaluate_point, run_sweep, Format, RunOptions, SweepSpec};
use ness_core::verify::run_checks;
use ness_core::Error;

#[derive(Parser)]
#[command(name = "ness", version, about = "Steady states, QFI and correlations of a two-site fermionic junction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(clap::Args)]
struct Common {
    /// Seed for the discord optimizer's grid jitter (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write one row per grid point.
    Sweep {
        config: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Worker threads (1 = serial).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a single parameter point and print a readable report.
    Point {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the analytic-limit verification suite.
    Verify,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn load(config: &PathBuf, seed: Option<u64>) -> Result<SweepSpec, Error> {
    let mut spec = SweepSpec::load(config)?;
    if seed.is_some() {
        spec.seed = seed;
    }
    Ok(spec)
}

fn sweep(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    threads: Option<usize>,
    seed: Option<u64>,
) -> ExitCode {
    let spec = match load(&config, seed) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if threads == Some(0) {
        return fail(&Error::Config("--threads must be at least 1".into()));
    }
    let format = match format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Jsonl) => Format::Jsonl,
        None => spec.format.unwrap_or_default(),
    };
    let table = match run_sweep(&spec, &RunOptions { threads }) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let bytes = emit(&table, format);
    let written = match &out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => std::io::stdout().write_all(&bytes).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        }),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    let failed = table.rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        eprintln!("{failed} of {} points failed; see the `error` column", table.rows.len());
    }
    ExitCode::SUCCESS
}

fn point(config: PathBuf, seed: Option<u64>) -> ExitCode {
    let spec = match load(&config, seed) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if !spec.axes.is_empty() {
        return fail(&Error::Config("`point` expects a configuration without axes".into()));
    }
    let grid = match spec.grid() {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let p = &grid[0];
    let d = match evaluate_point(&spec, p) {
        Ok(d) => d,
        Err(e) if e.is_validation() => return fail(&e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let s = &p.params;
    let b = &p.baths;
    println!("system   omega1={} omega2={} delta={} gamma1={} gamma2={}", s.omega1, s.omega2, s.delta, s.gamma1, s.gamma2);
    println!("baths    T1={} T2={} mu1={} mu2={}", b.t1, b.t2, b.mu1, b.mu2);
    println!("residual {:.3e}", d.residual);
    println!();
    println!("steady state (energy basis |00>, |10>, |01>, |11>):");
    print!("{}", d.rho);
    if let Some(q) = &d.qfi {
        println!();
        println!("QFI      F = {:.10e}  (F^E = {:.10e}, F^N = {:.10e}, step {:.1e})", q.f_total, q.f_e, q.f_n, q.step);
    }
    if let Some(f) = d.f_oracle {
        println!("         fidelity route {f:.10e}");
    }
    if let Some(c) = &d.correlations {
        println!();
        println!("coherence       {:.10e}", c.coherence);
        println!("linear entropy  {:.10e}", c.linear_entropy);
        println!("concurrence     {:.10e}", c.concurrence);
        println!("mutual info     {:.10e} bits", c.qmi);
        println!("classical corr  {:.10e} bits", c.classical_corr);
        println!("discord         {:.10e} bits", c.discord);
    }
    if let Some(t) = &d.thermo {
        println!();
        println!("I1 = {:+.10e}  I2 = {:+.10e}", t.i1, t.i2);
        println!("J1 = {:+.10e}  J2 = {:+.10e}", t.j1, t.j2);
        println!("EPR = {:.10e}", t.epr);
    }
    let f = d.flags();
    if !f.is_empty() {
        println!();
        println!("flags: {}", flags::join(&f));
    }
    ExitCode::SUCCESS
}

fn verify() -> ExitCode {
    let checks = run_checks();
    let mut ok = true;
    for c in &checks {
        println!("{c}");
        ok &= c.passed;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed", checks.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    // usage errors are input errors (1); clap would use 2
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Sweep {
            config,
            out,
            format,
            threads,
            common,
        } => sweep(config, out, format, threads, common.seed),
        Command::Point { config, common } => point(config, common.seed),
        Command::Verify => verify(),
    }
}
