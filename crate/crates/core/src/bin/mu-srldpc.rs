use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mu_srldpc::gf::GfField;
use mu_srldpc::nbldpc::{random_code, save_nbal};
use mu_srldpc::sim::{save_csv, SimConfig, Simulation};
use mu_srldpc::{selftest, Error};

#[derive(Parser)]
#[command(version, about = "Multi-user SR-LDPC Monte Carlo simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an Eb/N0 or sum-rate sweep and write a CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// key=value, applied after the config file.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        fixed_dictionary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a PEG outer code with random weights in nbal format.
    MakeCode {
        #[arg(long = "L")]
        len: usize,
        #[arg(long = "M")]
        checks: usize,
        #[arg(long, default_value_t = 2)]
        dv: usize,
        #[arg(long, default_value_t = 256)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in oracle checks.
    Selftest,
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_config() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    }
}

fn simulate(
    config: PathBuf,
    overrides: Vec<String>,
    workers: Option<usize>,
    fixed_dictionary: bool,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let mut cfg = SimConfig::load(&config).map_err(|e| match e {
        Error::Io { .. } => Error::Config(e.to_string()),
        other => other,
    })?;
    for o in &overrides {
        cfg.apply_override(o)?;
    }
    if fixed_dictionary {
        cfg.fixed_dictionary = true;
    }
    if out.is_some() {
        cfg.out = out;
    }
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| Error::Config("no output path (use --out or `out =`)".into()))?;
    let sim = Simulation::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Parameter(e.to_string()))?;
    let record_timing = sim.config().record_timing;
    let rows = pool.install(|| sim.sweep())?;
    save_csv(&rows, &out, record_timing)?;
    for r in &rows {
        println!(
            "Eb/N0 {:>5.2} dB  n={:>5}  R_sum={:.3}  trials={:>6}  BER={:.3e}",
            r.point.ebn0_db,
            r.point.channel_uses,
            r.r_sum(),
            r.metrics.trials,
            r.metrics.ber()
        );
    }
    Ok(())
}

fn make_code(len: usize, checks: usize, dv: usize, q: usize, seed: u64, out: PathBuf) -> Result<(), Error> {
    if !q.is_power_of_two() {
        return Err(Error::Config(format!("q={q} is not a power of two")));
    }
    let field = GfField::with_degree(q.trailing_zeros()).map_err(|e| Error::Config(e.to_string()))?;
    let code = random_code(&field, len, checks, dv, seed).map_err(|e| Error::Config(e.to_string()))?;
    save_nbal(&code, &out)?;
    println!(
        "wrote ({}, {}) code over GF({q}) to {}; girth {}",
        code.len(),
        code.dimension(),
        out.display(),
        code.girth().map_or("inf".to_string(), |g| g.to_string())
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            overrides,
            workers,
            fixed_dictionary,
            out,
        } => simulate(config, overrides, workers, fixed_dictionary, out),
        Command::MakeCode {
            len,
            checks,
            dv,
            q,
            seed,
            out,
        } => make_code(len, checks, dv, q, seed, out),
        Command::Selftest => {
            let results = selftest::run();
            let mut failed = 0;
            for r in &results {
                match &r.outcome {
                    Ok(()) => println!("PASS  {}", r.name),
                    Err(msg) => {
                        failed += 1;
                        println!("FAIL  {}: {msg}", r.name);
                    }
                }
            }
            if failed > 0 {
                return ExitCode::from(2);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => exit_for(&e),
    }
}
