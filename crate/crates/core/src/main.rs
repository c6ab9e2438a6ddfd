use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mhd_core::bench::{self, BrioWuReference, RunConfig};
use mhd_core::{Error, Result};

#[derive(Parser)]
#[command(name = "mhd-bench", version, about = "Benchmark driver for the MHD solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem on one mesh level.
    Run(RunArgs),
    /// Convergence study over a range of levels (vortex or briowu).
    Sweep {
        #[command(flatten)]
        common: RunArgs,
        /// Inclusive level range such as `0..2`.
        #[arg(long, default_value = "0..2")]
        levels: String,
        /// Brio-Wu reference profile.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Generate the low-order Brio-Wu reference profile.
    Reference {
        #[arg(long, default_value_t = 16000)]
        nodes: usize,
        #[arg(long, default_value_t = 0.1)]
        cfl: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key = value file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    cfl: Option<f64>,
    /// low or high
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    ba: Option<f64>,
    #[arg(long = "mu-strength")]
    mu_strength: Option<f64>,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    #[arg(long = "snapshot-every")]
    snapshot_every: Option<usize>,
    #[arg(long)]
    reproducible: bool,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.problem {
            cfg.problem = p.clone();
        }
        if let Some(l) = self.level {
            cfg.level = l;
        }
        if let Some(m) = &self.mode {
            cfg.mode = m.parse()?;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        if let Some(n) = self.snapshot_every {
            cfg.snapshot_every = n;
        }
        cfg.cfl = self.cfl.or(cfg.cfl);
        cfg.b_a = self.ba.or(cfg.b_a);
        cfg.mu_strength = self.mu_strength.or(cfg.mu_strength);
        cfg.t_final = self.t_final.or(cfg.t_final);
        cfg.reproducible |= self.reproducible;
        cfg.problem_spec()?;
        Ok(cfg)
    }
}

fn parse_levels(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Config(format!("invalid level range '{s}' (expected k1..k2)"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.to_config()?;
            let out = bench::run(&cfg)?;
            let last = out.records.last().expect("at least the initial record");
            println!(
                "{}: {} steps to t = {:.6e}, min pressure {:.3e}, energy drift {:.3e}",
                cfg.problem,
                out.steps,
                out.state.time,
                last.min_pressure,
                (last.total_energy - out.records[0].total_energy).abs() / out.records[0].total_energy.abs()
            );
        }
        Command::Sweep { common, levels, reference } => {
            let cfg = common.to_config()?;
            let levels = parse_levels(&levels)?;
            let reference = match cfg.problem.as_str() {
                "briowu" => Some(BrioWuReference::load(&reference.unwrap_or_else(BrioWuReference::default_path))?),
                _ => None,
            };
            let out = bench::sweep(&cfg, &levels, reference.as_ref())?;
            print!("{}", out.primary.to_csv());
            if let Some(m) = out.magnetic {
                print!("{}", m.to_csv());
            }
        }
        Command::Reference { nodes, cfl, out } => {
            let spec = bench::problem_by_name("briowu")?;
            let reference = bench::generate_briowu_reference(&spec, nodes, cfl)?;
            let path = out.unwrap_or_else(BrioWuReference::default_path);
            std::fs::write(&path, reference.to_csv())?;
            println!("wrote {} samples to {}", reference.x.len(), path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
