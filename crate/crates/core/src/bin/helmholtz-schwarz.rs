use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use helmholtz_schwarz::harness::{self, tables, ExperimentConfig};
use helmholtz_schwarz::krylov::PreconditionSide;

#[derive(Parser)]
#[command(version, about = "Two-level Schwarz preconditioned GMRES experiments for 2D Helmholtz problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// CSV output path (defaults to stdout, or the config's `output`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// GMRES iteration cap per cell
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Relative residual tolerance
    #[arg(long, global = true)]
    rtol: Option<f64>,
    /// Worker threads for the local solves
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Side on which the preconditioner is applied
    #[arg(long, global = true, value_enum)]
    precond_side: Option<Side>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config
    Run { config: PathBuf },
    /// Check a config and print the resolution regime of every cell
    Validate { config: PathBuf },
    /// Run a built-in table configuration
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

impl Cli {
    fn apply_overrides(&self, cfg: &mut ExperimentConfig) {
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        if let Some(r) = self.rtol {
            cfg.rtol = r;
        }
        if let Some(s) = self.precond_side {
            cfg.side = match s {
                Side::Left => PreconditionSide::Left,
                Side::Right => PreconditionSide::Right,
            };
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
    }
}

fn run(cli: &Cli) -> helmholtz_schwarz::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| helmholtz_schwarz::Error::Config(e.to_string()))?;
    }
    let mut cfg = match &cli.command {
        Command::Run { config } | Command::Validate { config } => ExperimentConfig::load(config)?,
        Command::Tables { table } => tables::builtin(*table)?,
    };
    cli.apply_overrides(&mut cfg);

    if let Command::Validate { .. } = cli.command {
        let v = harness::validate_config(&cfg)?;
        for w in &v.warnings {
            eprintln!("warning: {w}");
        }
        println!("k,n,subdomains,kappa_h,kappa_H,pollution,ok");
        for c in &v.cells {
            println!(
                "{},{},{},{},{},{},{}",
                harness::format_float(c.k),
                c.n,
                c.boxes_per_dim * c.boxes_per_dim,
                harness::format_float(c.regime.kappa_h),
                harness::format_float(c.regime.kappa_coarse),
                harness::format_float(c.regime.pollution_metric),
                c.regime.all_pass()
            );
        }
        return Ok(());
    }

    let rows = harness::run_experiment(&cfg)?;
    match cfg.output.as_deref() {
        Some(path) if path != Path::new("-") => harness::write_csv(&rows, path),
        _ => harness::emit_csv(&rows, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
