use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vesselopt::commands::{cmd_evaluate, cmd_materials, cmd_netting, cmd_optimize, format_netting, format_summary, load_design};
use vesselopt::config::{OptimizerKind, RunConfig};
use vesselopt::failure::Criterion;
use vesselopt::Result;

/// Design optimization of filament-wound composite pressure vessels.
///
/// Exit status: 0 when the reported design is feasible (or nothing was
/// checked), 2 when it violates the failure constraint, 1 on error.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Run configuration (TOML); the reference setup when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    criterion: Option<Criterion>,
    #[arg(long, global = true, value_enum)]
    optimizer: Option<OptimizerKind>,
    /// Composite card; for `netting`, restricts the table to this card.
    #[arg(long, global = true)]
    material: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fiber-only cylinder thickness per material.
    Netting,
    /// Analyze one design and export per-station results.
    Evaluate {
        /// Design vector (TOML with r0_up, r0_d, th).
        #[arg(long)]
        design: PathBuf,
    },
    /// Run the configured optimizer and write all run artifacts.
    Optimize,
    /// Print the material table with property provenance.
    MaterialsList,
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(c) = cli.criterion {
        cfg.criterion = c;
    }
    if let Some(o) = cli.optimizer {
        cfg.optimizer = o;
    }
    if let Some(m) = &cli.material {
        cfg.material = m.clone();
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    let db = cfg.material_db()?;
    match cli.command {
        Command::Netting => {
            if let Some(m) = &cli.material {
                cfg.netting_materials = vec![m.clone()];
            }
            print!("{}", format_netting(&cmd_netting(&cfg, &db)?));
            Ok(true)
        }
        Command::MaterialsList => {
            print!("{}", cmd_materials(&db));
            Ok(true)
        }
        Command::Evaluate { design } => {
            let d = load_design(&design)?;
            let rec = cmd_evaluate(&cfg, &db, &d, &cfg.output_dir)?;
            println!(
                "mass {:.4} kg  Th_c {:.4} mm  U {:.5e} mJ  U_peak {:.5e}  FI {:.4} ({}) at station {} ply {}  feasible {}",
                rec.mass,
                rec.th_c,
                rec.energy,
                rec.energy_peak,
                rec.fi,
                cfg.criterion,
                rec.worst_station,
                rec.worst_ply,
                rec.feasible
            );
            println!("written to {}", cfg.output_dir.display());
            Ok(rec.feasible)
        }
        Command::Optimize => {
            let outcome = cmd_optimize(&cfg, &db, Some(&cfg.output_dir))?;
            print!("{}", format_summary(&outcome.summary));
            println!("written to {}", cfg.output_dir.display());
            Ok(outcome.summary.best.feasible)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
