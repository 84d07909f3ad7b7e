//! Command-line harness: run benchmark scenarios, grid-convergence and
//! penalty-sensitivity studies, and the stability bisection.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ile2d::scenarios::{
    self, bisect_kappa, convergence_study, kappa_sensitivity, load_config, preset, Profile,
    ScenarioConfig, PRESET_NAMES,
};

#[derive(Parser)]
#[command(name = "ile2d", about = "Sharp-interface fluid-structure interaction in 2D", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (a preset name or a configuration file path).
    Run {
        config: String,
        /// Preset profile: desk or paper.
        #[arg(long, default_value = "desk")]
        profile: String,
        /// Output directory (default: ILE2D_OUTPUT_DIR or ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the final time.
        #[arg(long)]
        t_final: Option<f64>,
        /// Override the spring penalty stiffness.
        #[arg(long)]
        kappa: Option<f64>,
        /// Override the time step.
        #[arg(long)]
        dt: Option<f64>,
        /// Write field snapshots every N steps.
        #[arg(long)]
        snapshot_every: Option<usize>,
    },
    /// Grid-refinement study of the tether discrepancy (kappa scaled as 1/h^2).
    Converge {
        config: String,
        #[arg(long, default_value = "desk")]
        profile: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// Penalty-stiffness sensitivity across a list of values.
    Kappa {
        config: String,
        #[arg(long, default_value = "desk")]
        profile: String,
        /// Comma-separated stiffness values.
        #[arg(long, value_delimiter = ',')]
        list: Vec<f64>,
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// Bisect the largest stable penalty stiffness at the configured time step.
    BisectKappa {
        config: String,
        #[arg(long, default_value = "desk")]
        profile: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 8)]
        iterations: usize,
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// List the built-in scenario presets.
    ListPresets,
    /// Print a preset as a configuration file.
    DumpConfig {
        preset: String,
        #[arg(long, default_value = "desk")]
        profile: String,
    },
}

fn resolve(config: &str, profile: &str) -> Result<ScenarioConfig> {
    let profile = Profile::parse(profile).with_context(|| format!("unknown profile {profile}"))?;
    if let Some(cfg) = preset(config, profile) {
        return Ok(cfg);
    }
    let path = Path::new(config);
    if path.exists() {
        return Ok(load_config(path)?);
    }
    bail!("{config} is neither a preset ({:?}) nor a file", PRESET_NAMES)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            profile,
            out,
            t_final,
            kappa,
            dt,
            snapshot_every,
        } => {
            let mut cfg = resolve(&config, &profile)?;
            if let Some(t) = t_final {
                cfg.t_final = t;
            }
            if let Some(k) = kappa {
                cfg.kappa = k;
            }
            if let Some(d) = dt {
                cfg.dt = d;
            }
            if let Some(s) = snapshot_every {
                cfg.snapshot_every = s;
            }
            let out_dir = scenarios::resolve_out_dir(out.as_deref()).unwrap_or_else(|| PathBuf::from("out"));
            eprintln!(
                "running {} on {}x{} (h = {:.5}), dt = {}, kappa = {}, to t = {}",
                cfg.name,
                cfg.nx,
                cfg.ny,
                cfg.h(),
                cfg.dt,
                cfg.kappa,
                cfg.t_final
            );
            let result = scenarios::run(&cfg, Some(&out_dir))?;
            println!(
                "{}: {} steps, max tether {:.3e}, max divergence {:.3e}, warnings {}",
                cfg.name,
                result.steps_completed,
                result.max_tether,
                result.max_divergence,
                result.resolution_warnings
            );
            if let Some(reason) = result.aborted {
                bail!("run aborted: {reason}");
            }
            println!("series written to {}", out_dir.join(format!("{}.csv", cfg.name)).display());
        }
        Command::Converge {
            config,
            profile,
            levels,
            t_final,
        } => {
            let mut cfg = resolve(&config, &profile)?;
            if let Some(t) = t_final {
                cfg.t_final = t;
            }
            let report = convergence_study(&cfg, levels)?;
            println!("level  grid            h            kappa        max tether");
            for (k, lvl) in report.levels.iter().enumerate() {
                println!(
                    "{k:5}  {:5}x{:<5}    {:.5e}  {:.5e}  {:.5e}{}",
                    lvl.nx,
                    lvl.ny,
                    lvl.h,
                    lvl.kappa,
                    lvl.max_tether,
                    lvl.aborted.as_deref().map(|a| format!("  ABORTED: {a}")).unwrap_or_default()
                );
            }
            println!("orders: {:?}", report.orders);
            if !report.monotone {
                println!("warning: tether errors are not monotone under refinement");
            }
        }
        Command::Kappa {
            config,
            profile,
            list,
            t_final,
        } => {
            let mut cfg = resolve(&config, &profile)?;
            if let Some(t) = t_final {
                cfg.t_final = t;
            }
            let rows = kappa_sensitivity(&cfg, &list)?;
            println!("kappa        stable  max tether   trajectory deviation");
            for row in rows {
                println!(
                    "{:<12.5e} {:6} {:.5e}  {}",
                    row.kappa,
                    row.stable,
                    row.max_tether,
                    if row.trajectory_deviation.is_nan() {
                        "-".to_string()
                    } else {
                        format!("{:.5e}", row.trajectory_deviation)
                    }
                );
            }
        }
        Command::BisectKappa {
            config,
            profile,
            lo,
            hi,
            iterations,
            t_final,
        } => {
            let mut cfg = resolve(&config, &profile)?;
            if let Some(t) = t_final {
                cfg.t_final = t;
            }
            let (stable, unstable) = bisect_kappa(&cfg, lo, hi, iterations)?;
            println!("largest stable kappa:   {stable:.6e}");
            println!("smallest unstable kappa: {unstable:.6e}");
        }
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
        }
        Command::DumpConfig { preset: name, profile } => {
            let cfg = resolve(&name, &profile)?;
            print!("{}", cfg.to_text());
        }
    }
    Ok(())
}
