use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use nanoent::figures;
use nanoent::{CouplingReport, DeviceParams, ScenarioConfig};

#[derive(Parser)]
#[command(name = "nanoent", version, about = "Cantilever-atom-cantilever dynamics and entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one JSON scenario config.
    Simulate {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Regenerate a preset figure's data (fig2 .. fig8).
    Figure {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Coupling constant and dipole ratio from device parameters (JSON).
    Coupling {
        device: Option<PathBuf>,
        /// Use the built-in reference device instead of a file.
        #[arg(long, conflicts_with = "device")]
        reference: bool,
    },
    /// Run every config matching a glob, each into its own subdirectory.
    Sweep {
        pattern: String,
        #[arg(long, default_value = "sweep_out")]
        out: PathBuf,
    },
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ScenarioConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn simulate(path: &Path, out: &Path) -> Result<()> {
    let config = load_config(path)?;
    let output = nanoent::run(&config).with_context(|| format!("running {}", path.display()))?;
    write_files(out, &output.files)?;
    for (name, _) in &output.files {
        println!("{}", out.join(name).display());
    }
    Ok(())
}

fn sweep(pattern: &str, out: &Path) -> Result<()> {
    let mut paths = glob::glob(pattern)
        .with_context(|| format!("bad glob `{pattern}`"))?
        .collect::<std::result::Result<Vec<_>, _>>()?;
    paths.sort();
    if paths.is_empty() {
        bail!("no configs match `{pattern}`");
    }
    let results: Vec<(PathBuf, Result<()>)> = paths
        .par_iter()
        .map(|p| {
            let stem = p.file_stem().map_or_else(|| "config".into(), |s| s.to_string_lossy().into_owned());
            (p.clone(), simulate(p, &out.join(stem)))
        })
        .collect();
    let mut failed = 0;
    for (p, r) in &results {
        if let Err(e) = r {
            failed += 1;
            eprintln!("{}: {e:#}", p.display());
        }
    }
    if failed > 0 {
        bail!("{failed} of {} configs failed", results.len());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out } => simulate(&config, &out),
        Command::Figure { name, out } => {
            let files = figures::render(&name)?;
            write_files(&out, &files)?;
            for (n, _) in &files {
                println!("{}", out.join(n).display());
            }
            Ok(())
        }
        Command::Coupling { device, reference } => {
            let dev = match (device, reference) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<DeviceParams>(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                (None, true) => DeviceParams::reference_setup(),
                (None, false) => bail!("pass a device JSON file or --reference"),
            };
            print!("{}", CouplingReport::compute(&dev)?.to_table());
            Ok(())
        }
        Command::Sweep { pattern, out } => sweep(&pattern, &out),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
