//! Command line driver for the experiment suite.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use siegelpw::experiments::{self, Config};

#[derive(Parser)]
#[command(name = "siegelpw", about = "Sampling and interpolation experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV output.
    Run {
        /// Experiment name; see `list`.
        experiment: String,
        /// Flat key=value config file, one entry per line, `#` comments.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for the CSV (default: current directory).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// RNG seed; overrides any `seed` entry in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the CSV column schema and exit without running.
        #[arg(long)]
        schema: bool,
        /// Extra parameter as key=value; repeatable, wins over the config file.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Shorthand for --param a=...
        #[arg(long)]
        a: Option<f64>,
        /// Shorthand for --param b=...
        #[arg(long)]
        b: Option<f64>,
        /// Shorthand for --param n=...
        #[arg(long)]
        n: Option<usize>,
        /// Shorthand for --param s=...
        #[arg(long)]
        s: Option<f64>,
        /// Shorthand for --param q=...
        #[arg(long)]
        q: Option<usize>,
        /// Shorthand for --param maxdeg=...
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// List the available experiments.
    List,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), ln + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Write via a temp file in the same directory so readers never see a
/// partially written CSV.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("csv.tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn run_command(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::List => {
            for name in experiments::EXPERIMENTS {
                println!("{name}");
            }
            Ok(true)
        }
        Command::Run {
            experiment,
            config,
            out,
            seed,
            schema,
            params,
            a,
            b,
            n,
            s,
            q,
            maxdeg,
        } => {
            if schema {
                let cols = experiments::schema(&experiment)
                    .ok_or_else(|| format!("unknown experiment `{experiment}`"))?;
                println!("{cols}");
                return Ok(true);
            }
            let mut map = match &config {
                Some(path) => parse_config_file(path)?,
                None => BTreeMap::new(),
            };
            for p in &params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| format!("--param `{p}`: expected key=value"))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            if let Some(v) = a {
                map.insert("a".into(), v.to_string());
            }
            if let Some(v) = b {
                map.insert("b".into(), v.to_string());
            }
            if let Some(v) = n {
                map.insert("n".into(), v.to_string());
            }
            if let Some(v) = s {
                map.insert("s".into(), v.to_string());
            }
            if let Some(v) = q {
                map.insert("q".into(), v.to_string());
            }
            if let Some(v) = maxdeg {
                map.insert("maxdeg".into(), v.to_string());
            }
            let seed = match seed {
                Some(v) => v,
                None => match map.remove("seed") {
                    Some(v) => v
                        .parse()
                        .map_err(|_| format!("seed `{v}` is not an integer"))?,
                    None => 0,
                },
            };
            let cfg = Config { seed, params: map };
            let result = experiments::run(&experiment, &cfg).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;
            let path = out.join(format!("{experiment}.csv"));
            write_atomic(&path, &result.csv)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("{} -> {}", result.summary, path.display());
            Ok(result.pass)
        }
    }
}

fn main() -> ExitCode {
    match run_command(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
