use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use redistwalk::{ChainSpec, Site};
use serde::Deserialize;

/// Flags shared by every subcommand. Each one overrides the same key in `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags given on the command line win
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Chain spec: {"N": .., "nu0": [[site, mass], ..], "nuN": [[site, mass], ..]}
    #[arg(long, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Last time step to compute or simulate
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Monte Carlo trials
    #[arg(long)]
    pub trials: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for Monte Carlo batches
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Start pair and fit window, used by `tv` and `couple`.
#[derive(Debug, Clone, Default, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub x: Option<Site>,
    #[arg(long)]
    pub y: Option<Site>,
    /// Rate-fit window as `FIRST,LAST`
    #[arg(long, value_name = "FIRST,LAST", value_parser = parse_window)]
    pub window: Option<(usize, usize)>,
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected FIRST,LAST")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if b <= a {
        return Err(format!("empty window {a},{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    spec: Option<PathBuf>,
    seed: Option<u64>,
    horizon: Option<u64>,
    trials: Option<u64>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    x: Option<Site>,
    y: Option<Site>,
    window: Option<(usize, usize)>,
}

/// Settings after merging the config file with command-line flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: Option<PathBuf>,
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub x: Option<Site>,
    pub y: Option<Site>,
    pub window: Option<(usize, usize)>,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs, pair: &PairArgs) -> Result<Self> {
        let file = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let mut file: ConfigFile =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                // Paths inside a config file are relative to the file.
                let base = path.parent().unwrap_or(Path::new(""));
                file.spec = file.spec.map(|p| base.join(p));
                file.out = file.out.map(|p| base.join(p));
                file
            }
            None => ConfigFile::default(),
        };
        let config = RunConfig {
            spec: common.spec.clone().or(file.spec),
            seed: common.seed.or(file.seed),
            horizon: common.horizon.or(file.horizon),
            trials: common.trials.or(file.trials),
            out: common.out.clone().or(file.out),
            threads: common.threads.or(file.threads),
            x: pair.x.or(file.x),
            y: pair.y.or(file.y),
            window: pair.window.or(file.window),
        };
        if config.threads == Some(0) {
            bail!("threads must be at least 1");
        }
        Ok(config)
    }

    pub fn load_spec(&self) -> Result<ChainSpec> {
        let Some(path) = &self.spec else { bail!("no spec given (use --spec or a config file)") };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        ChainSpec::from_json(&text).with_context(|| format!("invalid spec {}", path.display()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.context("this command is stochastic: --seed is required")
    }

    /// The output directory, created if missing. Defaults to `redistwalk-out`.
    pub fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("redistwalk-out"));
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }
}
