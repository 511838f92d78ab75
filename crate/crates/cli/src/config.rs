use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use lit_core::pipeline::{default_specs, PairSpec};
use lit_core::realization::{AdapterEndpoint, Transport, DEFAULT_TIMEOUT_MS};
use serde::Deserialize;

pub const BUILTIN_SCORER: &str = "builtin-unigram";

/// Options shared by every command. Each one can also come from the JSON
/// file given with `--config`; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON config file with the same keys as the flags below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Input dataset, one SNLI/MNLI-style JSON object per line
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pair spec such as `f;p +pa`; repeat for several (default: the ten standard specs)
    #[arg(long = "spec", global = true)]
    pub specs: Vec<String>,
    /// Shell command of a backend speaking the line protocol on stdin/stdout
    #[arg(long, global = true)]
    pub adapter_cmd: Option<String>,
    /// Recorded transcript to replay instead of a live backend
    #[arg(long, global = true)]
    pub adapter_fixtures: Option<PathBuf>,
    /// `builtin-unigram` or the shell command of a SCORE backend
    #[arg(long, global = true)]
    pub scorer: Option<String>,
    /// Number of backend connections working in parallel
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Per-request backend timeout in milliseconds
    #[arg(long, global = true)]
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    dataset: Option<PathBuf>,
    out: Option<PathBuf>,
    #[serde(alias = "specs")]
    spec: Option<Vec<String>>,
    adapter_cmd: Option<String>,
    adapter_fixtures: Option<PathBuf>,
    scorer: Option<String>,
    workers: Option<usize>,
    timeout_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScorerChoice {
    Builtin,
    External(String),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub specs: Vec<PairSpec>,
    pub adapter: Option<AdapterEndpoint>,
    pub scorer: ScorerChoice,
    pub workers: usize,
    pub timeout_ms: u64,
}

/// Paths in a config file are taken relative to the file.
fn relative_to(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let mut cfg: FileConfig =
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    cfg.dataset = cfg.dataset.map(|p| relative_to(base, p));
    cfg.out = cfg.out.map(|p| relative_to(base, p));
    cfg.adapter_fixtures = cfg.adapter_fixtures.map(|p| relative_to(base, p));
    Ok(cfg)
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let spec_strings = if self.specs.is_empty() {
            file.spec.unwrap_or_default()
        } else {
            self.specs.clone()
        };
        let specs = if spec_strings.is_empty() {
            default_specs()
        } else {
            spec_strings
                .iter()
                .map(|s| s.parse::<PairSpec>().with_context(|| format!("invalid --spec `{s}`")))
                .collect::<Result<Vec<_>>>()?
        };
        let workers = self.workers.or(file.workers).unwrap_or(1);
        if workers == 0 {
            bail!("--workers must be at least 1");
        }
        let timeout_ms = self.timeout_ms.or(file.timeout_ms).unwrap_or(DEFAULT_TIMEOUT_MS);
        if timeout_ms == 0 {
            bail!("--timeout-ms must be positive");
        }
        let adapter_cmd = self.adapter_cmd.clone().or(file.adapter_cmd);
        let adapter_fixtures = self.adapter_fixtures.clone().or(file.adapter_fixtures);
        let transport = match (adapter_cmd, adapter_fixtures) {
            (Some(_), Some(_)) => bail!("give either --adapter-cmd or --adapter-fixtures, not both"),
            (Some(cmd), None) => Some(Transport::Subprocess(cmd)),
            (None, Some(path)) => Some(Transport::Fixture(path)),
            (None, None) => None,
        };
        let adapter = transport.map(|t| AdapterEndpoint::new(t, timeout_ms)).transpose()?;
        let scorer = match self.scorer.clone().or(file.scorer) {
            None => ScorerChoice::Builtin,
            Some(s) if s == BUILTIN_SCORER => ScorerChoice::Builtin,
            Some(s) if s.trim().is_empty() => bail!("--scorer must not be empty"),
            Some(cmd) => ScorerChoice::External(cmd),
        };
        Ok(RunConfig {
            dataset: self.dataset.clone().or(file.dataset),
            out: self.out.clone().or(file.out),
            specs,
            adapter,
            scorer,
            workers,
            timeout_ms,
        })
    }
}

impl RunConfig {
    pub fn dataset(&self) -> Result<&Path> {
        self.dataset.as_deref().context("no dataset given (use --dataset)")
    }

    pub fn out(&self) -> Result<&Path> {
        self.out.as_deref().context("no output directory given (use --out)")
    }

    pub fn adapter(&self) -> Result<&AdapterEndpoint> {
        self.adapter
            .as_ref()
            .context("no backend given (use --adapter-cmd or --adapter-fixtures)")
    }
}
