use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use lit_core::eval::{analyze_corpus, evaluate, pair_type_scan, read_predictions};
use lit_core::mrs::parse_simple_mrs;
use lit_core::pipeline::{
    build_augmented_set, build_contrast_set, load_dataset, read_records, write_dataset, write_records, ContrastRecord,
    ContrastSet, Dataset, PairSpec, PipelineError, Realizer, SpecStream,
};
use lit_core::realization::protocol::END;
use lit_core::realization::{
    Adapter, AdapterEndpoint, AdapterScorer, Connector, FixtureStore, Request, Scorer, UnigramScorer,
};
use serde::Serialize;

use crate::config::{RunConfig, ScorerChoice};

/// Error carrying the process exit code: 1 for configuration and usage
/// problems, 2 for backend and runtime failures.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub type Outcome = std::result::Result<(), Failure>;

pub fn usage(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

pub fn runtime(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

trait Code<T> {
    fn usage(self) -> std::result::Result<T, Failure>;
    fn runtime(self) -> std::result::Result<T, Failure>;
}

impl<T> Code<T> for Result<T> {
    fn usage(self) -> std::result::Result<T, Failure> {
        self.map_err(usage)
    }

    fn runtime(self) -> std::result::Result<T, Failure> {
        self.map_err(runtime)
    }
}

/// File name for a spec's records: `f;p +pa` becomes `f_p+pa`.
pub fn spec_slug(spec: &str) -> String {
    spec.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == ';' { '_' } else { c })
        .collect()
}

fn contrast_path(out: &Path, spec: &PairSpec) -> PathBuf {
    out.join("contrast")
        .join(format!("{}.jsonl", spec_slug(&spec.canonical_name)))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn read_dataset(cfg: &RunConfig) -> std::result::Result<Dataset, Failure> {
    let path = cfg.dataset().usage()?;
    load_dataset(path).map_err(|e| usage(anyhow!(e)))
}

fn connector(endpoint: &AdapterEndpoint) -> std::result::Result<Connector, Failure> {
    Connector::new(endpoint.clone()).map_err(|e| runtime(anyhow!(e)))
}

fn scorer(cfg: &RunConfig) -> std::result::Result<Box<dyn Scorer + Send>, PipelineError> {
    Ok(match &cfg.scorer {
        ScorerChoice::Builtin => Box::new(UnigramScorer::bundled()),
        ScorerChoice::External(cmd) => {
            let endpoint = AdapterEndpoint::new(
                lit_core::realization::Transport::Subprocess(cmd.clone()),
                cfg.timeout_ms,
            )?;
            Box::new(AdapterScorer::new(Adapter::connect(&endpoint)?))
        }
    })
}

fn run_transform(cfg: &RunConfig, dataset: &Dataset) -> std::result::Result<ContrastSet, Failure> {
    let out = cfg.out().usage()?;
    let connector = connector(cfg.adapter().usage()?)?;
    let connect =
        || -> std::result::Result<Realizer, PipelineError> { Ok(Realizer::new(connector.connect()?, scorer(cfg)?)) };
    let progress = |n: usize| {
        if n.is_multiple_of(1000) {
            eprintln!("{n} pairs");
        }
    };
    let set = build_contrast_set(dataset, &cfg.specs, cfg.workers, connect, Some(&progress))
        .map_err(|e| runtime(anyhow!(e)))?;
    for stream in &set.streams {
        let path = contrast_path(out, &stream.spec);
        let mut w = create(&path).runtime()?;
        write_records(&stream.records, &mut w)
            .and_then(|_| w.flush())
            .with_context(|| format!("cannot write {}", path.display()))
            .runtime()?;
    }
    write_json(&out.join("coverage.json"), &set.coverage).runtime()?;
    write_text(&out.join("coverage.txt"), &set.coverage.render_table()).runtime()?;
    eprintln!(
        "{} pairs, {} specs, {} pairs transformed; records in {}",
        set.coverage.pairs,
        set.streams.len(),
        set.coverage.transformed_pairs,
        out.join("contrast").display()
    );
    Ok(set)
}

pub fn transform(cfg: &RunConfig) -> Outcome {
    let dataset = read_dataset(cfg)?;
    run_transform(cfg, &dataset).map(|_| ())
}

fn load_streams(out: &Path, specs: &[PairSpec]) -> Result<Option<Vec<SpecStream>>> {
    let mut streams = Vec::new();
    for spec in specs {
        let path = contrast_path(out, spec);
        if !path.exists() {
            return Ok(None);
        }
        let file = File::open(&path).with_context(|| format!("cannot read {}", path.display()))?;
        let records = read_records(BufReader::new(file)).with_context(|| format!("in {}", path.display()))?;
        streams.push(SpecStream {
            spec: spec.clone(),
            records,
        });
    }
    Ok(Some(streams))
}

/// Uses the per-spec records under `<out>/contrast` when all are present,
/// otherwise runs the transform first.
pub fn augment(cfg: &RunConfig) -> Outcome {
    let dataset = read_dataset(cfg)?;
    let out = cfg.out().usage()?;
    let streams = match load_streams(out, &cfg.specs).runtime()? {
        Some(s) => s,
        None => run_transform(cfg, &dataset)?.streams,
    };
    let augmented = build_augmented_set(&dataset.instances, &streams).map_err(|e| runtime(anyhow!(e)))?;
    let path = out.join("augmented.jsonl");
    let mut w = create(&path).runtime()?;
    write_dataset(&augmented, &mut w)
        .and_then(|_| w.flush())
        .with_context(|| format!("cannot write {}", path.display()))
        .runtime()?;
    eprintln!(
        "{} instances ({} original) in {}",
        augmented.len(),
        dataset.instances.len(),
        path.display()
    );
    Ok(())
}

fn records_from(path: &Path) -> Result<Vec<ContrastRecord>> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("cannot list {}", path.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    let mut out = Vec::new();
    for f in files {
        let file = File::open(&f).with_context(|| format!("cannot read {}", f.display()))?;
        out.extend(read_records(BufReader::new(file)).with_context(|| format!("in {}", f.display()))?);
    }
    Ok(out)
}

pub fn eval(cfg: &RunConfig, records: &Path, predictions: &Path) -> Outcome {
    let out = cfg.out().usage()?;
    let records = records_from(records).usage()?;
    let file = File::open(predictions)
        .with_context(|| format!("cannot read {}", predictions.display()))
        .usage()?;
    let preds = read_predictions(BufReader::new(file))
        .with_context(|| format!("in {}", predictions.display()))
        .usage()?;
    let report = evaluate(&records, &preds).map_err(|e| usage(anyhow!(e)))?;
    write_json(&out.join("eval_report.json"), &report.to_json()).runtime()?;
    write_text(&out.join("eval_report.txt"), &report.render_table()).runtime()?;
    eprintln!("{} specs evaluated; report in {}", report.rows.len(), out.display());
    Ok(())
}

pub fn analyze(cfg: &RunConfig, corpus: &Path) -> Outcome {
    let out = cfg.out().usage()?;
    let text = fs::read_to_string(corpus)
        .with_context(|| format!("cannot read corpus {}", corpus.display()))
        .usage()?;
    let sentences: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect();
    let dataset = match &cfg.dataset {
        Some(_) => Some(read_dataset(cfg)?),
        None => None,
    };
    let mut adapter = connector(cfg.adapter().usage()?)?
        .connect()
        .map_err(|e| runtime(anyhow!(e)))?;
    let stats = analyze_corpus(&sentences, &mut adapter).map_err(|e| runtime(anyhow!(e)))?;
    write_json(&out.join("corpus_stats.json"), &stats).runtime()?;
    if let Some(d) = dataset {
        let matrix = pair_type_scan(&d.instances, &mut adapter).map_err(|e| runtime(anyhow!(e)))?;
        write_json(&out.join("pair_types.json"), &matrix).runtime()?;
    }
    eprintln!("{} sentences, {} parsed", stats.sentences, stats.parsed);
    Ok(())
}

fn passthrough(cfg: &RunConfig, request: Request) -> Outcome {
    let mut adapter = connector(cfg.adapter().usage()?)?
        .connect()
        .map_err(|e| runtime(anyhow!(e)))?;
    let lines = adapter.exchange(&request).map_err(|e| runtime(anyhow!(e)))?;
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for l in &lines {
        writeln!(w, "{l}").context("stdout").runtime()?;
    }
    if lines.iter().any(|l| l.starts_with("ERR\t")) {
        return Err(runtime(anyhow!("backend reported an error")));
    }
    Ok(())
}

pub fn parse(cfg: &RunConfig, sentence: &str) -> Outcome {
    let request = Request::parse(sentence).map_err(|e| usage(anyhow!(e)))?;
    passthrough(cfg, request)
}

pub fn generate(cfg: &RunConfig, mrs: &str) -> Outcome {
    let m = parse_simple_mrs(mrs).map_err(|e| usage(anyhow!(e)))?;
    m.validate().map_err(|e| usage(anyhow!(e)))?;
    passthrough(cfg, Request::generate(&m))
}

/// Answers protocol requests on stdin from a recorded transcript.
pub fn serve(cfg: &RunConfig) -> Outcome {
    let path = cfg
        .adapter_fixtures_path()
        .context("serve needs --adapter-fixtures")
        .usage()?;
    let store = Arc::new(FixtureStore::load(&path).map_err(|e| runtime(anyhow!(e)))?);
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for line in stdin.lock().lines() {
        let line = line.context("stdin").runtime()?;
        if line.is_empty() {
            continue;
        }
        let reply = match Request::decode(&line) {
            Some(request) => store.respond(&request),
            None => vec!["ERR\tunrecognized request".to_string(), END.to_string()],
        };
        for l in reply {
            writeln!(w, "{l}").context("stdout").runtime()?;
        }
        w.flush().context("stdout").runtime()?;
    }
    Ok(())
}

impl RunConfig {
    fn adapter_fixtures_path(&self) -> Option<PathBuf> {
        match self.adapter.as_ref().map(|a| &a.transport) {
            Some(lit_core::realization::Transport::Fixture(p)) => Some(p.clone()),
            _ => None,
        }
    }
}
