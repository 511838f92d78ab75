use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mrs::Mrs;
use crate::realization::{filter_candidates, select_surface, Adapter, AdapterError, Scorer, ScorerFailure};
use crate::transform::{compose, Transform};

use super::{infer_label, Dataset, Label, NliInstance, PairSpec};

/// Only the backend's first analysis of a sentence is rewritten.
pub const PARSE_POLICY: &str = "first";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ParseFailed,
    RuleFailed,
    GenerationFailed,
    NoLabelRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastRecord {
    pub pair_id: String,
    pub spec: String,
    pub premise_original: String,
    pub hypothesis_original: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise_transformed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_transformed: Option<String>,
    pub label_original: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_transformed: Option<Label>,
    pub status: Status,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Adapter(#[from] AdapterError),
    #[error(transparent)]
    Scorer(#[from] ScorerFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceOutcome {
    Transformed {
        surface: String,
        /// Concrete rewrites performed, with `i` resolved to `i1` or `i2`.
        applied: Vec<Transform>,
    },
    Failed(Status),
}

struct Session<'a> {
    adapter: &'a mut Adapter,
    scorer: &'a mut dyn Scorer,
    parses: &'a mut HashMap<String, Option<Mrs>>,
}

impl Session<'_> {
    fn first_parse(&mut self, sentence: &str) -> Result<Option<Mrs>, AdapterError> {
        if let Some(hit) = self.parses.get(sentence) {
            return Ok(hit.clone());
        }
        let first = match self.adapter.parse(sentence) {
            Ok(parses) => parses.into_iter().next(),
            // The backend answered but rejected this input; that is a
            // per-sentence failure, not a broken connection.
            Err(AdapterError::Remote(_) | AdapterError::InvalidRequest(_)) => None,
            Err(e) => return Err(e),
        };
        self.parses.insert(sentence.to_string(), first.clone());
        Ok(first)
    }

    fn sentence(&mut self, sentence: &str, stack: &[Transform]) -> Result<SentenceOutcome, PipelineError> {
        if stack.is_empty() {
            return Ok(SentenceOutcome::Transformed {
                surface: sentence.to_string(),
                applied: Vec::new(),
            });
        }
        let Some(parsed) = self.first_parse(sentence)? else {
            return Ok(SentenceOutcome::Failed(Status::ParseFailed));
        };
        let Ok(rewritten) = compose(&parsed, stack) else {
            return Ok(SentenceOutcome::Failed(Status::RuleFailed));
        };
        let surfaces = match self.adapter.generate(&rewritten.mrs) {
            Ok(s) => s,
            Err(AdapterError::Remote(_)) => Vec::new(),
            Err(AdapterError::InvalidRequest(_)) => return Ok(SentenceOutcome::Failed(Status::RuleFailed)),
            Err(e) => return Err(e.into()),
        };
        let kept = filter_candidates(&surfaces, &rewritten.realization_constraints);
        match select_surface(&kept, self.scorer)? {
            Some(best) => Ok(SentenceOutcome::Transformed {
                surface: best.surface,
                applied: rewritten.applied,
            }),
            None => Ok(SentenceOutcome::Failed(Status::GenerationFailed)),
        }
    }

    fn pair(&mut self, inst: &NliInstance, spec: &PairSpec) -> Result<ContrastRecord, PipelineError> {
        let mut record = ContrastRecord {
            pair_id: inst.pair_id.clone(),
            spec: spec.canonical_name.clone(),
            premise_original: inst.premise.clone(),
            hypothesis_original: inst.hypothesis.clone(),
            premise_transformed: None,
            hypothesis_transformed: None,
            label_original: inst.label,
            label_transformed: None,
            status: Status::Ok,
        };
        let premise = match self.sentence(&inst.premise, &spec.premise_transforms())? {
            SentenceOutcome::Transformed { surface, .. } => surface,
            SentenceOutcome::Failed(status) => {
                record.status = status;
                return Ok(record);
            }
        };
        let hypothesis = match self.sentence(&inst.hypothesis, &spec.hypothesis_transforms())? {
            SentenceOutcome::Transformed { surface, .. } => surface,
            SentenceOutcome::Failed(status) => {
                record.status = status;
                return Ok(record);
            }
        };
        record.premise_transformed = Some(premise);
        record.hypothesis_transformed = Some(hypothesis);
        match infer_label(inst.label, spec) {
            Ok(label) => record.label_transformed = Some(label),
            Err(_) => record.status = Status::NoLabelRule,
        }
        Ok(record)
    }
}

/// Parse, rewrite, generate, filter and select for one sentence. An empty
/// stack returns the sentence unchanged without contacting the backend.
pub fn transform_sentence(
    sentence: &str,
    stack: &[Transform],
    adapter: &mut Adapter,
    scorer: &mut dyn Scorer,
) -> Result<SentenceOutcome, PipelineError> {
    let mut parses = HashMap::new();
    Session {
        adapter,
        scorer,
        parses: &mut parses,
    }
    .sentence(sentence, stack)
}

/// Transforms both sides of a pair. The premise goes first; if it fails the
/// hypothesis is not attempted.
pub fn transform_pair(
    inst: &NliInstance,
    spec: &PairSpec,
    adapter: &mut Adapter,
    scorer: &mut dyn Scorer,
) -> Result<ContrastRecord, PipelineError> {
    let mut parses = HashMap::new();
    Session {
        adapter,
        scorer,
        parses: &mut parses,
    }
    .pair(inst, spec)
}

/// An adapter connection and scorer owned by one worker. Parses are cached
/// for the pair being processed.
pub struct Realizer {
    adapter: Adapter,
    scorer: Box<dyn Scorer + Send>,
    parses: HashMap<String, Option<Mrs>>,
}

impl Realizer {
    pub fn new(adapter: Adapter, scorer: Box<dyn Scorer + Send>) -> Self {
        Realizer {
            adapter,
            scorer,
            parses: HashMap::new(),
        }
    }

    fn session(&mut self) -> Session<'_> {
        Session {
            adapter: &mut self.adapter,
            scorer: self.scorer.as_mut(),
            parses: &mut self.parses,
        }
    }

    pub fn transform_sentence(
        &mut self,
        sentence: &str,
        stack: &[Transform],
    ) -> Result<SentenceOutcome, PipelineError> {
        self.session().sentence(sentence, stack)
    }

    /// All specs for one pair, in spec order.
    pub fn transform_specs(
        &mut self,
        inst: &NliInstance,
        specs: &[PairSpec],
    ) -> Result<Vec<ContrastRecord>, PipelineError> {
        self.parses.clear();
        let mut session = self.session();
        specs.iter().map(|spec| session.pair(inst, spec)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecCoverage {
    pub spec: String,
    pub attempted: usize,
    pub ok: usize,
    pub no_label_rule: usize,
    pub parse_failed: usize,
    pub rule_failed: usize,
    pub generation_failed: usize,
}

impl SpecCoverage {
    fn count(&mut self, status: Status) {
        self.attempted += 1;
        *match status {
            Status::Ok => &mut self.ok,
            Status::NoLabelRule => &mut self.no_label_rule,
            Status::ParseFailed => &mut self.parse_failed,
            Status::RuleFailed => &mut self.rule_failed,
            Status::GenerationFailed => &mut self.generation_failed,
        } += 1;
    }

    pub fn is_conserved(&self) -> bool {
        self.attempted == self.ok + self.no_label_rule + self.parse_failed + self.rule_failed + self.generation_failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub pairs: usize,
    pub skipped_unlabeled: usize,
    /// Pairs with an `ok` record under at least one non-identity spec.
    pub transformed_pairs: usize,
    pub transformed_fraction: f64,
    pub parse_policy: String,
    pub specs: Vec<SpecCoverage>,
}

impl CoverageStats {
    pub fn from_streams(pairs: usize, skipped_unlabeled: usize, streams: &[SpecStream]) -> CoverageStats {
        let mut hit = vec![false; pairs];
        let mut specs = Vec::with_capacity(streams.len());
        for stream in streams {
            let mut cov = SpecCoverage {
                spec: stream.spec.canonical_name.clone(),
                ..Default::default()
            };
            for (i, r) in stream.records.iter().enumerate() {
                cov.count(r.status);
                if r.status == Status::Ok && !stream.spec.is_identity() {
                    hit[i] = true;
                }
            }
            specs.push(cov);
        }
        let transformed_pairs = hit.iter().filter(|h| **h).count();
        CoverageStats {
            pairs,
            skipped_unlabeled,
            transformed_pairs,
            transformed_fraction: if pairs == 0 {
                0.0
            } else {
                transformed_pairs as f64 / pairs as f64
            },
            parse_policy: PARSE_POLICY.to_string(),
            specs,
        }
    }

    /// Aligned text table, one row per spec.
    pub fn render_table(&self) -> String {
        let header = [
            "spec",
            "attempted",
            "ok",
            "no_label_rule",
            "parse_failed",
            "rule_failed",
            "generation_failed",
        ];
        let rows: Vec<[String; 7]> = self
            .specs
            .iter()
            .map(|s| {
                [
                    s.spec.clone(),
                    s.attempted.to_string(),
                    s.ok.to_string(),
                    s.no_label_rule.to_string(),
                    s.parse_failed.to_string(),
                    s.rule_failed.to_string(),
                    s.generation_failed.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: Vec<&str>| {
            let mut parts = Vec::new();
            for (i, cell) in cells.iter().enumerate() {
                if i == 0 {
                    parts.push(format!("{cell:<w$}", w = widths[i]));
                } else {
                    parts.push(format!("{cell:>w$}", w = widths[i]));
                }
            }
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(header.to_vec());
        for row in &rows {
            line(row.iter().map(String::as_str).collect());
        }
        out.push_str(&format!(
            "pairs: {}  skipped (no gold label): {}  transformed: {} ({:.2}%)  parse policy: {}\n",
            self.pairs,
            self.skipped_unlabeled,
            self.transformed_pairs,
            self.transformed_fraction * 100.0,
            self.parse_policy
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecStream {
    pub spec: PairSpec,
    pub records: Vec<ContrastRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastSet {
    pub streams: Vec<SpecStream>,
    pub coverage: CoverageStats,
}

type PairResult = Result<Vec<ContrastRecord>, PipelineError>;

/// Runs every spec over every pair on `workers` threads, each with its own
/// [`Realizer`]. Output is in input order whatever the scheduling. On
/// failure the error of the earliest failing pair is returned.
pub fn build_contrast_set<F>(
    dataset: &Dataset,
    specs: &[PairSpec],
    workers: usize,
    connect: F,
    progress: Option<&(dyn Fn(usize) + Sync)>,
) -> Result<ContrastSet, PipelineError>
where
    F: Fn() -> Result<Realizer, PipelineError> + Sync,
{
    let pairs = &dataset.instances;
    let workers = workers.max(1).min(pairs.len());
    let slots: Mutex<Vec<Option<PairResult>>> = Mutex::new((0..pairs.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let done = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let connect_errors: Mutex<Vec<PipelineError>> = Mutex::new(Vec::new());

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut realizer = match connect() {
                    Ok(r) => r,
                    Err(e) => {
                        abort.store(true, Ordering::SeqCst);
                        connect_errors.lock().expect("lock").push(e);
                        return;
                    }
                };
                while !abort.load(Ordering::SeqCst) {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(inst) = pairs.get(i) else { break };
                    let result = realizer.transform_specs(inst, specs);
                    if result.is_err() {
                        abort.store(true, Ordering::SeqCst);
                    }
                    slots.lock().expect("lock")[i] = Some(result);
                    let n = done.fetch_add(1, Ordering::SeqCst) + 1;
                    if let Some(report) = progress {
                        report(n);
                    }
                }
            });
        }
    });

    if let Some(e) = connect_errors.into_inner().expect("lock").into_iter().next() {
        return Err(e);
    }
    let mut streams: Vec<SpecStream> = specs
        .iter()
        .map(|spec| SpecStream {
            spec: spec.clone(),
            records: Vec::with_capacity(pairs.len()),
        })
        .collect();
    let slots = slots.into_inner().expect("lock");
    if abort.load(Ordering::SeqCst) {
        if let Some(e) = slots.into_iter().flatten().find_map(Result::err) {
            return Err(e);
        }
        unreachable!("abort is only set alongside an error");
    }
    for slot in slots {
        let records = slot.expect("every pair processed")?;
        for (stream, record) in streams.iter_mut().zip(records) {
            stream.records.push(record);
        }
    }
    let coverage = CoverageStats::from_streams(pairs.len(), dataset.skipped_unlabeled, &streams);
    Ok(ContrastSet { streams, coverage })
}

pub fn write_records(records: &[ContrastRecord], mut out: impl Write) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_records(reader: impl BufRead) -> io::Result<Vec<ContrastRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1)))?;
        out.push(r);
    }
    Ok(out)
}
