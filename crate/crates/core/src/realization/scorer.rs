use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::Adapter;

/// Returned for strings with no scorable tokens; larger than any real score.
pub const EMPTY_SURFACE_SCORE: f64 = f64::MAX;

const BUNDLED_TABLE: &str = include_str!("../../data/unigram.tsv");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("scoring backend failed: {0}")]
    Backend(String),
}

/// Fluency score of a surface string; lower is better.
pub trait Scorer {
    fn score(&mut self, surface: &str) -> Result<f64, ScoreError>;
}

/// Lowercased word tokens with surrounding punctuation removed.
pub fn tokenize(surface: &str) -> Vec<String> {
    surface
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'')
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

/// Negative mean log relative frequency under a unigram table. Unknown
/// words cost `ln(total count)`, as if seen once.
#[derive(Debug, Clone)]
pub struct UnigramScorer {
    counts: HashMap<String, u64>,
    total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unigram table line {line}: {reason}")]
pub struct TableError {
    pub line: usize,
    pub reason: String,
}

impl UnigramScorer {
    /// Reads `word<TAB>count` lines; `#` lines are comments.
    pub fn from_table(text: &str) -> Result<UnigramScorer, TableError> {
        let mut counts = HashMap::new();
        let mut total = 0u64;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| TableError {
                line: i + 1,
                reason: reason.to_string(),
            };
            let (word, count) = line.split_once('\t').ok_or_else(|| err("missing tab"))?;
            let count: u64 = count.trim().parse().map_err(|_| err("count is not an integer"))?;
            if count == 0 {
                return Err(err("zero count"));
            }
            if counts.insert(word.to_lowercase(), count).is_some() {
                return Err(err("duplicate word"));
            }
            total += count;
        }
        if total == 0 {
            return Err(TableError {
                line: 0,
                reason: "empty table".into(),
            });
        }
        Ok(UnigramScorer { counts, total })
    }

    pub fn bundled() -> UnigramScorer {
        static TABLE: OnceLock<UnigramScorer> = OnceLock::new();
        TABLE
            .get_or_init(|| UnigramScorer::from_table(BUNDLED_TABLE).expect("bundled table is well formed"))
            .clone()
    }

    pub fn unknown_penalty(&self) -> f64 {
        (self.total as f64).ln()
    }

    pub fn token_cost(&self, token: &str) -> f64 {
        match self.counts.get(token) {
            Some(&c) => -((c as f64) / (self.total as f64)).ln(),
            None => self.unknown_penalty(),
        }
    }

    pub fn score_str(&self, surface: &str) -> f64 {
        let tokens = tokenize(surface);
        if tokens.is_empty() {
            return EMPTY_SURFACE_SCORE;
        }
        tokens.iter().map(|t| self.token_cost(t)).sum::<f64>() / tokens.len() as f64
    }
}

impl Scorer for UnigramScorer {
    fn score(&mut self, surface: &str) -> Result<f64, ScoreError> {
        Ok(self.score_str(surface))
    }
}

/// Score with the bundled table.
pub fn default_scorer(surface: &str) -> f64 {
    static TABLE: OnceLock<UnigramScorer> = OnceLock::new();
    TABLE.get_or_init(UnigramScorer::bundled).score_str(surface)
}

/// Scores through a backend speaking the `SCORE` command.
pub struct AdapterScorer {
    adapter: Adapter,
}

impl AdapterScorer {
    pub fn new(adapter: Adapter) -> Self {
        AdapterScorer { adapter }
    }
}

impl Scorer for AdapterScorer {
    fn score(&mut self, surface: &str) -> Result<f64, ScoreError> {
        self.adapter
            .score(surface)
            .map_err(|e| ScoreError::Backend(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequent_words_beat_unknown_ones() {
        let table = UnigramScorer::bundled();
        let the = -((10_000_000f64) / table.total as f64).ln();
        assert!((table.score_str("the the the") - the).abs() < 1e-12);
        assert!((table.score_str("qzx vbnw plkj") - table.unknown_penalty()).abs() < 1e-12);
        assert!(default_scorer("the the the") < default_scorer("qzx vbnw plkj"));
    }

    #[test]
    fn whitespace_and_case_do_not_matter() {
        let a = default_scorer("Alice saw Bob.");
        assert_eq!(a, default_scorer("Alice saw Bob.   \n"));
        assert_eq!(a, default_scorer("  alice SAW bob."));
    }

    #[test]
    fn empty_input_gets_sentinel() {
        assert_eq!(default_scorer(""), EMPTY_SURFACE_SCORE);
        assert_eq!(default_scorer(" . "), EMPTY_SURFACE_SCORE);
        assert!(default_scorer("qzx") < EMPTY_SURFACE_SCORE);
    }

    #[test]
    fn hand_table() {
        let s = UnigramScorer::from_table("# c\na\t3\nb\t1\n").unwrap();
        assert!((s.score_str("a b") - (-(0.75f64).ln() - (0.25f64).ln()) / 2.0).abs() < 1e-12);
        assert!((s.score_str("zz") - 4f64.ln()).abs() < 1e-12);
        assert!(UnigramScorer::from_table("a 3").is_err());
        assert!(UnigramScorer::from_table("a\t0").is_err());
        assert!(UnigramScorer::from_table("").is_err());
        assert!(UnigramScorer::from_table("a\t1\nA\t2").is_err());
    }
}
