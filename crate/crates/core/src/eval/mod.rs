//! Accuracy/consistency metrics over contrast sets and phenomenon counts
//! over parsed corpora.

mod corpus;
mod metrics;

pub use corpus::{
    analyze_corpus, classify, pair_type_scan, Category, CorpusStats, PairTypeMatrix, Phenomena, PhenomenonCounts,
    PhenomenonFractions,
};
pub use metrics::{evaluate, percent_2dp, read_predictions, EvalError, EvalReport, PredictionPair, SpecMetrics};
