//! NLI datasets, pair specs, label rules, contrast and augmented sets.

mod augment;
mod contrast;
mod dataset;
mod spec;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use augment::{build_augmented_set, split_augmented_id, AugmentError};
pub use contrast::{
    build_contrast_set, read_records, transform_pair, transform_sentence, write_records, ContrastRecord, ContrastSet,
    CoverageStats, PipelineError, Realizer, SentenceOutcome, SpecCoverage, SpecStream, Status, PARSE_POLICY,
};
pub use dataset::{load_dataset, read_dataset, write_dataset, Dataset, DatasetError, NliInstance};
pub use spec::{default_specs, infer_label, parse_pair_spec, NoRule, PairSpec, SpecError, DEFAULT_SPECS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Neutral,
    Contradiction,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Neutral, Label::Contradiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Contradiction => "contradiction",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}
