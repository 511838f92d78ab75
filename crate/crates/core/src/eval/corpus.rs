use std::collections::HashMap;

use serde::Serialize;

use crate::mrs::Mrs;
use crate::pipeline::NliInstance;
use crate::realization::{is_passive, Adapter, AdapterError};
use crate::transform::{ITCLEFT_PREDICATE, MAY_PREDICATE};

/// What one parsed sentence exhibits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phenomena {
    pub tense: Category,
    pub passive: bool,
    pub may: bool,
    pub itcleft: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Pres,
    Past,
    Fut,
    Untensed,
    Passive,
    May,
    Itcleft,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Pres,
        Category::Past,
        Category::Fut,
        Category::Untensed,
        Category::Passive,
        Category::May,
        Category::Itcleft,
    ];

    fn index(self) -> usize {
        Category::ALL.iter().position(|c| *c == self).expect("listed")
    }
}

/// Tense comes from the index event of the parse; the other phenomena from
/// predicates present or, for passive, from the surface string.
pub fn classify(sentence: &str, parse: &Mrs) -> Phenomena {
    let tense = match parse.feature(parse.index, "TENSE") {
        Some("pres") => Category::Pres,
        Some("past") => Category::Past,
        Some("fut") => Category::Fut,
        _ => Category::Untensed,
    };
    Phenomena {
        tense,
        passive: is_passive(sentence),
        may: parse.has_predicate(MAY_PREDICATE),
        itcleft: parse.has_predicate(ITCLEFT_PREDICATE),
    }
}

impl Phenomena {
    /// Single category for pair tables: it-cleft, then may, then passive,
    /// then tense.
    pub fn dominant(&self) -> Category {
        if self.itcleft {
            Category::Itcleft
        } else if self.may {
            Category::May
        } else if self.passive {
            Category::Passive
        } else {
            self.tense
        }
    }
}

fn first_parse(adapter: &mut Adapter, sentence: &str) -> Result<Option<Mrs>, AdapterError> {
    match adapter.parse(sentence) {
        Ok(p) => Ok(p.into_iter().next()),
        Err(AdapterError::Remote(_) | AdapterError::InvalidRequest(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PhenomenonCounts {
    pub pres: usize,
    pub past: usize,
    pub fut: usize,
    pub untensed: usize,
    pub passive: usize,
    pub may: usize,
    pub itcleft: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PhenomenonFractions {
    pub pres: f64,
    pub past: f64,
    pub fut: f64,
    pub untensed: f64,
    pub passive: f64,
    pub may: f64,
    pub itcleft: f64,
}

/// Fractions are over parsed sentences and are zero when nothing parsed.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusStats {
    pub sentences: usize,
    pub parsed: usize,
    pub unparsed: usize,
    pub counts: PhenomenonCounts,
    pub fractions: PhenomenonFractions,
}

impl CorpusStats {
    fn from_counts(sentences: usize, parsed: usize, counts: PhenomenonCounts) -> CorpusStats {
        let f = |n: usize| if parsed == 0 { 0.0 } else { n as f64 / parsed as f64 };
        CorpusStats {
            sentences,
            parsed,
            unparsed: sentences - parsed,
            fractions: PhenomenonFractions {
                pres: f(counts.pres),
                past: f(counts.past),
                fut: f(counts.fut),
                untensed: f(counts.untensed),
                passive: f(counts.passive),
                may: f(counts.may),
                itcleft: f(counts.itcleft),
            },
            counts,
        }
    }
}

pub fn analyze_corpus(sentences: &[String], adapter: &mut Adapter) -> Result<CorpusStats, AdapterError> {
    let mut counts = PhenomenonCounts::default();
    let mut parsed = 0;
    for s in sentences {
        let Some(parse) = first_parse(adapter, s)? else {
            continue;
        };
        parsed += 1;
        let p = classify(s, &parse);
        *match p.tense {
            Category::Pres => &mut counts.pres,
            Category::Past => &mut counts.past,
            Category::Fut => &mut counts.fut,
            _ => &mut counts.untensed,
        } += 1;
        counts.passive += usize::from(p.passive);
        counts.may += usize::from(p.may);
        counts.itcleft += usize::from(p.itcleft);
    }
    Ok(CorpusStats::from_counts(sentences.len(), parsed, counts))
}

/// Premise category by hypothesis category over pairs where both sides
/// parse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairTypeMatrix {
    pub categories: Vec<Category>,
    pub counts: Vec<Vec<usize>>,
    pub pairs: usize,
    /// Pairs with at least one unparsed side.
    pub skipped: usize,
}

impl PairTypeMatrix {
    pub fn cell(&self, premise: Category, hypothesis: Category) -> usize {
        self.counts[premise.index()][hypothesis.index()]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.categories.len())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }
}

pub fn pair_type_scan(dataset: &[NliInstance], adapter: &mut Adapter) -> Result<PairTypeMatrix, AdapterError> {
    let n = Category::ALL.len();
    let mut matrix = PairTypeMatrix {
        categories: Category::ALL.to_vec(),
        counts: vec![vec![0; n]; n],
        pairs: dataset.len(),
        skipped: 0,
    };
    let mut cache: HashMap<String, Option<Category>> = HashMap::new();
    let mut category = |s: &str, adapter: &mut Adapter| -> Result<Option<Category>, AdapterError> {
        if let Some(c) = cache.get(s) {
            return Ok(*c);
        }
        let c = first_parse(adapter, s)?.map(|m| classify(s, &m).dominant());
        cache.insert(s.to_string(), c);
        Ok(c)
    };
    for inst in dataset {
        let p = category(&inst.premise, adapter)?;
        let h = category(&inst.hypothesis, adapter)?;
        match (p, h) {
            (Some(p), Some(h)) => matrix.counts[p.index()][h.index()] += 1,
            _ => matrix.skipped += 1,
        }
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrs::parse_simple_mrs;

    #[test]
    fn classify_examples() {
        let one = parse_simple_mrs(crate::mrs::tests::SAW).unwrap();
        let five = parse_simple_mrs(crate::mrs::tests::SAW_ITCLEFT).unwrap();
        let p = classify("Alice saw Bob.", &one);
        assert_eq!(p.tense, Category::Past);
        assert!(!p.passive && !p.may && !p.itcleft);
        let p = classify("It is Alice who saw Bob.", &five);
        assert_eq!(p.tense, Category::Pres);
        assert!(p.itcleft);
        assert_eq!(p.dominant(), Category::Itcleft);
        assert_eq!(classify("Bob was seen by Alice.", &one).dominant(), Category::Passive);
    }
}
