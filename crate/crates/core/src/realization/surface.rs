use std::collections::BTreeSet;

use thiserror::Error;

use crate::transform::RealizationConstraint;

use super::scorer::{tokenize, Scorer};

const BE_FORMS: [&str; 7] = ["is", "are", "was", "were", "be", "been", "being"];

const IRREGULAR_PARTICIPLES: &[&str] = &[
    "bought",
    "brought",
    "built",
    "caught",
    "cut",
    "dealt",
    "done",
    "dug",
    "fed",
    "felt",
    "fought",
    "found",
    "held",
    "heard",
    "hit",
    "hung",
    "kept",
    "laid",
    "led",
    "left",
    "lent",
    "lit",
    "lost",
    "made",
    "meant",
    "met",
    "paid",
    "put",
    "read",
    "run",
    "said",
    "sat",
    "sent",
    "set",
    "shot",
    "shut",
    "sold",
    "sought",
    "spent",
    "spun",
    "stood",
    "struck",
    "stuck",
    "sung",
    "swum",
    "taught",
    "thought",
    "told",
    "understood",
    "won",
    "wound",
    "worn",
    "torn",
    "sworn",
    "drawn",
    "grown",
    "known",
    "shown",
    "thrown",
    "blown",
    "flown",
];

/// Words ending in -ed/-en that are not participles.
const NOT_PARTICIPLES: &[&str] = &[
    "bed", "red", "need", "seed", "speed", "feed", "weed", "shed", "sled", "hundred", "kindred", "naked", "wicked",
    "sacred", "men", "women", "children", "ten", "seven", "eleven", "then", "when", "even", "often", "open", "kitchen",
    "garden", "golden", "wooden", "woolen", "chicken", "citizen", "dozen", "oven", "heaven", "linen", "screen",
    "green", "queen", "teen", "between", "token", "listen", "happen", "siren", "pen", "den", "hen", "omen", "specimen",
    "alien", "barren", "sudden", "rotten",
];

fn is_participle(word: &str) -> bool {
    if IRREGULAR_PARTICIPLES.contains(&word) {
        return true;
    }
    if NOT_PARTICIPLES.contains(&word) {
        return false;
    }
    word.len() > 3 && (word.ends_with("ed") || word.ends_with("en"))
}

/// A form of "be" followed within two words by a past participle.
pub fn is_passive(surface: &str) -> bool {
    let words = tokenize(surface);
    words
        .iter()
        .enumerate()
        .any(|(i, w)| BE_FORMS.contains(&w.as_str()) && words[i + 1..].iter().take(2).any(|next| is_participle(next)))
}

/// With `PassiveRequired`, keeps passive surfaces. Otherwise keeps the
/// non-passive ones, unless that would leave nothing: some rewrites (object
/// clefts) only realize with a passive relative clause.
pub fn filter_candidates(surfaces: &[String], constraints: &BTreeSet<RealizationConstraint>) -> Vec<String> {
    if constraints.contains(&RealizationConstraint::PassiveRequired) {
        return surfaces.iter().filter(|s| is_passive(s)).cloned().collect();
    }
    let active: Vec<String> = surfaces.iter().filter(|s| !is_passive(s)).cloned().collect();
    if active.is_empty() {
        surfaces.to_vec()
    } else {
        active
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub surface: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("scorer could not score any of {candidates} candidates: {last_error}")]
pub struct ScorerFailure {
    pub candidates: usize,
    pub last_error: String,
}

/// The lowest-scoring surface, ties going to the lexicographically smaller
/// string. Duplicate surfaces are scored once.
pub fn select_surface(surfaces: &[String], scorer: &mut dyn Scorer) -> Result<Option<Candidate>, ScorerFailure> {
    let mut unique: Vec<&String> = Vec::with_capacity(surfaces.len());
    for s in surfaces {
        if !unique.contains(&s) {
            unique.push(s);
        }
    }
    if unique.is_empty() {
        return Ok(None);
    }
    let mut best: Option<Candidate> = None;
    let mut last_error = String::new();
    for surface in &unique {
        let score = match scorer.score(surface) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                last_error = format!("non-finite score {v}");
                continue;
            }
            Err(e) => {
                last_error = e.to_string();
                continue;
            }
        };
        let better = match &best {
            None => true,
            Some(b) => score
                .total_cmp(&b.score)
                .then_with(|| surface.as_str().cmp(b.surface.as_str()))
                .is_lt(),
        };
        if better {
            best = Some(Candidate {
                surface: surface.to_string(),
                score,
            });
        }
    }
    match best {
        Some(c) => Ok(Some(c)),
        None => Err(ScorerFailure {
            candidates: unique.len(),
            last_error,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::scorer::{ScoreError, UnigramScorer};

    fn owned(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    struct Table(Vec<(&'static str, f64)>);

    impl Scorer for Table {
        fn score(&mut self, surface: &str) -> Result<f64, ScoreError> {
            self.0
                .iter()
                .find(|(s, _)| *s == surface)
                .map(|(_, v)| *v)
                .ok_or_else(|| ScoreError::Backend(format!("no score for {surface}")))
        }
    }

    #[test]
    fn passive_pattern() {
        for s in [
            "Bob was seen by Alice.",
            "Soccer is being played by adults.",
            "Rock will be drilled by a woman.",
            "A bike is being ridden by no woman.",
            "It is not the man that a hat is being worn by.",
            "Flowers are picked by two girls outside.",
            "A newspaper was being read by a man.",
        ] {
            assert!(is_passive(s), "{s}");
        }
        for s in [
            "Alice saw Bob.",
            "It is the boy who will be making snowballs.",
            "There were two cats outside.",
            "There were children in the garden.",
            "The large pothole in the road was due to bad winter weather.",
            "The woman is wearing a red hat.",
            "Five people don't tend sheep.",
        ] {
            assert!(!is_passive(s), "{s}");
        }
    }

    #[test]
    fn filter_by_constraint() {
        let input = owned(&["Bob was seen by Alice.", "Alice saw Bob."]);
        let passive = BTreeSet::from([RealizationConstraint::PassiveRequired]);
        assert_eq!(filter_candidates(&input, &passive), owned(&["Bob was seen by Alice."]));
        assert_eq!(filter_candidates(&input, &BTreeSet::new()), owned(&["Alice saw Bob."]));
        assert!(filter_candidates(&[], &passive).is_empty());
    }

    #[test]
    fn unconstrained_keeps_all_passive_input() {
        let input = owned(&["It is music that is being performed by a woman."]);
        assert_eq!(filter_candidates(&input, &BTreeSet::new()), input);
    }

    #[test]
    fn argmin_and_ties() {
        let mut scorer = Table(vec![("b", 12.1), ("a", 9.8), ("c", 9.8)]);
        let pick = select_surface(&owned(&["b", "c", "a"]), &mut scorer).unwrap().unwrap();
        assert_eq!(
            pick,
            Candidate {
                surface: "a".into(),
                score: 9.8
            }
        );
        let pick = select_surface(&owned(&["b", "c"]), &mut scorer).unwrap().unwrap();
        assert_eq!(pick.surface, "c");
        assert_eq!(select_surface(&[], &mut scorer), Ok(None));
    }

    #[test]
    fn unscorable_candidates() {
        let mut scorer = Table(vec![("a", 1.0)]);
        assert_eq!(
            select_surface(&owned(&["zz", "a"]), &mut scorer)
                .unwrap()
                .unwrap()
                .surface,
            "a"
        );
        assert!(select_surface(&owned(&["zz"]), &mut scorer).is_err());
    }

    #[test]
    fn empty_string_never_wins() {
        let mut scorer = UnigramScorer::bundled();
        let pick = select_surface(&owned(&["", "qqq zzz"]), &mut scorer).unwrap().unwrap();
        assert_eq!(pick.surface, "qqq zzz");
    }
}
