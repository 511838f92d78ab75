use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{NliInstance, SpecStream, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("augmented id `{0}` collides with an existing pair id")]
    DuplicateId(String),
    #[error("record for unknown pair `{0}`")]
    UnknownPair(String),
}

/// Originals followed by the `ok` records of every non-compositional,
/// non-identity spec, in spec order then pair order.
pub fn build_augmented_set(
    originals: &[NliInstance],
    streams: &[SpecStream],
) -> Result<Vec<NliInstance>, AugmentError> {
    let genres: HashMap<&str, &Option<String>> = originals.iter().map(|i| (i.pair_id.as_str(), &i.genre)).collect();
    let mut ids: HashSet<String> = HashSet::new();
    let mut out = Vec::with_capacity(originals.len());
    for inst in originals {
        if !ids.insert(inst.pair_id.clone()) {
            return Err(AugmentError::DuplicateId(inst.pair_id.clone()));
        }
        out.push(inst.clone());
    }
    for stream in streams {
        if stream.spec.is_compositional() || stream.spec.is_identity() {
            continue;
        }
        for r in stream.records.iter().filter(|r| r.status == Status::Ok) {
            let genre = genres
                .get(r.pair_id.as_str())
                .ok_or_else(|| AugmentError::UnknownPair(r.pair_id.clone()))?;
            let (Some(premise), Some(hypothesis), Some(label)) =
                (&r.premise_transformed, &r.hypothesis_transformed, r.label_transformed)
            else {
                continue;
            };
            let id = format!("{}#{}", r.pair_id, stream.spec.canonical_name);
            if !ids.insert(id.clone()) {
                return Err(AugmentError::DuplicateId(id));
            }
            out.push(NliInstance {
                pair_id: id,
                premise: premise.clone(),
                hypothesis: hypothesis.clone(),
                label,
                genre: (*genre).clone(),
            });
        }
    }
    Ok(out)
}

/// Splits an augmented id into the original pair id and the spec name.
pub fn split_augmented_id(id: &str) -> Option<(&str, &str)> {
    id.rsplit_once('#')
}
