use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::transform::Transform;

use super::Label;

/// A pair specification such as `f;p +pa`: one base token per side plus
/// add-ons applied to both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSpec {
    pub premise_base: Transform,
    pub hypothesis_base: Transform,
    pub addons: Vec<Transform>,
    pub canonical_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("bad pair spec at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown token `{token}` at byte {position}")]
    UnknownToken { position: usize, token: String },
}

/// The ten specs reported in the augmentation statistics.
pub const DEFAULT_SPECS: [&str; 10] = [
    "o;o", "i;i", "pa;pa", "f;p", "p;f", "m;o", "p;f +i", "p;f +pa", "f;p +i", "f;p +pa",
];

pub fn default_specs() -> Vec<PairSpec> {
    DEFAULT_SPECS
        .iter()
        .map(|s| parse_pair_spec(s).expect("default specs parse"))
        .collect()
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn skip_spaces(&mut self) {
        while self.text[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn token(&mut self) -> Result<Transform, SpecError> {
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(SpecError::Syntax {
                position: start,
                message: "expected a transformation token".into(),
            });
        }
        self.pos += len;
        let word = &self.text[start..self.pos];
        word.parse().map_err(|_| SpecError::UnknownToken {
            position: start,
            token: word.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }
}

/// Parses `<tok>;<tok>( +<tok>)*`. Spaces around `+` are optional.
pub fn parse_pair_spec(text: &str) -> Result<PairSpec, SpecError> {
    let mut cur = Cursor { text, pos: 0 };
    cur.skip_spaces();
    let premise_base = cur.token()?;
    if !cur.eat(';') {
        return Err(SpecError::Syntax {
            position: cur.pos,
            message: "expected `;`".into(),
        });
    }
    let hypothesis_base = cur.token()?;
    let mut addons = Vec::new();
    loop {
        cur.skip_spaces();
        if cur.pos == text.len() {
            break;
        }
        if !cur.eat('+') {
            return Err(SpecError::Syntax {
                position: cur.pos,
                message: "expected `+` or end of spec".into(),
            });
        }
        cur.skip_spaces();
        addons.push(cur.token()?);
    }
    Ok(PairSpec::new(premise_base, hypothesis_base, addons))
}

impl PairSpec {
    pub fn new(premise_base: Transform, hypothesis_base: Transform, addons: Vec<Transform>) -> Self {
        let mut canonical_name = format!("{premise_base};{hypothesis_base}");
        for a in &addons {
            canonical_name.push_str(&format!(" +{a}"));
        }
        PairSpec {
            premise_base,
            hypothesis_base,
            addons,
            canonical_name,
        }
    }

    fn stack(&self, base: Transform) -> Vec<Transform> {
        std::iter::once(base)
            .chain(self.addons.iter().copied())
            .filter(|t| *t != Transform::Original)
            .collect()
    }

    pub fn premise_transforms(&self) -> Vec<Transform> {
        self.stack(self.premise_base)
    }

    pub fn hypothesis_transforms(&self) -> Vec<Transform> {
        self.stack(self.hypothesis_base)
    }

    /// Leaves both sentences untouched (`o;o`).
    pub fn is_identity(&self) -> bool {
        self.premise_transforms().is_empty() && self.hypothesis_transforms().is_empty()
    }

    pub fn is_compositional(&self) -> bool {
        !self.addons.is_empty()
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name)
    }
}

impl FromStr for PairSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pair_spec(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no label rule for `{0}`")]
pub struct NoRule(pub String);

enum LabelClass {
    Preserving,
    Tense(Transform),
    May,
    Other,
}

fn classify(t: Transform) -> LabelClass {
    match t {
        Transform::Original
        | Transform::ItCleft
        | Transform::ItCleftArg1
        | Transform::ItCleftArg2
        | Transform::Passive => LabelClass::Preserving,
        Transform::Past | Transform::Present | Transform::Future => LabelClass::Tense(t),
        Transform::May => LabelClass::May,
        Transform::Negation | Transform::Swap | Transform::PolarQuestion => LabelClass::Other,
    }
}

/// Label of a transformed pair. Meaning-preserving bases keep the label;
/// `may` against an untouched side, or past/future decoupling, turns every
/// label neutral. Cleft and passive add-ons never change the outcome.
pub fn infer_label(original: Label, spec: &PairSpec) -> Result<Label, NoRule> {
    let no_rule = || NoRule(spec.canonical_name.clone());
    if !spec
        .addons
        .iter()
        .all(|a| matches!(classify(*a), LabelClass::Preserving) && *a != Transform::Original)
    {
        return Err(no_rule());
    }
    use LabelClass::*;
    use Transform::{Future, Original, Past};
    match (classify(spec.premise_base), classify(spec.hypothesis_base)) {
        (Preserving, Preserving) => Ok(original),
        (May, Preserving) if spec.hypothesis_base == Original => Ok(Label::Neutral),
        (Preserving, May) if spec.premise_base == Original => Ok(Label::Neutral),
        (Tense(Past), Tense(Future)) | (Tense(Future), Tense(Past)) => Ok(Label::Neutral),
        _ => Err(no_rule()),
    }
}
