//! Minimal Recursion Semantics data model and the simple-MRS text format.
//!
//! An [`Mrs`] is a flat bag of elementary predicates plus `qeq` handle
//! constraints. Variable properties (TENSE, SF, NUM, ...) live in a per-Mrs
//! table keyed by variable, so every occurrence of `e2` shares one feature
//! list. Values are immutable once built; rewrites return fresh copies.

mod alpha;
mod parse;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use alpha::alpha_equal;
pub use parse::parse_simple_mrs;
pub use validate::Violation;

/// Variable sorts used by the grammar: event, instance, handle and the two
/// underspecified sorts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Event,
    Instance,
    Handle,
    Individual,
    Unknown,
}

impl Sort {
    pub fn letter(self) -> char {
        match self {
            Sort::Event => 'e',
            Sort::Instance => 'x',
            Sort::Handle => 'h',
            Sort::Individual => 'i',
            Sort::Unknown => 'u',
        }
    }

    pub fn from_letter(c: &str) -> Option<Sort> {
        Some(match c {
            "e" => Sort::Event,
            "x" => Sort::Instance,
            "h" => Sort::Handle,
            "i" => Sort::Individual,
            "u" => Sort::Unknown,
            _ => return None,
        })
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A variable such as `h0`, `e2` or `x3`. Identity is sort plus id; the
/// properties attached to it are stored on the owning [`Mrs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub sort: Sort,
    pub id: u32,
}

impl Variable {
    pub const fn new(sort: Sort, id: u32) -> Self {
        Variable { sort, id }
    }

    pub const fn handle(id: u32) -> Self {
        Variable::new(Sort::Handle, id)
    }

    pub const fn event(id: u32) -> Self {
        Variable::new(Sort::Event, id)
    }

    pub const fn instance(id: u32) -> Self {
        Variable::new(Sort::Instance, id)
    }

    pub fn is_handle(&self) -> bool {
        self.sort == Sort::Handle
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sort.letter(), self.id)
    }
}

/// Error for variable names outside `[a-z]+[0-9]+` or with an unknown sort.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid variable name `{0}`")]
pub struct BadVariable(pub String);

impl FromStr for Variable {
    type Err = BadVariable;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| BadVariable(s.to_string()))?;
        let (letters, digits) = s.split_at(split);
        let well_formed = !letters.is_empty()
            && letters.bytes().all(|b| b.is_ascii_lowercase())
            && !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit());
        if !well_formed {
            return Err(BadVariable(s.to_string()));
        }
        let sort = Sort::from_letter(letters).ok_or_else(|| BadVariable(s.to_string()))?;
        let id = digits.parse().map_err(|_| BadVariable(s.to_string()))?;
        Ok(Variable { sort, id })
    }
}

/// Ordered feature list of one variable, e.g. `SF: prop TENSE: past`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Properties(Vec<(String, String)>);

impl Properties {
    pub fn new() -> Self {
        Properties(Vec::new())
    }

    pub fn from_pairs<K: Into<String>, V: Into<String>>(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        let mut props = Properties::new();
        for (k, v) in pairs {
            props.set(k, v);
        }
        props
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    /// Replaces the value in place when the feature exists, else appends.
    pub fn set(&mut self, name: impl Into<String>, value: impl Into<String>) {
        let name = name.into();
        let value = value.into();
        match self.0.iter_mut().find(|(k, _)| *k == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name, value)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Order-insensitive comparison.
    pub fn same_mapping(&self, other: &Properties) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut a: Vec<_> = self.iter().collect();
        let mut b: Vec<_> = other.iter().collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// An elementary predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ep {
    pub predicate: String,
    pub label: Variable,
    pub args: Vec<(String, Variable)>,
    pub carg: Option<String>,
}

impl Ep {
    pub fn new(predicate: impl Into<String>, label: Variable) -> Self {
        Ep {
            predicate: predicate.into(),
            label,
            args: Vec::new(),
            carg: None,
        }
    }

    pub fn with_arg(mut self, role: impl Into<String>, var: Variable) -> Self {
        self.args.push((role.into(), var));
        self
    }

    pub fn arg(&self, role: &str) -> Option<Variable> {
        self.args.iter().find(|(r, _)| r == role).map(|(_, v)| *v)
    }

    pub fn arg0(&self) -> Option<Variable> {
        self.arg("ARG0")
    }

    pub fn set_arg(&mut self, role: &str, var: Variable) {
        match self.args.iter_mut().find(|(r, _)| r == role) {
            Some(slot) => slot.1 = var,
            None => self.args.push((role.to_string(), var)),
        }
    }

    pub fn is_quantifier(&self) -> bool {
        self.predicate.ends_with("_q")
    }
}

/// A `hi qeq lo` handle constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HandleConstraint {
    pub hi: Variable,
    pub lo: Variable,
}

impl HandleConstraint {
    pub fn qeq(hi: Variable, lo: Variable) -> Self {
        HandleConstraint { hi, lo }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mrs {
    pub top: Variable,
    pub index: Variable,
    pub rels: Vec<Ep>,
    pub hcons: Vec<HandleConstraint>,
    pub properties: BTreeMap<Variable, Properties>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MrsError {
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("bad variable `{token}` at byte {offset}")]
    Sort { offset: usize, token: String },
    #[error("invalid MRS: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no unique main verb: {candidates} EPs have ARG0 equal to the index")]
pub struct NoMainVerb {
    pub candidates: usize,
}

impl Mrs {
    pub fn new(top: Variable, index: Variable) -> Self {
        Mrs {
            top,
            index,
            rels: Vec::new(),
            hcons: Vec::new(),
            properties: BTreeMap::new(),
        }
    }

    pub fn properties_of(&self, var: Variable) -> Option<&Properties> {
        self.properties.get(&var)
    }

    pub fn feature(&self, var: Variable, name: &str) -> Option<&str> {
        self.properties.get(&var).and_then(|p| p.get(name))
    }

    /// Every variable mentioned anywhere, in first-mention order.
    pub fn variables(&self) -> Vec<Variable> {
        let mut seen = Vec::new();
        let mut push = |v: Variable| {
            if !seen.contains(&v) {
                seen.push(v);
            }
        };
        push(self.top);
        push(self.index);
        for ep in &self.rels {
            push(ep.label);
            for (_, v) in &ep.args {
                push(*v);
            }
        }
        for hc in &self.hcons {
            push(hc.hi);
            push(hc.lo);
        }
        for v in self.properties.keys() {
            push(*v);
        }
        seen
    }

    pub fn max_id(&self) -> u32 {
        self.variables().iter().map(|v| v.id).max().unwrap_or(0)
    }

    /// A variable of `sort` numbered one past the largest id of any sort.
    pub fn fresh_variable(&self, sort: Sort) -> Variable {
        Variable::new(sort, self.max_id() + 1)
    }

    /// The EP whose ARG0 is the sentential index.
    pub fn main_verb(&self) -> Result<&Ep, NoMainVerb> {
        self.main_verb_position().map(|i| &self.rels[i])
    }

    pub fn main_verb_position(&self) -> Result<usize, NoMainVerb> {
        let hits: Vec<usize> = self
            .rels
            .iter()
            .enumerate()
            .filter(|(_, ep)| ep.arg0() == Some(self.index))
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            _ => Err(NoMainVerb { candidates: hits.len() }),
        }
    }

    pub fn has_predicate(&self, predicate: &str) -> bool {
        self.rels.iter().any(|ep| ep.predicate == predicate)
    }

    pub fn top_qeq_position(&self) -> Option<usize> {
        self.hcons.iter().position(|hc| hc.hi == self.top)
    }

    pub fn validate(&self) -> Result<(), MrsError> {
        let violations = validate::violations(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(MrsError::Validation(violations))
        }
    }

    /// Canonical one-line serialization; fails when the Mrs is invalid.
    pub fn serialize(&self) -> Result<String, MrsError> {
        self.validate()?;
        Ok(self.to_string())
    }
}

/// Free-function form of [`Mrs::serialize`].
pub fn serialize_simple_mrs(m: &Mrs) -> Result<String, MrsError> {
    m.serialize()
}

fn write_quoted(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

impl fmt::Display for Mrs {
    /// Writes the single-line form without validating. Properties are
    /// printed at a variable's first INDEX or role-argument occurrence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut printed: Vec<Variable> = Vec::new();
        let mut out = String::new();
        let mut var_with_props = |out: &mut String, v: Variable| {
            out.push_str(&v.to_string());
            if printed.contains(&v) {
                return;
            }
            printed.push(v);
            if let Some(props) = self.properties.get(&v).filter(|p| !p.is_empty()) {
                out.push_str(" [ ");
                out.push(v.sort.letter());
                for (k, val) in props.iter() {
                    out.push(' ');
                    out.push_str(k);
                    out.push_str(": ");
                    out.push_str(val);
                }
                out.push_str(" ]");
            }
        };

        out.push_str("[ TOP: ");
        out.push_str(&self.top.to_string());
        out.push_str(" INDEX: ");
        var_with_props(&mut out, self.index);
        out.push_str(" RELS: <");
        for ep in &self.rels {
            out.push_str(" [ ");
            out.push_str(&ep.predicate);
            out.push_str(" LBL: ");
            out.push_str(&ep.label.to_string());
            for (role, v) in &ep.args {
                out.push(' ');
                out.push_str(role);
                out.push_str(": ");
                var_with_props(&mut out, *v);
            }
            if let Some(carg) = &ep.carg {
                out.push_str(" CARG: ");
                write_quoted(&mut out, carg);
            }
            out.push_str(" ]");
        }
        out.push_str(" > HCONS: <");
        for hc in &self.hcons {
            out.push_str(&format!(" {} qeq {}", hc.hi, hc.lo));
        }
        out.push_str(" > ]");
        f.write_str(&out)
    }
}
