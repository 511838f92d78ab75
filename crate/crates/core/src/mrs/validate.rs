use std::collections::BTreeMap;
use std::fmt;

use super::{Mrs, Sort, Variable};

/// One broken structural invariant of an [`Mrs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TopNotHandle(Variable),
    IndexNotEvent(Variable),
    LabelNotHandle {
        ep: usize,
        label: Variable,
    },
    DuplicateRole {
        ep: usize,
        role: String,
    },
    ConstraintNotHandle(Variable),
    /// The same numeric id used with more than one sort.
    SortConflict {
        id: u32,
        sorts: Vec<Sort>,
    },
    TopQeqCount(usize),
    /// A quantifier whose RSTR is missing or is not the `hi` of exactly one qeq.
    QuantifierRestriction {
        ep: usize,
        qeqs: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TopNotHandle(v) => write!(f, "TOP {v} is not a handle"),
            Violation::IndexNotEvent(v) => write!(f, "INDEX {v} is not an event"),
            Violation::LabelNotHandle { ep, label } => write!(f, "EP #{ep} has non-handle label {label}"),
            Violation::DuplicateRole { ep, role } => write!(f, "EP #{ep} repeats role {role}"),
            Violation::ConstraintNotHandle(v) => write!(f, "qeq endpoint {v} is not a handle"),
            Violation::SortConflict { id, sorts } => {
                let letters: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
                write!(f, "id {id} used with sorts {}", letters.join(","))
            }
            Violation::TopQeqCount(n) => write!(f, "expected exactly one qeq from TOP, found {n}"),
            Violation::QuantifierRestriction { ep, qeqs } => {
                write!(f, "quantifier EP #{ep} RSTR is hi of {qeqs} qeqs, expected 1")
            }
        }
    }
}

pub(super) fn violations(m: &Mrs) -> Vec<Violation> {
    let mut out = Vec::new();
    if !m.top.is_handle() {
        out.push(Violation::TopNotHandle(m.top));
    }
    if m.index.sort != Sort::Event {
        out.push(Violation::IndexNotEvent(m.index));
    }
    for (i, ep) in m.rels.iter().enumerate() {
        if !ep.label.is_handle() {
            out.push(Violation::LabelNotHandle { ep: i, label: ep.label });
        }
        let mut seen: Vec<&str> = Vec::new();
        for (role, _) in &ep.args {
            if seen.contains(&role.as_str()) {
                out.push(Violation::DuplicateRole {
                    ep: i,
                    role: role.clone(),
                });
            } else {
                seen.push(role);
            }
        }
    }
    for hc in &m.hcons {
        for v in [hc.hi, hc.lo] {
            if !v.is_handle() {
                out.push(Violation::ConstraintNotHandle(v));
            }
        }
    }

    let mut sorts_by_id: BTreeMap<u32, Vec<Sort>> = BTreeMap::new();
    for v in m.variables() {
        let sorts = sorts_by_id.entry(v.id).or_default();
        if !sorts.contains(&v.sort) {
            sorts.push(v.sort);
        }
    }
    for (id, sorts) in sorts_by_id {
        if sorts.len() > 1 {
            out.push(Violation::SortConflict { id, sorts });
        }
    }

    let top_qeqs = m.hcons.iter().filter(|hc| hc.hi == m.top).count();
    if top_qeqs != 1 {
        out.push(Violation::TopQeqCount(top_qeqs));
    }

    for (i, ep) in m.rels.iter().enumerate() {
        if !ep.is_quantifier() {
            continue;
        }
        let qeqs = ep
            .arg("RSTR")
            .map(|rstr| m.hcons.iter().filter(|hc| hc.hi == rstr).count())
            .unwrap_or(0);
        if qeqs != 1 {
            out.push(Violation::QuantifierRestriction { ep: i, qeqs });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrs::tests::SAW;
    use crate::mrs::{parse_simple_mrs, HandleConstraint};

    fn saw() -> Mrs {
        parse_simple_mrs(SAW).unwrap()
    }

    #[test]
    fn active_example_is_valid() {
        assert!(violations(&saw()).is_empty());
    }

    #[test]
    fn missing_top_qeq() {
        let mut m = saw();
        m.hcons.retain(|hc| hc.hi != m.top);
        assert_eq!(violations(&m), vec![Violation::TopQeqCount(0)]);
    }

    #[test]
    fn two_top_qeqs() {
        let mut m = saw();
        m.hcons.push(HandleConstraint::qeq(m.top, Variable::handle(13)));
        assert_eq!(violations(&m), vec![Violation::TopQeqCount(2)]);
    }

    #[test]
    fn duplicated_role() {
        let mut m = saw();
        m.rels[2].args.push(("ARG1".into(), Variable::instance(9)));
        assert_eq!(
            violations(&m),
            vec![Violation::DuplicateRole {
                ep: 2,
                role: "ARG1".into()
            }]
        );
    }

    #[test]
    fn sort_inconsistent_id_reuse() {
        let mut m = saw();
        // e3 clashes with x3
        m.rels[2].set_arg("ARG2", Variable::event(3));
        assert_eq!(
            violations(&m),
            vec![Violation::SortConflict {
                id: 3,
                sorts: vec![Sort::Instance, Sort::Event]
            }]
        );
    }

    #[test]
    fn unrestricted_quantifier() {
        let mut m = saw();
        m.hcons.retain(|hc| hc.hi != Variable::handle(5));
        assert_eq!(
            violations(&m),
            vec![Violation::QuantifierRestriction { ep: 0, qeqs: 0 }]
        );
    }

    #[test]
    fn non_handle_label_and_index() {
        let mut m = saw();
        m.rels[1].label = Variable::instance(7);
        m.index = Variable::instance(3);
        let v = violations(&m);
        assert!(v.contains(&Violation::IndexNotEvent(Variable::instance(3))));
        assert!(v.contains(&Violation::LabelNotHandle {
            ep: 1,
            label: Variable::instance(7)
        }));
    }
}
