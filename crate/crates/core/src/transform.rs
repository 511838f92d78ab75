//! Phenomenon-specific rewrites over [`Mrs`] values and their composition.
//!
//! Tense, negation, modality, it-cleft and subject/object swap edit the
//! representation. Passive voice shares its MRS with the active sentence,
//! so it is carried as a [`RealizationConstraint`] and enforced when a
//! surface string is chosen.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::mrs::{Ep, HandleConstraint, Mrs, MrsError, NoMainVerb, Properties, Sort, Variable};

pub const ITCLEFT_PREDICATE: &str = "_be_v_itcleft";
pub const MAY_PREDICATE: &str = "_may_v_modal";
pub const NEG_PREDICATE: &str = "neg";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tense {
    Pres,
    Past,
    Fut,
}

impl Tense {
    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Pres => "pres",
            Tense::Past => "past",
            Tense::Fut => "fut",
        }
    }
}

/// Argument slot of the main verb targeted by a rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Arg1,
    Arg2,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Arg1 => "ARG1",
            Role::Arg2 => "ARG2",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One transformation token as written in pair specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    Original,
    Past,
    Present,
    Future,
    May,
    Negation,
    /// Generic it-cleft: ARG1 when available, otherwise ARG2.
    ItCleft,
    ItCleftArg1,
    ItCleftArg2,
    Passive,
    Swap,
    /// Reserved; no rewrite is defined.
    PolarQuestion,
}

impl Transform {
    pub const ALL: [Transform; 12] = [
        Transform::Original,
        Transform::Past,
        Transform::Present,
        Transform::Future,
        Transform::May,
        Transform::Negation,
        Transform::ItCleft,
        Transform::ItCleftArg1,
        Transform::ItCleftArg2,
        Transform::Passive,
        Transform::Swap,
        Transform::PolarQuestion,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Transform::Original => "o",
            Transform::Past => "p",
            Transform::Present => "pr",
            Transform::Future => "f",
            Transform::May => "m",
            Transform::Negation => "neg",
            Transform::ItCleft => "i",
            Transform::ItCleftArg1 => "i1",
            Transform::ItCleftArg2 => "i2",
            Transform::Passive => "pa",
            Transform::Swap => "sw",
            Transform::PolarQuestion => "q",
        }
    }

    pub fn tense(self) -> Option<Tense> {
        match self {
            Transform::Past => Some(Tense::Past),
            Transform::Present => Some(Tense::Pres),
            Transform::Future => Some(Tense::Fut),
            _ => None,
        }
    }

    pub fn is_itcleft(self) -> bool {
        matches!(
            self,
            Transform::ItCleft | Transform::ItCleftArg1 | Transform::ItCleftArg2
        )
    }

    /// Position in the canonical application order sw, neg, tense, m, i, pa.
    fn stage(self) -> u8 {
        match self {
            Transform::Swap => 0,
            Transform::Negation => 1,
            Transform::Past | Transform::Present | Transform::Future => 2,
            Transform::May => 3,
            Transform::ItCleft | Transform::ItCleftArg1 | Transform::ItCleftArg2 => 4,
            Transform::Passive => 5,
            Transform::Original | Transform::PolarQuestion => 6,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown transformation token `{0}`")]
pub struct UnknownToken(pub String);

impl FromStr for Transform {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Transform::ALL
            .into_iter()
            .find(|t| t.token() == s)
            .ok_or_else(|| UnknownToken(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealizationConstraint {
    PassiveRequired,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteResult {
    pub mrs: Mrs,
    pub realization_constraints: BTreeSet<RealizationConstraint>,
    pub applied: Vec<Transform>,
}

impl RewriteResult {
    pub fn unchanged(mrs: Mrs) -> Self {
        RewriteResult {
            mrs,
            realization_constraints: BTreeSet::new(),
            applied: Vec::new(),
        }
    }

    pub fn passive_required(&self) -> bool {
        self.realization_constraints
            .contains(&RealizationConstraint::PassiveRequired)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    NoMainVerb(#[from] NoMainVerb),
    #[error("main verb event {0} carries no TENSE")]
    NotTensed(Variable),
    #[error("main verb has no instance-valued {0}")]
    RoleUnavailable(Role),
    #[error("transformation `{0}` has no rewrite")]
    Unimplemented(Transform),
    #[error(transparent)]
    InvalidInput(#[from] MrsError),
    #[error("`{transform}` failed")]
    Step {
        transform: Transform,
        #[source]
        source: Box<RewriteError>,
    },
}

impl RewriteError {
    /// The underlying rule error, without composition annotations.
    pub fn root(&self) -> &RewriteError {
        match self {
            RewriteError::Step { source, .. } => source.root(),
            other => other,
        }
    }
}

fn finite_clause_properties(tense: &str) -> Properties {
    Properties::from_pairs([
        ("SF", "prop"),
        ("TENSE", tense),
        ("MOOD", "indicative"),
        ("PROG", "-"),
        ("PERF", "-"),
    ])
}

/// The qeq that currently scopes the main verb: the one whose `lo` is the
/// verb's label, else the top qeq. On a plain clause both are the same.
fn scope_qeq(m: &Mrs, verb_label: Variable) -> Option<usize> {
    m.hcons
        .iter()
        .position(|hc| hc.lo == verb_label)
        .or_else(|| m.top_qeq_position())
}

fn instance_role(m: &Mrs, role: Role) -> Result<Variable, RewriteError> {
    let verb = m.main_verb()?;
    verb.arg(role.name())
        .filter(|v| v.sort == Sort::Instance)
        .ok_or(RewriteError::RoleUnavailable(role))
}

pub fn apply_tense(m: &Mrs, tense: Tense) -> Result<Mrs, RewriteError> {
    let event = m.main_verb()?.arg0().expect("main verb has ARG0");
    if m.feature(event, "TENSE").is_none() {
        return Err(RewriteError::NotTensed(event));
    }
    let mut out = m.clone();
    out.properties
        .get_mut(&event)
        .expect("tensed event has properties")
        .set("TENSE", tense.as_str());
    Ok(out)
}

/// Inserts `_be_v_itcleft` focusing the main verb's `which` argument. The
/// copula becomes the new index and takes over the verb's scope slot.
pub fn apply_itcleft(m: &Mrs, which: Role) -> Result<Mrs, RewriteError> {
    let focus = instance_role(m, which)?;
    let verb_label = m.main_verb()?.label;

    let mut out = m.clone();
    let label = out.fresh_variable(Sort::Handle);
    out.rels.push(Ep::new(ITCLEFT_PREDICATE, label));
    let event = out.fresh_variable(Sort::Event);
    let cleft = out.rels.last_mut().expect("just pushed");
    cleft.set_arg("ARG0", event);
    cleft.set_arg("ARG1", focus);
    cleft.set_arg("ARG2", verb_label);
    out.properties.insert(event, finite_clause_properties("pres"));

    if let Some(i) = scope_qeq(&out, verb_label) {
        out.hcons[i].lo = label;
    }
    out.index = event;
    Ok(out)
}

/// Inserts a scopal operator EP whose ARG1 handle is qeq the main verb
/// label and which takes over the verb's scope slot.
fn insert_scopal(m: &Mrs, predicate: &str, event_props: Properties) -> Result<(Mrs, Variable), RewriteError> {
    let verb_label = m.main_verb()?.label;
    let mut out = m.clone();
    let label = out.fresh_variable(Sort::Handle);
    out.rels.push(Ep::new(predicate, label));
    let event = out.fresh_variable(Sort::Event);
    out.rels.last_mut().expect("just pushed").set_arg("ARG0", event);
    let scope_arg = out.fresh_variable(Sort::Handle);
    out.rels.last_mut().expect("just pushed").set_arg("ARG1", scope_arg);
    out.properties.insert(event, event_props);

    if let Some(i) = scope_qeq(&out, verb_label) {
        out.hcons[i].lo = label;
    }
    out.hcons.push(HandleConstraint::qeq(scope_arg, verb_label));
    Ok((out, event))
}

pub fn apply_modality_may(m: &Mrs) -> Result<Mrs, RewriteError> {
    let (mut out, event) = insert_scopal(m, MAY_PREDICATE, finite_clause_properties("pres"))?;
    out.index = event;
    Ok(out)
}

pub fn apply_negation(m: &Mrs) -> Result<Mrs, RewriteError> {
    let (out, _) = insert_scopal(m, NEG_PREDICATE, finite_clause_properties("untensed"))?;
    Ok(out)
}

/// Exchanges ARG1 and ARG2 on the main verb only.
pub fn apply_swap(m: &Mrs) -> Result<Mrs, RewriteError> {
    let subject = instance_role(m, Role::Arg1)?;
    let object = instance_role(m, Role::Arg2)?;
    let mut out = m.clone();
    let at = out.main_verb_position()?;
    out.rels[at].set_arg("ARG1", object);
    out.rels[at].set_arg("ARG2", subject);
    Ok(out)
}

/// Marks the result as needing a passive surface. The representation is
/// untouched; the main verb must have an instance ARG2 to promote.
pub fn require_passive(r: RewriteResult) -> Result<RewriteResult, RewriteError> {
    instance_role(&r.mrs, Role::Arg2)?;
    let mut r = r;
    r.realization_constraints.insert(RealizationConstraint::PassiveRequired);
    r.applied.push(Transform::Passive);
    Ok(r)
}

fn step(transform: Transform) -> impl FnOnce(RewriteError) -> RewriteError {
    move |source| RewriteError::Step {
        transform,
        source: Box::new(source),
    }
}

/// Applies `transforms` in canonical order (sw, neg, tense, m, i) and then
/// attaches realization constraints. The passive precondition is checked
/// before `m` and `i` move the index off the content verb.
pub fn compose(m: &Mrs, transforms: &[Transform]) -> Result<RewriteResult, RewriteError> {
    m.validate()?;
    let mut ordered: Vec<Transform> = transforms.to_vec();
    ordered.sort_by_key(|t| t.stage());

    let mut mrs = m.clone();
    let mut applied = Vec::new();
    let wants_passive = ordered.contains(&Transform::Passive);
    let mut passive_checked = false;

    for t in ordered {
        if wants_passive && !passive_checked && t.stage() >= 3 {
            instance_role(&mrs, Role::Arg2).map_err(step(Transform::Passive))?;
            passive_checked = true;
        }
        let next = match t {
            Transform::Original | Transform::Passive => continue,
            Transform::PolarQuestion => Err(RewriteError::Unimplemented(t)),
            Transform::Swap => apply_swap(&mrs),
            Transform::Negation => apply_negation(&mrs),
            Transform::Past | Transform::Present | Transform::Future => {
                apply_tense(&mrs, t.tense().expect("tense token"))
            }
            Transform::May => apply_modality_may(&mrs),
            Transform::ItCleftArg1 => apply_itcleft(&mrs, Role::Arg1),
            Transform::ItCleftArg2 => apply_itcleft(&mrs, Role::Arg2),
            Transform::ItCleft => match apply_itcleft(&mrs, Role::Arg1) {
                Ok(out) => {
                    applied.push(Transform::ItCleftArg1);
                    mrs = out;
                    continue;
                }
                Err(RewriteError::RoleUnavailable(_)) => {
                    let out = apply_itcleft(&mrs, Role::Arg2).map_err(step(t))?;
                    applied.push(Transform::ItCleftArg2);
                    mrs = out;
                    continue;
                }
                Err(e) => Err(e),
            },
        };
        mrs = next.map_err(step(t))?;
        applied.push(t);
    }

    let mut result = RewriteResult {
        mrs,
        realization_constraints: BTreeSet::new(),
        applied,
    };
    // `pa` sorts at stage 5, so the check above has always run by now.
    if passive_checked {
        result
            .realization_constraints
            .insert(RealizationConstraint::PassiveRequired);
        result.applied.push(Transform::Passive);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrs::tests::{SAW, SAW_ITCLEFT};
    use crate::mrs::{alpha_equal, parse_simple_mrs};

    fn saw() -> Mrs {
        parse_simple_mrs(SAW).unwrap()
    }

    fn intransitive() -> Mrs {
        parse_simple_mrs(
            "[ TOP: h0 INDEX: e2 [ e SF: prop TENSE: pres MOOD: indicative PROG: + PERF: - ] \
             RELS: < [ _a_q LBL: h4 ARG0: x3 [ x PERS: 3 NUM: sg IND: + ] RSTR: h5 BODY: h6 ] \
             [ _woman_n_1 LBL: h7 ARG0: x3 ] [ _mop_v_1 LBL: h1 ARG0: e2 ARG1: x3 ] > \
             HCONS: < h0 qeq h1 h5 qeq h7 > ]",
        )
        .unwrap()
    }

    #[test]
    fn tokens_round_trip() {
        for t in Transform::ALL {
            assert_eq!(t.token().parse::<Transform>(), Ok(t));
        }
        assert_eq!("x".parse::<Transform>(), Err(UnknownToken("x".into())));
    }

    #[test]
    fn itcleft_reproduces_golden_cleft() {
        let out = apply_itcleft(&saw(), Role::Arg1).unwrap();
        assert!(alpha_equal(&out, &parse_simple_mrs(SAW_ITCLEFT).unwrap()));
        assert_eq!(out.index, Variable::event(15));
        let cleft = out.rels.last().unwrap();
        assert_eq!(cleft.label, Variable::handle(14));
        assert_eq!(cleft.arg("ARG2"), Some(Variable::handle(1)));
        out.validate().unwrap();
    }

    #[test]
    fn itcleft_missing_role() {
        assert_eq!(
            apply_itcleft(&intransitive(), Role::Arg2),
            Err(RewriteError::RoleUnavailable(Role::Arg2))
        );
    }

    #[test]
    fn tense_changes_only_the_main_event() {
        let before = saw();
        let after = apply_tense(&before, Tense::Fut).unwrap();
        assert_eq!(after.feature(Variable::event(2), "TENSE"), Some("fut"));
        let mut expected = before.clone();
        expected
            .properties
            .get_mut(&Variable::event(2))
            .unwrap()
            .set("TENSE", "fut");
        assert_eq!(after, expected);
        assert_eq!(apply_tense(&before, Tense::Past).unwrap(), before);
    }

    #[test]
    fn untensed_main_event() {
        let mut m = saw();
        m.properties.remove(&Variable::event(2));
        assert_eq!(
            apply_tense(&m, Tense::Pres),
            Err(RewriteError::NotTensed(Variable::event(2)))
        );
    }

    #[test]
    fn modality_inserts_scopal_ep() {
        let m = saw();
        let out = apply_modality_may(&m).unwrap();
        assert_eq!(out.rels.len(), 6);
        assert_eq!(out.hcons.len(), 4);
        let modal = out.rels.last().unwrap();
        assert_eq!(modal.predicate, MAY_PREDICATE);
        assert_eq!(out.hcons[0], HandleConstraint::qeq(Variable::handle(0), modal.label));
        let arg = modal.arg("ARG1").unwrap();
        assert!(out.hcons.contains(&HandleConstraint::qeq(arg, Variable::handle(1))));
        assert_eq!(out.index, modal.arg0().unwrap());
        out.validate().unwrap();

        let twice = apply_modality_may(&out).unwrap();
        assert_eq!(twice.rels.iter().filter(|ep| ep.predicate == MAY_PREDICATE).count(), 2);
        twice.validate().unwrap();
    }

    #[test]
    fn negation_keeps_index() {
        let out = apply_negation(&saw()).unwrap();
        assert_eq!(out.rels.len(), 6);
        assert_eq!(out.index, Variable::event(2));
        let neg = out.rels.last().unwrap();
        assert_eq!(neg.predicate, NEG_PREDICATE);
        assert_eq!(out.hcons[0].lo, neg.label);
        out.validate().unwrap();
    }

    #[test]
    fn cleft_under_negation_stays_in_scope() {
        let negated = apply_negation(&saw()).unwrap();
        let neg_label = negated.rels.last().unwrap().label;
        let neg_arg = negated.rels.last().unwrap().arg("ARG1").unwrap();
        let out = apply_itcleft(&negated, Role::Arg1).unwrap();
        let cleft_label = out.rels.last().unwrap().label;
        assert!(out
            .hcons
            .contains(&HandleConstraint::qeq(Variable::handle(0), neg_label)));
        assert!(out.hcons.contains(&HandleConstraint::qeq(neg_arg, cleft_label)));
        out.validate().unwrap();
    }

    #[test]
    fn swap_is_an_involution() {
        let m = saw();
        let once = apply_swap(&m).unwrap();
        assert_eq!(once.rels[2].arg("ARG1"), Some(Variable::instance(9)));
        assert_eq!(once.rels[2].arg("ARG2"), Some(Variable::instance(3)));
        assert!(alpha_equal(&apply_swap(&once).unwrap(), &m));
        assert_eq!(
            apply_swap(&intransitive()),
            Err(RewriteError::RoleUnavailable(Role::Arg2))
        );
    }

    #[test]
    fn passive_requires_object() {
        let r = require_passive(RewriteResult::unchanged(saw())).unwrap();
        assert!(r.passive_required());
        assert_eq!(r.applied, vec![Transform::Passive]);
        assert_eq!(r.mrs, saw());
        assert_eq!(
            require_passive(RewriteResult::unchanged(intransitive())),
            Err(RewriteError::RoleUnavailable(Role::Arg2))
        );
    }

    #[test]
    fn compose_future_then_cleft() {
        let r = compose(&saw(), &[Transform::ItCleftArg1, Transform::Future]).unwrap();
        assert_eq!(r.applied, vec![Transform::Future, Transform::ItCleftArg1]);
        assert_eq!(r.mrs.feature(Variable::event(2), "TENSE"), Some("fut"));
        assert_eq!(r.mrs.feature(r.mrs.index, "TENSE"), Some("pres"));
        assert_eq!(r.mrs.main_verb().unwrap().predicate, ITCLEFT_PREDICATE);
    }

    #[test]
    fn compose_identity() {
        let r = compose(&saw(), &[Transform::Original]).unwrap();
        assert!(alpha_equal(&r.mrs, &saw()));
        assert!(r.applied.is_empty());
        assert!(r.realization_constraints.is_empty());
    }

    #[test]
    fn compose_passive_after_cleft() {
        let r = compose(&saw(), &[Transform::ItCleftArg1, Transform::Passive]).unwrap();
        assert!(r.passive_required());
        assert_eq!(r.applied, vec![Transform::ItCleftArg1, Transform::Passive]);
        // standalone require_passive sees the copula, which has no instance ARG2
        let cleft = compose(&saw(), &[Transform::ItCleftArg1]).unwrap();
        assert!(require_passive(cleft).is_err());
    }

    #[test]
    fn generic_cleft_falls_back_to_object() {
        let r = compose(&saw(), &[Transform::ItCleft]).unwrap();
        assert_eq!(r.applied, vec![Transform::ItCleftArg1]);
        let r = compose(&intransitive(), &[Transform::ItCleft]).unwrap();
        assert_eq!(r.applied, vec![Transform::ItCleftArg1]);
        let mut no_subject = saw();
        no_subject.rels[2].args.retain(|(role, _)| role != "ARG1");
        let r = compose(&no_subject, &[Transform::ItCleft]).unwrap();
        assert_eq!(r.applied, vec![Transform::ItCleftArg2]);
    }

    #[test]
    fn compose_annotates_failures() {
        let err = compose(&intransitive(), &[Transform::Future, Transform::Passive]).unwrap_err();
        assert!(matches!(
            err,
            RewriteError::Step {
                transform: Transform::Passive,
                ..
            }
        ));
        assert_eq!(err.root(), &RewriteError::RoleUnavailable(Role::Arg2));
        let err = compose(&saw(), &[Transform::PolarQuestion]).unwrap_err();
        assert_eq!(err.root(), &RewriteError::Unimplemented(Transform::PolarQuestion));
    }

    #[test]
    fn compose_rejects_invalid_input() {
        let mut m = saw();
        m.hcons.clear();
        assert!(matches!(compose(&m, &[]), Err(RewriteError::InvalidInput(_))));
    }
}
