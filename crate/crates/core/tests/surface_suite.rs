mod common;

use lit_core::pipeline::{transform_pair, transform_sentence, Label, NliInstance, PairSpec, SentenceOutcome, Status};
use lit_core::realization::UnigramScorer;
use lit_core::transform::Transform;

fn stack(tokens: &str) -> Vec<Transform> {
    tokens.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

fn surface(sentence: &str, tokens: &str) -> SentenceOutcome {
    let mut adapter = common::adapter();
    transform_sentence(sentence, &stack(tokens), &mut adapter, &mut UnigramScorer::bundled()).unwrap()
}

fn transformed(s: &str) -> SentenceOutcome {
    SentenceOutcome::Transformed {
        surface: s.to_string(),
        applied: Vec::new(),
    }
}

fn text(o: SentenceOutcome) -> Option<String> {
    match o {
        SentenceOutcome::Transformed { surface, .. } => Some(surface),
        SentenceOutcome::Failed(_) => None,
    }
}

#[test]
fn every_rewrite_row_reproduces_its_surface() {
    let rows = common::rewrite_rows();
    assert_eq!(rows.len(), 25);
    let mut realizer = common::realizer();
    let mut wrong = Vec::new();
    for (original, tokens, expected) in &rows {
        let got = text(realizer.transform_sentence(original, &stack(tokens)).unwrap());
        if got.as_deref() != Some(expected.as_str()) {
            wrong.push(format!("{original} [{tokens}]: got {got:?}, want {expected:?}"));
        }
    }
    assert!(wrong.is_empty(), "{}", wrong.join("\n"));
}

#[test]
fn subject_cleft_of_the_running_example() {
    assert_eq!(
        text(surface("Alice saw Bob.", "i1")).as_deref(),
        Some("It is Alice who saw Bob.")
    );
    assert_eq!(
        text(surface("A boy is blowing bubbles", "i1")).as_deref(),
        Some("It is a boy who is blowing bubbles.")
    );
}

#[test]
fn generic_cleft_reports_the_role_used() {
    let SentenceOutcome::Transformed { applied, .. } = surface("Alice is driving.", "i") else {
        panic!("no surface");
    };
    assert_eq!(applied, vec![Transform::ItCleftArg1]);
    let SentenceOutcome::Transformed { applied, .. } = surface("Alice is driving a car.", "f pa") else {
        panic!("no surface");
    };
    assert_eq!(applied, vec![Transform::Future, Transform::Passive]);
}

#[test]
fn failure_statuses() {
    assert_eq!(
        surface("Zebras juggle.", "f"),
        SentenceOutcome::Failed(Status::ParseFailed)
    );
    assert_eq!(
        surface("Never recorded.", "i"),
        SentenceOutcome::Failed(Status::ParseFailed)
    );
    assert_eq!(
        surface("Alice is driving.", "pa"),
        SentenceOutcome::Failed(Status::RuleFailed)
    );
    assert_eq!(
        surface("Alice saw Bob.", "q"),
        SentenceOutcome::Failed(Status::RuleFailed)
    );
    assert_eq!(
        surface("Alice saw Bob.", "m"),
        SentenceOutcome::Failed(Status::GenerationFailed)
    );
    assert_eq!(surface("Zebras juggle.", ""), transformed("Zebras juggle."));
}

fn seed_pair() -> NliInstance {
    NliInstance {
        pair_id: "seed".into(),
        premise: "Alice is driving a car.".into(),
        hypothesis: "Alice is playing piano.".into(),
        label: Label::Contradiction,
        genre: None,
    }
}

fn run(spec: &str) -> (Option<String>, Option<String>, Option<Label>, Status) {
    let spec: PairSpec = spec.parse().unwrap();
    let mut adapter = common::adapter();
    let r = transform_pair(&seed_pair(), &spec, &mut adapter, &mut UnigramScorer::bundled()).unwrap();
    assert_eq!(r.spec, spec.canonical_name);
    (
        r.premise_transformed,
        r.hypothesis_transformed,
        r.label_transformed,
        r.status,
    )
}

fn ok(p: &str, h: &str, l: Label) -> (Option<String>, Option<String>, Option<Label>, Status) {
    (Some(p.into()), Some(h.into()), Some(l), Status::Ok)
}

#[test]
fn seed_pair_under_each_spec() {
    use Label::*;
    assert_eq!(
        run("o;o"),
        ok("Alice is driving a car.", "Alice is playing piano.", Contradiction)
    );
    assert_eq!(
        run("i;i"),
        ok(
            "It is Alice who is driving a car.",
            "It is Alice who is playing piano.",
            Contradiction
        )
    );
    assert_eq!(
        run("pa;pa"),
        ok(
            "A car is being driven by Alice.",
            "Piano is being played by Alice.",
            Contradiction
        )
    );
    assert_eq!(
        run("f;p"),
        ok("Alice will be driving a car.", "Alice was playing piano.", Neutral)
    );
    assert_eq!(
        run("m;o"),
        ok("Alice may be driving a car.", "Alice is playing piano.", Neutral)
    );
    assert_eq!(
        run("f;p +i"),
        ok(
            "It is Alice who will be driving a car.",
            "It is Alice who was playing piano.",
            Neutral
        )
    );
    // The hypothesis keeps the past tense of its base token.
    assert_eq!(
        run("f;p +pa"),
        ok(
            "A car will be driven by Alice.",
            "Piano was being played by Alice.",
            Neutral
        )
    );
    let (p, h, l, status) = run("neg;o");
    assert_eq!(status, Status::NoLabelRule);
    assert_eq!(l, None);
    assert_eq!(p.as_deref(), Some("Alice is not driving a car."));
    assert_eq!(h.as_deref(), Some("Alice is playing piano."));
}
