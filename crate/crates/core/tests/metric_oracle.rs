use lit_core::eval::{evaluate, EvalError, PredictionPair};
use lit_core::pipeline::{ContrastRecord, Label, Status};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Row = (String, u64, u64, u64, u64);

const SPECS: [&str; 4] = ["i;i", "f;p", "m;o", "f;p +pa"];

fn label(rng: &mut StdRng) -> Label {
    *Label::ALL.choose(rng).unwrap()
}

fn synthetic(rng: &mut StdRng) -> (Vec<ContrastRecord>, Vec<PredictionPair>) {
    let pairs = rng.gen_range(1..40);
    let mut records = Vec::new();
    let mut preds = Vec::new();
    for spec in SPECS {
        for p in 0..pairs {
            let ok = rng.gen_bool(0.8);
            records.push(ContrastRecord {
                pair_id: format!("p{p}"),
                spec: spec.to_string(),
                premise_original: "a".into(),
                hypothesis_original: "b".into(),
                premise_transformed: ok.then(|| "a'".into()),
                hypothesis_transformed: ok.then(|| "b'".into()),
                label_original: label(rng),
                label_transformed: if ok { Some(label(rng)) } else { None },
                status: if ok { Status::Ok } else { Status::ParseFailed },
            });
            if rng.gen_bool(0.9) {
                preds.push(PredictionPair {
                    pair_id: format!("p{p}"),
                    spec: spec.to_string(),
                    pred_original: label(rng),
                    pred_contrast: label(rng),
                });
            }
        }
    }
    preds.shuffle(rng);
    (records, preds)
}

/// Row-by-row recount: (spec, n, ori, ctr, consistent) in record spec order.
fn oracle(records: &[ContrastRecord], preds: &[PredictionPair]) -> Result<Vec<Row>, String> {
    let mut out: Vec<Row> = Vec::new();
    for spec in SPECS {
        let mut row = (spec.to_string(), 0, 0, 0, 0);
        let mut mentioned = false;
        for p in preds.iter().filter(|p| p.spec == spec) {
            let r = records
                .iter()
                .find(|r| r.pair_id == p.pair_id && r.spec == p.spec)
                .ok_or("orphan")?;
            mentioned = true;
            if r.status != Status::Ok {
                continue;
            }
            row.1 += 1;
            if p.pred_original == r.label_original {
                row.2 += 1;
            }
            if Some(p.pred_contrast) == r.label_transformed {
                row.3 += 1;
            }
            if p.pred_original == p.pred_contrast {
                row.4 += 1;
            }
        }
        if mentioned {
            if row.1 == 0 {
                return Err(format!("empty {spec}"));
            }
            out.push(row);
        }
    }
    Ok(out)
}

fn observed(records: &[ContrastRecord], preds: &[PredictionPair]) -> Result<Vec<Row>, String> {
    match evaluate(records, preds) {
        Ok(report) => Ok(report
            .rows
            .iter()
            .map(|m| (m.spec.clone(), m.n, m.ori_correct, m.ctr_correct, m.consistent))
            .collect()),
        Err(EvalError::EmptySpec(s)) => Err(format!("empty {s}")),
        Err(e) => Err(e.to_string()),
    }
}

#[test]
fn evaluate_agrees_with_row_by_row_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut compared = 0;
    for _ in 0..1000 {
        let (records, preds) = synthetic(&mut rng);
        let want = oracle(&records, &preds);
        assert_eq!(observed(&records, &preds), want);
        compared += usize::from(want.is_ok());
    }
    assert!(compared > 900);
}

fn relabel(l: Label, perm: &[Label; 3]) -> Label {
    perm[Label::ALL.iter().position(|x| *x == l).unwrap()]
}

#[test]
fn definitional_invariants() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let (records, preds) = synthetic(&mut rng);
        let Ok(base) = evaluate(&records, &preds) else { continue };
        checked += 1;

        let mut perm = Label::ALL;
        perm.shuffle(&mut rng);
        let relabeled: Vec<PredictionPair> = preds
            .iter()
            .map(|p| PredictionPair {
                pred_original: relabel(p.pred_original, &perm),
                pred_contrast: relabel(p.pred_contrast, &perm),
                ..p.clone()
            })
            .collect();
        let r = evaluate(&records, &relabeled).unwrap();
        for (a, b) in base.rows.iter().zip(&r.rows) {
            assert_eq!(a.consistent, b.consistent);
        }

        let new_contrast: Vec<PredictionPair> = preds
            .iter()
            .map(|p| PredictionPair {
                pred_contrast: label(&mut rng),
                ..p.clone()
            })
            .collect();
        let r = evaluate(&records, &new_contrast).unwrap();
        for (a, b) in base.rows.iter().zip(&r.rows) {
            assert_eq!(a.ori_correct, b.ori_correct);
        }

        let new_original: Vec<PredictionPair> = preds
            .iter()
            .map(|p| PredictionPair {
                pred_original: label(&mut rng),
                ..p.clone()
            })
            .collect();
        let r = evaluate(&records, &new_original).unwrap();
        for (a, b) in base.rows.iter().zip(&r.rows) {
            assert_eq!(a.ctr_correct, b.ctr_correct);
        }
    }
}

#[test]
fn identical_prediction_columns_are_fully_consistent() {
    let mut rng = StdRng::seed_from_u64(3);
    let (records, preds) = synthetic(&mut rng);
    let same: Vec<PredictionPair> = preds
        .into_iter()
        .map(|p| PredictionPair {
            pred_contrast: p.pred_original,
            ..p
        })
        .collect();
    for m in evaluate(&records, &same).unwrap().rows {
        assert_eq!(m.consistent, m.n);
        assert_eq!(m.consistency(), 1.0);
    }
}
