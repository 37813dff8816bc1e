//! Test-time evaluation, cross-validated lift selection and sensitivity sweeps.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{stratified_folds, Dataset, LabelVector};
use crate::error::{Error, Result};
use crate::learner::{learn_with_report, LearnerConfig};
use crate::lift::LiftFunction;
use crate::metrics::{score, standard_confusion, ConfusionMatrix};
use crate::model::{model_stats, ModelStats, RuleModel};

pub const EVAL_BETA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelReport {
    pub name: String,
    pub confusion: ConfusionMatrix,
    pub hamming_accuracy: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub hamming_accuracy: f64,
    pub micro_f: f64,
    pub macro_f: f64,
    pub subset_accuracy: f64,
    pub beta: f64,
    pub instances: usize,
    pub labels: usize,
    pub totals: ConfusionMatrix,
    pub per_label: Vec<LabelReport>,
}

/// Scores complete predictions against the ground truth of `truth`.
pub fn evaluate_predictions(truth: &Dataset, predictions: &[LabelVector], beta: f64) -> Result<EvaluationReport> {
    if predictions.len() != truth.len() {
        return Err(Error::Input(format!(
            "{} predictions for {} instances",
            predictions.len(),
            truth.len()
        )));
    }
    let n = truth.label_count();
    let mut per = vec![ConfusionMatrix::default(); n];
    let mut exact = 0usize;
    for (inst, pred) in truth.instances().iter().zip(predictions) {
        if pred.len() != n {
            return Err(Error::Input(format!(
                "prediction has {} labels, expected {n}",
                pred.len()
            )));
        }
        for (l, m) in per.iter_mut().enumerate() {
            *m += standard_confusion(inst.labels.get(l), pred.get(l));
        }
        exact += usize::from(inst.labels == *pred);
    }
    let totals: ConfusionMatrix = per.iter().copied().sum();
    let macro_f = if n == 0 {
        0.0
    } else {
        per.iter().map(|m| m.f_measure(beta)).sum::<f64>() / n as f64
    };
    let per_label = per
        .iter()
        .zip(truth.label_names())
        .map(|(m, name)| LabelReport {
            name: name.clone(),
            confusion: *m,
            hamming_accuracy: m.hamming_accuracy(),
            f_measure: m.f_measure(beta),
        })
        .collect();
    let subset_accuracy = if truth.is_empty() {
        0.0
    } else {
        exact as f64 / truth.len() as f64
    };
    Ok(EvaluationReport {
        hamming_accuracy: totals.hamming_accuracy(),
        micro_f: totals.f_measure(beta),
        macro_f,
        subset_accuracy,
        beta,
        instances: truth.len(),
        labels: n,
        totals,
        per_label,
    })
}

pub fn evaluate(model: &RuleModel, test: &Dataset) -> Result<EvaluationReport> {
    evaluate_with_beta(model, test, EVAL_BETA)
}

pub fn evaluate_with_beta(model: &RuleModel, test: &Dataset, beta: f64) -> Result<EvaluationReport> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Config(format!("beta must be finite and >= 0, got {beta}")));
    }
    if test.label_names() != model.label_names() {
        return Err(Error::Input("dataset labels differ from the model labels".into()));
    }
    let predictions = model.predict_dataset(test)?;
    evaluate_predictions(test, &predictions, beta)
}

/// Per-label majority value of `train`; ties go to absent.
pub fn majority_labels(train: &Dataset) -> LabelVector {
    let n = train.label_count();
    let mut ones = vec![0usize; n];
    for inst in train.instances() {
        for (l, c) in ones.iter_mut().enumerate() {
            *c += usize::from(inst.labels.get(l));
        }
    }
    LabelVector::new(ones.iter().map(|&c| 2 * c > train.len()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftSelection {
    pub selected: LiftFunction,
    /// Mean held-out score per candidate, in candidate order. Empty when there
    /// was nothing to choose from.
    pub scores: Vec<f64>,
}

fn cv_score(train: &Dataset, folds: &[Vec<usize>], config: &LearnerConfig) -> Result<f64> {
    let per_fold: Vec<f64> = folds
        .par_iter()
        .enumerate()
        .map(|(f, held_out)| {
            let mut rest: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect();
            rest.sort_unstable();
            let model = learn_with_report(&train.subset(&rest), config)?.0;
            let test = train.subset(held_out);
            let preds = model.predict_dataset(&test)?;
            let mut per = vec![ConfusionMatrix::default(); test.label_count()];
            for (inst, p) in test.instances().iter().zip(&preds) {
                for (l, m) in per.iter_mut().enumerate() {
                    *m += standard_confusion(inst.labels.get(l), p.get(l));
                }
            }
            Ok(score(&config.heuristic, &per))
        })
        .collect::<Result<_>>()?;
    Ok(per_fold.iter().sum::<f64>() / per_fold.len() as f64)
}

/// Picks the candidate lift with the best mean k-fold score of the configured
/// heuristic. Ties (within 1e-12) go to the larger lift at head size 2, then to
/// the earlier candidate.
pub fn select_lift(
    train: &Dataset,
    candidates: &[LiftFunction],
    config: &LearnerConfig,
    k: usize,
) -> Result<LiftSelection> {
    if candidates.is_empty() {
        return Err(Error::Config("no lift candidates given".into()));
    }
    let n = train.label_count();
    for c in candidates {
        c.validate(n)?;
    }
    if candidates.len() == 1 {
        return Ok(LiftSelection {
            selected: candidates[0].clone(),
            scores: Vec::new(),
        });
    }
    let folds = stratified_folds(train, k, config.seed)?;
    let scores: Vec<f64> = candidates
        .iter()
        .map(|lift| {
            let cfg = LearnerConfig {
                lift: lift.clone(),
                ..config.clone()
            };
            cv_score(train, &folds, &cfg)
        })
        .collect::<Result<_>>()?;
    let pair = n.min(2);
    let mut best = 0;
    for i in 1..candidates.len() {
        let (s, b) = (scores[i], scores[best]);
        if s > b + 1e-12 {
            best = i;
        } else if (s - b).abs() <= 1e-12 && candidates[i].lift_at(pair, n)? > candidates[best].lift_at(pair, n)? {
            best = i;
        }
    }
    Ok(LiftSelection {
        selected: candidates[best].clone(),
        scores,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lift: String,
    pub stats: ModelStats,
    pub report: EvaluationReport,
    /// Training time only, dataset loading excluded.
    pub wall_time_ms: f64,
    pub evaluations: u64,
    pub head_searches: u64,
    pub max_evaluations_per_search: usize,
}

/// Trains and evaluates one model per grid point, in grid order.
pub fn sweep(
    train: &Dataset,
    test: &Dataset,
    grid: &[LiftFunction],
    config: &LearnerConfig,
    beta: f64,
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    let mut out = Vec::with_capacity(grid.len());
    for lift in grid {
        let cfg = LearnerConfig {
            lift: lift.clone(),
            ..config.clone()
        };
        let start = Instant::now();
        let (model, learn) = learn_with_report(train, &cfg)?;
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        out.push(SweepPoint {
            lift: lift.to_string(),
            stats: model_stats(&model),
            report: evaluate_with_beta(&model, test, beta)?,
            wall_time_ms,
            evaluations: learn.evaluations,
            head_searches: learn.head_searches,
            max_evaluations_per_search: learn.max_evaluations_per_search,
        });
    }
    Ok(out)
}

pub fn to_jsonl(points: &[SweepPoint]) -> Result<String> {
    let mut s = String::new();
    for p in points {
        s.push_str(&serde_json::to_string(p)?);
        s.push('\n');
    }
    Ok(s)
}

/// One lift spec per line; blank lines and `#` comments are skipped.
pub fn parse_grid(text: &str) -> Result<Vec<LiftFunction>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(no, l)| l.parse().map_err(|e: Error| Error::parse(no, e.to_string())))
        .collect()
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties. `None` when either
/// series is constant or the lengths differ.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Instance, Value};
    use crate::head_search::Head;
    use crate::model::Rule;

    fn labels_only(rows: &[&[u8]]) -> Dataset {
        let n = rows[0].len();
        Dataset::new(
            vec![],
            (0..n).map(|i| format!("l{i}")).collect(),
            rows.iter()
                .map(|r| Instance {
                    values: vec![],
                    labels: LabelVector::new(r.iter().map(|&b| b == 1).collect()),
                })
                .collect(),
        )
        .unwrap()
    }

    fn lv(bits: &[u8]) -> LabelVector {
        LabelVector::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn perfect_predictions() {
        let ds = labels_only(&[&[1, 0], &[0, 1]]);
        let r = evaluate_predictions(&ds, &[lv(&[1, 0]), lv(&[0, 1])], 1.0).unwrap();
        assert_eq!(
            (r.hamming_accuracy, r.subset_accuracy, r.micro_f, r.macro_f),
            (1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn all_absent() {
        let ds = labels_only(&[&[0, 0], &[0, 0]]);
        let r = evaluate_predictions(&ds, &[lv(&[0, 0]), lv(&[0, 0])], 1.0).unwrap();
        assert_eq!(
            (r.hamming_accuracy, r.subset_accuracy, r.micro_f, r.macro_f),
            (1.0, 1.0, 0.0, 0.0)
        );
    }

    #[test]
    fn one_wrong_label() {
        let ds = labels_only(&[&[1, 0], &[0, 1]]);
        let r = evaluate_predictions(&ds, &[lv(&[1, 0]), lv(&[0, 0])], 1.0).unwrap();
        assert_eq!(r.hamming_accuracy, 0.75);
        assert_eq!(r.subset_accuracy, 0.5);
    }

    #[test]
    fn evaluate_uses_model() {
        let ds = labels_only(&[&[1, 0], &[1, 1]]);
        let rule = Rule {
            body: vec![],
            head: Head::present(&[0]).unwrap(),
            stats: vec![(2, 0)],
        };
        let model = RuleModel::new(vec![], ds.label_names().to_vec(), vec![rule], String::new()).unwrap();
        let r = evaluate(&model, &ds).unwrap();
        assert_eq!(r.hamming_accuracy, 0.75);
        let other = Dataset::new(
            vec![Attribute::numeric("x")],
            ds.label_names().to_vec(),
            vec![Instance {
                values: vec![Value::Numeric(0.0)],
                labels: lv(&[0, 0]),
            }],
        )
        .unwrap();
        assert!(matches!(evaluate(&model, &other), Err(Error::Input(_))));
    }

    #[test]
    fn majority() {
        let ds = labels_only(&[&[1, 0], &[1, 1], &[0, 0]]);
        assert_eq!(majority_labels(&ds), lv(&[1, 0]));
    }

    #[test]
    fn single_candidate_selected() {
        let ds = labels_only(&[&[1, 0], &[1, 1], &[0, 0]]);
        let sel = select_lift(&ds, &[LiftFunction::Kln { k: 0.2 }], &LearnerConfig::default(), 2).unwrap();
        assert_eq!(sel.selected, LiftFunction::Kln { k: 0.2 });
        assert!(select_lift(&ds, &[], &LearnerConfig::default(), 2).is_err());
    }

    #[test]
    fn ties_prefer_larger_lift() {
        // no features: every candidate learns the same empty-body rules
        let ds = labels_only(&[&[1, 0], &[1, 0], &[1, 0], &[0, 1], &[1, 0], &[1, 0]]);
        let cands = [LiftFunction::Identity, LiftFunction::Kln { k: 0.2 }];
        let sel = select_lift(&ds, &cands, &LearnerConfig::default(), 3).unwrap();
        assert_eq!(sel.scores[0], sel.scores[1]);
        assert_eq!(sel.selected, LiftFunction::Kln { k: 0.2 });
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("# grid\nidentity\n\nkln:k=0.1\n").unwrap();
        assert_eq!(g, vec![LiftFunction::Identity, LiftFunction::Kln { k: 0.1 }]);
        assert!(matches!(parse_grid("identity\nbogus"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[1.0, 5.0, 9.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0], &[1.0, 1.0]), None);
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(r > 0.9 && r < 1.0);
    }

    #[test]
    fn sweep_single_point() {
        let ds = labels_only(&[&[1, 0], &[1, 1], &[0, 0]]);
        let pts = sweep(&ds, &ds, &[LiftFunction::Identity], &LearnerConfig::default(), 1.0).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(to_jsonl(&pts).unwrap().lines().count(), 1);
    }
}
