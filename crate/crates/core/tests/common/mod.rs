#![allow(dead_code)]

use liftrule::data::{Attribute, CoverageState, Dataset, Instance, LabelVector, Value};
use liftrule::head_search::{Head, LabelAssignment};
use liftrule::lift::LiftFunction;
use liftrule::metrics::{Averaging, HeuristicSpec};
use liftrule::model::{Condition, Rule, RuleModel};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels_only(rows: &[Vec<u8>]) -> Dataset {
    let n = rows.first().map_or(0, Vec::len);
    Dataset::new(
        vec![],
        (1..=n).map(|i| format!("y{i}")).collect(),
        rows.iter()
            .map(|r| Instance {
                values: vec![],
                labels: LabelVector::new(r.iter().map(|&b| b == 1).collect()),
            })
            .collect(),
    )
    .unwrap()
}

/// Six instances over four labels; the last three are the ones a body covers.
pub fn toy_rows() -> Vec<Vec<u8>> {
    vec![
        vec![0, 1, 1, 0],
        vec![1, 1, 1, 1],
        vec![0, 0, 1, 0],
        vec![0, 1, 1, 0],
        vec![1, 1, 0, 0],
        vec![1, 0, 0, 0],
    ]
}

pub const TOY_COVERED: [usize; 3] = [3, 4, 5];

pub struct SearchCase {
    pub ds: Dataset,
    pub cov: CoverageState,
    pub covered: Vec<usize>,
}

/// Random labels-only search problem with partial coverage and a random body.
pub fn random_case<R: Rng>(rng: &mut R, max_m: usize, max_n: usize) -> SearchCase {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let density: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.95)).collect();
    let rows: Vec<Vec<u8>> = (0..m)
        .map(|_| density.iter().map(|&d| u8::from(rng.gen_bool(d))).collect())
        .collect();
    let ds = labels_only(&rows);
    let mut cov = CoverageState::for_dataset(&ds);
    let covered_rate = rng.gen_range(0.0..0.6);
    for i in 0..m {
        for l in 0..n {
            if rng.gen_bool(covered_rate) {
                cov.mark(i, l, rng.gen_bool(0.5));
            }
        }
    }
    let mut covered: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.7)).collect();
    if covered.is_empty() {
        covered.push(rng.gen_range(0..m));
    }
    SearchCase { ds, cov, covered }
}

pub fn random_lift<R: Rng>(rng: &mut R, n: usize) -> LiftFunction {
    match rng.gen_range(0..4) {
        0 => LiftFunction::Identity,
        1 => LiftFunction::Kln {
            k: rng.gen_range(0.0..1.0),
        },
        2 => LiftFunction::Peak {
            peak: rng.gen_range(1..=n),
            max_lift: rng.gen_range(1.0..1.5),
            curvature: rng.gen_range(0.3..3.0),
        },
        _ => {
            let mut t = vec![1.0];
            t.extend((1..n).map(|_| rng.gen_range(0.7..1.6)));
            LiftFunction::Table(t)
        }
    }
}

/// Macro-averaged or precision objectives, the ones exact under decomposition.
pub fn random_decomposable<R: Rng>(rng: &mut R) -> HeuristicSpec {
    match rng.gen_range(0..4) {
        0 => HeuristicSpec::hamming(Averaging::Macro),
        1 => HeuristicSpec::f_measure(0.5, Averaging::Macro).unwrap(),
        2 => HeuristicSpec::f_measure(1.0, Averaging::Macro).unwrap(),
        _ => HeuristicSpec::precision(Averaging::Macro),
    }
}

const NAMES: &[&str] = &["a", "x y", "it's", "b,c", "<-", "p=q", "w\\z", "1.5", "Class5", "true"];

pub fn random_model<R: Rng>(rng: &mut R) -> RuleModel {
    let attr_count = rng.gen_range(0..5);
    let mut names: Vec<&str> = NAMES.to_vec();
    names.shuffle(rng);
    let schema: Vec<Attribute> = (0..attr_count)
        .map(|i| {
            let name = format!("{}{i}", names[i]);
            if rng.gen_bool(0.5) {
                Attribute::numeric(name)
            } else {
                let k = rng.gen_range(1..4);
                Attribute::nominal(name, (0..k).map(|v| format!("{} v{v}", names[(i + v + 1) % names.len()])).collect())
                    .unwrap()
            }
        })
        .collect();
    let n = rng.gen_range(1..6);
    let labels: Vec<String> = (0..n).map(|l| format!("{}L{l}", names[(l + 5) % names.len()])).collect();
    let rule_count = rng.gen_range(0..50);
    let rules = (0..rule_count)
        .map(|_| {
            let mut assignments = Vec::new();
            for l in 0..n {
                if rng.gen_bool(0.5) {
                    assignments.push(LabelAssignment::new(l, rng.gen_bool(0.6)));
                }
            }
            if assignments.is_empty() {
                assignments.push(LabelAssignment::new(rng.gen_range(0..n), true));
            }
            let head = Head::new(assignments).unwrap();
            let body = (0..rng.gen_range(0..4))
                .map(|_| random_condition(rng, &schema, n))
                .collect();
            let stats = (0..head.len())
                .map(|_| (rng.gen_range(1..500), rng.gen_range(0..500)))
                .collect();
            Rule { body, head, stats }
        })
        .collect();
    RuleModel::new(schema, labels, rules, format!("{{\"seed\":{}}}", rng.gen::<u32>())).unwrap()
}

fn random_condition<R: Rng>(rng: &mut R, schema: &[Attribute], n: usize) -> Condition {
    if schema.is_empty() || rng.gen_bool(0.25) {
        return Condition::LabelTest {
            label: rng.gen_range(0..n),
            present: rng.gen_bool(0.5),
        };
    }
    let attr = rng.gen_range(0..schema.len());
    match &schema[attr].kind {
        liftrule::data::AttributeKind::Nominal(values) => Condition::NominalEq {
            attr,
            value: rng.gen_range(0..values.len()) as u32,
        },
        liftrule::data::AttributeKind::Numeric => {
            let threshold = rng.gen_range(-1e3..1e3) / rng.gen_range(1.0..97.0);
            if rng.gen_bool(0.5) {
                Condition::NumericLeq { attr, threshold }
            } else {
                Condition::NumericGt { attr, threshold }
            }
        }
    }
}

pub fn numeric_row(values: &[f64]) -> Vec<Value> {
    values.iter().map(|&v| Value::Numeric(v)).collect()
}
