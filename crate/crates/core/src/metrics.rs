//! Confusion matrices, micro/macro aggregation and the bipartition measures
//! used both as training heuristics and as test-time metrics.
//!
//! Two counting rules exist. At training time a rule's prediction is compared
//! with the truth and every *correct* prediction counts as a true positive,
//! whatever the label's value; labels the rule abstains on count as TN when
//! absent and FN when present. At test time the usual counting applies.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::data::{CoverageState, Dataset};
use crate::error::{Error, Result};
use crate::head_search::Head;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp as f64, (self.tp + self.fp) as f64)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp as f64, (self.tp + self.fn_) as f64)
    }

    pub fn hamming_accuracy(&self) -> f64 {
        ratio((self.tp + self.tn) as f64, self.total() as f64)
    }

    pub fn f_measure(&self, beta: f64) -> f64 {
        let b2 = beta * beta;
        let num = (1.0 + b2) * self.tp as f64;
        ratio(num, num + b2 * self.fn_ as f64 + self.fp as f64)
    }
}

/// 0/0 resolves to 0.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, rhs: Self) -> Self {
        ConfusionMatrix {
            tp: self.tp + rhs.tp,
            fp: self.fp + rhs.fp,
            tn: self.tn + rhs.tn,
            fn_: self.fn_ + rhs.fn_,
        }
    }
}

impl AddAssign for ConfusionMatrix {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for ConfusionMatrix {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionMatrix::default(), Add::add)
    }
}

impl<'a> Sum<&'a ConfusionMatrix> for ConfusionMatrix {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TP={} FP={} TN={} FN={}",
            self.tp, self.fp, self.tn, self.fn_
        )
    }
}

/// Training-time atomic confusion matrix of one (instance, label) pair.
pub fn atomic_confusion(truth: bool, prediction: Option<bool>) -> ConfusionMatrix {
    match prediction {
        Some(p) if p == truth => ConfusionMatrix::new(1, 0, 0, 0),
        Some(_) => ConfusionMatrix::new(0, 1, 0, 0),
        None if truth => ConfusionMatrix::new(0, 0, 0, 1),
        None => ConfusionMatrix::new(0, 0, 1, 0),
    }
}

/// Test-time (standard) atomic confusion matrix.
pub fn standard_confusion(truth: bool, prediction: bool) -> ConfusionMatrix {
    match (truth, prediction) {
        (true, true) => ConfusionMatrix::new(1, 0, 0, 0),
        (false, true) => ConfusionMatrix::new(0, 1, 0, 0),
        (false, false) => ConfusionMatrix::new(0, 0, 1, 0),
        (true, false) => ConfusionMatrix::new(0, 0, 0, 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "kebab-case")]
pub enum Measure {
    Precision,
    HammingAccuracy,
    FMeasure { beta: f64 },
}

impl Measure {
    pub fn evaluate(&self, c: &ConfusionMatrix) -> f64 {
        match *self {
            Measure::Precision => c.precision(),
            Measure::HammingAccuracy => c.hamming_accuracy(),
            Measure::FMeasure { beta } => c.f_measure(beta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Micro,
    Macro,
}

/// A bipartition measure together with its aggregation over labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSpec {
    #[serde(flatten)]
    pub measure: Measure,
    pub averaging: Averaging,
}

pub const DEFAULT_BETA: f64 = 0.5;

impl HeuristicSpec {
    pub fn new(measure: Measure, averaging: Averaging) -> Result<Self> {
        if let Measure::FMeasure { beta } = measure {
            if !beta.is_finite() || beta < 0.0 {
                return Err(Error::Config(format!(
                    "F-measure beta must be finite and non-negative, got {beta}"
                )));
            }
        }
        Ok(HeuristicSpec { measure, averaging })
    }

    pub fn precision(averaging: Averaging) -> Self {
        HeuristicSpec {
            measure: Measure::Precision,
            averaging,
        }
    }

    pub fn hamming(averaging: Averaging) -> Self {
        HeuristicSpec {
            measure: Measure::HammingAccuracy,
            averaging,
        }
    }

    pub fn f_measure(beta: f64, averaging: Averaging) -> Result<Self> {
        Self::new(Measure::FMeasure { beta }, averaging)
    }
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let avg = match self.averaging {
            Averaging::Micro => "micro",
            Averaging::Macro => "macro",
        };
        match self.measure {
            Measure::Precision => write!(f, "{avg} precision"),
            Measure::HammingAccuracy => write!(f, "{avg} hamming-accuracy"),
            Measure::FMeasure { beta } => write!(f, "{avg} f-measure(beta={beta})"),
        }
    }
}

/// Aggregates per-label matrices into one heuristic value in [0, 1].
///
/// Micro applies the measure to the cell-wise sum; macro averages the per-label
/// values, summing in slice order. An empty slice scores 0.
pub fn score(spec: &HeuristicSpec, matrices: &[ConfusionMatrix]) -> f64 {
    if matrices.is_empty() {
        return 0.0;
    }
    match spec.averaging {
        Averaging::Micro => spec.measure.evaluate(&matrices.iter().sum()),
        Averaging::Macro => {
            let total: f64 = matrices.iter().map(|c| spec.measure.evaluate(c)).sum();
            total / matrices.len() as f64
        }
    }
}

/// Per-label training-time confusion matrices of `head` applied to the
/// instances in `covered`, over every instance of the dataset.
///
/// Pairs already covered in `cov` are skipped entirely. Labels outside the head
/// and instances outside `covered` count as abstentions.
pub fn head_confusions(
    head: &Head,
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
) -> Vec<ConfusionMatrix> {
    let n = ds.label_count();
    let mut in_scope = vec![false; ds.len()];
    for &i in covered {
        in_scope[i] = true;
    }
    let mut prediction: Vec<Option<bool>> = vec![None; n];
    for a in head.assignments() {
        prediction[a.label] = Some(a.present);
    }
    let mut out = vec![ConfusionMatrix::default(); n];
    for i in 0..ds.len() {
        for (label, cell) in out.iter_mut().enumerate() {
            if cov.is_covered(i, label) {
                continue;
            }
            let pred = if in_scope[i] { prediction[label] } else { None };
            *cell += atomic_confusion(ds.truth(i, label), pred);
        }
    }
    out
}
