//! Search for the multi-label head with the greatest lifted heuristic value.
//!
//! Every (label, value) pair is evaluated once on the training instances. The
//! search then grows a head by repeatedly adding the best remaining single-label
//! candidate, scoring each prefix from the cached per-label confusion matrices,
//! and stops as soon as `h_k * max_{i>k} lift(i)` falls below the best lifted
//! value seen so far. Since the unlifted value of the chain never increases for
//! macro-averaged measures, that bound is sound there and the result is optimal;
//! for micro-averaged measures it is an approximation.
//!
//! [`exhaustive_best_head`] enumerates every head and serves as the oracle.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::{CoverageState, Dataset};
use crate::error::{Error, Result};
use crate::lift::LiftFunction;
use crate::metrics::{head_confusions, score, ConfusionMatrix, HeuristicSpec};

/// Slack used when comparing lifted heuristic values.
pub const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelAssignment {
    pub label: usize,
    pub present: bool,
}

impl LabelAssignment {
    pub fn new(label: usize, present: bool) -> Self {
        LabelAssignment { label, present }
    }

    fn order_key(&self) -> (usize, u8) {
        (self.label, if self.present { 0 } else { 1 })
    }
}

/// A set of label assignments, kept sorted by label index, at most one per label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LabelAssignment>", into = "Vec<LabelAssignment>")]
pub struct Head {
    assignments: Vec<LabelAssignment>,
}

impl Head {
    pub fn new(mut assignments: Vec<LabelAssignment>) -> Result<Self> {
        assignments.sort_by_key(|a| a.label);
        if assignments.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::Input("head assigns the same label twice".into()));
        }
        Ok(Head { assignments })
    }

    pub fn single(label: usize, present: bool) -> Self {
        Head {
            assignments: vec![LabelAssignment::new(label, present)],
        }
    }

    /// Head predicting every listed label as present.
    pub fn present(labels: &[usize]) -> Result<Self> {
        Head::new(labels.iter().map(|&l| LabelAssignment::new(l, true)).collect())
    }

    pub fn assignments(&self) -> &[LabelAssignment] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignments.iter().map(|a| a.label)
    }

    pub fn value_of(&self, label: usize) -> Option<bool> {
        self.assignments
            .binary_search_by_key(&label, |a| a.label)
            .ok()
            .map(|i| self.assignments[i].present)
    }

    fn lex_cmp(&self, other: &Head) -> Ordering {
        self.assignments
            .iter()
            .map(LabelAssignment::order_key)
            .cmp(other.assignments.iter().map(LabelAssignment::order_key))
    }
}

impl TryFrom<Vec<LabelAssignment>> for Head {
    type Error = Error;

    fn try_from(v: Vec<LabelAssignment>) -> Result<Self> {
        Head::new(v)
    }
}

impl From<Head> for Vec<LabelAssignment> {
    fn from(h: Head) -> Self {
        h.assignments
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.assignments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "y{}={}", a.label + 1, u8::from(a.present))?;
        }
        f.write_str("}")
    }
}

/// A scored head. `per_label` holds one matrix per assignment, in head order.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadCandidate {
    pub head: Head,
    pub h: f64,
    pub h_lifted: f64,
    pub per_label: Vec<ConfusionMatrix>,
}

impl HeadCandidate {
    pub fn total(&self) -> ConfusionMatrix {
        self.per_label.iter().sum()
    }

    /// Every assignment produces at least one true positive.
    pub fn is_eligible(&self) -> bool {
        self.per_label.iter().all(|c| c.tp >= 1)
    }

    /// At least as many true as false positives over the whole head, and at
    /// least one true positive per assignment.
    pub fn satisfies_constraints(&self) -> bool {
        let t = self.total();
        t.tp >= t.fp && self.is_eligible()
    }
}

/// Whether rules may predict the absence of labels (`+/-`) or only presence (`+`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchMode {
    pub predict_absent: bool,
}

impl SearchMode {
    pub const POSITIVE: SearchMode = SearchMode {
        predict_absent: false,
    };
    pub const POSITIVE_NEGATIVE: SearchMode = SearchMode {
        predict_absent: true,
    };

    fn values(&self) -> &'static [bool] {
        if self.predict_absent {
            &[true, false]
        } else {
            &[true]
        }
    }
}

/// Counts of uncovered (instance, label) pairs for one label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelCounts {
    /// Pairs inside the body's coverage whose truth is 1 / 0.
    pub covered_ones: u64,
    pub covered_zeros: u64,
    /// Pairs anywhere in the training state whose truth is 1 / 0.
    pub total_ones: u64,
    pub total_zeros: u64,
}

impl LabelCounts {
    /// Training-time matrix of predicting `present` on the covered instances and
    /// abstaining on the rest.
    pub fn matrix(&self, present: bool) -> ConfusionMatrix {
        let tn = self.total_zeros - self.covered_zeros;
        let fn_ = self.total_ones - self.covered_ones;
        if present {
            ConfusionMatrix::new(self.covered_ones, self.covered_zeros, tn, fn_)
        } else {
            ConfusionMatrix::new(self.covered_zeros, self.covered_ones, tn, fn_)
        }
    }
}

/// Per-label (ones, zeros) among uncovered pairs of the whole dataset.
pub fn label_totals(ds: &Dataset, cov: &CoverageState) -> Vec<(u64, u64)> {
    let n = ds.label_count();
    let mut totals = vec![(0u64, 0u64); n];
    for i in 0..ds.len() {
        let labels = ds.instance(i).labels.bits();
        for (l, t) in totals.iter_mut().enumerate() {
            if !cov.is_covered(i, l) {
                if labels[l] {
                    t.0 += 1;
                } else {
                    t.1 += 1;
                }
            }
        }
    }
    totals
}

/// Per-label counts for a body covering `covered`.
pub fn label_counts(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    totals: &[(u64, u64)],
) -> Vec<LabelCounts> {
    let mut counts: Vec<LabelCounts> = totals
        .iter()
        .map(|&(ones, zeros)| LabelCounts {
            total_ones: ones,
            total_zeros: zeros,
            ..LabelCounts::default()
        })
        .collect();
    for &i in covered {
        let labels = ds.instance(i).labels.bits();
        for (l, c) in counts.iter_mut().enumerate() {
            if !cov.is_covered(i, l) {
                if labels[l] {
                    c.covered_ones += 1;
                } else {
                    c.covered_zeros += 1;
                }
            }
        }
    }
    counts
}

/// Heuristic, lift function and mode of one head search.
#[derive(Debug, Clone, Copy)]
pub struct SearchParams<'a> {
    pub spec: &'a HeuristicSpec,
    pub lift: &'a LiftFunction,
    pub mode: SearchMode,
}

/// One step of the greedy chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Visit {
    pub size: usize,
    pub head: Head,
    pub h: f64,
    pub h_lifted: f64,
    /// `None` once no longer head exists.
    pub h_upper: Option<f64>,
    pub became_best: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOutcome {
    /// Best lifted candidate before the TP >= FP check.
    pub best: Option<HeadCandidate>,
    pub visits: Vec<Visit>,
    /// Number of (label, value) candidates evaluated on the training instances.
    pub evaluations: usize,
}

impl SearchOutcome {
    /// The best head, if it satisfies the rule constraints.
    pub fn accepted(&self) -> Option<&HeadCandidate> {
        self.best.as_ref().filter(|c| c.satisfies_constraints())
    }

    pub fn into_accepted(self) -> Option<HeadCandidate> {
        self.best.filter(HeadCandidate::satisfies_constraints)
    }
}

fn better_single(a: &HeadCandidate, b: &HeadCandidate) -> Ordering {
    b.h.total_cmp(&a.h)
        .then_with(|| a.head.assignments[0].label.cmp(&b.head.assignments[0].label))
}

/// One single-label candidate per label (the better value in `+/-` mode, ties
/// to `present`), sorted by `h` descending then label index. Candidates with no
/// true positive are kept but are not [eligible](HeadCandidate::is_eligible).
pub fn single_label_candidates_from_counts(
    counts: &[LabelCounts],
    params: SearchParams<'_>,
) -> (Vec<HeadCandidate>, usize) {
    let mut evaluations = 0;
    let mut out = Vec::with_capacity(counts.len());
    for (label, c) in counts.iter().enumerate() {
        let mut best: Option<HeadCandidate> = None;
        for &present in params.mode.values() {
            evaluations += 1;
            let m = c.matrix(present);
            let h = score(params.spec, std::slice::from_ref(&m));
            if best.as_ref().map_or(true, |b| h > b.h) {
                best = Some(HeadCandidate {
                    head: Head::single(label, present),
                    h,
                    h_lifted: h,
                    per_label: vec![m],
                });
            }
        }
        out.extend(best);
    }
    out.sort_by(better_single);
    (out, evaluations)
}

pub fn single_label_candidates(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    spec: &HeuristicSpec,
    mode: SearchMode,
) -> Vec<HeadCandidate> {
    assert!(!covered.is_empty(), "head search needs a non-empty coverage");
    let totals = label_totals(ds, cov);
    let counts = label_counts(ds, cov, covered, &totals);
    let lift = LiftFunction::Identity;
    single_label_candidates_from_counts(
        &counts,
        SearchParams {
            spec,
            lift: &lift,
            mode,
        },
    )
    .0
}

/// Scores a head from per-assignment matrices given in label order.
fn assemble(
    assignments: &BTreeMap<usize, (bool, ConfusionMatrix)>,
    params: SearchParams<'_>,
    n: usize,
) -> Result<HeadCandidate> {
    let head = Head {
        assignments: assignments
            .iter()
            .map(|(&l, &(p, _))| LabelAssignment::new(l, p))
            .collect(),
    };
    let per_label: Vec<ConfusionMatrix> = assignments.values().map(|&(_, m)| m).collect();
    let h = score(params.spec, &per_label);
    let h_lifted = h * params.lift.lift_at(head.len(), n)?;
    Ok(HeadCandidate {
        head,
        h,
        h_lifted,
        per_label,
    })
}

/// Greedy relaxed-pruning search over precomputed label counts.
pub fn best_head_from_counts(counts: &[LabelCounts], params: SearchParams<'_>) -> Result<SearchOutcome> {
    let n = counts.len();
    let (singles, evaluations) = single_label_candidates_from_counts(counts, params);
    let mut outcome = SearchOutcome {
        evaluations,
        ..SearchOutcome::default()
    };
    let mut current: BTreeMap<usize, (bool, ConfusionMatrix)> = BTreeMap::new();
    for single in singles.iter().filter(|c| c.is_eligible()) {
        let a = single.head.assignments[0];
        current.insert(a.label, (a.present, single.per_label[0]));
        let cand = assemble(&current, params, n)?;
        let became_best = outcome
            .best
            .as_ref()
            .map_or(true, |b| cand.h_lifted >= b.h_lifted - TIE_EPS);
        let h_upper = params
            .lift
            .max_remaining_lift(cand.head.len(), n)
            .map(|l| cand.h * l);
        outcome.visits.push(Visit {
            size: cand.head.len(),
            head: cand.head.clone(),
            h: cand.h,
            h_lifted: cand.h_lifted,
            h_upper,
            became_best,
        });
        if became_best {
            outcome.best = Some(cand);
        }
        let best_lifted = outcome.best.as_ref().map_or(f64::NEG_INFINITY, |b| b.h_lifted);
        match h_upper {
            None => break,
            Some(u) if u < best_lifted - TIE_EPS => break,
            Some(_) => {}
        }
    }
    Ok(outcome)
}

/// Full trace of a head search for the body covering `covered`.
pub fn search_head(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    spec: &HeuristicSpec,
    lift: &LiftFunction,
    mode: SearchMode,
) -> Result<SearchOutcome> {
    assert!(!covered.is_empty(), "head search needs a non-empty coverage");
    let totals = label_totals(ds, cov);
    let counts = label_counts(ds, cov, covered, &totals);
    best_head_from_counts(&counts, SearchParams { spec, lift, mode })
}

/// The best lifted head for the body covering `covered`, or `None` when that
/// head predicts fewer true than false positives (or no head is eligible).
pub fn find_best_head(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    spec: &HeuristicSpec,
    lift: &LiftFunction,
    mode: SearchMode,
) -> Result<Option<HeadCandidate>> {
    Ok(search_head(ds, cov, covered, spec, lift, mode)?.into_accepted())
}

/// Exhaustive counterpart of [`search_head`]: scores every non-empty head made
/// of eligible assignments and returns the global maximizer (ties: larger head,
/// then lexicographically smaller assignments) before the TP >= FP check.
///
/// Per-label matrices come from [`head_confusions`], not from the counting
/// shortcut the greedy search uses.
pub fn exhaustive_search(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    spec: &HeuristicSpec,
    lift: &LiftFunction,
    mode: SearchMode,
    max_n: usize,
) -> Result<Option<HeadCandidate>> {
    let n = ds.label_count();
    let max_n = max_n.min(16);
    if n > max_n {
        return Err(Error::Refused(format!(
            "exhaustive head search over {n} labels exceeds the limit of {max_n}"
        )));
    }
    assert!(!covered.is_empty(), "head search needs a non-empty coverage");
    // choices[l]: eligible (present, matrix) options for label l
    let mut choices: Vec<Vec<(bool, ConfusionMatrix)>> = Vec::with_capacity(n);
    for label in 0..n {
        let mut opts = Vec::new();
        for &present in mode.values() {
            let m = head_confusions(&Head::single(label, present), ds, cov, covered)[label];
            if m.tp >= 1 {
                opts.push((present, m));
            }
        }
        choices.push(opts);
    }
    let params = SearchParams { spec, lift, mode };
    let mut best: Option<HeadCandidate> = None;
    // mixed-radix counter: digit 0 = label unused
    let mut digits = vec![0usize; n];
    loop {
        let mut carry = true;
        for (l, d) in digits.iter_mut().enumerate() {
            if !carry {
                break;
            }
            *d += 1;
            if *d > choices[l].len() {
                *d = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
        let selected: BTreeMap<usize, (bool, ConfusionMatrix)> = digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(l, &d)| (l, choices[l][d - 1]))
            .collect();
        let cand = assemble(&selected, params, n)?;
        let replace = match &best {
            None => true,
            Some(b) => {
                if cand.h_lifted > b.h_lifted + TIE_EPS {
                    true
                } else if cand.h_lifted >= b.h_lifted - TIE_EPS {
                    cand.head.len() > b.head.len()
                        || (cand.head.len() == b.head.len()
                            && cand.head.lex_cmp(&b.head) == Ordering::Less)
                } else {
                    false
                }
            }
        };
        if replace {
            best = Some(cand);
        }
    }
    Ok(best)
}

/// Oracle for [`find_best_head`]; refuses label counts above `max_n` (at most 16).
pub fn exhaustive_best_head(
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    spec: &HeuristicSpec,
    lift: &LiftFunction,
    mode: SearchMode,
    max_n: usize,
) -> Result<Option<HeadCandidate>> {
    Ok(exhaustive_search(ds, cov, covered, spec, lift, mode, max_n)?
        .filter(HeadCandidate::satisfies_constraints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Instance, LabelVector};
    use crate::metrics::Averaging;

    /// Label sets Y1..Y6; Y4..Y6 are covered by the body.
    pub(crate) fn figure_one() -> Dataset {
        let rows = [
            [0, 1, 1, 0],
            [1, 1, 1, 1],
            [0, 0, 1, 0],
            [0, 1, 1, 0],
            [1, 1, 0, 0],
            [1, 0, 0, 0],
        ];
        let instances = rows
            .iter()
            .map(|r| Instance {
                values: vec![],
                labels: LabelVector::new(r.iter().map(|&b| b == 1).collect()),
            })
            .collect();
        Dataset::new(
            vec![],
            (1..=4).map(|i| format!("y{i}")).collect(),
            instances,
        )
        .unwrap()
    }

    const COVERED: [usize; 3] = [3, 4, 5];

    fn table() -> LiftFunction {
        LiftFunction::Table(vec![1.0, 1.1, 1.15, 1.19])
    }

    #[test]
    fn figure_one_singles() {
        let ds = figure_one();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let singles = single_label_candidates(&ds, &cov, &COVERED, &spec, SearchMode::POSITIVE);
        let labels: Vec<usize> = singles.iter().map(|c| c.head.assignments()[0].label).collect();
        assert_eq!(labels, vec![0, 1, 2, 3]);
        let hs: Vec<f64> = singles.iter().map(|c| c.h).collect();
        assert_eq!(hs, vec![2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert!(!singles[3].is_eligible());
        assert!(singles[..3].iter().all(HeadCandidate::is_eligible));
    }

    #[test]
    fn all_ones_instance_scores_one() {
        let ds = figure_one();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let singles = single_label_candidates(&ds, &cov, &[1], &spec, SearchMode::POSITIVE);
        assert!(singles.iter().all(|c| c.h == 1.0));
    }

    #[test]
    fn absent_value_chosen_when_better() {
        // label 1 is 0 on every covered instance
        let instances = [[1, 0], [1, 0], [0, 1]]
            .iter()
            .map(|r| Instance {
                values: vec![],
                labels: LabelVector::new(r.iter().map(|&b| b == 1).collect()),
            })
            .collect();
        let ds = Dataset::new(vec![], vec!["a".into(), "b".into()], instances).unwrap();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let singles =
            single_label_candidates(&ds, &cov, &[0, 1], &spec, SearchMode::POSITIVE_NEGATIVE);
        let b = singles.iter().find(|c| c.head.assignments()[0].label == 1).unwrap();
        assert!(!b.head.assignments()[0].present);
        assert_eq!(b.h, 1.0);
        assert_eq!(b.per_label[0].tp, 2);
    }

    #[test]
    fn figure_one_relaxed_search() {
        let ds = figure_one();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let out = search_head(&ds, &cov, &COVERED, &spec, &table(), SearchMode::POSITIVE).unwrap();
        let best = out.accepted().unwrap();
        assert_eq!(best.head, Head::present(&[0, 1]).unwrap());
        assert!((best.h - 2.0 / 3.0).abs() < 1e-12);
        assert!((best.h_lifted - 11.0 / 15.0).abs() < 1e-12);
        let sizes: Vec<usize> = out.visits.iter().map(|v| v.size).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(out.evaluations, 4);
    }

    #[test]
    fn figure_one_identity_merges_ties() {
        let ds = figure_one();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let lift = LiftFunction::Identity;
        let greedy = find_best_head(&ds, &cov, &COVERED, &spec, &lift, SearchMode::POSITIVE)
            .unwrap()
            .unwrap();
        assert_eq!(greedy.head, Head::present(&[0, 1]).unwrap());
        assert!((greedy.h_lifted - 2.0 / 3.0).abs() < 1e-12);
        let oracle =
            exhaustive_best_head(&ds, &cov, &COVERED, &spec, &lift, SearchMode::POSITIVE, 16)
                .unwrap()
                .unwrap();
        assert_eq!(oracle.head, greedy.head);
        let oracle = exhaustive_best_head(&ds, &cov, &COVERED, &spec, &table(), SearchMode::POSITIVE, 16)
            .unwrap()
            .unwrap();
        assert_eq!(oracle.head, Head::present(&[0, 1]).unwrap());
        assert!((oracle.h_lifted - 11.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_refuses_large_label_counts() {
        let instances = vec![Instance {
            values: vec![],
            labels: LabelVector::zeros(17),
        }];
        let ds = Dataset::new(vec![], (0..17).map(|i| format!("l{i}")).collect(), instances).unwrap();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let r = exhaustive_best_head(
            &ds,
            &cov,
            &[0],
            &spec,
            &LiftFunction::Identity,
            SearchMode::POSITIVE,
            16,
        );
        assert!(matches!(r, Err(Error::Refused(_))));
    }

    #[test]
    fn single_label_dataset() {
        let instances = [1, 1, 0]
            .iter()
            .map(|&b| Instance {
                values: vec![],
                labels: LabelVector::new(vec![b == 1]),
            })
            .collect();
        let ds = Dataset::new(vec![], vec!["only".into()], instances).unwrap();
        let cov = CoverageState::for_dataset(&ds);
        let spec = HeuristicSpec::hamming(Averaging::Macro);
        let lift = LiftFunction::Kln { k: 0.3 };
        let mode = SearchMode::POSITIVE_NEGATIVE;
        let g = find_best_head(&ds, &cov, &[0, 1, 2], &spec, &lift, mode).unwrap().unwrap();
        let o = exhaustive_best_head(&ds, &cov, &[0, 1, 2], &spec, &lift, mode, 16)
            .unwrap()
            .unwrap();
        assert_eq!(g.head, Head::single(0, true));
        assert_eq!(o.head, g.head);
    }

    #[test]
    fn covered_pairs_are_not_counted() {
        let ds = figure_one();
        let mut cov = CoverageState::for_dataset(&ds);
        for i in 0..6 {
            cov.mark(i, 0, true);
        }
        let spec = HeuristicSpec::precision(Averaging::Micro);
        let singles = single_label_candidates(&ds, &cov, &COVERED, &spec, SearchMode::POSITIVE);
        let first = singles.iter().find(|c| c.head.assignments()[0].label == 0).unwrap();
        assert_eq!(first.per_label[0].total(), 0);
        assert!(!first.is_eligible());
    }

    #[test]
    fn counts_agree_with_atomic_route() {
        let ds = figure_one();
        let mut cov = CoverageState::for_dataset(&ds);
        cov.mark(4, 1, true);
        cov.mark(0, 2, false);
        let totals = label_totals(&ds, &cov);
        let counts = label_counts(&ds, &cov, &COVERED, &totals);
        for label in 0..4 {
            for present in [true, false] {
                let via_atomic =
                    head_confusions(&Head::single(label, present), &ds, &cov, &COVERED)[label];
                assert_eq!(counts[label].matrix(present), via_atomic);
            }
        }
    }

    #[test]
    fn head_rejects_duplicate_labels() {
        assert!(Head::new(vec![LabelAssignment::new(1, true), LabelAssignment::new(1, false)]).is_err());
        let h = Head::new(vec![LabelAssignment::new(3, false), LabelAssignment::new(0, true)]).unwrap();
        assert_eq!(h.labels().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(h.value_of(3), Some(false));
        assert_eq!(h.value_of(2), None);
    }
}
