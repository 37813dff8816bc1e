//! Separate-and-conquer induction of an ordered multi-label rule list.
//!
//! Each rule is grown top-down from the empty body. As long as no head has been
//! chosen, every candidate body gets its own head search; once a depth selects
//! a candidate its head is fixed and deeper refinements only re-score that head.
//! After a rule is added, every (instance, label) pair it predicts is marked
//! covered; an instance leaves the training state once all its labels are.

use serde::{Deserialize, Serialize};

use crate::data::{AttributeKind, CoverageState, Dataset, Value};
use crate::error::{Error, Result};
use crate::head_search::{
    best_head_from_counts, Head, HeadCandidate, LabelCounts, SearchMode, SearchParams, TIE_EPS,
};
use crate::lift::LiftFunction;
use crate::metrics::{score, Averaging, HeuristicSpec, DEFAULT_BETA};
use crate::model::{Condition, Rule, RuleModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub heuristic: HeuristicSpec,
    pub lift: LiftFunction,
    pub mode: SearchMode,
    pub allow_label_conditions: bool,
    /// Stop once this fraction of (instance, label) pairs is covered.
    pub coverage_stop_fraction: f64,
    pub max_rules: Option<usize>,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            heuristic: HeuristicSpec::f_measure(DEFAULT_BETA, Averaging::Macro)
                .expect("default beta is valid"),
            lift: LiftFunction::Identity,
            mode: SearchMode::POSITIVE,
            allow_label_conditions: true,
            coverage_stop_fraction: 1.0,
            max_rules: None,
            seed: 0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.coverage_stop_fraction > 0.0 && self.coverage_stop_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "coverage stop fraction must lie in (0, 1], got {}",
                self.coverage_stop_fraction
            )));
        }
        HeuristicSpec::new(self.heuristic.measure, self.heuristic.averaging)?;
        self.lift.validate(n)
    }

    fn params(&self) -> SearchParams<'_> {
        SearchParams {
            spec: &self.heuristic,
            lift: &self.lift,
            mode: self.mode,
        }
    }
}

/// Instrumentation gathered while learning.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LearnReport {
    pub rules: usize,
    pub head_searches: u64,
    /// (label, value) candidates evaluated on training instances, summed over
    /// all head searches.
    pub evaluations: u64,
    pub max_evaluations_per_search: usize,
}

/// Per-rule refinement record: the head in effect after each accepted depth.
#[derive(Debug, Clone, Default)]
pub struct RefinementTrace {
    pub heads: Vec<Head>,
    /// Depth (number of body conditions) at which the head was fixed.
    pub fixed_at: Option<usize>,
}

/// Per (instance, label) code: 0 covered, 1 uncovered with truth 0, 2 uncovered with truth 1.
struct PairCodes {
    n: usize,
    codes: Vec<u8>,
}

impl PairCodes {
    fn new(ds: &Dataset, cov: &CoverageState) -> Self {
        let n = ds.label_count();
        let mut codes = vec![0u8; ds.len() * n];
        for i in 0..ds.len() {
            let truth = ds.instance(i).labels.bits();
            for l in 0..n {
                if !cov.is_covered(i, l) {
                    codes[i * n + l] = if truth[l] { 2 } else { 1 };
                }
            }
        }
        PairCodes { n, codes }
    }

    fn row(&self, i: usize) -> &[u8] {
        &self.codes[i * self.n..(i + 1) * self.n]
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    ones: u64,
    zeros: u64,
}

fn add_row(acc: &mut [Tally], row: &[u8]) {
    for (t, &c) in acc.iter_mut().zip(row) {
        match c {
            1 => t.zeros += 1,
            2 => t.ones += 1,
            _ => {}
        }
    }
}

fn to_counts(covered: &[Tally], totals: &[Tally]) -> Vec<LabelCounts> {
    covered
        .iter()
        .zip(totals)
        .map(|(c, t)| LabelCounts {
            covered_ones: c.ones,
            covered_zeros: c.zeros,
            total_ones: t.ones,
            total_zeros: t.zeros,
        })
        .collect()
}

fn tally(codes: &PairCodes, instances: &[usize]) -> Vec<Tally> {
    let mut acc = vec![Tally::default(); codes.n];
    for &i in instances {
        add_row(&mut acc, codes.row(i));
    }
    acc
}

struct Refinement {
    condition: Condition,
    covered: Vec<Tally>,
}

/// Enumerates refinements of `body` over the instances it covers, each with the
/// label tallies of the refined body.
fn enumerate_refinements(
    body: &[Condition],
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    allow_label_conditions: bool,
    codes: &PairCodes,
) -> Vec<Refinement> {
    let n = ds.label_count();
    let size = covered.len();
    let mut out = Vec::new();
    let push = |out: &mut Vec<Refinement>, condition: Condition, count: usize, tallies: Vec<Tally>| {
        // drop conditions that cover everything, nothing, or repeat the body
        if count == 0 || count == size || body.contains(&condition) {
            return;
        }
        out.push(Refinement {
            condition,
            covered: tallies,
        });
    };

    for (attr, a) in ds.schema().iter().enumerate() {
        match &a.kind {
            AttributeKind::Nominal(values) => {
                let mut groups: Vec<(usize, Vec<Tally>)> = vec![(0, vec![Tally::default(); n]); values.len()];
                for &i in covered {
                    if let Value::Nominal(v) = ds.instance(i).values[attr] {
                        let g = &mut groups[v as usize];
                        g.0 += 1;
                        add_row(&mut g.1, codes.row(i));
                    }
                }
                for (v, (count, tallies)) in groups.into_iter().enumerate() {
                    push(
                        &mut out,
                        Condition::NominalEq {
                            attr,
                            value: v as u32,
                        },
                        count,
                        tallies,
                    );
                }
            }
            AttributeKind::Numeric => {
                let mut sorted: Vec<(f64, usize)> = covered
                    .iter()
                    .filter_map(|&i| ds.instance(i).values[attr].as_numeric().map(|x| (x, i)))
                    .collect();
                sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let total = tally(codes, covered);
                let mut prefix = vec![Tally::default(); n];
                for j in 0..sorted.len() {
                    add_row(&mut prefix, codes.row(sorted[j].1));
                    if j + 1 == sorted.len() || sorted[j].0 == sorted[j + 1].0 {
                        continue;
                    }
                    let (lo, hi) = (sorted[j].0, sorted[j + 1].0);
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    let suffix: Vec<Tally> = total
                        .iter()
                        .zip(&prefix)
                        .map(|(t, p)| Tally {
                            ones: t.ones - p.ones,
                            zeros: t.zeros - p.zeros,
                        })
                        .collect();
                    push(
                        &mut out,
                        Condition::NumericLeq { attr, threshold },
                        j + 1,
                        prefix.clone(),
                    );
                    push(
                        &mut out,
                        Condition::NumericGt { attr, threshold },
                        sorted.len() - j - 1,
                        suffix,
                    );
                }
            }
        }
    }

    if allow_label_conditions {
        for label in 0..n {
            for present in [true, false] {
                let members: Vec<usize> = covered
                    .iter()
                    .copied()
                    .filter(|&i| cov.predicted(i, label) == Some(present))
                    .collect();
                let tallies = tally(codes, &members);
                push(
                    &mut out,
                    Condition::LabelTest { label, present },
                    members.len(),
                    tallies,
                );
            }
        }
    }
    out
}

/// Candidate conditions for specializing `body`, given the instances it covers.
///
/// Nominal attributes yield one equality per observed value, numeric ones a
/// `<=` and a `>` test per midpoint between adjacent distinct values, and
/// (optionally) one label test per decided (label, state). Conditions already
/// in the body, or covering all or none of the instances, are left out.
pub fn generate_refinements(
    body: &[Condition],
    ds: &Dataset,
    cov: &CoverageState,
    covered: &[usize],
    allow_label_conditions: bool,
) -> Vec<Condition> {
    let codes = PairCodes::new(ds, cov);
    enumerate_refinements(body, ds, cov, covered, allow_label_conditions, &codes)
        .into_iter()
        .map(|r| r.condition)
        .collect()
}

fn score_fixed_head(head: &Head, counts: &[LabelCounts], config: &LearnerConfig, n: usize) -> Result<HeadCandidate> {
    let per_label: Vec<_> = head
        .assignments()
        .iter()
        .map(|a| counts[a.label].matrix(a.present))
        .collect();
    let h = score(&config.heuristic, &per_label);
    let h_lifted = h * config.lift.lift_at(head.len(), n)?;
    Ok(HeadCandidate {
        head: head.clone(),
        h,
        h_lifted,
        per_label,
    })
}

struct Searcher<'a> {
    config: &'a LearnerConfig,
    report: &'a mut LearnReport,
}

impl Searcher<'_> {
    fn search(&mut self, counts: &[LabelCounts]) -> Result<Option<HeadCandidate>> {
        let outcome = best_head_from_counts(counts, self.config.params())?;
        self.report.head_searches += 1;
        self.report.evaluations += outcome.evaluations as u64;
        self.report.max_evaluations_per_search =
            self.report.max_evaluations_per_search.max(outcome.evaluations);
        Ok(outcome.into_accepted())
    }
}

fn refine(
    ds: &Dataset,
    cov: &CoverageState,
    config: &LearnerConfig,
    report: &mut LearnReport,
    trace: &mut RefinementTrace,
) -> Result<Option<Rule>> {
    let n = ds.label_count();
    let active = cov.active_instances();
    if active.is_empty() {
        return Ok(None);
    }
    let codes = PairCodes::new(ds, cov);
    let totals = tally(&codes, &active);
    let mut searcher = Searcher { config, report };

    let mut body: Vec<Condition> = Vec::new();
    let mut covered = active;
    let mut fixed: Option<Head> = None;
    let mut current = f64::NEG_INFINITY;
    // accepted (body, candidate) per depth
    let mut path: Vec<(Vec<Condition>, HeadCandidate)> = Vec::new();

    if let Some(c) = searcher.search(&to_counts(&tally(&codes, &covered), &totals))? {
        fixed = Some(c.head.clone());
        trace.fixed_at = Some(0);
        current = c.h_lifted;
        trace.heads.push(c.head.clone());
        path.push((Vec::new(), c));
    }

    loop {
        let refinements =
            enumerate_refinements(&body, ds, cov, &covered, config.allow_label_conditions, &codes);
        let mut best: Option<(usize, HeadCandidate)> = None;
        for (idx, r) in refinements.iter().enumerate() {
            let counts = to_counts(&r.covered, &totals);
            let cand = match &fixed {
                Some(head) => Some(score_fixed_head(head, &counts, config, n)?),
                None => searcher.search(&counts)?,
            };
            if let Some(c) = cand {
                if best.as_ref().map_or(true, |(_, b)| c.h_lifted > b.h_lifted) {
                    best = Some((idx, c));
                }
            }
        }
        match best {
            Some((idx, cand)) if cand.h_lifted > current + TIE_EPS => {
                let condition = refinements[idx].condition;
                covered.retain(|&i| condition.matches(&ds.instance(i).values, cov.row(i)));
                body.push(condition);
                if fixed.is_none() {
                    fixed = Some(cand.head.clone());
                    trace.fixed_at = Some(body.len());
                }
                current = cand.h_lifted;
                trace.heads.push(cand.head.clone());
                path.push((body.clone(), cand));
            }
            _ => break,
        }
    }

    // the fixed head is re-checked only here; fall back to the deepest valid state
    let rule = path
        .into_iter()
        .rev()
        .find(|(_, c)| c.satisfies_constraints())
        .map(|(body, c)| Rule {
            body,
            stats: c.per_label.iter().map(|m| (m.tp, m.fp)).collect(),
            head: c.head,
        });
    Ok(rule)
}

/// Induces one rule on the current training state, or `None` when no rule with
/// a valid head exists.
pub fn refine_rule(ds: &Dataset, cov: &CoverageState, config: &LearnerConfig) -> Result<Option<Rule>> {
    refine(ds, cov, config, &mut LearnReport::default(), &mut RefinementTrace::default())
}

pub fn refine_rule_traced(
    ds: &Dataset,
    cov: &CoverageState,
    config: &LearnerConfig,
) -> Result<(Option<Rule>, RefinementTrace, LearnReport)> {
    let mut report = LearnReport::default();
    let mut trace = RefinementTrace::default();
    let rule = refine(ds, cov, config, &mut report, &mut trace)?;
    Ok((rule, trace, report))
}

/// Marks the pairs `rule` predicts on the instances it covers. Returns the
/// number of newly covered pairs.
pub fn apply_rule(ds: &Dataset, cov: &mut CoverageState, rule: &Rule) -> usize {
    let mut newly = 0;
    for i in 0..ds.len() {
        if !cov.is_active(i) || !rule.covers(&ds.instance(i).values, cov.row(i)) {
            continue;
        }
        for a in rule.head.assignments() {
            if cov.mark(i, a.label, a.present) {
                newly += 1;
            }
        }
    }
    newly
}

pub fn learn(ds: &Dataset, config: &LearnerConfig) -> Result<RuleModel> {
    learn_with_report(ds, config).map(|(m, _)| m)
}

pub fn learn_with_report(ds: &Dataset, config: &LearnerConfig) -> Result<(RuleModel, LearnReport)> {
    if ds.is_empty() || ds.label_count() == 0 {
        return Err(Error::Config(
            "training needs at least one instance and one label".into(),
        ));
    }
    config.validate(ds.label_count())?;
    let mut cov = CoverageState::for_dataset(ds);
    let mut report = LearnReport::default();
    let mut rules = Vec::new();
    loop {
        if config.max_rules.map_or(false, |max| rules.len() >= max) {
            break;
        }
        if cov.covered_fraction() >= config.coverage_stop_fraction {
            break;
        }
        let mut trace = RefinementTrace::default();
        let Some(rule) = refine(ds, &cov, config, &mut report, &mut trace)? else {
            break;
        };
        let newly = apply_rule(ds, &mut cov, &rule);
        debug_assert!(cov.matches(ds));
        if newly == 0 {
            break;
        }
        rules.push(rule);
    }
    report.rules = rules.len();
    let echo = serde_json::to_string(config)?;
    let model = RuleModel::new(
        ds.schema().to_vec(),
        ds.label_names().to_vec(),
        rules,
        echo,
    )?;
    Ok((model, report))
}
