//! Multi-label datasets, attribute schemas and label-wise coverage bookkeeping.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    Nominal(Vec<String>),
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn nominal(name: impl Into<String>, values: Vec<String>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::Schema(format!(
                "nominal attribute '{name}' has an empty value list"
            )));
        }
        let mut seen = HashSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(Error::Schema(format!(
                    "nominal attribute '{name}' lists value '{v}' twice"
                )));
            }
        }
        Ok(Attribute {
            name,
            kind: AttributeKind::Nominal(values),
        })
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    /// Index of `value` in a nominal attribute's value list.
    pub fn value_index(&self, value: &str) -> Option<u32> {
        match &self.kind {
            AttributeKind::Nominal(values) => {
                values.iter().position(|v| v == value).map(|i| i as u32)
            }
            AttributeKind::Numeric => None,
        }
    }

    pub fn value_name(&self, index: u32) -> Option<&str> {
        match &self.kind {
            AttributeKind::Nominal(values) => values.get(index as usize).map(String::as_str),
            AttributeKind::Numeric => None,
        }
    }
}

/// A single attribute value. Nominal values are stored as indices into the
/// attribute's value list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Nominal(u32),
    Numeric(f64),
}

impl Value {
    pub fn as_numeric(&self) -> Option<f64> {
        match *self {
            Value::Numeric(x) => Some(x),
            Value::Nominal(_) => None,
        }
    }
}

/// Dense {0,1} label row of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelVector(Vec<bool>);

impl LabelVector {
    pub fn new(bits: Vec<bool>) -> Self {
        LabelVector(bits)
    }

    pub fn zeros(n: usize) -> Self {
        LabelVector(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, label: usize) -> bool {
        self.0[label]
    }

    pub fn set(&mut self, label: usize, value: bool) {
        self.0[label] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl From<Vec<bool>> for LabelVector {
    fn from(bits: Vec<bool>) -> Self {
        LabelVector(bits)
    }
}

impl fmt::Display for LabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub values: Vec<Value>,
    pub labels: LabelVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<Attribute>,
    label_names: Vec<String>,
    instances: Vec<Instance>,
}

impl Dataset {
    /// Builds a dataset, checking every instance against the schema and label count.
    pub fn new(
        schema: Vec<Attribute>,
        label_names: Vec<String>,
        instances: Vec<Instance>,
    ) -> Result<Self> {
        let mut names = HashSet::new();
        for attr in schema.iter() {
            if !names.insert(attr.name.as_str()) {
                return Err(Error::Schema(format!(
                    "duplicate attribute name '{}'",
                    attr.name
                )));
            }
        }
        let mut seen_labels = HashSet::new();
        for name in &label_names {
            if !seen_labels.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate label name '{name}'")));
            }
        }
        for (i, inst) in instances.iter().enumerate() {
            check_instance(&schema, &inst.values)
                .map_err(|e| Error::Schema(format!("instance {i}: {e}")))?;
            if inst.labels.len() != label_names.len() {
                return Err(Error::Schema(format!(
                    "instance {i} has {} labels, expected {}",
                    inst.labels.len(),
                    label_names.len()
                )));
            }
        }
        Ok(Dataset {
            schema,
            label_names,
            instances,
        })
    }

    pub fn schema(&self) -> &[Attribute] {
        &self.schema
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &Instance {
        &self.instances[i]
    }

    /// Instance count `m`.
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Label count `n`.
    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn truth(&self, instance: usize, label: usize) -> bool {
        self.instances[instance].labels.get(label)
    }

    /// A new dataset holding the given instances, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            label_names: self.label_names.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
        }
    }

    /// Re-expresses this dataset's feature values in terms of `schema`, matching
    /// attributes by name. Nominal values are matched by their text; nominal
    /// and numeric representations are converted where the text allows it.
    pub fn conform_to(&self, schema: &[Attribute], label_names: &[String]) -> Result<Dataset> {
        if label_names != self.label_names.as_slice() && !self.label_names.is_empty() {
            return Err(Error::Input(format!(
                "label names {:?} do not match expected {:?}",
                self.label_names, label_names
            )));
        }
        let mut mapping = Vec::with_capacity(schema.len());
        for target in schema {
            let src = self
                .schema
                .iter()
                .position(|a| a.name == target.name)
                .ok_or_else(|| {
                    Error::Input(format!("attribute '{}' missing from data", target.name))
                })?;
            mapping.push(src);
        }
        let mut instances = Vec::with_capacity(self.instances.len());
        for (row, inst) in self.instances.iter().enumerate() {
            let mut values = Vec::with_capacity(schema.len());
            for (target, &src) in schema.iter().zip(&mapping) {
                let source_attr = &self.schema[src];
                let v = convert_value(source_attr, inst.values[src], target).ok_or_else(|| {
                    Error::Input(format!(
                        "instance {row}: value '{}' of attribute '{}' is not valid for the model schema",
                        render_value(source_attr, inst.values[src]),
                        target.name
                    ))
                })?;
                values.push(v);
            }
            let labels = if self.label_names.is_empty() {
                LabelVector::zeros(label_names.len())
            } else {
                inst.labels.clone()
            };
            instances.push(Instance { values, labels });
        }
        Dataset::new(schema.to_vec(), label_names.to_vec(), instances)
    }
}

pub(crate) fn check_instance(schema: &[Attribute], values: &[Value]) -> std::result::Result<(), String> {
    if values.len() != schema.len() {
        return Err(format!(
            "{} attribute values, schema has {}",
            values.len(),
            schema.len()
        ));
    }
    for (attr, v) in schema.iter().zip(values) {
        match (&attr.kind, v) {
            (AttributeKind::Numeric, Value::Numeric(x)) if x.is_finite() => {}
            (AttributeKind::Numeric, Value::Numeric(_)) => {
                return Err(format!("non-finite value for '{}'", attr.name))
            }
            (AttributeKind::Nominal(list), Value::Nominal(i)) if (*i as usize) < list.len() => {}
            _ => return Err(format!("value of wrong type for '{}'", attr.name)),
        }
    }
    Ok(())
}

/// Text form of a value, as it would appear in a CSV or ARFF file.
pub fn render_value(attr: &Attribute, value: Value) -> String {
    match value {
        Value::Numeric(x) => format!("{x}"),
        Value::Nominal(i) => attr.value_name(i).unwrap_or("?").to_string(),
    }
}

fn convert_value(src: &Attribute, value: Value, target: &Attribute) -> Option<Value> {
    match (&target.kind, value) {
        (AttributeKind::Numeric, Value::Numeric(x)) => Some(Value::Numeric(x)),
        (AttributeKind::Numeric, Value::Nominal(i)) => src
            .value_name(i)?
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Value::Numeric),
        (AttributeKind::Nominal(_), Value::Nominal(i)) => {
            target.value_index(src.value_name(i)?).map(Value::Nominal)
        }
        (AttributeKind::Nominal(list), Value::Numeric(x)) => list
            .iter()
            .position(|v| v.trim().parse::<f64>().map(|y| y == x).unwrap_or(false))
            .map(|i| Value::Nominal(i as u32)),
    }
}

/// Label-wise coverage: for every (instance, label) pair, the value assigned by
/// the earliest rule that covered it, or `None` while uncovered.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageState {
    m: usize,
    n: usize,
    predicted: Vec<Option<bool>>,
    covered_count: usize,
}

impl CoverageState {
    pub fn new(m: usize, n: usize) -> Self {
        CoverageState {
            m,
            n,
            predicted: vec![None; m * n],
            covered_count: 0,
        }
    }

    pub fn for_dataset(ds: &Dataset) -> Self {
        Self::new(ds.len(), ds.label_count())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_covered(&self, instance: usize, label: usize) -> bool {
        self.predicted[instance * self.n + label].is_some()
    }

    pub fn predicted(&self, instance: usize, label: usize) -> Option<bool> {
        self.predicted[instance * self.n + label]
    }

    /// Predicted-so-far label states of one instance.
    pub fn row(&self, instance: usize) -> &[Option<bool>] {
        &self.predicted[instance * self.n..(instance + 1) * self.n]
    }

    /// Marks a pair as covered with the given prediction. Already covered pairs
    /// keep their first prediction. Returns whether the pair was newly covered.
    pub fn mark(&mut self, instance: usize, label: usize, value: bool) -> bool {
        let cell = &mut self.predicted[instance * self.n + label];
        if cell.is_some() {
            return false;
        }
        *cell = Some(value);
        self.covered_count += 1;
        true
    }

    pub fn covered_pairs(&self) -> usize {
        self.covered_count
    }

    pub fn uncovered_pairs(&self) -> usize {
        self.m * self.n - self.covered_count
    }

    pub fn covered_fraction(&self) -> f64 {
        if self.m * self.n == 0 {
            1.0
        } else {
            self.covered_count as f64 / (self.m * self.n) as f64
        }
    }

    /// An instance stays in the training state while any of its labels is uncovered.
    pub fn is_active(&self, instance: usize) -> bool {
        self.row(instance).iter().any(Option::is_none)
    }

    pub fn active_instances(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.is_active(i)).collect()
    }

    pub fn matches(&self, ds: &Dataset) -> bool {
        self.m == ds.len() && self.n == ds.label_count()
    }
}

/// Number of (instance, label) pairs not yet covered.
pub fn uncovered_pairs(ds: &Dataset, cov: &CoverageState) -> usize {
    assert!(cov.matches(ds), "coverage state does not match dataset");
    cov.uncovered_pairs()
}

/// Splits instance indices into `k` folds whose sizes differ by at most one.
///
/// Instances are grouped by their label vector; each group is shuffled with the
/// seed and the concatenated groups are dealt round-robin, so every label
/// combination is spread over the folds as evenly as possible.
pub fn stratified_folds(ds: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k == 0 {
        return Err(Error::Config("fold count must be positive".into()));
    }
    if k > ds.len() {
        return Err(Error::Config(format!(
            "cannot build {k} folds from {} instances",
            ds.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, inst) in ds.instances().iter().enumerate() {
        groups.entry(inst.labels.to_string()).or_default().push(i);
    }
    let mut order = Vec::with_capacity(ds.len());
    for members in groups.values_mut() {
        members.shuffle(&mut rng);
        order.extend_from_slice(members);
    }
    let mut folds = vec![Vec::new(); k];
    for (j, idx) in order.into_iter().enumerate() {
        folds[j % k].push(idx);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}
