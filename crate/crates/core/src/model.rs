//! Rules, ordered rule models, prediction and the text model format.
//!
//! A model file is UTF-8 text:
//!
//! ```text
//! # liftrule model
//! version: 1
//! fingerprint: 3f9a...
//! config: {...}
//! labels: ["Class1","Class2"]
//! attributes: [...]
//! rules: 1
//! Class1, Class2=0 <- Att1>0.5, colour=red (12, 3)
//! structured:
//! {"body":[...],"head":[...],"stats":[[10,2],[2,1]]}
//! ```
//!
//! Rule lines show summed `(TP, FP)`; the structured section carries the same
//! rules losslessly, including per-assignment statistics.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{check_instance, Attribute, Dataset, LabelVector, Value};
use crate::error::{Error, Result};
use crate::head_search::{Head, LabelAssignment};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Condition {
    NominalEq { attr: usize, value: u32 },
    NumericLeq { attr: usize, threshold: f64 },
    NumericGt { attr: usize, threshold: f64 },
    /// Tests the state a previous rule predicted for a label. Fails while the
    /// label is still undecided.
    LabelTest { label: usize, present: bool },
}

impl Condition {
    pub fn matches(&self, values: &[Value], predicted: &[Option<bool>]) -> bool {
        match *self {
            Condition::NominalEq { attr, value } => values[attr] == Value::Nominal(value),
            Condition::NumericLeq { attr, threshold } => {
                matches!(values[attr], Value::Numeric(x) if x <= threshold)
            }
            Condition::NumericGt { attr, threshold } => {
                matches!(values[attr], Value::Numeric(x) if x > threshold)
            }
            Condition::LabelTest { label, present } => predicted[label] == Some(present),
        }
    }

    pub fn is_label_test(&self) -> bool {
        matches!(self, Condition::LabelTest { .. })
    }

    fn check(&self, schema: &[Attribute], n: usize) -> Result<()> {
        let ok = match *self {
            Condition::NominalEq { attr, value } => schema
                .get(attr)
                .and_then(|a| a.value_name(value))
                .is_some(),
            Condition::NumericLeq { attr, threshold } | Condition::NumericGt { attr, threshold } => {
                threshold.is_finite() && schema.get(attr).map_or(false, Attribute::is_numeric)
            }
            Condition::LabelTest { label, .. } => label < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Schema(format!("condition {self:?} does not fit the schema")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub body: Vec<Condition>,
    pub head: Head,
    /// Induction-time (TP, FP) per head assignment, in head order.
    pub stats: Vec<(u64, u64)>,
}

impl Rule {
    pub fn covers(&self, values: &[Value], predicted: &[Option<bool>]) -> bool {
        self.body.iter().all(|c| c.matches(values, predicted))
    }

    pub fn total_stats(&self) -> (u64, u64) {
        self.stats
            .iter()
            .fold((0, 0), |(tp, fp), &(a, b)| (tp + a, fp + b))
    }
}

/// Whether `rule` covers an instance given the labels predicted so far.
pub fn covers(rule: &Rule, values: &[Value], predicted: &[Option<bool>]) -> bool {
    rule.covers(values, predicted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleModel {
    pub rules: Vec<Rule>,
    schema: Vec<Attribute>,
    label_names: Vec<String>,
    fingerprint: String,
    /// JSON echo of the configuration the model was trained with.
    pub config: String,
}

pub fn schema_fingerprint(schema: &[Attribute], label_names: &[String]) -> String {
    let canonical = serde_json::to_string(&(schema, label_names)).expect("schema serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..16].iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl RuleModel {
    pub fn new(
        schema: Vec<Attribute>,
        label_names: Vec<String>,
        rules: Vec<Rule>,
        config: String,
    ) -> Result<Self> {
        let n = label_names.len();
        for (i, rule) in rules.iter().enumerate() {
            if rule.head.is_empty() {
                return Err(Error::Schema(format!("rule {i} has an empty head")));
            }
            if rule.head.labels().any(|l| l >= n) {
                return Err(Error::Schema(format!("rule {i} predicts an unknown label")));
            }
            if rule.stats.len() != rule.head.len() {
                return Err(Error::Schema(format!(
                    "rule {i} has {} stats for {} assignments",
                    rule.stats.len(),
                    rule.head.len()
                )));
            }
            for c in &rule.body {
                c.check(&schema, n)?;
            }
        }
        let fingerprint = schema_fingerprint(&schema, &label_names);
        Ok(RuleModel {
            rules,
            schema,
            label_names,
            fingerprint,
            config,
        })
    }

    /// A model without rules; predicts every label absent.
    pub fn empty(schema: Vec<Attribute>, label_names: Vec<String>) -> Self {
        Self::new(schema, label_names, Vec::new(), String::from("{}")).expect("empty model is valid")
    }

    pub fn schema(&self) -> &[Attribute] {
        &self.schema
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Predicts a label vector; also returns, per label, the index of the rule
    /// that decided it.
    pub fn predict_traced(&self, values: &[Value]) -> Result<(LabelVector, Vec<Option<usize>>)> {
        check_instance(&self.schema, values).map_err(Error::Input)?;
        let n = self.label_count();
        let mut state: Vec<Option<bool>> = vec![None; n];
        let mut decided_by = vec![None; n];
        for (r, rule) in self.rules.iter().enumerate() {
            if !rule.covers(values, &state) {
                continue;
            }
            for a in rule.head.assignments() {
                if state[a.label].is_none() {
                    state[a.label] = Some(a.present);
                    decided_by[a.label] = Some(r);
                }
            }
        }
        let labels = state.into_iter().map(|s| s.unwrap_or(false)).collect::<Vec<_>>();
        Ok((LabelVector::new(labels), decided_by))
    }

    /// Applies the rules in order; each covering rule sets only still-undecided
    /// labels. Labels no rule decides are predicted absent.
    pub fn predict(&self, values: &[Value]) -> Result<LabelVector> {
        self.predict_traced(values).map(|(v, _)| v)
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<LabelVector>> {
        if ds.schema() != self.schema.as_slice() {
            return Err(Error::Input(
                "dataset schema differs from the model schema".into(),
            ));
        }
        ds.instances().iter().map(|i| self.predict(&i.values)).collect()
    }

    fn quoted_label(&self, label: usize) -> String {
        quote(&self.label_names[label])
    }

    /// Human-readable form of one rule.
    pub fn rule_line(&self, rule: &Rule) -> String {
        let head = rule
            .head
            .assignments()
            .iter()
            .map(|a| {
                if a.present {
                    self.quoted_label(a.label)
                } else {
                    format!("{}=0", self.quoted_label(a.label))
                }
            })
            .collect::<Vec<_>>()
            .join(", ");
        let body = if rule.body.is_empty() {
            "true".to_string()
        } else {
            rule.body
                .iter()
                .map(|c| self.condition_text(c))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let (tp, fp) = rule.total_stats();
        format!("{head} <- {body} ({tp}, {fp})")
    }

    fn condition_text(&self, c: &Condition) -> String {
        match *c {
            Condition::NominalEq { attr, value } => {
                let a = &self.schema[attr];
                format!("{}={}", quote(&a.name), quote(a.value_name(value).unwrap_or("?")))
            }
            Condition::NumericLeq { attr, threshold } => {
                format!("{}<={}", quote(&self.schema[attr].name), threshold)
            }
            Condition::NumericGt { attr, threshold } => {
                format!("{}>{}", quote(&self.schema[attr].name), threshold)
            }
            Condition::LabelTest { label, present } => {
                format!("label:{}={}", self.quoted_label(label), u8::from(present))
            }
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("# liftrule model\n");
        let _ = writeln!(out, "version: {FORMAT_VERSION}");
        let _ = writeln!(out, "fingerprint: {}", self.fingerprint);
        let _ = writeln!(out, "config: {}", self.config);
        let _ = writeln!(
            out,
            "labels: {}",
            serde_json::to_string(&self.label_names).expect("labels serialize")
        );
        let _ = writeln!(
            out,
            "attributes: {}",
            serde_json::to_string(&self.schema).expect("schema serializes")
        );
        let _ = writeln!(out, "rules: {}", self.rules.len());
        for rule in &self.rules {
            out.push_str(&self.rule_line(rule));
            out.push('\n');
        }
        out.push_str("structured:\n");
        for rule in &self.rules {
            out.push_str(&serde_json::to_string(rule).expect("rule serializes"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |key: &str| -> Result<(usize, String)> {
            loop {
                let (no, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(0, format!("missing '{key}' header")))?;
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let value = line
                    .strip_prefix(key)
                    .and_then(|r| r.strip_prefix(':'))
                    .ok_or_else(|| Error::parse(no, format!("expected '{key}:' header")))?;
                return Ok((no, value.trim().to_string()));
            }
        };
        let (no, version) = header("version")?;
        if version != FORMAT_VERSION.to_string() {
            return Err(Error::parse(no, format!("unsupported model version '{version}'")));
        }
        let (fp_line, fingerprint) = header("fingerprint")?;
        let (_, config) = header("config")?;
        let (no, labels) = header("labels")?;
        let label_names: Vec<String> =
            serde_json::from_str(&labels).map_err(|e| Error::parse(no, e.to_string()))?;
        let (no, attrs) = header("attributes")?;
        let schema: Vec<Attribute> =
            serde_json::from_str(&attrs).map_err(|e| Error::parse(no, e.to_string()))?;
        let (no, count) = header("rules")?;
        let count: usize = count
            .parse()
            .map_err(|_| Error::parse(no, format!("invalid rule count '{count}'")))?;

        let shell = RuleModel::new(schema, label_names, Vec::new(), config)
            .map_err(|e| Error::parse(fp_line, e.to_string()))?;
        if shell.fingerprint != fingerprint {
            return Err(Error::parse(
                fp_line,
                "fingerprint does not match the attribute and label declarations",
            ));
        }

        let rest: Vec<(usize, &str)> = lines.collect();
        if rest.len() < count + 1 {
            return Err(Error::parse(
                rest.last().map_or(0, |l| l.0),
                "model file is truncated",
            ));
        }
        let mut from_lines = Vec::with_capacity(count);
        for &(no, line) in &rest[..count] {
            from_lines.push((no, shell.parse_rule_line(line).map_err(|m| Error::parse(no, m))?));
        }
        let (no, marker) = rest[count];
        if marker.trim() != "structured:" {
            return Err(Error::parse(no, "expected 'structured:' section"));
        }
        let structured: Vec<(usize, &str)> = rest[count + 1..]
            .iter()
            .copied()
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        if structured.len() != count {
            return Err(Error::parse(
                no,
                format!("structured section has {} rules, expected {count}", structured.len()),
            ));
        }
        let mut rules = Vec::with_capacity(count);
        for ((line_no, parsed), &(no, json)) in from_lines.into_iter().zip(&structured) {
            let rule: Rule =
                serde_json::from_str(json).map_err(|e| Error::parse(no, e.to_string()))?;
            if rule.head != parsed.head
                || rule.body != parsed.body
                || rule.total_stats() != parsed.total_stats()
            {
                return Err(Error::parse(
                    line_no,
                    "rule line disagrees with its structured record",
                ));
            }
            rules.push(rule);
        }
        RuleModel::new(shell.schema, shell.label_names, rules, shell.config)
    }

    /// Parses a rule line. The summed (TP, FP) is attached to the first assignment.
    fn parse_rule_line(&self, line: &str) -> std::result::Result<Rule, String> {
        let line = line.trim();
        let open = line.rfind(" (").ok_or("missing (TP, FP) annotation")?;
        let stats = line[open + 2..]
            .strip_suffix(')')
            .ok_or("missing closing parenthesis")?;
        let (tp, fp) = stats.split_once(',').ok_or("malformed (TP, FP)")?;
        let tp: u64 = tp.trim().parse().map_err(|_| format!("bad TP '{tp}'"))?;
        let fp: u64 = fp.trim().parse().map_err(|_| format!("bad FP '{fp}'"))?;
        let rule_text = &line[..open];
        let parts = split_outside_quotes(rule_text, " <- ");
        if parts.len() != 2 {
            return Err("expected exactly one '<-'".into());
        }
        let mut assignments = Vec::new();
        for item in split_outside_quotes(parts[0], ", ") {
            let (name, rest) = read_name(item.trim())?;
            let label = self.label_index(&name)?;
            let present = match rest {
                "" | "=1" => true,
                "=0" => false,
                other => return Err(format!("bad label assignment suffix '{other}'")),
            };
            assignments.push(LabelAssignment::new(label, present));
        }
        let head = Head::new(assignments).map_err(|e| e.to_string())?;
        let mut body = Vec::new();
        if parts[1].trim() != "true" {
            for item in split_outside_quotes(parts[1], ", ") {
                body.push(self.parse_condition(item.trim())?);
            }
        }
        let mut rule_stats = vec![(0, 0); head.len()];
        if let Some(first) = rule_stats.first_mut() {
            *first = (tp, fp);
        }
        Ok(Rule {
            body,
            head,
            stats: rule_stats,
        })
    }

    fn label_index(&self, name: &str) -> std::result::Result<usize, String> {
        self.label_names
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| format!("unknown label '{name}'"))
    }

    fn parse_condition(&self, text: &str) -> std::result::Result<Condition, String> {
        if let Some(rest) = text.strip_prefix("label:") {
            let (name, tail) = read_name(rest)?;
            let label = self.label_index(&name)?;
            let present = match tail {
                "=1" => true,
                "=0" => false,
                other => return Err(format!("bad label test '{other}'")),
            };
            return Ok(Condition::LabelTest { label, present });
        }
        let (name, tail) = read_name(text)?;
        let attr = self
            .schema
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| format!("unknown attribute '{name}'"))?;
        let num = |s: &str| -> std::result::Result<f64, String> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("bad threshold '{s}'"))
        };
        if let Some(v) = tail.strip_prefix("<=") {
            Ok(Condition::NumericLeq {
                attr,
                threshold: num(v)?,
            })
        } else if let Some(v) = tail.strip_prefix('>') {
            Ok(Condition::NumericGt {
                attr,
                threshold: num(v)?,
            })
        } else if let Some(v) = tail.strip_prefix('=') {
            let (value, rest) = read_name(v)?;
            if !rest.is_empty() {
                return Err(format!("trailing text '{rest}'"));
            }
            let value = self.schema[attr]
                .value_index(&value)
                .ok_or_else(|| format!("'{value}' is not a value of '{name}'"))?;
            Ok(Condition::NominalEq { attr, value })
        } else {
            Err(format!("unknown operator in '{text}'"))
        }
    }
}

impl fmt::Display for RuleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{}", self.rule_line(rule))?;
        }
        Ok(())
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "true"
        || s.starts_with("label:")
        || s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '<' | '>' | '=' | '(' | ')' | '\'' | '\\'))
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// Reads a possibly quoted name; returns it and the remaining text.
fn read_name(s: &str) -> std::result::Result<(String, &str), String> {
    if let Some(inner) = s.strip_prefix('\'') {
        let mut out = String::new();
        let mut escaped = false;
        for (i, c) in inner.char_indices() {
            if escaped {
                out.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '\'' {
                return Ok((out, &inner[i + 1..]));
            } else {
                out.push(c);
            }
        }
        Err("unterminated quote".into())
    } else {
        let end = s.find(['<', '>', '=']).unwrap_or(s.len());
        if end == 0 {
            return Err(format!("missing name in '{s}'"));
        }
        Ok((s[..end].to_string(), &s[end..]))
    }
}

fn split_outside_quotes<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut in_quote = false;
    let mut escaped = false;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if in_quote {
            if escaped {
                escaped = false;
            } else if c == b'\\' {
                escaped = true;
            } else if c == b'\'' {
                in_quote = false;
            }
            i += 1;
            continue;
        }
        if c == b'\'' {
            in_quote = true;
            i += 1;
        } else if s[i..].starts_with(sep) {
            parts.push(&s[start..i]);
            i += sep.len();
            start = i;
        } else {
            i += 1;
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Structural summary of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelStats {
    pub rule_count: usize,
    pub condition_count: usize,
    pub label_condition_count: usize,
    pub multi_label_head_count: usize,
    /// Absent when the model has no multi-label head.
    pub mean_labels_per_multi_label_head: Option<f64>,
    pub mean_conditions_per_rule: Option<f64>,
    pub mean_labels_per_head: Option<f64>,
}

pub fn model_stats(model: &RuleModel) -> ModelStats {
    let rules = &model.rules;
    let condition_count: usize = rules.iter().map(|r| r.body.len()).sum();
    let label_condition_count = rules
        .iter()
        .flat_map(|r| &r.body)
        .filter(|c| c.is_label_test())
        .count();
    let multi: Vec<usize> = rules
        .iter()
        .map(|r| r.head.len())
        .filter(|&s| s >= 2)
        .collect();
    let mean = |total: usize, count: usize| (count > 0).then(|| total as f64 / count as f64);
    ModelStats {
        rule_count: rules.len(),
        condition_count,
        label_condition_count,
        multi_label_head_count: multi.len(),
        mean_labels_per_multi_label_head: mean(multi.iter().sum(), multi.len()),
        mean_conditions_per_rule: mean(condition_count, rules.len()),
        mean_labels_per_head: mean(rules.iter().map(|r| r.head.len()).sum(), rules.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::head_search::LabelAssignment as LA;

    fn schema() -> Vec<Attribute> {
        vec![
            Attribute::nominal("A", vec!["a".into(), "b".into()]).unwrap(),
            Attribute::numeric("B"),
        ]
    }

    fn labels() -> Vec<String> {
        vec!["l1".into(), "l2".into(), "l3".into()]
    }

    fn rule(body: Vec<Condition>, head: Vec<LA>) -> Rule {
        let head = Head::new(head).unwrap();
        let stats = vec![(1, 0); head.len()];
        Rule { body, head, stats }
    }

    #[test]
    fn covers_semantics() {
        let r = rule(vec![], vec![LA::new(0, true)]);
        assert!(covers(&r, &[Value::Nominal(0), Value::Numeric(1.0)], &[None; 3]));
        let gt = rule(
            vec![Condition::NumericGt {
                attr: 1,
                threshold: 2.0,
            }],
            vec![LA::new(0, true)],
        );
        assert!(!gt.covers(&[Value::Nominal(0), Value::Numeric(2.0)], &[None; 3]));
        assert!(gt.covers(&[Value::Nominal(0), Value::Numeric(2.5)], &[None; 3]));
        let lt = rule(
            vec![Condition::LabelTest {
                label: 2,
                present: true,
            }],
            vec![LA::new(0, true)],
        );
        assert!(!lt.covers(&[Value::Nominal(0), Value::Numeric(0.0)], &[None, None, None]));
        assert!(lt.covers(&[Value::Nominal(0), Value::Numeric(0.0)], &[None, None, Some(true)]));
        assert!(!lt.covers(&[Value::Nominal(0), Value::Numeric(0.0)], &[None, None, Some(false)]));
    }

    #[test]
    fn earlier_rule_wins() {
        let model = RuleModel::new(
            schema(),
            labels(),
            vec![
                rule(
                    vec![Condition::NominalEq { attr: 0, value: 0 }],
                    vec![LA::new(0, true)],
                ),
                rule(
                    vec![Condition::NumericGt {
                        attr: 1,
                        threshold: 2.0,
                    }],
                    vec![LA::new(0, false), LA::new(1, true)],
                ),
            ],
            "{}".into(),
        )
        .unwrap();
        let x = [Value::Nominal(0), Value::Numeric(3.0)];
        let (y, by) = model.predict_traced(&x).unwrap();
        assert_eq!(y.bits(), &[true, true, false]);
        assert_eq!(by, vec![Some(0), Some(1), None]);
        assert!(model.predict(&[Value::Numeric(1.0)]).is_err());
    }

    #[test]
    fn label_test_chain_in_prediction() {
        // the second rule fires only once the first has decided l3
        let model = RuleModel::new(
            schema(),
            labels(),
            vec![
                rule(
                    vec![Condition::NominalEq { attr: 0, value: 1 }],
                    vec![LA::new(2, true)],
                ),
                rule(
                    vec![Condition::LabelTest {
                        label: 2,
                        present: true,
                    }],
                    vec![LA::new(0, true)],
                ),
            ],
            "{}".into(),
        )
        .unwrap();
        let a = model.predict(&[Value::Nominal(0), Value::Numeric(0.0)]).unwrap();
        assert_eq!(a.bits(), &[false, false, false]);
        let b = model.predict(&[Value::Nominal(1), Value::Numeric(0.0)]).unwrap();
        assert_eq!(b.bits(), &[true, false, true]);
    }

    #[test]
    fn empty_model_predicts_absent() {
        let model = RuleModel::empty(schema(), labels());
        let y = model.predict(&[Value::Nominal(1), Value::Numeric(0.0)]).unwrap();
        assert_eq!(y.count_ones(), 0);
        assert_eq!(y.len(), 3);
    }

    #[test]
    fn rule_line_format() {
        let schema: Vec<Attribute> = (1..=61).map(|i| Attribute::numeric(format!("Att{i}"))).collect();
        let labels: Vec<String> = (1..=5).map(|i| format!("Class{i}")).collect();
        let r = Rule {
            body: vec![Condition::NumericGt {
                attr: 60,
                threshold: 0.5,
            }],
            head: Head::single(4, true),
            stats: vec![(112, 50)],
        };
        let model = RuleModel::new(schema, labels, vec![r.clone()], "{}".into()).unwrap();
        assert_eq!(model.rule_line(&r), "Class5 <- Att61>0.5 (112, 50)");
        let empty_body = Rule {
            body: vec![],
            head: Head::new(vec![LA::new(0, true), LA::new(1, false)]).unwrap(),
            stats: vec![(3, 1), (2, 0)],
        };
        assert_eq!(model.rule_line(&empty_body), "Class1, Class2=0 <- true (5, 1)");
    }

    #[test]
    fn round_trip_with_awkward_names() {
        let schema = vec![
            Attribute::nominal("colour, main", vec!["dark blue".into(), "it's".into(), "x=y".into()])
                .unwrap(),
            Attribute::numeric("size<cm>"),
        ];
        let labels = vec!["true".into(), "a b".into(), "label:x".into()];
        let model = RuleModel::new(
            schema,
            labels,
            vec![
                Rule {
                    body: vec![
                        Condition::NominalEq { attr: 0, value: 1 },
                        Condition::NumericLeq {
                            attr: 1,
                            threshold: -0.125,
                        },
                        Condition::LabelTest {
                            label: 2,
                            present: false,
                        },
                    ],
                    head: Head::new(vec![LA::new(0, true), LA::new(1, false)]).unwrap(),
                    stats: vec![(4, 1), (2, 2)],
                },
                Rule {
                    body: vec![Condition::NominalEq { attr: 0, value: 2 }],
                    head: Head::single(2, true),
                    stats: vec![(1, 0)],
                },
            ],
            r#"{"seed":1}"#.into(),
        )
        .unwrap();
        let text = model.serialize();
        assert_eq!(RuleModel::parse(&text).unwrap(), model);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let model = RuleModel::new(
            schema(),
            labels(),
            vec![rule(vec![], vec![LA::new(0, true)])],
            "{}".into(),
        )
        .unwrap();
        let text = model.serialize();
        let broken = text.replace("l1 <- true (1, 0)", "l1 <- nonsense (1, 0)");
        match RuleModel::parse(&broken) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad_fp = text.replace("fingerprint: ", "fingerprint: 00");
        assert!(RuleModel::parse(&bad_fp).is_err());
    }

    #[test]
    fn stats_counts() {
        let heads = [1usize, 1, 2, 3];
        let rules = heads
            .iter()
            .map(|&k| {
                rule(
                    vec![Condition::NominalEq { attr: 0, value: 0 }],
                    (0..k).map(|l| LA::new(l, true)).collect(),
                )
            })
            .collect();
        let model = RuleModel::new(schema(), labels(), rules, "{}".into()).unwrap();
        let s = model_stats(&model);
        assert_eq!(s.multi_label_head_count, 2);
        assert_eq!(s.mean_labels_per_multi_label_head, Some(2.5));
        assert_eq!(s.condition_count, 4);

        let single = RuleModel::new(
            schema(),
            labels(),
            vec![rule(vec![], vec![LA::new(0, true)])],
            "{}".into(),
        )
        .unwrap();
        assert_eq!(model_stats(&single).mean_labels_per_multi_label_head, None);
    }
}
