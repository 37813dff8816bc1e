//! Seeded generator for datasets with planted pairwise label co-occurrence.
//!
//! Labels come in pairs driven by one hidden switch each. Every switch has a
//! noisy numeric indicator feature; the two labels of a pair copy their switch
//! with independent flip noise. Extra features are pure noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Attribute, Dataset, Instance, LabelVector, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceParams {
    pub instances: usize,
    pub label_pairs: usize,
    pub noise_features: usize,
    /// Probability that a hidden switch is on.
    pub switch_rate: f64,
    /// Per-label probability of disagreeing with its switch.
    pub label_flip: f64,
    /// Half-width of the uniform noise added to indicator features.
    pub feature_noise: f64,
    pub seed: u64,
}

impl Default for CooccurrenceParams {
    fn default() -> Self {
        CooccurrenceParams {
            instances: 500,
            label_pairs: 3,
            noise_features: 4,
            switch_rate: 0.4,
            label_flip: 0.08,
            feature_noise: 0.6,
            seed: 7,
        }
    }
}

pub fn cooccurrence(p: &CooccurrenceParams) -> Result<Dataset> {
    let probs = [p.switch_rate, p.label_flip];
    if probs.iter().any(|x| !(0.0..=1.0).contains(x)) || !(p.feature_noise >= 0.0) {
        return Err(Error::Config("generator rates must lie in [0, 1]".into()));
    }
    if p.label_pairs == 0 {
        return Err(Error::Config("need at least one label pair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut schema: Vec<Attribute> = (0..p.label_pairs)
        .map(|j| Attribute::numeric(format!("signal{j}")))
        .collect();
    schema.extend((0..p.noise_features).map(|j| Attribute::numeric(format!("noise{j}"))));
    let labels = (0..2 * p.label_pairs).map(|l| format!("y{l}")).collect();

    let mut instances = Vec::with_capacity(p.instances);
    for _ in 0..p.instances {
        let switches: Vec<bool> = (0..p.label_pairs).map(|_| rng.gen_bool(p.switch_rate)).collect();
        let mut values = Vec::with_capacity(schema.len());
        for &s in &switches {
            let base = if s { 1.0 } else { 0.0 };
            values.push(Value::Numeric(base + rng.gen_range(-1.0..=1.0) * p.feature_noise));
        }
        for _ in 0..p.noise_features {
            values.push(Value::Numeric(rng.gen_range(0.0..1.0)));
        }
        let bits = switches
            .iter()
            .flat_map(|&s| [s, s])
            .map(|s| s ^ rng.gen_bool(p.label_flip))
            .collect();
        instances.push(Instance {
            values,
            labels: LabelVector::new(bits),
        });
    }
    Dataset::new(schema, labels, instances)
}
