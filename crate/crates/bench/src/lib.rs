//! Shared fixtures for the benchmarks.

use liftrule::data::Dataset;
use liftrule::synthetic::{cooccurrence, CooccurrenceParams};

/// Co-occurrence data with `2 * label_pairs` labels.
pub fn fixture(instances: usize, label_pairs: usize) -> Dataset {
    cooccurrence(&CooccurrenceParams {
        instances,
        label_pairs,
        ..CooccurrenceParams::default()
    })
    .expect("fixture parameters are valid")
}

/// Every other instance, as the coverage of a body.
pub fn half_cover(ds: &Dataset) -> Vec<usize> {
    (0..ds.len()).step_by(2).collect()
}
