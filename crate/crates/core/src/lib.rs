//! Multi-label rule learning with lifted, label-wise decomposable heuristics.

pub mod data;
pub mod error;
pub mod harness;
pub mod head_search;
pub mod learner;
pub mod lift;
pub mod loaders;
pub mod metrics;
pub mod model;
pub mod synthetic;

pub use data::{Attribute, AttributeKind, CoverageState, Dataset, Instance, LabelVector, Value};
pub use error::{Error, Result};
pub use head_search::{Head, HeadCandidate, LabelAssignment, SearchMode};
pub use learner::{learn, learn_with_report, LearnReport, LearnerConfig};
pub use lift::LiftFunction;
pub use metrics::{Averaging, ConfusionMatrix, HeuristicSpec, Measure};
pub use model::{Condition, Rule, RuleModel};
