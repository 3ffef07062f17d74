//! Identifier, name and class statistics.

pub mod cooccurrence;
pub mod entropy;
pub mod library;

pub use cooccurrence::{
    argmax_predict, build_cooccurrence, compare_predictions, uncertainty_report, CooccurrenceMatrix, Direction,
    LabelUncertainty, PredictionComparison, UncertaintyReport,
};
pub use entropy::{margin_uncertainty, shannon_entropy, weighted_entropy, CountDistribution};
pub use library::{
    build_distribution_library, build_distribution_library_with, entropy_summary, ClassAxis, DistributionLibrary,
    EntropySummary, KeyAxis, Nested, Nested2,
};
