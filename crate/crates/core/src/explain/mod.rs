//! Local surrogate explanations and the class–entity entropy analysis.

pub mod lime;
pub mod ranking;

pub use lime::{derive_seed, fit_weighted_ridge, lime_explain, Explanation, LimeConfig, RidgeFit};
pub use ranking::{
    class_entity_entropy, entropy_table, math_entity_streams, rank_entities, run_explain_analysis, text_entity_streams,
    EntityRanking, EntityStreams, EntropyDirection, EntropyRow, EntropyTable, ExplainConfig, ExplainReport, FeatureKind,
    RankConfig, RankMode,
};
