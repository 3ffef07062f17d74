//! Identifier-name enrichment, concept augmentation and text/math ablation.

pub mod experiment;
pub mod source;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use experiment::{
    run_ablation_experiment, run_augmentation_experiment, AblationReport, AblationRow, AugmentationCell,
    AugmentationReport, CoverageViolation, ExperimentConfig,
};
pub use source::{ConceptCategoryMap, SymbolNameSource};

use crate::corpus::{Corpus, Document};
use crate::encode::{document_text_tokens, tokenize, StopwordList, TokenStream};

/// Text tokens of a document with stopwords removed; the base stream of
/// every experiment.
pub fn text_stream(doc: &Document) -> TokenStream {
    StopwordList::shipped().filter(TokenStream::new(doc.doc_id.clone(), document_text_tokens(doc)))
}

/// Distinct identifier symbols in first-seen order.
pub fn distinct_symbols(doc: &Document) -> Vec<String> {
    let mut seen = HashSet::new();
    doc.identifier_occurrences()
        .unwrap_or_default()
        .into_iter()
        .map(|o| o.symbol)
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

/// Append the `top_k` candidate names of every distinct symbol in the
/// document to its text stream. Unknown symbols add nothing.
pub fn augment_identifiers(doc: &Document, source: &SymbolNameSource, top_k: usize) -> TokenStream {
    let mut stream = text_stream(doc);
    for symbol in distinct_symbols(doc) {
        for (name, _) in source.top(&symbol, top_k) {
            stream.tokens.extend(tokenize(name));
        }
    }
    stream
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AblationMode {
    Text,
    Math,
    TextPlusMath,
    TextMinusMath,
}

impl AblationMode {
    pub const ALL: [AblationMode; 4] =
        [AblationMode::Text, AblationMode::Math, AblationMode::TextPlusMath, AblationMode::TextMinusMath];
}

/// Restrict or extend a text stream by the math-derived token set.
pub fn ablate(text: &TokenStream, mode: AblationMode, math_tokens: &BTreeSet<String>) -> TokenStream {
    let math = || text.tokens.iter().filter(|t| math_tokens.contains(*t)).cloned();
    let tokens = match mode {
        AblationMode::Text => text.tokens.clone(),
        AblationMode::Math => math().collect(),
        AblationMode::TextPlusMath => text.tokens.iter().cloned().chain(math()).collect(),
        AblationMode::TextMinusMath => text.tokens.iter().filter(|t| !math_tokens.contains(*t)).cloned().collect(),
    };
    TokenStream::new(text.doc_id.clone(), tokens)
}

/// Tokens of every gold identifier name in the corpus plus every concept
/// phrase, minus stopwords.
pub fn math_token_set(corpus: &Corpus, concepts: &ConceptCategoryMap) -> BTreeSet<String> {
    let stop = StopwordList::shipped();
    let names = corpus
        .documents
        .iter()
        .filter_map(|d| d.gold.as_ref())
        .flat_map(|g| g.identifier_names.values())
        .flat_map(|m| m.values())
        .flat_map(|n| tokenize(n));
    names.chain(concepts.tokens()).filter(|t| !stop.contains(t)).collect()
}
