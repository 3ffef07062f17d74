use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::dataset::{document_labels, Granularity, LabelAxis, LabelMode};
use super::logreg::LogRegConfig;
use super::pipeline::{train_and_evaluate, TextClassifier};
use super::split::stratified_split;
use crate::corpus::Corpus;
use crate::encode::TokenStream;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionDirection {
    ArxivFromMsc,
    MscFromArxiv,
}

impl PredictionDirection {
    pub fn source(self) -> LabelAxis {
        match self {
            PredictionDirection::ArxivFromMsc => LabelAxis::Msc,
            PredictionDirection::MscFromArxiv => LabelAxis::Arxiv,
        }
    }

    pub fn target(self) -> LabelAxis {
        self.source().other()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryReport {
    pub direction: PredictionDirection,
    pub label_mode: LabelMode,
    pub granularity: Granularity,
    pub documents: usize,
    pub skipped: usize,
    pub train_instances: usize,
    pub test_instances: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

/// Predict one label axis from the other. Each document's source labels
/// become a token stream (one token per code); in multi mode every target
/// label is a separate instance. Documents are split 80/20, stratified by
/// their first target label, before expansion.
pub fn predict_categories(
    corpus: &Corpus,
    direction: PredictionDirection,
    label_mode: LabelMode,
    granularity: Granularity,
    config: &LogRegConfig,
    seed: u64,
) -> Result<CategoryReport> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for doc in &corpus.documents {
        let source = document_labels(doc, direction.source(), label_mode, granularity);
        let target = document_labels(doc, direction.target(), label_mode, granularity);
        if source.is_empty() || target.is_empty() {
            skipped += 1;
            continue;
        }
        rows.push((TokenStream::new(doc.doc_id.clone(), source), target));
    }
    if rows.is_empty() {
        return Err(Error::Validation("no document carries labels on both axes".into()));
    }
    let strata: Vec<String> = rows.iter().map(|(_, t)| t[0].clone()).collect();
    let split = stratified_split(&strata, 0.2, seed);
    let expand = |idx: &[usize]| {
        let mut streams = Vec::new();
        let mut labels = Vec::new();
        for &i in idx {
            for t in &rows[i].1 {
                streams.push(rows[i].0.clone());
                labels.push(t.clone());
            }
        }
        (streams, labels)
    };
    let (train_s, train_l) = expand(&split.train);
    let (test_s, test_l) = expand(&split.test);
    if test_s.is_empty() {
        return Err(Error::Validation("split left no test documents".into()));
    }
    let (_, acc) = train_and_evaluate((&train_s, &train_l), (&test_s, &test_l), config, seed)?;
    Ok(CategoryReport {
        direction,
        label_mode,
        granularity,
        documents: rows.len(),
        skipped,
        train_instances: acc.train_instances,
        test_instances: acc.test_instances,
        train_accuracy: acc.train_accuracy,
        test_accuracy: acc.test_accuracy,
    })
}

/// Classifier prediction for every source label on its own, trained on all
/// documents with multi-label expansion. Comparable to the argmax over the
/// co-occurrence matrix in the same direction.
pub fn predict_label_map(
    corpus: &Corpus,
    direction: PredictionDirection,
    config: &LogRegConfig,
    seed: u64,
) -> Result<BTreeMap<String, String>> {
    let mut streams = Vec::new();
    let mut labels = Vec::new();
    let mut sources = BTreeSet::new();
    for doc in &corpus.documents {
        let source = document_labels(doc, direction.source(), LabelMode::Multi, Granularity::Fine);
        if source.is_empty() {
            continue;
        }
        for t in document_labels(doc, direction.target(), LabelMode::Multi, Granularity::Fine) {
            streams.push(TokenStream::new(doc.doc_id.clone(), source.clone()));
            labels.push(t);
        }
        sources.extend(source);
    }
    if streams.is_empty() {
        return Err(Error::Validation("no document carries labels on both axes".into()));
    }
    let clf = TextClassifier::train(&streams, &labels, config, seed)?;
    Ok(sources
        .into_iter()
        .map(|s| {
            let predicted = clf.predict(std::slice::from_ref(&s)).to_string();
            (s, predicted)
        })
        .collect())
}
