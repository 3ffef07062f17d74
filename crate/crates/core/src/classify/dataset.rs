use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::encode::SparseVector;
use crate::error::{Error, Result};

/// Sparse feature vectors paired with indices into a sorted class list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledDataset {
    pub classes: Vec<String>,
    pub vectors: Vec<SparseVector>,
    pub labels: Vec<usize>,
}

impl LabeledDataset {
    /// Class list is the sorted set of `labels`.
    pub fn new(vectors: Vec<SparseVector>, labels: Vec<String>) -> Result<Self> {
        let classes: Vec<String> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        Self::with_classes(vectors, labels, classes)
    }

    pub fn with_classes(vectors: Vec<SparseVector>, labels: Vec<String>, classes: Vec<String>) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::Validation(format!("{} vectors but {} labels", vectors.len(), labels.len())));
        }
        if classes.iter().collect::<BTreeSet<_>>().len() != classes.len() {
            return Err(Error::Validation("duplicate class in label set".into()));
        }
        let labels = labels
            .iter()
            .map(|l| {
                classes
                    .iter()
                    .position(|c| c == l)
                    .ok_or_else(|| Error::Validation(format!("label {l:?} not in the label set")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset { classes, vectors, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.vectors.iter().map(SparseVector::dim_hint).max().unwrap_or(0)
    }

    pub fn present_classes(&self) -> usize {
        self.labels.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.classes[self.labels[i]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelAxis {
    Arxiv,
    Msc,
}

impl LabelAxis {
    pub fn labels(self, doc: &Document) -> &[String] {
        match self {
            LabelAxis::Arxiv => &doc.arxiv,
            LabelAxis::Msc => &doc.msc,
        }
    }

    pub fn other(self) -> LabelAxis {
        match self {
            LabelAxis::Arxiv => LabelAxis::Msc,
            LabelAxis::Msc => LabelAxis::Arxiv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// First listed label only.
    Single,
    /// One instance per label.
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Fine,
    /// MSC truncated to its two leading digits, arXiv to its first level.
    Coarse,
}

impl Granularity {
    pub fn apply(self, axis: LabelAxis, label: &str) -> String {
        match (self, axis) {
            (Granularity::Fine, _) => label.to_string(),
            (Granularity::Coarse, LabelAxis::Msc) => label.chars().take(2).collect(),
            (Granularity::Coarse, LabelAxis::Arxiv) => label.split('.').next().unwrap_or(label).to_string(),
        }
    }
}

/// A document with k labels yields k (doc_id, label) instances. Unlabeled
/// documents are skipped.
pub fn expand_multilabel(corpus: &Corpus, axis: LabelAxis) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for doc in &corpus.documents {
        let labels = axis.labels(doc);
        if labels.is_empty() {
            skipped += 1;
        }
        let mut seen = BTreeSet::new();
        for label in labels {
            if seen.insert(label) {
                out.push((doc.doc_id.clone(), label.clone()));
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} documents carry no {axis:?} label and were skipped");
    }
    out
}

/// Labels of one document after mode and granularity are applied, deduplicated
/// in first-seen order.
pub fn document_labels(doc: &Document, axis: LabelAxis, mode: LabelMode, granularity: Granularity) -> Vec<String> {
    let raw = axis.labels(doc);
    let raw = match mode {
        LabelMode::Single => &raw[..raw.len().min(1)],
        LabelMode::Multi => raw,
    };
    let mut out: Vec<String> = Vec::new();
    for l in raw {
        let g = granularity.apply(axis, l);
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}
