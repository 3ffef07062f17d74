use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::entropy::{shannon_entropy, CountDistribution};
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Which label scheme supplies the class of a document. The primary label
/// is the first one listed on that axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ClassAxis {
    #[default]
    ArxivPrimary,
    MscPrimary,
}

impl ClassAxis {
    pub fn primary_label(self, doc: &Document) -> Option<&str> {
        match self {
            ClassAxis::ArxivPrimary => doc.arxiv.first(),
            ClassAxis::MscPrimary => doc.msc.first(),
        }
        .map(String::as_str)
    }
}

pub type Nested = BTreeMap<String, CountDistribution>;
pub type Nested2 = BTreeMap<String, BTreeMap<String, CountDistribution>>;

/// Document-level presence counts over (class, identifier symbol, name).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionLibrary {
    pub class: CountDistribution,
    pub class_identifier: Nested,
    pub class_semantics: Nested,
    pub identifier_class: Nested,
    pub identifier_semantics: Nested,
    pub identifier_class_semantics: Nested2,
    pub semantics_class: Nested,
    pub semantics_identifier: Nested,
    pub semantics_class_identifier: Nested2,
}

fn bump(map: &mut Nested, outer: &str, inner: &str) {
    map.entry(outer.to_string()).or_default().increment(inner);
}

fn bump2(map: &mut Nested2, a: &str, b: &str, c: &str) {
    map.entry(a.to_string()).or_default().entry(b.to_string()).or_default().increment(c);
}

fn merge_nested(into: &mut Nested, from: Nested) {
    for (k, d) in from {
        into.entry(k).or_default().merge(&d);
    }
}

fn merge_nested2(into: &mut Nested2, from: Nested2) {
    for (k, inner) in from {
        merge_nested(into.entry(k).or_default(), inner);
    }
}

impl DistributionLibrary {
    /// Counts contributed by a single document.
    pub fn from_document(doc: &Document, axis: ClassAxis) -> Result<Self> {
        let mut lib = DistributionLibrary::default();
        let Some(class) = axis.primary_label(doc) else {
            return Ok(lib);
        };
        let occurrences = doc.identifier_occurrences()?;
        let symbols: BTreeSet<&str> = occurrences.iter().map(|o| o.symbol.as_str()).collect();
        let pairs: BTreeSet<(&str, &str)> = occurrences
            .iter()
            .filter_map(|o| o.name.as_deref().map(|n| (o.symbol.as_str(), n)))
            .collect();
        let names: BTreeSet<&str> = pairs.iter().map(|&(_, n)| n).collect();

        lib.class.increment(class);
        for s in &symbols {
            bump(&mut lib.class_identifier, class, s);
            bump(&mut lib.identifier_class, s, class);
        }
        for n in &names {
            bump(&mut lib.class_semantics, class, n);
            bump(&mut lib.semantics_class, n, class);
        }
        for &(s, n) in &pairs {
            bump(&mut lib.identifier_semantics, s, n);
            bump(&mut lib.semantics_identifier, n, s);
            bump2(&mut lib.identifier_class_semantics, s, class, n);
            bump2(&mut lib.semantics_class_identifier, n, class, s);
        }
        Ok(lib)
    }

    /// Associative, commutative merge.
    pub fn merge(mut self, other: DistributionLibrary) -> Self {
        self.class.merge(&other.class);
        merge_nested(&mut self.class_identifier, other.class_identifier);
        merge_nested(&mut self.class_semantics, other.class_semantics);
        merge_nested(&mut self.identifier_class, other.identifier_class);
        merge_nested(&mut self.identifier_semantics, other.identifier_semantics);
        merge_nested2(&mut self.identifier_class_semantics, other.identifier_class_semantics);
        merge_nested(&mut self.semantics_class, other.semantics_class);
        merge_nested(&mut self.semantics_identifier, other.semantics_identifier);
        merge_nested2(&mut self.semantics_class_identifier, other.semantics_class_identifier);
        self
    }

    /// The nine distributions with their display names, in table order.
    pub fn named_views(&self) -> Vec<(&'static str, serde_json::Value)> {
        let v = |x: &dyn erased::Ser| x.to_value();
        vec![
            ("class", v(&self.class)),
            ("class-identifier", v(&self.class_identifier)),
            ("class-semantics", v(&self.class_semantics)),
            ("identifier-class", v(&self.identifier_class)),
            ("identifier-semantics", v(&self.identifier_semantics)),
            ("identifier-class-semantics", v(&self.identifier_class_semantics)),
            ("semantics-class", v(&self.semantics_class)),
            ("semantics-identifier", v(&self.semantics_identifier)),
            ("semantics-class-identifier", v(&self.semantics_class_identifier)),
        ]
    }
}

mod erased {
    pub trait Ser {
        fn to_value(&self) -> serde_json::Value;
    }
    impl<T: serde::Serialize> Ser for T {
        fn to_value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("count maps always serialize")
        }
    }
}

/// Build the nine-distribution library.
pub fn build_distribution_library(corpus: &Corpus, axis: ClassAxis) -> Result<DistributionLibrary> {
    build_distribution_library_with(corpus, axis, Execution::default())
}

pub fn build_distribution_library_with(corpus: &Corpus, axis: ClassAxis, exec: Execution) -> Result<DistributionLibrary> {
    if corpus.is_empty() {
        return Err(Error::Validation("cannot build a distribution library from an empty corpus".into()));
    }
    exec.fold(
        &corpus.documents,
        || Ok(DistributionLibrary::default()),
        |acc: Result<DistributionLibrary>, doc| Ok(acc?.merge(DistributionLibrary::from_document(doc, axis)?)),
        |a, b| Ok(a?.merge(b?)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyAxis {
    SymbolKeyed,
    NameKeyed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySummary {
    pub keys: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Min/mean/max entropy of the class distribution of every symbol (or name).
pub fn entropy_summary(library: &DistributionLibrary, axis: KeyAxis) -> Result<EntropySummary> {
    let map = match axis {
        KeyAxis::SymbolKeyed => &library.identifier_class,
        KeyAxis::NameKeyed => &library.semantics_class,
    };
    let entropies = map.values().map(shannon_entropy).collect::<Result<Vec<f64>>>()?;
    summarize(&entropies).ok_or_else(|| Error::Validation(format!("library has no {axis:?} keys")))
}

pub(crate) fn summarize(values: &[f64]) -> Option<EntropySummary> {
    if values.is_empty() {
        return None;
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Some(EntropySummary { keys: values.len(), min, mean, max })
}
