use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{SparseVector, TokenStream};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Vocabulary in first-seen order with smoothed idf weights:
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "TfIdfRepr", into = "TfIdfRepr")]
pub struct TfIdfModel {
    terms: Vec<String>,
    idf: Vec<f64>,
    document_count: usize,
    index: HashMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct TfIdfRepr {
    document_count: usize,
    terms: Vec<String>,
    idf: Vec<f64>,
}

impl From<TfIdfRepr> for TfIdfModel {
    fn from(r: TfIdfRepr) -> Self {
        let index = r.terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        TfIdfModel { terms: r.terms, idf: r.idf, document_count: r.document_count, index }
    }
}

impl From<TfIdfModel> for TfIdfRepr {
    fn from(m: TfIdfModel) -> Self {
        TfIdfRepr { document_count: m.document_count, terms: m.terms, idf: m.idf }
    }
}

/// Fit vocabulary and idf weights.
pub fn fit_tfidf(streams: &[TokenStream]) -> Result<TfIdfModel> {
    fit_tfidf_tokens(streams.iter().map(|s| s.tokens.as_slice()))
}

pub fn fit_tfidf_tokens<'a, I>(docs: I) -> Result<TfIdfModel>
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut terms: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut df: Vec<usize> = Vec::new();
    let mut n = 0usize;
    for tokens in docs {
        n += 1;
        let mut seen = HashSet::new();
        for t in tokens {
            let id = *index.entry(t.clone()).or_insert_with(|| {
                terms.push(t.clone());
                df.push(0);
                (terms.len() - 1) as u32
            });
            if seen.insert(id) {
                df[id as usize] += 1;
            }
        }
    }
    if terms.is_empty() {
        return Err(Error::Validation("cannot fit TF-IDF: every stream is empty".into()));
    }
    let idf = df
        .iter()
        .map(|&d| ((1.0 + n as f64) / (1.0 + d as f64)).ln() + 1.0)
        .collect();
    Ok(TfIdfModel { terms, idf, document_count: n, index })
}

impl TfIdfModel {
    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).map(|&i| i as usize)
    }

    pub fn idf(&self, token: &str) -> Option<f64> {
        self.index_of(token).map(|i| self.idf[i])
    }

    pub fn idf_weights(&self) -> &[f64] {
        &self.idf
    }

    /// Raw term counts times idf, before normalization. Unknown tokens are ignored.
    pub fn weights(&self, tokens: &[String]) -> SparseVector {
        let mut counts: HashMap<u32, f64> = HashMap::new();
        for t in tokens {
            if let Some(&i) = self.index.get(t) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        SparseVector::from_pairs(
            counts
                .into_iter()
                .map(|(i, c)| (i, c * self.idf[i as usize]))
                .collect(),
        )
    }

    /// L2-normalized TF-IDF vector.
    pub fn transform(&self, tokens: &[String]) -> SparseVector {
        self.weights(tokens).l2_normalized()
    }

    pub fn transform_stream(&self, stream: &TokenStream) -> SparseVector {
        self.transform(&stream.tokens)
    }

    pub fn transform_batch(&self, streams: &[TokenStream], exec: Execution) -> Vec<SparseVector> {
        exec.map(streams, |s| self.transform(&s.tokens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(tokens: &[&str]) -> TokenStream {
        TokenStream::new("d", tokens.iter().map(|t| t.to_string()).collect())
    }

    #[test]
    fn idf_closed_forms() {
        let m = fit_tfidf(&[s(&["a", "b"]), s(&["a"]), s(&["a", "c"])]).unwrap();
        assert_eq!(m.idf("a"), Some(1.0));
        let expected = (4.0f64 / 2.0).ln() + 1.0;
        assert!((m.idf("b").unwrap() - expected).abs() < 1e-15);
        assert_eq!(m.terms(), ["a", "b", "c"]);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(fit_tfidf(&[s(&[]), s(&[])]), Err(Error::Validation(_))));
        assert!(fit_tfidf(&[]).is_err());
    }

    #[test]
    fn refit_is_identical() {
        let docs = [s(&["x", "y", "x"]), s(&["z"])];
        assert_eq!(fit_tfidf(&docs).unwrap(), fit_tfidf(&docs).unwrap());
    }

    #[test]
    fn transform_edge_cases() {
        let m = fit_tfidf(&[s(&["a", "b"]), s(&["b"])]).unwrap();
        let v = m.transform(&["a".to_string()]);
        assert_eq!(v.nnz(), 1);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(m.transform(&["zzz".to_string()]).is_zero());
        assert!(m.transform(&[]).is_zero());
    }

    #[test]
    fn serde_round_trip_rebuilds_index() {
        let m = fit_tfidf(&[s(&["a", "b"]), s(&["b"])]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: TfIdfModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.index_of("b"), Some(1));
    }
}
