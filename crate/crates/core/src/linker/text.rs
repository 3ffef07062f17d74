use serde::{Deserialize, Serialize};

use super::gazetteer::{Gazetteer, GazetteerSource};
use crate::corpus::{Document, SegmentKind};
use crate::encode::{tokenize, Lemmatizer, StopwordList};

/// Contiguous token span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

/// All contiguous n-grams for n = 1..=max_n, ordered by start then length.
pub fn generate_ngrams(tokens: &[String], max_n: usize) -> Vec<(Span, String)> {
    generate_ngram_range(tokens, 1, max_n)
}

pub fn generate_ngram_range(tokens: &[String], min_n: usize, max_n: usize) -> Vec<(Span, String)> {
    let mut out = Vec::new();
    for start in 0..tokens.len() {
        for len in min_n.max(1)..=max_n.min(tokens.len() - start) {
            out.push((Span { start, len }, tokens[start..start + len].join(" ")));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkOptions {
    pub min_n: usize,
    pub max_n: usize,
    /// Also try the stopword-free lemma form of each n-gram.
    pub lemmatized: bool,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions { min_n: 1, max_n: 3, lemmatized: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityLink {
    pub doc_id: String,
    pub span: Span,
    /// The n-gram as it appears in the token stream.
    pub surface: String,
    /// The gazetteer key that matched; differs from `surface` only in
    /// lemmatized mode.
    pub matched: String,
    pub title: Option<String>,
    pub item: Option<String>,
    pub source: GazetteerSource,
    pub lemmatized: bool,
}

/// Stopword-free lemma form of an n-gram, or None when only stopwords remain.
pub fn lemma_key(ngram: &str, stopwords: &StopwordList, lemmatizer: &Lemmatizer) -> Option<String> {
    let parts: Vec<String> = ngram
        .split(' ')
        .filter(|t| !stopwords.contains(t))
        .map(|t| lemmatizer.lemmatize(t))
        .collect();
    (!parts.is_empty()).then(|| parts.join(" "))
}

/// Link n-grams of a token sequence against one gazetteer. Overlapping
/// matches are all kept.
pub fn link_tokens(doc_id: &str, tokens: &[String], gazetteer: &Gazetteer, options: &LinkOptions) -> Vec<EntityLink> {
    let stopwords = StopwordList::shipped();
    let lemmatizer = Lemmatizer::shipped();
    let mut links = Vec::new();
    for (span, ngram) in generate_ngram_range(tokens, options.min_n, options.max_n) {
        if ngram.split(' ').all(|t| stopwords.contains(t)) {
            continue;
        }
        let mut keys = Vec::with_capacity(2);
        if options.lemmatized {
            keys.extend(lemma_key(&ngram, stopwords, lemmatizer));
        }
        keys.push(ngram.clone());
        if let Some((key, entry)) = keys.into_iter().find_map(|k| gazetteer.get(&k).map(|e| (k, e))) {
            links.push(EntityLink {
                doc_id: doc_id.to_string(),
                span,
                surface: ngram,
                matched: key,
                title: entry.title.clone(),
                item: entry.item.clone(),
                source: gazetteer.source,
                lemmatized: options.lemmatized,
            });
        }
    }
    links
}

/// Link the text of a document. Adjacent text segments form one run; a
/// formula ends the run, so no n-gram spans a formula. Spans are offsets
/// into the document's text tokens.
pub fn link_text_entities(doc: &Document, gazetteer: &Gazetteer, options: &LinkOptions) -> Vec<EntityLink> {
    let mut runs: Vec<Vec<String>> = vec![Vec::new()];
    for seg in &doc.segments {
        match seg.kind {
            SegmentKind::Text => runs.last_mut().expect("non-empty").extend(tokenize(&seg.content)),
            SegmentKind::Formula => runs.push(Vec::new()),
        }
    }
    let mut links = Vec::new();
    let mut offset = 0;
    for run in runs {
        for mut link in link_tokens(&doc.doc_id, &run, gazetteer, options) {
            link.span.start += offset;
            links.push(link);
        }
        offset += run.len();
    }
    links
}
