//! Tokenization, stopword removal, lemmatization and TF-IDF encoding.

mod sparse;
mod text;
mod tfidf;

pub use sparse::SparseVector;
pub use text::{
    is_stopword, lemmatize, remove_stopwords, tokenize, tokenize_stream, Lemmatizer, StopwordList, TokenStream,
};
pub use tfidf::{fit_tfidf, fit_tfidf_tokens, TfIdfModel};

use crate::corpus::Document;

/// Tokens of all text segments of a document, in order.
pub fn document_text_tokens(doc: &Document) -> Vec<String> {
    doc.text_segments().flat_map(tokenize).collect()
}
