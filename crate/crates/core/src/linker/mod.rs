//! Gazetteer-based linking of text n-grams and formula concepts, and the
//! evaluation harness.

pub mod eval;
pub mod gazetteer;
pub mod mathel;
pub mod text;

pub use eval::{classify_tuple, evaluate_linking, Confusion, EvalMode, LinkEvalReport, ModeReport, Outcome, TargetField, TupleRow};
pub use gazetteer::{is_item_id, normalize_surface, Gazetteer, GazetteerEntry, GazetteerSource};
pub use mathel::{concept_links_tsv, link_formula_concepts, mathel_coverage_report, CoverageReport, FormulaConceptLink};
pub use text::{generate_ngram_range, generate_ngrams, lemma_key, link_text_entities, link_tokens, EntityLink, LinkOptions, Span};

/// Tab-separated listing of text links.
pub fn links_tsv(links: &[EntityLink]) -> String {
    let mut out = String::from("doc\tstart\tlen\tsurface\tmatched\tsource\tlemmatized\ttitle\titem\n");
    for l in links {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            l.doc_id,
            l.span.start,
            l.span.len,
            l.surface,
            l.matched,
            l.source,
            l.lemmatized,
            l.title.as_deref().unwrap_or("-"),
            l.item.as_deref().unwrap_or("-")
        ));
    }
    out
}
