use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gazetteer::{normalize_surface, Gazetteer};
use super::text::generate_ngrams;
use crate::corpus::{Document, GoldAnnotations, SegmentKind};
use crate::encode::{tokenize, StopwordList};
use crate::error::{Error, Result};

/// A gazetteer phrase found in the text window around a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaConceptLink {
    pub formula_id: String,
    pub phrase: String,
    pub n: usize,
    /// Signed token distance of the phrase start: positive before the
    /// formula, negative after; 1 is adjacent.
    pub offset: i32,
    /// Gold score in {0, 1, 2}, when known.
    pub score: Option<u8>,
    pub title: Option<String>,
    pub item: Option<String>,
}

impl FormulaConceptLink {
    /// The offset, withheld for irrelevant (score 0) candidates.
    pub fn rank(&self) -> Option<i32> {
        match self.score {
            Some(0) => None,
            _ => Some(self.offset),
        }
    }
}

/// Maximal runs of text tokens between formulas: `runs[i]` precedes the
/// i-th formula and `runs[i + 1]` follows it.
fn text_runs(doc: &Document) -> (Vec<Vec<String>>, Vec<String>) {
    let mut runs = vec![Vec::new()];
    let mut ids = Vec::new();
    let formulas = doc.formulas();
    let mut next_formula = formulas.iter().peekable();
    for (i, seg) in doc.segments.iter().enumerate() {
        match seg.kind {
            SegmentKind::Text => runs.last_mut().expect("non-empty").extend(tokenize(&seg.content)),
            SegmentKind::Formula => {
                let f = next_formula.next().expect("formula refs follow segments");
                debug_assert_eq!(f.segment_index, i);
                ids.push(f.id.to_string());
                runs.push(Vec::new());
            }
        }
    }
    (runs, ids)
}

fn gold_score(gold: Option<&GoldAnnotations>, fid: &str, phrase: &str) -> Option<u8> {
    let scores = gold?.concept_relevance.get(fid)?;
    scores.iter().find(|(p, _)| normalize_surface(p) == phrase).map(|(_, s)| *s)
}

/// Match n-grams (up to `max_n` tokens) whose start lies within `window`
/// tokens before or after each formula. N-grams never span a formula and
/// stopword-only n-grams are skipped. Scores come from the document's gold
/// concept relevance when present.
pub fn link_formula_concepts(doc: &Document, gazetteer: &Gazetteer, window: usize, max_n: usize) -> Vec<FormulaConceptLink> {
    let stopwords = StopwordList::shipped();
    let (runs, ids) = text_runs(doc);
    let mut out = Vec::new();
    for (k, fid) in ids.iter().enumerate() {
        let before = &runs[k];
        let after = &runs[k + 1];
        let mut emit = |tokens: &[String], start: usize, len: usize, offset: i32| {
            let phrase = tokens[start..start + len].join(" ");
            if phrase.split(' ').all(|t| stopwords.contains(t)) {
                return;
            }
            if let Some(entry) = gazetteer.get(&phrase) {
                out.push(FormulaConceptLink {
                    formula_id: fid.clone(),
                    score: gold_score(doc.gold.as_ref(), fid, &phrase),
                    phrase,
                    n: len,
                    offset,
                    title: entry.title.clone(),
                    item: entry.item.clone(),
                });
            }
        };
        let lo = before.len().saturating_sub(window);
        for (span, _) in generate_ngrams(&before[lo..], max_n) {
            let start = lo + span.start;
            emit(before, start, span.len, (before.len() - start) as i32);
        }
        let hi = after.len().min(window);
        for (span, _) in generate_ngrams(after, max_n).into_iter().filter(|(s, _)| s.start < hi) {
            emit(after, span.start, span.len, -(span.start as i32 + 1));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub candidates: usize,
    pub with_article: usize,
    pub with_item: usize,
    pub in_window: usize,
    pub highly_relevant: usize,
    pub article_fraction: f64,
    pub item_fraction: f64,
    pub window_fraction: f64,
}

/// Coverage of the gold concept candidates: how many have an article or an
/// item in the gazetteer, how many were found in a formula window, and how
/// many are scored highly relevant.
pub fn mathel_coverage_report(links: &[FormulaConceptLink], gold: &GoldAnnotations, gazetteer: &Gazetteer) -> Result<CoverageReport> {
    let mut candidates: BTreeMap<(String, String), u8> = BTreeMap::new();
    for (fid, phrases) in &gold.concept_relevance {
        for (p, s) in phrases {
            candidates.insert((fid.clone(), normalize_surface(p)), *s);
        }
    }
    if candidates.is_empty() {
        return Err(Error::Domain("no gold concept candidates".into()));
    }
    let (mut art, mut item, mut window, mut high) = (0, 0, 0, 0);
    for ((fid, phrase), score) in &candidates {
        let entry = gazetteer.get(phrase);
        art += usize::from(entry.is_some_and(|e| e.title.is_some()));
        item += usize::from(entry.is_some_and(|e| e.item.is_some()));
        window += usize::from(links.iter().any(|l| &l.formula_id == fid && &l.phrase == phrase));
        high += usize::from(*score == 2);
    }
    let n = candidates.len();
    Ok(CoverageReport {
        candidates: n,
        with_article: art,
        with_item: item,
        in_window: window,
        highly_relevant: high,
        article_fraction: art as f64 / n as f64,
        item_fraction: item as f64 / n as f64,
        window_fraction: window as f64 / n as f64,
    })
}

/// Rows mirroring a formula-concept evaluation table.
pub fn concept_links_tsv(links: &[FormulaConceptLink]) -> String {
    let mut out = String::from("formula\tconcept\tn\tscore_rank\tarticle\titem\n");
    for l in links {
        let score = l.score.map_or("-".to_string(), |s| s.to_string());
        let rank = l.rank().map_or("-".to_string(), |r| r.to_string());
        out.push_str(&format!(
            "{}\t{}\t{}\t({score},{rank})\t{}\t{}\n",
            l.formula_id,
            l.phrase,
            l.n,
            l.title.as_deref().unwrap_or("-"),
            l.item.as_deref().unwrap_or("-")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Segment;
    use crate::linker::GazetteerSource;

    fn words(n: usize) -> String {
        (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    }

    fn gazetteer() -> Gazetteer {
        Gazetteer::parse("Gross-Pitaevski equation\tQ910667\tGross–Pitaevskii_equation\naxion\tQ792548\n", GazetteerSource::ItemName, "g")
            .unwrap()
    }

    fn doc(before: String, after: String) -> Document {
        let mut gold = GoldAnnotations::default();
        gold.concept_relevance.insert("f1".into(), [("Gross-Pitaevski equation".to_string(), 2u8)].into());
        Document {
            doc_id: "d".into(),
            arxiv: vec![],
            msc: vec![],
            segments: vec![Segment::text(before), Segment::formula("f1", "<math><mi>ψ</mi></math>"), Segment::text(after)],
            gold: Some(gold),
        }
    }

    #[test]
    fn signed_offsets() {
        let d = doc(format!("axion {}", words(4)), format!("{} Gross-Pitaevski equation", words(7)));
        let links = link_formula_concepts(&d, &gazetteer(), 10, 3);
        let gp = links.iter().find(|l| l.phrase == "gross pitaevski equation").unwrap();
        assert_eq!((gp.score, gp.rank(), gp.n), (Some(2), Some(-8), 3));
        assert_eq!(gp.item.as_deref(), Some("Q910667"));
        let ax = links.iter().find(|l| l.phrase == "axion").unwrap();
        assert_eq!(ax.offset, 5);
        assert_eq!(ax.score, None);
    }

    #[test]
    fn window_edges() {
        for (pad, hit) in [(9, true), (10, false)] {
            let d = doc(String::new(), format!("{} axion", words(pad)));
            assert_eq!(!link_formula_concepts(&d, &gazetteer(), 10, 3).is_empty(), hit, "after {pad}");
            let d = doc(format!("axion {}", words(pad)), String::new());
            assert_eq!(!link_formula_concepts(&d, &gazetteer(), 10, 3).is_empty(), hit, "before {pad}");
        }
        let d = doc(words(3), words(3));
        assert!(link_formula_concepts(&d, &gazetteer(), 10, 3).is_empty());
    }

    #[test]
    fn ngrams_stop_at_formulas() {
        let d = Document {
            doc_id: "d".into(),
            arxiv: vec![],
            msc: vec![],
            segments: vec![
                Segment::text("gross"),
                Segment::formula("f1", "<math><mi>x</mi></math>"),
                Segment::text("pitaevski equation"),
            ],
            gold: None,
        };
        assert!(link_formula_concepts(&d, &gazetteer(), 10, 3).is_empty());
    }

    #[test]
    fn coverage() {
        let g = gazetteer();
        let mut gold = GoldAnnotations::default();
        gold.concept_relevance.insert("f1".into(), [("axion".to_string(), 1u8), ("hidden".to_string(), 0)].into());
        let r = mathel_coverage_report(&[], &gold, &g).unwrap();
        assert_eq!((r.item_fraction, r.window_fraction, r.article_fraction), (0.5, 0.0, 0.0));
        assert!(mathel_coverage_report(&[], &GoldAnnotations::default(), &g).is_err());
    }
}
