use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gazetteer::{normalize_surface, GazetteerSource};
use super::text::EntityLink;
use crate::corpus::{GoldAnnotations, GoldTarget, Relevance};
use crate::error::{Error, Result};

/// Which part of a link is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetField {
    /// Article or item name.
    Name,
    /// URL for title dumps, item id otherwise.
    Id,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EvalMode {
    pub source: GazetteerSource,
    pub field: TargetField,
}

impl EvalMode {
    /// eval1 … eval6 in order.
    pub const ALL: [EvalMode; 6] = [
        EvalMode { source: GazetteerSource::Wikidump, field: TargetField::Name },
        EvalMode { source: GazetteerSource::Wikidump, field: TargetField::Id },
        EvalMode { source: GazetteerSource::ItemName, field: TargetField::Name },
        EvalMode { source: GazetteerSource::ItemName, field: TargetField::Id },
        EvalMode { source: GazetteerSource::SparqlExport, field: TargetField::Name },
        EvalMode { source: GazetteerSource::SparqlExport, field: TargetField::Id },
    ];

    pub fn label(self) -> String {
        let i = EvalMode::ALL.iter().position(|m| *m == self).expect("all modes listed");
        format!("eval{}", i + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    TP,
    FP,
    FN,
    TN,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Confusion {
    pub fn add(&mut self, o: Outcome) {
        match o {
            Outcome::TP => self.tp += 1,
            Outcome::FP => self.fp += 1,
            Outcome::FN => self.fn_ += 1,
            Outcome::TN => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// TP/(TP+FP), 0 when nothing was linked.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// TP/(TP+FN), 0 when nothing is relevant.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Harmonic mean of precision and recall, 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: EvalMode,
    pub label: String,
    pub unlemmatized: Confusion,
    pub lemmatized: Confusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleRow {
    pub ngram: String,
    pub relevance: Relevance,
    pub gold: GoldTarget,
    /// Outcome per evaluated mode, unlemmatized then lemmatized.
    pub unlemmatized: Vec<Outcome>,
    pub lemmatized: Vec<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkEvalReport {
    pub modes: Vec<ModeReport>,
    pub tuples: Vec<TupleRow>,
}

fn canonical_title(t: &str) -> String {
    let tail = t.rsplit('/').next().unwrap_or(t);
    normalize_surface(tail)
}

fn same_title(a: &str, b: &str) -> bool {
    canonical_title(a) == canonical_title(b)
}

/// The judged value of a link for one field, or None when that field is not
/// linked.
fn predicted(link: &EntityLink, field: TargetField) -> Option<(Option<&str>, Option<&str>)> {
    let title = link.title.as_deref();
    let item = link.item.as_deref();
    match (field, link.source) {
        (TargetField::Name, _) => Some((title, item)),
        (TargetField::Id, GazetteerSource::Wikidump) => title.map(|t| (Some(t), None)),
        (TargetField::Id, _) => item.map(|i| (None, Some(i))),
    }
}

/// A judged value is wrong only when it contradicts a gold field that is given.
fn target_correct(pred: (Option<&str>, Option<&str>), gold: &GoldTarget) -> bool {
    let title_ok = match (pred.0, gold.title.as_deref()) {
        (Some(p), Some(g)) => same_title(p, g),
        _ => true,
    };
    let item_ok = match (pred.1, gold.item.as_deref()) {
        (Some(p), Some(g)) => p == g,
        _ => true,
    };
    title_ok && item_ok
}

/// Classify one tuple. Relevant and half-relevant tuples are TP only when
/// linked to a correct target and FN otherwise; irrelevant tuples are FP when
/// linked and TN otherwise.
pub fn classify_tuple(relevance: Relevance, gold: &GoldTarget, link: Option<&EntityLink>, field: TargetField) -> Outcome {
    let pred = link.and_then(|l| predicted(l, field));
    match (relevance, pred) {
        (Relevance::Irrelevant, Some(_)) => Outcome::FP,
        (Relevance::Irrelevant, None) => Outcome::TN,
        (_, Some(p)) if target_correct(p, gold) => Outcome::TP,
        _ => Outcome::FN,
    }
}

/// Binary classification of every gold tuple under each mode, for links
/// made without and with lemmatization. Links are matched to tuples by
/// their surface n-gram.
pub fn evaluate_linking(links: &[EntityLink], gold: &GoldAnnotations, modes: &[EvalMode]) -> Result<LinkEvalReport> {
    let relevance: BTreeMap<String, Relevance> =
        gold.entity_relevance.iter().map(|(k, v)| (normalize_surface(k), *v)).collect();
    let targets: BTreeMap<String, &GoldTarget> =
        gold.entity_targets.iter().map(|(k, v)| (normalize_surface(k), v)).collect();
    let missing: BTreeSet<&str> =
        links.iter().map(|l| l.surface.as_str()).filter(|s| !relevance.contains_key(*s)).collect();
    if !missing.is_empty() {
        let list: Vec<&str> = missing.into_iter().collect();
        return Err(Error::Validation(format!("no gold relevance for linked n-grams: {}", list.join(", "))));
    }
    let find = |ngram: &str, source: GazetteerSource, lemmatized: bool| {
        links.iter().find(|l| l.surface == ngram && l.source == source && l.lemmatized == lemmatized)
    };
    let empty = GoldTarget::default();
    let mut reports: Vec<ModeReport> = modes
        .iter()
        .map(|&mode| ModeReport {
            mode,
            label: mode.label(),
            unlemmatized: Confusion::default(),
            lemmatized: Confusion::default(),
        })
        .collect();
    let mut tuples = Vec::new();
    for (ngram, &rel) in &relevance {
        let gold_target = targets.get(ngram).copied().unwrap_or(&empty);
        let mut row = TupleRow {
            ngram: ngram.clone(),
            relevance: rel,
            gold: gold_target.clone(),
            unlemmatized: Vec::new(),
            lemmatized: Vec::new(),
        };
        for report in reports.iter_mut() {
            for lemmatized in [false, true] {
                let o = classify_tuple(rel, gold_target, find(ngram, report.mode.source, lemmatized), report.mode.field);
                if lemmatized {
                    report.lemmatized.add(o);
                    row.lemmatized.push(o);
                } else {
                    report.unlemmatized.add(o);
                    row.unlemmatized.push(o);
                }
            }
        }
        tuples.push(row);
    }
    Ok(LinkEvalReport { modes: reports, tuples })
}

impl LinkEvalReport {
    pub fn mode(&self, mode: EvalMode) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    /// One row per tuple: n-gram, relevance, gold URL and item, then the
    /// unlemmatized outcomes per mode; summary rows follow.
    pub fn to_tsv(&self) -> String {
        let labels: Vec<String> = self.modes.iter().map(|m| m.label.clone()).collect();
        let mut out = format!("tuple\trelevance\turl\titem\t{}\n", labels.join("\t"));
        let dash = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
        for t in &self.tuples {
            let outcomes: Vec<String> = t
                .unlemmatized
                .iter()
                .zip(&t.lemmatized)
                .map(|(u, l)| if u == l { u.to_string() } else { format!("{u}/{l}") })
                .collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                t.ngram,
                t.relevance,
                dash(&t.gold.title),
                dash(&t.gold.item),
                outcomes.join("\t")
            ));
        }
        for (name, f) in [
            ("precision", Confusion::precision as fn(&Confusion) -> f64),
            ("recall", Confusion::recall),
            ("f1", Confusion::f1),
        ] {
            let cells: Vec<String> = self
                .modes
                .iter()
                .map(|m| format!("{:.2} / {:.2}", f(&m.unlemmatized), f(&m.lemmatized)))
                .collect();
            out.push_str(&format!("#{name}\t\t\t\t{}\n", cells.join("\t")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linker::text::Span;

    #[test]
    fn metric_arithmetic() {
        let c = Confusion { tp: 2, fp: 1, fn_: 1, tn: 4 };
        assert!((c.precision() - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.recall() - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.f1() - 2.0 / 3.0).abs() < 1e-15);
        let none = Confusion { tp: 0, fp: 0, fn_: 3, tn: 2 };
        assert_eq!((none.precision(), none.recall(), none.f1()), (0.0, 0.0, 0.0));
        assert_eq!(Confusion::default().f1(), 0.0);
    }

    fn link(surface: &str, source: GazetteerSource, title: Option<&str>, item: Option<&str>) -> EntityLink {
        EntityLink {
            doc_id: "d".into(),
            span: Span { start: 0, len: 2 },
            surface: surface.into(),
            matched: surface.into(),
            title: title.map(String::from),
            item: item.map(String::from),
            source,
            lemmatized: false,
        }
    }

    #[test]
    fn tuple_rules() {
        let gold = GoldTarget { title: Some("Velocity_dispersion".into()), item: Some("Q637450".into()) };
        let good = link("velocity dispersion", GazetteerSource::Wikidump, Some("Velocity_dispersion"), Some("Q637450"));
        let wrong = link("velocity dispersion", GazetteerSource::SparqlExport, None, Some("Q1"));
        assert_eq!(classify_tuple(Relevance::Relevant, &gold, Some(&good), TargetField::Id), Outcome::TP);
        assert_eq!(classify_tuple(Relevance::Relevant, &gold, Some(&wrong), TargetField::Id), Outcome::FN);
        assert_eq!(classify_tuple(Relevance::Half, &gold, None, TargetField::Name), Outcome::FN);
        assert_eq!(classify_tuple(Relevance::Irrelevant, &gold, Some(&wrong), TargetField::Name), Outcome::FP);
        let bare = link("find that", GazetteerSource::ItemName, None, None);
        assert_eq!(classify_tuple(Relevance::Irrelevant, &GoldTarget::default(), Some(&bare), TargetField::Name), Outcome::FP);
        assert_eq!(classify_tuple(Relevance::Irrelevant, &GoldTarget::default(), Some(&bare), TargetField::Id), Outcome::TN);
        assert!(same_title("https://en.wikipedia.org/wiki/Velocity_dispersion", "velocity dispersion"));
    }

    #[test]
    fn missing_gold_is_reported() {
        let gold = GoldAnnotations::default();
        let l = link("axion mass", GazetteerSource::Wikidump, None, None);
        let err = evaluate_linking(&[l], &gold, &EvalMode::ALL).unwrap_err();
        assert!(err.to_string().contains("axion mass"));
    }

    #[test]
    fn counts_cover_every_tuple() {
        let mut gold = GoldAnnotations::default();
        gold.entity_relevance.insert("of the".into(), Relevance::Irrelevant);
        gold.entity_relevance.insert("axion".into(), Relevance::Relevant);
        let r = evaluate_linking(&[], &gold, &EvalMode::ALL).unwrap();
        for m in &r.modes {
            assert_eq!(m.unlemmatized.total(), 2);
            assert_eq!((m.unlemmatized.tn, m.unlemmatized.fn_), (1, 1));
            assert_eq!(m.unlemmatized.precision(), 0.0);
        }
        assert_eq!(r.modes[3].label, "eval4");
        assert!(r.to_tsv().starts_with("tuple\trelevance"));
    }
}
