//! Documents with interleaved text and formula content, their labels on the
//! arXiv and MSC schemes, optional gold annotations, and the line-delimited
//! corpus file format.

pub mod markup;
pub mod synthetic;

use std::borrow::Cow;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use synthetic::{generate_synthetic_corpus, SyntheticConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Text,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub kind: SegmentKind,
    pub content: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fid: Option<String>,
}

impl Segment {
    pub fn text(content: impl Into<String>) -> Self {
        Segment { kind: SegmentKind::Text, content: content.into(), fid: None }
    }

    pub fn formula(fid: impl Into<String>, markup: impl Into<String>) -> Self {
        Segment { kind: SegmentKind::Formula, content: markup.into(), fid: Some(fid.into()) }
    }
}

/// Manually assessed relevance of an n-gram as a link candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relevance {
    Irrelevant,
    /// Only one of the words of the tuple is relevant.
    Half,
    Relevant,
}

impl Relevance {
    pub fn as_f64(self) -> f64 {
        match self {
            Relevance::Irrelevant => 0.0,
            Relevance::Half => 0.5,
            Relevance::Relevant => 1.0,
        }
    }
}

impl fmt::Display for Relevance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relevance::Irrelevant => "0",
            Relevance::Half => "1/2",
            Relevance::Relevant => "1",
        })
    }
}

impl Serialize for Relevance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Relevance::Half => s.serialize_f64(0.5),
            Relevance::Irrelevant => s.serialize_u8(0),
            Relevance::Relevant => s.serialize_u8(1),
        }
    }
}

impl<'de> Deserialize<'de> for Relevance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let bad = |v: &dyn fmt::Display| serde::de::Error::custom(format!("relevance must be 0, 1/2 or 1, got {v}"));
        match Raw::deserialize(d)? {
            Raw::Num(x) if x == 0.0 => Ok(Relevance::Irrelevant),
            Raw::Num(x) if x == 0.5 => Ok(Relevance::Half),
            Raw::Num(x) if x == 1.0 => Ok(Relevance::Relevant),
            Raw::Num(x) => Err(bad(&x)),
            Raw::Str(s) => match s.trim() {
                "0" => Ok(Relevance::Irrelevant),
                "1/2" | "0.5" => Ok(Relevance::Half),
                "1" => Ok(Relevance::Relevant),
                other => Err(bad(&other)),
            },
        }
    }
}

/// Expected link target of a relevant n-gram. Either field may be absent,
/// in which case any target counts as correct for the matching eval field.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldTarget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldAnnotations {
    /// formula id → identifier symbol → semantic name
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub identifier_names: BTreeMap<String, BTreeMap<String, String>>,
    /// n-gram (space separated tokens) → relevance
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub entity_relevance: BTreeMap<String, Relevance>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub entity_targets: BTreeMap<String, GoldTarget>,
    /// formula id → candidate concept phrase → score in {0, 1, 2}
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub concept_relevance: BTreeMap<String, BTreeMap<String, u8>>,
}

impl GoldAnnotations {
    fn validate(&self) -> std::result::Result<(), String> {
        for (fid, phrases) in &self.concept_relevance {
            for (phrase, score) in phrases {
                if *score > 2 {
                    return Err(format!("concept score {score} for ({fid}, {phrase:?}) outside {{0,1,2}}"));
                }
            }
        }
        for names in self.identifier_names.values() {
            for (symbol, name) in names {
                if symbol.is_empty() {
                    return Err("empty identifier symbol in gold names".into());
                }
                if name.trim().is_empty() || name.chars().any(|c| c.is_uppercase()) {
                    return Err(format!("identifier name {name:?} must be a non-empty lowercase phrase"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(rename = "id")]
    pub doc_id: String,
    #[serde(default)]
    pub arxiv: Vec<String>,
    #[serde(default)]
    pub msc: Vec<String>,
    pub segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<GoldAnnotations>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdentifierOccurrence {
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub doc_id: String,
    pub formula_id: String,
}

/// A formula segment together with its effective id.
#[derive(Debug, Clone)]
pub struct FormulaRef<'a> {
    pub id: Cow<'a, str>,
    pub segment_index: usize,
    pub markup: &'a str,
}

impl Document {
    /// Formula segments in order. Segments without an explicit `fid` get
    /// `f<k>` where `k` is the 1-based ordinal among formula segments.
    pub fn formulas(&self) -> Vec<FormulaRef<'_>> {
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == SegmentKind::Formula)
            .scan(0usize, |ordinal, (i, s)| {
                *ordinal += 1;
                Some((i, s, *ordinal))
            })
            .map(|(i, s, k)| FormulaRef {
                id: match &s.fid {
                    Some(fid) => Cow::Borrowed(fid.as_str()),
                    None => Cow::Owned(format!("f{k}")),
                },
                segment_index: i,
                markup: &s.content,
            })
            .collect()
    }

    pub fn text_segments(&self) -> impl Iterator<Item = &str> {
        self.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Text)
            .map(|s| s.content.as_str())
    }

    pub fn formula_ids(&self) -> Vec<String> {
        self.formulas().iter().map(|f| f.id.to_string()).collect()
    }

    /// Identifier occurrences over all formulas, in document order.
    pub fn identifier_occurrences(&self) -> Result<Vec<IdentifierOccurrence>> {
        let mut out = Vec::new();
        for formula in self.formulas() {
            let names = self
                .gold
                .as_ref()
                .and_then(|g| g.identifier_names.get(formula.id.as_ref()));
            for symbol in extract_identifiers(formula.markup)? {
                let name = names.and_then(|n| n.get(&symbol)).cloned();
                out.push(IdentifierOccurrence {
                    symbol,
                    name,
                    doc_id: self.doc_id.clone(),
                    formula_id: formula.id.to_string(),
                });
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.doc_id.trim().is_empty() {
            return Err("empty document id".into());
        }
        for code in &self.msc {
            if !is_msc_code(code) {
                return Err(format!("invalid MSC code {code:?}"));
            }
        }
        for cat in &self.arxiv {
            if !is_arxiv_category(cat) {
                return Err(format!("invalid arXiv category {cat:?}"));
            }
        }
        let mut seen = HashSet::new();
        for f in self.formulas() {
            if !seen.insert(f.id.to_string()) {
                return Err(format!("duplicate formula id {:?}", f.id));
            }
            markup::parse(f.markup).map_err(|e| format!("formula {}: {e}", f.id))?;
        }
        if let Some(gold) = &self.gold {
            gold.validate()?;
        }
        Ok(())
    }
}

/// Two digits, a letter or dash, two digits (`85A05`, `85-05`).
pub fn is_msc_code(code: &str) -> bool {
    let b = code.as_bytes();
    b.len() == 5
        && b[0].is_ascii_digit()
        && b[1].is_ascii_digit()
        && (b[2].is_ascii_alphabetic() || b[2] == b'-')
        && b[3].is_ascii_digit()
        && b[4].is_ascii_digit()
}

/// One or two dot-separated levels (`math`, `astro-ph.SR`).
pub fn is_arxiv_category(cat: &str) -> bool {
    let levels: Vec<&str> = cat.split('.').collect();
    (1..=2).contains(&levels.len())
        && levels.iter().all(|l| {
            !l.is_empty() && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
        })
}

/// Identifier symbols of a formula markup fragment, in document order.
pub fn extract_identifiers(formula_markup: &str) -> Result<Vec<String>> {
    Ok(markup::identifiers(&markup::parse(formula_markup)?))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let corpus = Corpus { documents };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for doc in &self.documents {
            doc.validate().map_err(|m| Error::Validation(format!("document {:?}: {m}", doc.doc_id)))?;
            if !seen.insert(doc.doc_id.as_str()) {
                return Err(Error::Validation(format!("duplicate document id {:?}", doc.doc_id)));
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file, &path.display().to_string())
    }

    /// Parse line-delimited records. Blank lines are skipped.
    pub fn from_reader(reader: impl Read, source_name: &str) -> Result<Self> {
        let mut documents = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(&line)
                .map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
            doc.validate().map_err(|m| Error::parse(source_name, lineno, m))?;
            if !seen.insert(doc.doc_id.clone()) {
                return Err(Error::Validation(format!(
                    "{source_name}:{lineno}: duplicate document id {:?}",
                    doc.doc_id
                )));
            }
            documents.push(doc);
        }
        Ok(Corpus { documents })
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            out.push_str(&serde_json::to_string(doc).expect("documents always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_jsonl()).map_err(|e| Error::io(path, e))
    }

    /// Keep only documents whose arXiv labels intersect `classes`
    /// (first level or full category).
    pub fn filter_classes(&self, classes: &[String]) -> Corpus {
        let documents = self
            .documents
            .iter()
            .filter(|d| {
                d.arxiv.iter().any(|c| {
                    classes.iter().any(|k| k == c || c.split('.').next() == Some(k.as_str()))
                })
            })
            .cloned()
            .collect();
        Corpus { documents }
    }
}
