use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encode::tokenize;
use crate::error::{Error, Result};
use crate::stats::DistributionLibrary;

/// Ranked candidate names per identifier symbol from one source.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolNameSource {
    pub name: String,
    /// Sorted by descending frequency, ties lexicographic.
    pub ranked: BTreeMap<String, Vec<(String, u64)>>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

impl SymbolNameSource {
    /// Build from (symbol, name, frequency) triples; repeated pairs are summed.
    pub fn from_counts(name: impl Into<String>, counts: impl IntoIterator<Item = (String, String, u64)>) -> Self {
        let mut acc: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (symbol, n, f) in counts {
            *acc.entry(symbol).or_default().entry(n).or_default() += f;
        }
        let ranked = acc
            .into_iter()
            .map(|(symbol, names)| {
                let mut list: Vec<(String, u64)> = names.into_iter().collect();
                list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                (symbol, list)
            })
            .collect();
        SymbolNameSource { name: name.into(), ranked }
    }

    /// Parse `symbol<TAB>name<TAB>frequency` lines.
    pub fn parse(name: impl Into<String>, text: &str, source_name: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (line, l) in data_lines(text) {
            let fields: Vec<&str> = l.split('\t').collect();
            let [symbol, n, f] = fields[..] else {
                return Err(Error::parse(source_name, line, "expected `symbol<TAB>name<TAB>frequency`"));
            };
            let f: u64 = f
                .trim()
                .parse()
                .map_err(|_| Error::parse(source_name, line, format!("bad frequency {f:?}")))?;
            let n = n.trim().to_lowercase();
            if symbol.trim().is_empty() || n.is_empty() {
                return Err(Error::parse(source_name, line, "empty symbol or name"));
            }
            triples.push((symbol.trim().to_string(), n, f));
        }
        Ok(Self::from_counts(name, triples))
    }

    pub fn load(name: impl Into<String>, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(name, &read(path)?, &path.display().to_string())
    }

    /// Rankings from the identifier→semantics counts of a library.
    pub fn from_library(name: impl Into<String>, library: &DistributionLibrary) -> Self {
        let triples = library.identifier_semantics.iter().flat_map(|(symbol, dist)| {
            dist.iter().map(move |(n, c)| (symbol.clone(), n.to_string(), c))
        });
        Self::from_counts(name, triples)
    }

    pub fn top(&self, symbol: &str, k: usize) -> &[(String, u64)] {
        self.ranked.get(symbol).map_or(&[], |list| &list[..k.min(list.len())])
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (symbol, list) in &self.ranked {
            for (n, f) in list {
                out.push_str(&format!("{symbol}\t{n}\t{f}\n"));
            }
        }
        out
    }
}

/// Concept phrase to subject class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptCategoryMap {
    pub phrases: BTreeMap<String, String>,
}

impl ConceptCategoryMap {
    /// Parse `phrase<TAB>class` lines; phrases are lowercased.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut phrases = BTreeMap::new();
        for (line, l) in data_lines(text) {
            let Some((phrase, class)) = l.split_once('\t') else {
                return Err(Error::parse(source_name, line, "expected `phrase<TAB>class`"));
            };
            let phrase = phrase.trim().to_lowercase();
            if phrase.is_empty() || class.trim().is_empty() {
                return Err(Error::parse(source_name, line, "empty phrase or class"));
            }
            if let Some(prev) = phrases.insert(phrase.clone(), class.trim().to_string()) {
                if prev != class.trim() {
                    return Err(Error::parse(source_name, line, format!("phrase {phrase:?} mapped to two classes")));
                }
            }
        }
        Ok(ConceptCategoryMap { phrases })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read(path)?, &path.display().to_string())
    }

    /// Every mapped class must be one of `classes`.
    pub fn check_classes(&self, classes: &[String]) -> Result<()> {
        match self.phrases.iter().find(|(_, c)| !classes.contains(c)) {
            Some((p, c)) => Err(Error::Validation(format!("concept {p:?} maps to unknown class {c:?}"))),
            None => Ok(()),
        }
    }

    pub fn classes(&self) -> BTreeSet<&str> {
        self.phrases.values().map(String::as_str).collect()
    }

    /// Tokens of all phrases.
    pub fn tokens(&self) -> BTreeSet<String> {
        self.phrases.keys().flat_map(|p| tokenize(p)).collect()
    }

    pub fn to_tsv(&self) -> String {
        self.phrases.iter().map(|(p, c)| format!("{p}\t{c}\n")).collect()
    }
}
