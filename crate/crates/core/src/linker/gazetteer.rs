use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encode::tokenize;
use crate::error::{Error, Result};

/// Where a gazetteer's entries were exported from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GazetteerSource {
    /// Encyclopedia article title dump.
    Wikidump,
    /// Knowledge-base item names retrieved per n-gram.
    ItemName,
    /// Knowledge-base query export.
    SparqlExport,
}

impl GazetteerSource {
    pub const ALL: [GazetteerSource; 3] = [GazetteerSource::Wikidump, GazetteerSource::ItemName, GazetteerSource::SparqlExport];

    pub fn tag(self) -> &'static str {
        match self {
            GazetteerSource::Wikidump => "wikidump",
            GazetteerSource::ItemName => "item-name",
            GazetteerSource::SparqlExport => "sparql-export",
        }
    }
}

impl fmt::Display for GazetteerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for GazetteerSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GazetteerSource::ALL
            .into_iter()
            .find(|g| g.tag() == s)
            .ok_or_else(|| Error::Validation(format!("unknown gazetteer source {s:?}")))
    }
}

/// Link target of a surface form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    /// Article title or URL suffix.
    pub title: Option<String>,
    /// Knowledge-base item id such as `Q637450`.
    pub item: Option<String>,
}

/// Lowercase tokens joined by single spaces; underscores, hyphens and dashes
/// all act as separators.
pub fn normalize_surface(surface: &str) -> String {
    tokenize(surface).join(" ")
}

pub fn is_item_id(s: &str) -> bool {
    s.len() > 1 && s.starts_with('Q') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Exact-match dictionary from normalized surface forms to targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gazetteer {
    pub source: GazetteerSource,
    entries: HashMap<String, GazetteerEntry>,
    /// Surface forms dropped because an earlier line already defined them.
    pub duplicates: usize,
}

impl Gazetteer {
    pub fn new(source: GazetteerSource) -> Self {
        Gazetteer { source, entries: HashMap::new(), duplicates: 0 }
    }

    /// Parse `surface<TAB>target[<TAB>title]` lines. A target matching
    /// `Q<digits>` is an item id, anything else a title; an empty target
    /// records a surface form with no target. Title-dump entries default
    /// their title to the surface as written. The first definition of a
    /// surface form wins.
    pub fn parse(text: &str, source: GazetteerSource, source_name: &str) -> Result<Self> {
        let mut g = Gazetteer::new(source);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim_end_matches('\r');
            if l.trim().is_empty() || l.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = l.split('\t').map(str::trim).collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(Error::parse(source_name, line, "expected `surface<TAB>target[<TAB>title]`"));
            }
            let surface = fields[0];
            let key = normalize_surface(surface);
            if key.is_empty() {
                return Err(Error::parse(source_name, line, format!("surface form {surface:?} has no word characters")));
            }
            let mut entry = GazetteerEntry::default();
            match fields[1] {
                "" => {}
                t if is_item_id(t) => entry.item = Some(t.to_string()),
                t => entry.title = Some(t.to_string()),
            }
            if let Some(title) = fields.get(2).filter(|t| !t.is_empty()) {
                if entry.title.is_some() {
                    return Err(Error::parse(source_name, line, "title given twice"));
                }
                entry.title = Some(title.to_string());
            }
            if source == GazetteerSource::Wikidump && entry.title.is_none() {
                entry.title = Some(surface.to_string());
            }
            if !g.insert(key, entry) {
                log::warn!("{source_name}:{line}: duplicate surface form {surface:?} ignored");
            }
        }
        Ok(g)
    }

    pub fn load(path: impl AsRef<Path>, source: GazetteerSource) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, source, &path.display().to_string())
    }

    /// Insert unless the key exists; returns whether it was inserted.
    pub fn insert(&mut self, key: String, entry: GazetteerEntry) -> bool {
        if self.entries.contains_key(&key) {
            self.duplicates += 1;
            return false;
        }
        self.entries.insert(key, entry);
        true
    }

    pub fn lookup(&self, surface: &str) -> Option<&GazetteerEntry> {
        self.entries.get(&normalize_surface(surface))
    }

    /// Lookup of an already normalized key.
    pub fn get(&self, key: &str) -> Option<&GazetteerEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
