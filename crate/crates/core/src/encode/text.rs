use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const DEFAULT_LEMMA_EXCEPTIONS: &str = include_str!("../../data/lemma_exceptions.txt");

/// Ordered lowercase word tokens of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<String>) -> Self {
        TokenStream { doc_id: doc_id.into(), tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Split on non-alphanumeric boundaries and lowercase.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn tokenize_stream(doc_id: impl Into<String>, text: &str) -> TokenStream {
    TokenStream::new(doc_id, tokenize(text))
}

fn entries(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Debug, Clone)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn parse(source: &str) -> Self {
        StopwordList {
            words: entries(source).map(|(_, w)| w.to_lowercase()).collect(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&src))
    }

    /// The list shipped with the crate.
    pub fn shipped() -> &'static StopwordList {
        static LIST: OnceLock<StopwordList> = OnceLock::new();
        LIST.get_or_init(|| StopwordList::parse(DEFAULT_STOPWORDS))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn filter(&self, stream: TokenStream) -> TokenStream {
        TokenStream {
            doc_id: stream.doc_id,
            tokens: stream.tokens.into_iter().filter(|t| !self.contains(t)).collect(),
        }
    }
}

pub fn is_stopword(token: &str) -> bool {
    StopwordList::shipped().contains(token)
}

/// Remove shipped stopwords, preserving the order of the rest.
pub fn remove_stopwords(stream: TokenStream) -> TokenStream {
    StopwordList::shipped().filter(stream)
}

/// Rule-based English lemmatizer with an exception table.
///
/// Idempotent: rule outputs never end in a strippable suffix and exception
/// lemmas are fixed points.
#[derive(Debug, Clone)]
pub struct Lemmatizer {
    exceptions: HashMap<String, String>,
    lemmas: HashSet<String>,
}

impl Lemmatizer {
    pub fn parse(source: &str) -> Result<Self> {
        let mut exceptions = HashMap::new();
        for (line, entry) in entries(source) {
            let (word, lemma) = entry
                .split_once('\t')
                .ok_or_else(|| Error::parse("lemma exceptions", line, "expected `word<TAB>lemma`"))?;
            exceptions.insert(word.trim().to_lowercase(), lemma.trim().to_lowercase());
        }
        let lemmas = exceptions.values().cloned().collect();
        Ok(Lemmatizer { exceptions, lemmas })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&src)
    }

    pub fn shipped() -> &'static Lemmatizer {
        static LEMMATIZER: OnceLock<Lemmatizer> = OnceLock::new();
        LEMMATIZER.get_or_init(|| Lemmatizer::parse(DEFAULT_LEMMA_EXCEPTIONS).expect("shipped exceptions parse"))
    }

    pub fn lemmatize(&self, token: &str) -> String {
        if let Some(lemma) = self.exceptions.get(token) {
            return lemma.clone();
        }
        if self.lemmas.contains(token) {
            return token.to_string();
        }
        let lemma = apply_rules(token);
        // a rule output that is itself an inflected exception would not be a fixed point
        if self.exceptions.contains_key(&lemma) {
            return token.to_string();
        }
        lemma
    }
}

fn apply_rules(token: &str) -> String {
    let chars = token.chars().count();
    if chars <= 3 || !token.ends_with('s') {
        return token.to_string();
    }
    if chars > 4 {
        if let Some(stem) = token.strip_suffix("ies") {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = token.strip_suffix("sses") {
        return format!("{stem}ss");
    }
    for suffix in ["xes", "ches", "shes"] {
        if token.ends_with(suffix) {
            return token[..token.len() - 2].to_string();
        }
    }
    if ["ss", "us", "is", "ics"].iter().any(|s| token.ends_with(s)) {
        return token.to_string();
    }
    token[..token.len() - 1].to_string()
}

pub fn lemmatize(token: &str) -> String {
    Lemmatizer::shipped().lemmatize(token)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("Velocity dispersion is"), ["velocity", "dispersion", "is"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("E=mc2"), ["e", "mc2"]);
        assert_eq!(tokenize("Gross–Pitaevskii_equation"), ["gross", "pitaevskii", "equation"]);
    }

    #[test]
    fn stopwords() {
        let s = remove_stopwords(TokenStream::new("d", vec!["of".into(), "the".into(), "axion".into()]));
        assert_eq!(s.tokens, ["axion"]);
        let clean = TokenStream::new("d", vec!["axion".into(), "mass".into()]);
        assert_eq!(remove_stopwords(clean.clone()), clean);
        let all = TokenStream::new("d", vec!["is".into(), "are".into(), "etc".into()]);
        assert!(remove_stopwords(all).is_empty());
        let n = StopwordList::shipped().len();
        assert!((140..=170).contains(&n), "{n}");
    }

    #[test]
    fn lemmatize_examples() {
        assert_eq!(lemmatize("vortices"), "vortex");
        assert_eq!(lemmatize("vortex"), "vortex");
        assert_eq!(lemmatize("equations"), "equation");
        assert_eq!(lemmatize("studies"), "study");
        assert_eq!(lemmatize("classes"), "class");
        assert_eq!(lemmatize("boxes"), "box");
        assert_eq!(lemmatize("physics"), "physics");
        assert_eq!(lemmatize("analysis"), "analysis");
        assert_eq!(lemmatize("radius"), "radius");
        assert_eq!(lemmatize("gas"), "gas");
        assert_eq!(lemmatize("series"), "series");
    }

    #[test]
    fn exceptions_file_is_well_formed() {
        assert!(Lemmatizer::parse("vortices").is_err());
        let l = Lemmatizer::parse("# comment\nfoo\tbar\n").unwrap();
        assert_eq!(l.lemmatize("foo"), "bar");
        assert_eq!(l.lemmatize("bar"), "bar");
    }

    #[test]
    fn idempotent_on_shipped_vocabulary() {
        let vocab = DEFAULT_LEMMA_EXCEPTIONS
            .split(|c: char| c.is_whitespace())
            .chain(DEFAULT_STOPWORDS.lines())
            .chain(["equations", "vortices", "studies", "processes", "matches", "statuses", "axions", "datas", "mens"]);
        for w in vocab.filter(|w| !w.is_empty() && !w.starts_with('#')) {
            let once = lemmatize(w);
            assert_eq!(lemmatize(&once), once, "{w}");
        }
    }

    proptest! {
        #[test]
        fn lemmatize_is_idempotent(word in "[a-z]{1,12}") {
            let once = lemmatize(&word);
            prop_assert_eq!(lemmatize(&once), once);
        }

        #[test]
        fn tokens_have_no_whitespace(text in "\\PC{0,60}") {
            for t in tokenize(&text) {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }
    }
}
