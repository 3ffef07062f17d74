//! Seeded generator for desk-scale fixture corpora with planted structure.
//!
//! Every class owns a vocabulary of class words, a set of MSC codes and a
//! list of concept phrases. Identifier symbols are either shared by all
//! classes (ambiguous) or owned by one class; in both cases the semantic name
//! of a symbol depends on the class, so names concentrate on classes while
//! shared symbols spread over all of them.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::markup::{greek_char, greek_name};
use super::{Corpus, Document, GoldAnnotations, Segment};
use crate::encode::is_stopword;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub classes: Vec<String>,
    pub docs_per_class: usize,
    /// Class-specific words per class.
    pub class_vocab: usize,
    /// Words of the next class (cyclically) that each class also draws
    /// from, making those words ambiguous between two classes.
    pub vocab_overlap: usize,
    /// Words shared by every class.
    pub shared_vocab: usize,
    pub tokens_per_doc: usize,
    /// Probability that a text token is drawn from the class vocabulary.
    pub class_word_rate: f64,
    /// Ambiguous symbols used by every class.
    pub shared_symbols: Vec<String>,
    /// Symbols owned by a single class.
    pub class_symbols: usize,
    /// Probability that an identifier is drawn from the shared symbols
    /// (when the class owns symbols).
    pub shared_symbol_rate: f64,
    pub formulas_per_doc: usize,
    pub identifiers_per_formula: usize,
    /// Probability that an identifier is annotated with a generic,
    /// class-independent name instead of its class name.
    pub name_noise: f64,
    /// Probability that an identifier's name is also mentioned in the text
    /// following its formula.
    pub name_mention_rate: f64,
    pub concepts_per_class: usize,
    /// Concept phrase mentions inserted into each document.
    pub concept_mentions: usize,
    pub msc_per_class: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            classes: vec!["hep-th".into(), "quant-ph".into(), "astro-ph".into()],
            docs_per_class: 10,
            class_vocab: 30,
            vocab_overlap: 0,
            shared_vocab: 120,
            tokens_per_doc: 60,
            class_word_rate: 0.3,
            shared_symbols: ["t", "x", "E", "m", "tau"].map(String::from).to_vec(),
            class_symbols: 0,
            shared_symbol_rate: 0.5,
            formulas_per_doc: 3,
            identifiers_per_formula: 3,
            name_noise: 0.0,
            name_mention_rate: 0.5,
            concepts_per_class: 4,
            concept_mentions: 2,
            msc_per_class: 1,
            seed: 7,
        }
    }
}

impl SyntheticConfig {
    /// Ten physics classes with ambiguous shared symbols and class-pure
    /// identifier names.
    pub fn demo() -> Self {
        SyntheticConfig {
            classes: [
                "astro-ph", "cond-mat", "gr-qc", "hep-lat", "hep-ph", "hep-th", "math-ph", "nlin",
                "quant-ph", "physics",
            ]
            .map(String::from)
            .to_vec(),
            docs_per_class: 24,
            class_vocab: 40,
            vocab_overlap: 20,
            shared_vocab: 200,
            tokens_per_doc: 80,
            class_word_rate: 0.25,
            shared_symbols: ["t", "x", "E", "m", "tau", "r", "k", "n", "rho", "B"].map(String::from).to_vec(),
            class_symbols: 0,
            shared_symbol_rate: 1.0,
            formulas_per_doc: 3,
            identifiers_per_formula: 3,
            name_noise: 0.05,
            name_mention_rate: 0.5,
            concepts_per_class: 5,
            concept_mentions: 2,
            msc_per_class: 3,
            seed: 20210301,
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Validation(format!("synthetic config: {m}")));
        if self.classes.len() < 2 {
            return fail("at least 2 classes are required");
        }
        if self.classes.iter().collect::<BTreeSet<_>>().len() != self.classes.len() {
            return fail("class names must be distinct");
        }
        if let Some(c) = self.classes.iter().find(|c| !super::is_arxiv_category(c)) {
            return Err(Error::Validation(format!("synthetic config: {c:?} is not an arXiv category")));
        }
        if self.docs_per_class < 2 {
            return fail("at least 2 documents per class are required");
        }
        if self.vocab_overlap > self.class_vocab {
            return fail("vocab_overlap exceeds class_vocab");
        }
        if self.class_vocab == 0 && self.shared_vocab == 0 {
            return fail("empty vocabulary");
        }
        if self.class_vocab == 0 && self.class_word_rate > 0.0 || self.shared_vocab == 0 && self.class_word_rate < 1.0 {
            return fail("class_word_rate draws from an empty vocabulary");
        }
        for (name, p) in [
            ("class_word_rate", self.class_word_rate),
            ("shared_symbol_rate", self.shared_symbol_rate),
            ("name_noise", self.name_noise),
            ("name_mention_rate", self.name_mention_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Validation(format!("synthetic config: {name} must lie in [0, 1]")));
            }
        }
        if self.formulas_per_doc > 0 && self.identifiers_per_formula > 0 {
            if self.shared_symbols.is_empty() && self.class_symbols == 0 {
                return fail("formulas need at least one symbol");
            }
            if self.class_symbols == 0 && self.shared_symbol_rate < 1.0 && self.shared_symbols.is_empty() {
                return fail("no symbols available");
            }
        }
        let pool = symbol_pool(&self.shared_symbols);
        if pool.len() < self.class_symbols * self.classes.len() {
            return fail("not enough symbols for class_symbols");
        }
        if self.msc_per_class > 26 * 10 || self.classes.len() > 90 {
            return fail("too many classes or MSC codes");
        }
        if self.concept_mentions > 0 && self.concepts_per_class == 0 {
            return fail("concept_mentions needs concepts_per_class > 0");
        }
        Ok(())
    }
}

/// Planted vocabularies derived from a config. Exposed so fixtures can build
/// name sources and concept maps that agree with the generated corpus.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub class_words: Vec<Vec<String>>,
    pub shared_words: Vec<String>,
    /// Symbols owned by each class (empty unless `class_symbols > 0`).
    pub class_symbols: Vec<Vec<String>>,
    /// `names[class][symbol]`
    pub names: Vec<BTreeMap<String, String>>,
    pub generic_names: Vec<String>,
    pub concepts: Vec<Vec<String>>,
    pub msc_codes: Vec<Vec<String>>,
}

const GENERIC_NAMES: [&str; 6] = ["function", "constant", "value", "parameter", "variable", "quantity"];

/// Real names for common symbols; class `k` takes entry `k` when present.
/// No word appears in two different columns, so name tokens stay class-pure.
const NAME_LEXICON: &[(&str, &[&str])] = &[
    ("t", &["time", "temperature", "thickness", "tension", "transmission", "trace"]),
    ("x", &["position", "displacement", "coordinate", "unknown", "abscissa"]),
    ("E", &["energy", "electromotive force", "expectation", "elasticity", "eigenvalue"]),
    ("m", &["mass", "magnetization", "multiplicity", "slope", "modulus"]),
    ("tau", &["lifetime", "torque", "optical depth", "shear stress", "delay"]),
    ("r", &["radius", "distance", "rate", "reflectivity", "ratio"]),
    ("k", &["wavenumber", "momentum", "stiffness", "curvature", "coupling"]),
    ("n", &["density", "refractive index", "particle number", "winding", "occupation"]),
    ("rho", &["mass density", "resistivity", "correlation", "spectral weight"]),
    ("B", &["magnetic field", "bandwidth", "baryon number", "brightness"]),
];

impl Lexicon {
    pub fn new(config: &SyntheticConfig) -> Self {
        let classes = config.classes.len();
        let shared_words = (0..config.shared_vocab).map(|j| pseudo_word(1_000 + j as u64)).collect();
        let own: Vec<Vec<String>> = (0..classes)
            .map(|k| {
                (0..config.class_vocab)
                    .map(|j| pseudo_word(100_000 + (k * 10_000 + j) as u64))
                    .collect()
            })
            .collect();
        let class_words = (0..classes)
            .map(|k| {
                let mut words = own[k].clone();
                words.extend_from_slice(&own[(k + 1) % classes][..config.vocab_overlap]);
                words
            })
            .collect();

        let pool = symbol_pool(&config.shared_symbols);
        let class_symbols: Vec<Vec<String>> = (0..classes)
            .map(|k| pool[k * config.class_symbols..(k + 1) * config.class_symbols].to_vec())
            .collect();

        let mut names = vec![BTreeMap::new(); classes];
        for (k, class_names) in names.iter_mut().enumerate() {
            for (si, symbol) in config.shared_symbols.iter().enumerate() {
                let lex = NAME_LEXICON.iter().find(|(s, _)| s == symbol).and_then(|(_, n)| n.get(k));
                let name = match lex {
                    Some(n) => n.to_string(),
                    None => pseudo_word(500_000 + (k * 1_000 + si) as u64),
                };
                class_names.insert(symbol.clone(), name);
            }
            for (si, symbol) in class_symbols[k].iter().enumerate() {
                class_names.insert(symbol.clone(), pseudo_word(600_000 + (k * 1_000 + si) as u64));
            }
        }

        let concepts = (0..classes)
            .map(|k| {
                (0..config.concepts_per_class)
                    .map(|j| {
                        let base = 800_000 + 2 * (k * 1_000 + j) as u64;
                        format!("{} {}", pseudo_word(base), pseudo_word(base + 1))
                    })
                    .collect()
            })
            .collect();

        let msc_codes = (0..classes)
            .map(|k| {
                (0..config.msc_per_class)
                    .map(|j| {
                        let letter = (b'A' + (j % 26) as u8) as char;
                        format!("{:02}{}{:02}", 10 + k, letter, 5 + j / 26)
                    })
                    .collect()
            })
            .collect();

        Lexicon {
            class_words,
            shared_words,
            class_symbols,
            names,
            generic_names: GENERIC_NAMES.map(String::from).to_vec(),
            concepts,
            msc_codes,
        }
    }
}

/// Latin letters and spelled-out Greek letters not listed in `shared`.
fn symbol_pool(shared: &[String]) -> Vec<String> {
    let latin = ('a'..='z').chain('A'..='Z').map(|c| c.to_string());
    let greek = "αβγδεζηθικλμνξπρσφχψωΓΔΘΛΞΠΣΦΨΩ".chars().filter_map(greek_name).map(String::from);
    latin.chain(greek).filter(|s| !shared.contains(s)).collect()
}

/// A pronounceable lowercase word, injective in `id`.
fn pseudo_word(id: u64) -> String {
    const CONS: &[u8] = b"bdfgklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let base = (CONS.len() * VOWELS.len()) as u64;
    let mut n = id;
    let mut word = String::new();
    // at least three syllables
    for _ in 0..3 {
        let s = (n % base) as usize;
        word.push(CONS[s / VOWELS.len()] as char);
        word.push(VOWELS[s % VOWELS.len()] as char);
        n /= base;
    }
    while n > 0 {
        let s = (n % base) as usize;
        word.push(CONS[s / VOWELS.len()] as char);
        word.push(VOWELS[s % VOWELS.len()] as char);
        n /= base;
    }
    if is_stopword(&word) {
        word.push('x');
    }
    word
}

fn symbol_markup(symbol: &str) -> String {
    let text = match greek_char(symbol) {
        Some(c) => c.to_string(),
        None => symbol.to_string(),
    };
    format!("<mi>{text}</mi>")
}

/// Generate a corpus from `config`. Output depends only on the config
/// (including its seed).
pub fn generate_synthetic_corpus(config: &SyntheticConfig) -> Result<Corpus> {
    config.validate()?;
    let lex = Lexicon::new(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut documents = Vec::with_capacity(config.classes.len() * config.docs_per_class);

    for (k, class) in config.classes.iter().enumerate() {
        for i in 0..config.docs_per_class {
            let doc_id = format!("{class}-{i:04}");
            documents.push(generate_document(config, &lex, k, doc_id, &mut rng));
        }
    }
    Corpus::new(documents)
}

fn draw_word<'a>(config: &SyntheticConfig, lex: &'a Lexicon, k: usize, rng: &mut ChaCha8Rng) -> &'a str {
    if rng.gen_bool(config.class_word_rate) {
        lex.class_words[k].choose(rng).expect("validated non-empty")
    } else {
        lex.shared_words.choose(rng).expect("validated non-empty")
    }
}

fn draw_symbol<'a>(config: &'a SyntheticConfig, lex: &'a Lexicon, k: usize, rng: &mut ChaCha8Rng) -> &'a str {
    let own = &lex.class_symbols[k];
    let use_shared = own.is_empty() || (!config.shared_symbols.is_empty() && rng.gen_bool(config.shared_symbol_rate));
    if use_shared {
        config.shared_symbols.choose(rng).expect("validated non-empty")
    } else {
        own.choose(rng).expect("non-empty")
    }
}

fn generate_document(config: &SyntheticConfig, lex: &Lexicon, k: usize, doc_id: String, rng: &mut ChaCha8Rng) -> Document {
    let runs = config.formulas_per_doc + 1;
    let mut text_runs: Vec<Vec<String>> = vec![Vec::new(); runs];
    for t in 0..config.tokens_per_doc {
        text_runs[t * runs / config.tokens_per_doc.max(1)].push(draw_word(config, lex, k, rng).to_string());
    }
    for _ in 0..config.concept_mentions {
        let phrase = lex.concepts[k].choose(rng).expect("validated non-empty").clone();
        let run = rng.gen_range(0..runs);
        let at = rng.gen_range(0..=text_runs[run].len());
        text_runs[run].insert(at, phrase);
    }

    let mut segments = Vec::new();
    let mut names_by_formula = BTreeMap::new();
    for (f, run) in text_runs.into_iter().enumerate() {
        if f > 0 {
            let fid = format!("f{f}");
            let mut symbols = Vec::new();
            for _ in 0..config.identifiers_per_formula {
                symbols.push(draw_symbol(config, lex, k, rng).to_string());
            }
            let mut markup = String::from("<math>");
            let mut names = BTreeMap::new();
            let mut mentions = Vec::new();
            for (j, symbol) in symbols.iter().enumerate() {
                if j > 0 {
                    markup.push_str(if j % 2 == 1 { "<mo>=</mo>" } else { "<mo>+</mo>" });
                }
                markup.push_str(&symbol_markup(symbol));
                let name = match names.get(symbol) {
                    Some(n) => String::clone(n),
                    None if rng.gen_bool(config.name_noise) => lex.generic_names.choose(rng).expect("const").clone(),
                    None => lex.names[k][symbol].clone(),
                };
                if !names.contains_key(symbol) && rng.gen_bool(config.name_mention_rate) {
                    mentions.push(name.clone());
                }
                names.insert(symbol.clone(), name);
            }
            markup.push_str("</math>");
            segments.push(Segment::formula(fid.clone(), markup));
            names_by_formula.insert(fid, names);
            let mut run = run;
            for (m, name) in mentions.into_iter().enumerate() {
                run.insert(m.min(run.len()), name);
            }
            segments.push(Segment::text(run.join(" ")));
        } else {
            segments.push(Segment::text(run.join(" ")));
        }
    }

    Document {
        doc_id,
        arxiv: vec![config.classes[k].clone()],
        msc: vec![lex.msc_codes[k].choose(rng).expect("msc_per_class > 0").clone()],
        segments,
        gold: Some(GoldAnnotations { identifier_names: names_by_formula, ..Default::default() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn same_seed_same_bytes() {
        let cfg = SyntheticConfig { docs_per_class: 10, seed: 7, ..Default::default() };
        let a = generate_synthetic_corpus(&cfg).unwrap().to_jsonl();
        let b = generate_synthetic_corpus(&cfg).unwrap().to_jsonl();
        assert_eq!(a, b);
        let other = generate_synthetic_corpus(&SyntheticConfig { seed: 8, ..cfg }).unwrap().to_jsonl();
        assert_ne!(a, other);
    }

    #[test]
    fn degenerate_configs_are_rejected() {
        for classes in [vec![], vec!["math".to_string()]] {
            let cfg = SyntheticConfig { classes, ..Default::default() };
            assert!(matches!(generate_synthetic_corpus(&cfg), Err(Error::Validation(_))));
        }
        let cfg = SyntheticConfig { docs_per_class: 1, ..Default::default() };
        assert!(generate_synthetic_corpus(&cfg).is_err());
    }

    #[test]
    fn shared_symbol_spreads_while_names_concentrate() {
        let cfg = SyntheticConfig {
            shared_symbols: vec!["t".into()],
            docs_per_class: 8,
            ..Default::default()
        };
        let corpus = generate_synthetic_corpus(&cfg).unwrap();
        let mut symbol_classes = HashSet::new();
        let mut name_classes: BTreeMap<String, HashSet<String>> = BTreeMap::new();
        for doc in &corpus.documents {
            for occ in doc.identifier_occurrences().unwrap() {
                assert_eq!(occ.symbol, "t");
                symbol_classes.insert(doc.arxiv[0].clone());
                name_classes.entry(occ.name.unwrap()).or_default().insert(doc.arxiv[0].clone());
            }
        }
        assert_eq!(symbol_classes.len(), 3);
        assert_eq!(name_classes.len(), 3);
        assert!(name_classes.values().all(|c| c.len() == 1));
        assert!(name_classes.contains_key("time"));
    }

    #[test]
    fn pseudo_words_are_distinct_and_alphabetic() {
        let words: HashSet<String> = (0..5_000).map(pseudo_word).collect();
        assert_eq!(words.len(), 5_000);
        assert!(words.iter().all(|w| w.chars().all(|c| c.is_ascii_lowercase())));
    }

    #[test]
    fn demo_config_generates() {
        let corpus = generate_synthetic_corpus(&SyntheticConfig::demo()).unwrap();
        assert_eq!(corpus.len(), 240);
    }

    #[test]
    fn name_lexicon_words_are_class_pure() {
        let mut owner: BTreeMap<String, usize> = BTreeMap::new();
        for (_, names) in NAME_LEXICON {
            for (k, name) in names.iter().enumerate() {
                for w in crate::encode::tokenize(name) {
                    assert_eq!(*owner.entry(w.clone()).or_insert(k), k, "{w}");
                    assert!(!GENERIC_NAMES.contains(&w.as_str()), "{w}");
                    assert!(!is_stopword(&w), "{w}");
                }
            }
        }
    }

    #[test]
    fn overlap_shares_words_with_next_class() {
        let cfg = SyntheticConfig { vocab_overlap: 5, ..Default::default() };
        let lex = Lexicon::new(&cfg);
        assert_eq!(lex.class_words[0].len(), 35);
        assert_eq!(lex.class_words[0][30..], lex.class_words[1][..5]);
        assert_eq!(lex.class_words[2][30..], lex.class_words[0][..5]);
        let bad = SyntheticConfig { vocab_overlap: 31, ..Default::default() };
        assert!(generate_synthetic_corpus(&bad).is_err());
    }
}
