use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{ablate, augment_identifiers, distinct_symbols, math_token_set, text_stream, AblationMode};
use super::{ConceptCategoryMap, SymbolNameSource};
use crate::classify::{stratified_split, train_and_evaluate, LogRegConfig, Split};
use crate::corpus::{Corpus, Document};
use crate::encode::{tokenize, TokenStream};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub logreg: LogRegConfig,
    pub test_fraction: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn new(seed: u64) -> Self {
        ExperimentConfig { logreg: LogRegConfig::default(), test_fraction: 0.2, seed, execution: Execution::default() }
    }
}

/// Documents with an arXiv label, their primary labels and the split.
struct Prepared<'a> {
    docs: Vec<&'a Document>,
    labels: Vec<String>,
    split: Split,
}

fn prepare<'a>(corpus: &'a Corpus, config: &ExperimentConfig) -> Result<Prepared<'a>> {
    let docs: Vec<&Document> = corpus.documents.iter().filter(|d| !d.arxiv.is_empty()).collect();
    if docs.len() < corpus.len() {
        log::warn!("{} documents without an arXiv label were skipped", corpus.len() - docs.len());
    }
    let labels: Vec<String> = docs.iter().map(|d| d.arxiv[0].clone()).collect();
    if labels.iter().collect::<BTreeSet<_>>().len() < 2 {
        return Err(Error::Validation("experiments need documents from at least 2 arXiv classes".into()));
    }
    let split = stratified_split(&labels, config.test_fraction, config.seed);
    if split.test.is_empty() {
        return Err(Error::Validation("split left no test documents".into()));
    }
    Ok(Prepared { docs, labels, split })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Scores {
    train_accuracy: f64,
    test_accuracy: f64,
    /// Stored feature entries of the training matrix.
    train_nnz: usize,
}

fn evaluate(p: &Prepared, streams: &[TokenStream], config: &ExperimentConfig) -> Result<Scores> {
    let pick = |idx: &[usize]| -> (Vec<TokenStream>, Vec<String>) {
        (idx.iter().map(|&i| streams[i].clone()).collect(), idx.iter().map(|&i| p.labels[i].clone()).collect())
    };
    let (train_s, train_l) = pick(&p.split.train);
    let (test_s, test_l) = pick(&p.split.test);
    let (clf, acc) = train_and_evaluate((&train_s, &train_l), (&test_s, &test_l), &config.logreg, config.seed)?;
    let train_nnz = train_s.iter().map(|s| clf.encode(&s.tokens).nnz()).sum();
    Ok(Scores { train_accuracy: acc.train_accuracy, test_accuracy: acc.test_accuracy, train_nnz })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationCell {
    pub source: String,
    pub top_k: usize,
    pub accuracy: f64,
    pub train_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationReport {
    pub seed: u64,
    pub train_documents: usize,
    pub test_documents: usize,
    pub text_only: f64,
    pub symbols_only: f64,
    pub cells: Vec<AugmentationCell>,
    /// Published full-corpus figures, kept for orientation only; they are
    /// not expected at this scale.
    pub full_scale_reference: BTreeMap<String, f64>,
}

impl AugmentationReport {
    pub fn accuracy(&self, source: &str, top_k: usize) -> Option<f64> {
        self.cells.iter().find(|c| c.source == source && c.top_k == top_k).map(|c| c.accuracy)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("source\ttop_k\taccuracy\ttrain_accuracy\n");
        out.push_str(&format!("text-only\t0\t{:.6}\t\n", self.text_only));
        out.push_str(&format!("symbols-only\t0\t{:.6}\t\n", self.symbols_only));
        for c in &self.cells {
            out.push_str(&format!("{}\t{}\t{:.6}\t{:.6}\n", c.source, c.top_k, c.accuracy, c.train_accuracy));
        }
        out
    }
}

enum Cell<'a> {
    TextOnly,
    SymbolsOnly,
    Augmented(&'a SymbolNameSource, usize),
}

/// Classification accuracy of text augmented with the top-k names of every
/// (source, k) pair, next to text-only and symbols-only baselines.
pub fn run_augmentation_experiment(
    corpus: &Corpus,
    sources: &[SymbolNameSource],
    top_ks: &[usize],
    config: &ExperimentConfig,
) -> Result<AugmentationReport> {
    if top_ks.contains(&0) {
        return Err(Error::Validation("top_k must be at least 1".into()));
    }
    let p = prepare(corpus, config)?;
    let mut cells = vec![Cell::TextOnly, Cell::SymbolsOnly];
    for s in sources {
        for &k in top_ks {
            cells.push(Cell::Augmented(s, k));
        }
    }
    let started = Instant::now();
    let results = config.execution.map(&cells, |cell| {
        let streams: Vec<TokenStream> = p
            .docs
            .iter()
            .map(|d| match cell {
                Cell::TextOnly => text_stream(d),
                Cell::SymbolsOnly => {
                    TokenStream::new(d.doc_id.clone(), distinct_symbols(d).iter().flat_map(|s| tokenize(s)).collect())
                }
                Cell::Augmented(source, k) => augment_identifiers(d, source, *k),
            })
            .collect();
        evaluate(&p, &streams, config)
    });
    log::info!("augmentation experiment: {} cells in {:?}", cells.len(), started.elapsed());
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let report_cells = cells
        .iter()
        .zip(&results)
        .filter_map(|(c, r)| match c {
            Cell::Augmented(s, k) => Some(AugmentationCell {
                source: s.name.clone(),
                top_k: *k,
                accuracy: r.test_accuracy,
                train_accuracy: r.train_accuracy,
            }),
            _ => None,
        })
        .collect();
    let reference = [
        ("text-only", 0.806),
        ("with-symbols", 0.23),
        ("arxiv-top3", 0.53),
        ("arxiv-top5", 0.50),
        ("wikipedia-top3", 0.49),
        ("wikipedia-top5", 0.46),
        ("wikidata-top3", 0.51),
        ("wikidata-top5", 0.49),
    ];
    Ok(AugmentationReport {
        seed: config.seed,
        train_documents: p.split.train.len(),
        test_documents: p.split.test.len(),
        text_only: results[0].test_accuracy,
        symbols_only: results[1].test_accuracy,
        cells: report_cells,
        full_scale_reference: reference.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    })
}

/// A concept phrase absent from every document of its mapped class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverageViolation {
    pub phrase: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub mode: AblationMode,
    pub accuracy: f64,
    pub train_accuracy: f64,
    /// Training feature entries relative to the Text mode; a deterministic
    /// stand-in for relative runtime.
    pub relative_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub seed: u64,
    pub train_documents: usize,
    pub test_documents: usize,
    pub math_tokens: usize,
    pub rows: Vec<AblationRow>,
    pub coverage_violations: Vec<CoverageViolation>,
}

impl AblationReport {
    pub fn accuracy(&self, mode: AblationMode) -> f64 {
        self.rows.iter().find(|r| r.mode == mode).map_or(f64::NAN, |r| r.accuracy)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("mode\taccuracy\ttrain_accuracy\trelative_cost\n");
        for r in &self.rows {
            out.push_str(&format!("{:?}\t{:.6}\t{:.6}\t{:.6}\n", r.mode, r.accuracy, r.train_accuracy, r.relative_cost));
        }
        out
    }
}

fn contains_phrase(tokens: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && tokens.windows(phrase.len()).any(|w| w == phrase)
}

/// Concept phrases that occur in no document of the class they map to.
pub fn concept_coverage(corpus: &Corpus, concepts: &ConceptCategoryMap) -> Vec<CoverageViolation> {
    let streams: Vec<(&str, Vec<String>)> = corpus
        .documents
        .iter()
        .filter_map(|d| d.arxiv.first().map(|c| (c.as_str(), crate::encode::document_text_tokens(d))))
        .collect();
    concepts
        .phrases
        .iter()
        .filter(|(phrase, class)| {
            let p = tokenize(phrase);
            !streams.iter().any(|(c, t)| c == class && contains_phrase(t, &p))
        })
        .map(|(phrase, class)| CoverageViolation { phrase: phrase.clone(), class: class.clone() })
        .collect()
}

/// Accuracy and relative cost of the four text/math feature modes.
pub fn run_ablation_experiment(corpus: &Corpus, concepts: &ConceptCategoryMap, config: &ExperimentConfig) -> Result<AblationReport> {
    let p = prepare(corpus, config)?;
    let coverage_violations = concept_coverage(corpus, concepts);
    for v in &coverage_violations {
        log::warn!("concept {:?} does not occur in any {} document", v.phrase, v.class);
    }
    let math = math_token_set(corpus, concepts);
    let base: Vec<TokenStream> = p.docs.iter().map(|d| text_stream(d)).collect();
    let started = Instant::now();
    let results = config.execution.map(&AblationMode::ALL, |&mode| {
        let streams: Vec<TokenStream> = base.iter().map(|s| ablate(s, mode, &math)).collect();
        evaluate(&p, &streams, config)
    });
    log::info!("ablation experiment finished in {:?}", started.elapsed());
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let text_nnz = results[0].train_nnz.max(1) as f64;
    Ok(AblationReport {
        seed: config.seed,
        train_documents: p.split.train.len(),
        test_documents: p.split.test.len(),
        math_tokens: math.len(),
        rows: AblationMode::ALL
            .iter()
            .zip(&results)
            .map(|(&mode, r)| AblationRow {
                mode,
                accuracy: r.test_accuracy,
                train_accuracy: r.train_accuracy,
                relative_cost: r.train_nnz as f64 / text_nnz,
            })
            .collect(),
        coverage_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic_corpus, SyntheticConfig};

    #[test]
    fn coverage_lists_missing_phrases() {
        let cfg = SyntheticConfig { concept_mentions: 0, ..Default::default() };
        let corpus = generate_synthetic_corpus(&cfg).unwrap();
        let map = ConceptCategoryMap::parse("kaboom theory\thep-th\n", "m").unwrap();
        let v = concept_coverage(&corpus, &map);
        assert_eq!(v, [CoverageViolation { phrase: "kaboom theory".into(), class: "hep-th".into() }]);
    }

    #[test]
    fn reports_are_reproducible() {
        let corpus = generate_synthetic_corpus(&SyntheticConfig::default()).unwrap();
        let map = ConceptCategoryMap::default();
        let config = ExperimentConfig::new(5);
        let a = run_ablation_experiment(&corpus, &map, &config).unwrap();
        let b = run_ablation_experiment(&corpus, &map, &ExperimentConfig { execution: Execution::Sequential, ..config }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.rows[0].relative_cost, 1.0);
    }
}
