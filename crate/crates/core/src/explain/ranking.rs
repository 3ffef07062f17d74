use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lime::{derive_seed, lime_explain, LimeConfig};
use crate::augment::{text_stream, ConceptCategoryMap};
use crate::classify::{LogRegConfig, TextClassifier};
use crate::corpus::Corpus;
use crate::encode::{document_text_tokens, tokenize, StopwordList, TokenStream};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stats::{weighted_entropy, CountDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RankMode {
    /// Document frequency within the class.
    MFreq,
    /// Mean absolute explanation weight over sampled class documents.
    MDisc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    Text,
    Math,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntropyDirection {
    /// Classes predicted from entities.
    ClsEnt,
    /// Entities predicted from classes.
    EntCls,
}

/// Per-document entity streams of one kind, each with its class.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityStreams {
    pub kind: FeatureKind,
    pub classes: Vec<String>,
    pub streams: Vec<TokenStream>,
}

impl EntityStreams {
    fn labels(&self) -> &[String] {
        &self.classes
    }
}

/// Text tokens without stopwords, one stream per document with an arXiv label.
pub fn text_entity_streams(corpus: &Corpus) -> EntityStreams {
    let (classes, streams) = corpus
        .documents
        .iter()
        .filter_map(|d| d.arxiv.first().map(|c| (c.clone(), text_stream(d))))
        .unzip();
    EntityStreams { kind: FeatureKind::Text, classes, streams }
}

/// Gold identifier-name tokens (one set per formula) plus the tokens of
/// every concept phrase occurrence in the text.
pub fn math_entity_streams(corpus: &Corpus, concepts: &ConceptCategoryMap) -> EntityStreams {
    let stop = StopwordList::shipped();
    let phrases: Vec<Vec<String>> = concepts.phrases.keys().map(|p| tokenize(p)).filter(|p| !p.is_empty()).collect();
    let (classes, streams) = corpus
        .documents
        .iter()
        .filter_map(|d| {
            let class = d.arxiv.first()?.clone();
            let mut tokens: Vec<String> = d
                .gold
                .iter()
                .flat_map(|g| g.identifier_names.values())
                .flat_map(|names| names.values())
                .flat_map(|n| tokenize(n))
                .collect();
            let text = document_text_tokens(d);
            for p in &phrases {
                let hits = text.windows(p.len()).filter(|w| *w == p.as_slice()).count();
                for _ in 0..hits {
                    tokens.extend(p.iter().cloned());
                }
            }
            tokens.retain(|t| !stop.contains(t));
            Some((class, TokenStream::new(d.doc_id.clone(), tokens)))
        })
        .unzip();
    EntityStreams { kind: FeatureKind::Math, classes, streams }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityRanking {
    pub mode: RankMode,
    pub kind: FeatureKind,
    /// class → (entity, strength), strongest first, ties lexicographic.
    pub classes: BTreeMap<String, Vec<(String, f64)>>,
}

impl EntityRanking {
    pub fn strength(&self, class: &str, entity: &str) -> f64 {
        self.classes
            .get(class)
            .and_then(|l| l.iter().find(|(e, _)| e == entity))
            .map_or(0.0, |(_, s)| *s)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("class\tentity\tweight\tmode\tkind\n");
        for (class, list) in &self.classes {
            for (e, s) in list {
                out.push_str(&format!("{class}\t{e}\t{s:.6}\t{:?}\t{:?}\n", self.mode, self.kind));
            }
        }
        out
    }
}

fn sort_strengths(mut list: Vec<(String, f64)>) -> Vec<(String, f64)> {
    list.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    list
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankConfig {
    /// Documents explained per class for MDisc.
    pub budget: usize,
    pub lime: LimeConfig,
    pub seed: u64,
    pub execution: Execution,
}

impl RankConfig {
    pub fn new(seed: u64) -> Self {
        RankConfig { budget: 10, lime: LimeConfig::default(), seed, execution: Execution::default() }
    }
}

/// Rank entities per class by frequency or by explanation weight.
/// `classifier` is required for MDisc and must be trained on streams of the
/// same kind.
pub fn rank_entities(
    streams: &EntityStreams,
    mode: RankMode,
    classifier: Option<&TextClassifier>,
    config: &RankConfig,
) -> Result<EntityRanking> {
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in streams.labels().iter().enumerate() {
        by_class.entry(c).or_default().push(i);
    }
    let classes = match mode {
        RankMode::MFreq => by_class
            .iter()
            .map(|(class, docs)| {
                let mut df = CountDistribution::new();
                for &i in docs {
                    for t in streams.streams[i].tokens.iter().collect::<BTreeSet<_>>() {
                        df.increment(t);
                    }
                }
                let list = df.ranked().into_iter().map(|(e, n)| (e.to_string(), n as f64)).collect();
                (class.to_string(), list)
            })
            .filter(|(class, list): &(String, Vec<_>)| {
                if list.is_empty() {
                    log::warn!("class {class} has no entities and is omitted");
                }
                !list.is_empty()
            })
            .collect(),
        RankMode::MDisc => {
            let clf = classifier.ok_or_else(|| Error::Validation("MDisc ranking needs a trained classifier".into()))?;
            mdisc(streams, &by_class, clf, config)?
        }
    };
    Ok(EntityRanking { mode, kind: streams.kind, classes })
}

fn mdisc(
    streams: &EntityStreams,
    by_class: &BTreeMap<&str, Vec<usize>>,
    clf: &TextClassifier,
    config: &RankConfig,
) -> Result<BTreeMap<String, Vec<(String, f64)>>> {
    let mut jobs: Vec<(usize, usize)> = Vec::new();
    let mut sampled: BTreeMap<&str, usize> = BTreeMap::new();
    for (class, docs) in by_class {
        let Some(target) = clf.model.class_index(class) else {
            log::warn!("class {class} unknown to the classifier and is omitted");
            continue;
        };
        let usable: Vec<usize> = docs
            .iter()
            .copied()
            .filter(|&i| streams.streams[i].tokens.iter().any(|t| clf.tfidf.index_of(t).is_some()))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, class));
        let chosen: Vec<usize> = usable.choose_multiple(&mut rng, config.budget).copied().collect();
        if chosen.is_empty() {
            log::warn!("class {class} has no explainable documents and is omitted");
            continue;
        }
        sampled.insert(class, chosen.len());
        jobs.extend(chosen.into_iter().map(|i| (i, target)));
    }
    let explanations = config.execution.map(&jobs, |&(i, target)| {
        let s = &streams.streams[i];
        lime_explain(&clf.model, &clf.tfidf, &s.doc_id, &s.tokens, target, &config.lime, derive_seed(config.seed, &s.doc_id))
    });
    let mut sums: BTreeMap<String, HashMap<String, f64>> = BTreeMap::new();
    for e in explanations {
        let e = e?;
        let acc = sums.entry(e.class.clone()).or_default();
        for (t, w) in e.weights {
            *acc.entry(t).or_default() += w.abs();
        }
    }
    Ok(sums
        .into_iter()
        .map(|(class, acc)| {
            let n = sampled[class.as_str()] as f64;
            let list = acc.into_iter().map(|(t, s)| (t, s / n)).collect();
            (class, sort_strengths(list))
        })
        .collect())
}

/// ClsEnt: mean over the union of per-class top-m entities of the entropy
/// of that entity's strength across classes. EntCls: mean over classes of
/// the entropy of the class's top-m strength distribution.
pub fn class_entity_entropy(ranking: &EntityRanking, direction: EntropyDirection, top_m: usize) -> Result<f64> {
    if ranking.classes.len() < 2 {
        return Err(Error::Domain("entropy analysis needs a ranking over at least 2 classes".into()));
    }
    let top = |list: &[(String, f64)]| list.iter().take(top_m).filter(|(_, s)| *s > 0.0).cloned().collect::<Vec<_>>();
    let values: Vec<f64> = match direction {
        EntropyDirection::EntCls => ranking
            .classes
            .values()
            .map(|l| top(l))
            .filter(|l| !l.is_empty())
            .map(|l| weighted_entropy(&l.iter().map(|(_, s)| *s).collect::<Vec<_>>()))
            .collect::<Result<_>>()?,
        EntropyDirection::ClsEnt => {
            let entities: BTreeSet<String> = ranking.classes.values().flat_map(|l| top(l)).map(|(e, _)| e).collect();
            entities
                .iter()
                .map(|e| {
                    let across: Vec<f64> = ranking.classes.keys().map(|c| ranking.strength(c, e)).collect();
                    weighted_entropy(&across)
                })
                .collect::<Result<_>>()?
        }
    };
    if values.is_empty() {
        return Err(Error::Domain("ranking has no positive strengths".into()));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub name: String,
    pub mode: RankMode,
    pub kind: FeatureKind,
    pub direction: EntropyDirection,
    pub entropy: f64,
}

impl fmt::Display for EntropyRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{:.4}", self.name, self.entropy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyTable {
    pub top_m: usize,
    pub rows: Vec<EntropyRow>,
}

impl EntropyTable {
    pub fn get(&self, mode: RankMode, kind: FeatureKind, direction: EntropyDirection) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.mode == mode && r.kind == kind && r.direction == direction)
            .map(|r| r.entropy)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("mode\tentropy\n");
        for r in &self.rows {
            out.push_str(&format!("{r}\n"));
        }
        out
    }
}

/// The eight (mode, kind, direction) entropies, text rows first.
pub fn entropy_table(rankings: &[EntityRanking], top_m: usize) -> Result<EntropyTable> {
    let mut rows = Vec::new();
    for kind in [FeatureKind::Text, FeatureKind::Math] {
        for mode in [RankMode::MDisc, RankMode::MFreq] {
            let Some(r) = rankings.iter().find(|r| r.kind == kind && r.mode == mode) else {
                continue;
            };
            for direction in [EntropyDirection::ClsEnt, EntropyDirection::EntCls] {
                rows.push(EntropyRow {
                    name: format!("{mode:?}{kind:?}{direction:?}"),
                    mode,
                    kind,
                    direction,
                    entropy: class_entity_entropy(r, direction, top_m)?,
                });
            }
        }
    }
    Ok(EntropyTable { top_m, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplainConfig {
    pub logreg: LogRegConfig,
    pub rank: RankConfig,
    pub top_m: usize,
}

impl ExplainConfig {
    pub fn new(seed: u64) -> Self {
        ExplainConfig { logreg: LogRegConfig::default(), rank: RankConfig::new(seed), top_m: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub table: EntropyTable,
    pub rankings: Vec<EntityRanking>,
}

/// Train one classifier per feature kind on all labeled documents, rank
/// entities both ways and tabulate the entropies.
pub fn run_explain_analysis(corpus: &Corpus, concepts: &ConceptCategoryMap, config: &ExplainConfig) -> Result<ExplainReport> {
    let mut rankings = Vec::new();
    for streams in [text_entity_streams(corpus), math_entity_streams(corpus, concepts)] {
        let keep: Vec<usize> = (0..streams.streams.len()).filter(|&i| !streams.streams[i].is_empty()).collect();
        let train_s: Vec<TokenStream> = keep.iter().map(|&i| streams.streams[i].clone()).collect();
        let train_l: Vec<String> = keep.iter().map(|&i| streams.classes[i].clone()).collect();
        let clf = TextClassifier::train(&train_s, &train_l, &config.logreg, config.rank.seed)?;
        rankings.push(rank_entities(&streams, RankMode::MDisc, Some(&clf), &config.rank)?);
        rankings.push(rank_entities(&streams, RankMode::MFreq, None, &config.rank)?);
    }
    Ok(ExplainReport { table: entropy_table(&rankings, config.top_m)?, rankings })
}
