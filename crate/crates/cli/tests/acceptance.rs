//! Acceptance criteria C1 to C11. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use mathex::augment::{
    run_ablation_experiment, run_augmentation_experiment, AblationMode, ConceptCategoryMap, ExperimentConfig, SymbolNameSource,
};
use mathex::classify::{
    evaluate_accuracy, loss_and_gradient, predict_categories, train_logreg, Granularity, LabelMode, LabeledDataset, LogRegConfig,
    LogRegModel, PredictionDirection, TrainingMetadata,
};
use mathex::corpus::synthetic::Lexicon;
use mathex::corpus::{generate_synthetic_corpus, Corpus, Document, Segment, SyntheticConfig};
use mathex::encode::{fit_tfidf, SparseVector, TfIdfModel, TokenStream};
use mathex::explain::{lime_explain, run_explain_analysis, EntropyDirection, ExplainConfig, FeatureKind, LimeConfig, RankMode};
use mathex::linker::*;
use mathex::stats::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn linking(name: &str) -> PathBuf {
    root().join("data/linking").join(name)
}

// ---- C1

fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

fn entropy_oracle(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let weighted = compensated_sum(counts.iter().filter(|&&c| c > 0).map(|&c| c as f64 * (c as f64).log2()));
    ((n as f64).log2() - weighted / n as f64).max(0.0)
}

fn margin_oracle(counts: &[u64]) -> f64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    (sorted[0] - sorted.get(1).copied().unwrap_or(0)) as f64 / counts.iter().sum::<u64>() as f64
}

fn dist(counts: &[u64]) -> CountDistribution {
    let mut d = CountDistribution::new();
    for (i, &c) in counts.iter().enumerate() {
        d.add(format!("l{i:02}"), c);
    }
    d
}

fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let labels = rng.gen_range(1..=16);
        let mut counts: Vec<u64> = (0..labels).map(|_| rng.gen_range(0..=1_000_000)).collect();
        if counts.iter().all(|&c| c == 0) {
            counts[0] = 1;
        }
        let d = dist(&counts);
        let h = shannon_entropy(&d).map_err(|e| e.to_string())?;
        let m = margin_uncertainty(&d).map_err(|e| e.to_string())?;
        worst = worst.max((h - entropy_oracle(&counts)).abs()).max((m - margin_oracle(&counts)).abs());
    }
    let mut closed = true;
    for n in 1..=16u64 {
        closed &= shannon_entropy(&dist(&vec![5; n as usize])).unwrap() == (n as f64).log2();
    }
    closed &= shannon_entropy(&dist(&[9])).unwrap() == 0.0;
    closed &= margin_uncertainty(&dist(&[9])).unwrap() == 1.0;
    closed &= margin_uncertainty(&dist(&[4, 4, 1])).unwrap() == 0.0;
    check(worst <= 1e-12 && closed, format!("max deviation {worst:.2e}, closed forms exact: {closed}"))
}

// ---- C2

fn random_corpus(seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = ["hep-th", "quant-ph", "astro-ph", "gr-qc", "nlin"];
    let k = rng.gen_range(2..=classes.len());
    let config = SyntheticConfig {
        classes: classes[..k].iter().map(|s| s.to_string()).collect(),
        docs_per_class: rng.gen_range(2..6),
        class_symbols: rng.gen_range(0..3),
        shared_symbol_rate: rng.gen_range(0.0..=1.0),
        formulas_per_doc: rng.gen_range(0..4),
        identifiers_per_formula: rng.gen_range(1..4),
        name_noise: rng.gen_range(0.0..=0.5),
        tokens_per_doc: rng.gen_range(5..30),
        msc_per_class: rng.gen_range(1..4),
        seed: rng.gen(),
        ..SyntheticConfig::default()
    };
    let mut corpus = generate_synthetic_corpus(&config).unwrap();
    for doc in corpus.documents.iter_mut() {
        if rng.gen_bool(0.3) {
            doc.arxiv.push(config.classes[rng.gen_range(0..k)].clone());
            doc.arxiv.dedup();
        }
    }
    corpus
}

/// Marginals recomputed by brute force from the occurrence lists.
fn marginal_violations(corpus: &Corpus, lib: &DistributionLibrary) -> Vec<String> {
    let mut bad = Vec::new();
    if lib.class.total() as usize != corpus.len() {
        bad.push("class total".into());
    }
    // document-level presence triples
    let mut triples: BTreeSet<(String, String, String, String)> = BTreeSet::new();
    let mut pairs_cs: BTreeSet<(String, String, String)> = BTreeSet::new();
    for doc in &corpus.documents {
        let class = doc.arxiv[0].clone();
        for o in doc.identifier_occurrences().unwrap() {
            pairs_cs.insert((doc.doc_id.clone(), class.clone(), o.symbol.clone()));
            if let Some(n) = o.name {
                triples.insert((doc.doc_id.clone(), class.clone(), o.symbol, n));
            }
        }
    }
    let mut sym_name: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut sym_class: BTreeMap<(String, String), u64> = BTreeMap::new();
    for (_, _, s, n) in &triples {
        *sym_name.entry((s.clone(), n.clone())).or_default() += 1;
    }
    for (_, c, s) in &pairs_cs {
        *sym_class.entry((s.clone(), c.clone())).or_default() += 1;
    }
    // summing the three-way table over classes gives the two-way table
    for (symbol, by_class) in &lib.identifier_class_semantics {
        let mut summed: BTreeMap<&str, u64> = BTreeMap::new();
        for d in by_class.values() {
            for (n, c) in d.iter() {
                *summed.entry(n).or_default() += c;
            }
        }
        let direct: BTreeMap<&str, u64> = lib.identifier_semantics[symbol].iter().collect();
        if summed != direct {
            bad.push(format!("identifier-class-semantics over classes for {symbol}"));
        }
    }
    for (name, by_class) in &lib.semantics_class_identifier {
        let mut summed: BTreeMap<&str, u64> = BTreeMap::new();
        for d in by_class.values() {
            for (s, c) in d.iter() {
                *summed.entry(s).or_default() += c;
            }
        }
        let direct: BTreeMap<&str, u64> = lib.semantics_identifier[name].iter().collect();
        if summed != direct {
            bad.push(format!("semantics-class-identifier over classes for {name}"));
        }
    }
    let got_sn: BTreeMap<(String, String), u64> = lib
        .identifier_semantics
        .iter()
        .flat_map(|(s, d)| d.iter().map(move |(n, c)| ((s.clone(), n.to_string()), c)))
        .filter(|(_, c)| *c > 0)
        .collect();
    if got_sn != sym_name {
        bad.push("identifier-semantics vs brute force".into());
    }
    let got_sc: BTreeMap<(String, String), u64> = lib
        .identifier_class
        .iter()
        .flat_map(|(s, d)| d.iter().map(move |(c, n)| ((s.clone(), c.to_string()), n)))
        .filter(|(_, c)| *c > 0)
        .collect();
    if got_sc != sym_class {
        bad.push("identifier-class vs brute force".into());
    }
    for (outer, transposed, label) in [
        (&lib.identifier_semantics, &lib.semantics_identifier, "identifier/semantics"),
        (&lib.class_identifier, &lib.identifier_class, "class/identifier"),
        (&lib.class_semantics, &lib.semantics_class, "class/semantics"),
    ] {
        for (a, d) in outer {
            for (b, c) in d.iter() {
                if transposed.get(b).map_or(0, |t| t.get(a)) != c {
                    bad.push(format!("{label} transpose at ({a}, {b})"));
                }
            }
        }
    }
    bad
}

fn c2() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..200 {
        let corpus = random_corpus(seed);
        let lib = build_distribution_library(&corpus, ClassAxis::ArxivPrimary).map_err(|e| e.to_string())?;
        for v in marginal_violations(&corpus, &lib) {
            failures.push(format!("corpus {seed}: {v}"));
        }
    }
    check(failures.is_empty(), if failures.is_empty() { "200 corpora exact".into() } else { failures[..failures.len().min(3)].join("; ") })
}

// ---- C3

fn c3() -> Outcome {
    let corpus = Corpus::load(root().join("data/demo/corpus.jsonl")).map_err(|e| e.to_string())?;
    let lib = build_distribution_library(&corpus, ClassAxis::ArxivPrimary).map_err(|e| e.to_string())?;
    let sym = entropy_summary(&lib, KeyAxis::SymbolKeyed).map_err(|e| e.to_string())?;
    let name = entropy_summary(&lib, KeyAxis::NameKeyed).map_err(|e| e.to_string())?;
    let gap = sym.mean - name.mean;
    check(gap >= 1.0, format!("mean symbol entropy {:.3} - mean name entropy {:.3} = {gap:.3} bits", sym.mean, name.mean))
}

// ---- C4

fn brute_force_tfidf(train: &[Vec<String>], doc: &[String]) -> Vec<(String, f64)> {
    let vocab: BTreeSet<&String> = train.iter().flatten().collect();
    let n = train.len() as f64;
    let raw: Vec<(String, f64)> = vocab
        .into_iter()
        .map(|term| {
            let df = train.iter().filter(|d| d.contains(term)).count() as f64;
            let idf = ((1.0 + n) / (1.0 + df)).ln() + 1.0;
            (term.clone(), doc.iter().filter(|t| *t == term).count() as f64 * idf)
        })
        .collect();
    let norm = raw.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
    raw.into_iter().filter(|(_, x)| *x != 0.0).map(|(t, x)| (t, x / norm)).collect()
}

fn c4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let doc = |rng: &mut ChaCha8Rng, vocab: usize| -> Vec<String> {
        (0..rng.gen_range(0..25)).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect()
    };
    for _ in 0..100 {
        let vocab = rng.gen_range(1..40);
        let mut train: Vec<Vec<String>> = (0..rng.gen_range(1..15)).map(|_| doc(&mut rng, vocab)).collect();
        if train.iter().all(|d| d.is_empty()) {
            train[0].push("w0".into());
        }
        let streams: Vec<TokenStream> = train.iter().map(|d| TokenStream::new("d", d.clone())).collect();
        let model = fit_tfidf(&streams).map_err(|e| e.to_string())?;
        let probes: Vec<Vec<String>> = train.iter().cloned().chain((0..3).map(|_| doc(&mut rng, vocab + 5))).collect();
        for p in &probes {
            let v = model.transform(p);
            let expected = brute_force_tfidf(&train, p);
            if v.nnz() != expected.len() {
                return Err(format!("nnz {} vs {}", v.nnz(), expected.len()));
            }
            for (term, x) in expected {
                worst = worst.max((v.get(model.index_of(&term).unwrap()) - x).abs());
            }
        }
    }
    check(worst <= 1e-9, format!("max deviation {worst:.2e} over 100 corpora"))
}

// ---- C5

fn dense(xs: &[f64]) -> SparseVector {
    SparseVector::from_pairs(xs.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(i, x)| (i as u32, *x)).collect())
}

fn c5() -> Outcome {
    // (a) central differences on 5 samples, 4 features, 3 classes
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<Vec<f64>> = (0..5).map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let labels = ["a", "b", "c", "b", "a"].map(String::from).to_vec();
    let data = LabeledDataset::new(rows.iter().map(|r| dense(r)).collect(), labels).map_err(|e| e.to_string())?;
    let w: Vec<Vec<f64>> = (0..3).map(|_| (0..4).map(|_| rng.gen_range(-0.5..0.5)).collect()).collect();
    let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let l2 = 0.05;
    let g = loss_and_gradient(&w, &b, &data, l2);
    let h = 1e-5;
    let rel = |a: f64, n: f64| (a - n).abs() / a.abs().max(n.abs()).max(1e-8);
    let mut worst: f64 = 0.0;
    for c in 0..3 {
        for j in 0..4 {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[c][j] += h;
            down[c][j] -= h;
            let n = (loss_and_gradient(&up, &b, &data, l2).loss - loss_and_gradient(&down, &b, &data, l2).loss) / (2.0 * h);
            worst = worst.max(rel(g.weights[c][j], n));
        }
        let (mut up, mut down) = (b.clone(), b.clone());
        up[c] += h;
        down[c] -= h;
        let n = (loss_and_gradient(&w, &up, &data, l2).loss - loss_and_gradient(&w, &down, &data, l2).loss) / (2.0 * h);
        worst = worst.max(rel(g.bias[c], n));
    }
    // (b) separable two-class fixture
    let sep = [[2.0, 0.1], [1.5, 0.0], [1.8, 0.3], [0.2, 1.9], [0.0, 1.4], [0.1, 2.2]];
    let sep_labels = ["p", "p", "p", "q", "q", "q"].map(String::from).to_vec();
    let sep_data = LabeledDataset::new(sep.iter().map(|r| dense(r)).collect(), sep_labels).map_err(|e| e.to_string())?;
    let model = train_logreg(&sep_data, &LogRegConfig::default(), 5).map_err(|e| e.to_string())?;
    let sep_acc = evaluate_accuracy(&model, &sep_data).map_err(|e| e.to_string())?;
    // (c) fan-out: each arXiv class owns several MSC codes
    let corpus = generate_synthetic_corpus(&SyntheticConfig { msc_per_class: 3, docs_per_class: 30, ..SyntheticConfig::demo() })
        .map_err(|e| e.to_string())?;
    let run = |d| predict_categories(&corpus, d, LabelMode::Single, Granularity::Fine, &LogRegConfig::default(), 5);
    let arxiv = run(PredictionDirection::ArxivFromMsc).map_err(|e| e.to_string())?.test_accuracy;
    let msc = run(PredictionDirection::MscFromArxiv).map_err(|e| e.to_string())?.test_accuracy;
    check(
        worst <= 1e-5 && sep_acc == 1.0 && arxiv - msc >= 0.2,
        format!("gradient rel err {worst:.1e}; separable acc {sep_acc}; arXiv-from-MSC {arxiv:.3} vs MSC-from-arXiv {msc:.3}"),
    )
}

// ---- C6

fn concept_map(config: &SyntheticConfig) -> ConceptCategoryMap {
    let lex = Lexicon::new(config);
    let mut phrases = BTreeMap::new();
    for (k, ps) in lex.concepts.iter().enumerate() {
        for p in ps {
            phrases.insert(p.clone(), config.classes[k].clone());
        }
    }
    ConceptCategoryMap { phrases }
}

/// Names whose ranking puts the correct name first, then two names of other
/// symbols of the same class, then names from other classes.
fn planted_source(config: &SyntheticConfig) -> SymbolNameSource {
    let lex = Lexicon::new(config);
    let n = config.classes.len();
    let mut counts = Vec::new();
    for k in 0..n {
        let own = &lex.class_symbols[k];
        for (i, s) in own.iter().enumerate() {
            let picks = [
                (&lex.names[k][s], 100),
                (&lex.names[k][&own[(i + 1) % own.len()]], 50),
                (&lex.names[k][&own[(i + 2) % own.len()]], 40),
                (&lex.names[(k + 1) % n][&lex.class_symbols[(k + 1) % n][i]], 10),
                (&lex.names[(k + 2) % n][&lex.class_symbols[(k + 2) % n][i]], 5),
            ];
            for (name, c) in picks {
                counts.push((s.clone(), name.clone(), c));
            }
        }
    }
    SymbolNameSource::from_counts("planted", counts)
}

fn c6() -> Outcome {
    let ablation_config = SyntheticConfig {
        class_word_rate: 0.02,
        concept_mentions: 4,
        concepts_per_class: 4,
        name_mention_rate: 0.8,
        docs_per_class: 20,
        ..SyntheticConfig::default()
    };
    let corpus = generate_synthetic_corpus(&ablation_config).map_err(|e| e.to_string())?;
    let ablation = run_ablation_experiment(&corpus, &concept_map(&ablation_config), &ExperimentConfig::new(6)).map_err(|e| e.to_string())?;
    let text = ablation.accuracy(AblationMode::Text);
    let minus = ablation.accuracy(AblationMode::TextMinusMath);

    let aug_config = SyntheticConfig {
        class_symbols: 4,
        shared_symbol_rate: 0.6,
        class_word_rate: 0.03,
        name_mention_rate: 0.0,
        concept_mentions: 0,
        formulas_per_doc: 1,
        identifiers_per_formula: 1,
        ..SyntheticConfig::demo()
    };
    let corpus = generate_synthetic_corpus(&aug_config).map_err(|e| e.to_string())?;
    let aug = run_augmentation_experiment(&corpus, &[planted_source(&aug_config)], &[3, 5], &ExperimentConfig::new(1))
        .map_err(|e| e.to_string())?;
    let top3 = aug.accuracy("planted", 3).unwrap_or(f64::NAN);
    let top5 = aug.accuracy("planted", 5).unwrap_or(f64::NAN);
    check(
        text - minus >= 0.2 && top3 >= top5,
        format!("Text {text:.3} - TextMinusMath {minus:.3} = {:.3}; top3 {top3:.3} vs top5 {top5:.3}", text - minus),
    )
}

// ---- C7

const EXPECTED_LINKING: [[(usize, usize, usize, usize); 2]; 6] = [
    [(3, 1, 4, 12), (4, 4, 3, 9)],
    [(3, 1, 4, 12), (4, 4, 3, 9)],
    [(3, 1, 4, 12), (4, 2, 3, 11)],
    [(2, 0, 5, 13), (2, 0, 5, 13)],
    [(2, 0, 5, 13), (2, 0, 5, 13)],
    [(2, 0, 5, 13), (2, 0, 5, 13)],
];

fn c7() -> Outcome {
    let doc = Corpus::load(linking("nl_abstract.jsonl")).map_err(|e| e.to_string())?.documents.remove(0);
    let mut links = Vec::new();
    for (f, s) in [
        ("wikidump.tsv", GazetteerSource::Wikidump),
        ("item-name.tsv", GazetteerSource::ItemName),
        ("sparql-export.tsv", GazetteerSource::SparqlExport),
    ] {
        let g = Gazetteer::load(linking(f), s).map_err(|e| e.to_string())?;
        for lemmatized in [false, true] {
            links.extend(link_text_entities(&doc, &g, &LinkOptions { min_n: 2, max_n: 2, lemmatized }));
        }
    }
    let gold = doc.gold.as_ref().ok_or("fixture lacks gold")?;
    let report = evaluate_linking(&links, gold, &EvalMode::ALL).map_err(|e| e.to_string())?;
    let mut mismatches = Vec::new();
    for (mode, expected) in report.modes.iter().zip(EXPECTED_LINKING) {
        for (c, e) in [(&mode.unlemmatized, expected[0]), (&mode.lemmatized, expected[1])] {
            if (c.tp, c.fp, c.fn_, c.tn) != e {
                mismatches.push(format!("{} {:?} != {e:?}", mode.label, (c.tp, c.fp, c.fn_, c.tn)));
            }
        }
    }
    let eval1 = &report.modes[0].unlemmatized;
    let closed = eval1.precision() == 0.75 && (eval1.f1() - 6.0 / 11.0).abs() < 1e-15;
    check(
        report.tuples.len() == 20 && mismatches.is_empty() && closed,
        format!("{} tuples, 6 modes x 2 lemma settings; mismatches: {mismatches:?}", report.tuples.len()),
    )
}

// ---- C8

fn padded(before: usize, after: usize) -> Document {
    let filler = |n: usize| vec!["lorem"; n].join(" ");
    Document {
        doc_id: "w".into(),
        arxiv: vec!["cond-mat".into()],
        msc: vec![],
        segments: vec![
            Segment::text(format!("gross pitaevski equation {}", filler(before))),
            Segment::formula("f1", "<math><mi>ψ</mi></math>"),
            Segment::text(format!("{} gross pitaevski equation", filler(after))),
        ],
        gold: None,
    }
}

fn c8() -> Outcome {
    let g = Gazetteer::load(linking("concepts.tsv"), GazetteerSource::SparqlExport).map_err(|e| e.to_string())?;
    let doc = Corpus::load(linking("mathel_formula.jsonl")).map_err(|e| e.to_string())?.documents.remove(0);
    let links = link_formula_concepts(&doc, &g, 10, 3);
    let gp = links.iter().find(|l| l.phrase == "gross pitaevski equation").ok_or("phrase not linked")?;
    let offsets = |d: &Document| -> Vec<i32> { link_formula_concepts(d, &g, 10, 3).iter().map(|l| l.offset).collect() };
    let inside = offsets(&padded(7, 9));
    let outside = offsets(&padded(8, 10));
    let ok = gp.rank() == Some(-8)
        && gp.item.as_deref() == Some("Q910667")
        && gp.title.as_deref() == Some("Gross–Pitaevskii_equation")
        && inside == [10, -10]
        && outside.is_empty();
    check(ok, format!("rank {:?} -> {:?}; offsets at distance 10: {inside:?}, at 11: {outside:?}", gp.rank(), gp.item))
}

// ---- C9

const VOCAB: [&str; 8] = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"];

fn c9() -> Outcome {
    let streams: Vec<TokenStream> = VOCAB.iter().map(|w| TokenStream::new(*w, vec![w.to_string()])).collect();
    let tfidf: TfIdfModel = fit_tfidf(&streams).map_err(|e| e.to_string())?;
    let mut agree = 0;
    for trial in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + trial);
        let mut coef: Vec<f64> = (0..VOCAB.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dominant = rng.gen_range(0..VOCAB.len());
        coef[dominant] = if rng.gen_bool(0.5) { 4.0 } else { -4.0 };
        let mut w = vec![0.0; tfidf.vocabulary_size()];
        for (word, c) in VOCAB.iter().zip(&coef) {
            w[tfidf.index_of(word).unwrap()] = *c;
        }
        let model = LogRegModel {
            classes: vec!["neg".into(), "pos".into()],
            weights: vec![vec![0.0; w.len()], w],
            bias: vec![0.0, 0.0],
            metadata: TrainingMetadata { iterations: 0, converged: true, final_loss: 0.0, seed: 0, config: LogRegConfig::default() },
        };
        let mut others: Vec<usize> = (0..VOCAB.len()).filter(|&i| i != dominant).collect();
        others.shuffle(&mut rng);
        let mut present = vec![dominant];
        present.extend(&others[..rng.gen_range(1..others.len())]);
        present.shuffle(&mut rng);
        let tokens: Vec<String> = present.iter().map(|&i| VOCAB[i].to_string()).collect();
        let e = lime_explain(&model, &tfidf, "doc", &tokens, 1, &LimeConfig::default(), trial).map_err(|e| e.to_string())?;
        let (top, weight) = &e.weights[0];
        if top == VOCAB[dominant] && weight.signum() == coef[dominant].signum() {
            agree += 1;
        }
    }
    check(agree == 50, format!("{agree}/50 trials recover the dominant feature and its sign"))
}

// ---- C10

fn c10() -> Outcome {
    let config = SyntheticConfig { name_noise: 0.0, vocab_overlap: 40, class_word_rate: 0.25, ..SyntheticConfig::demo() };
    let corpus = generate_synthetic_corpus(&config).map_err(|e| e.to_string())?;
    let report = run_explain_analysis(&corpus, &concept_map(&config), &ExplainConfig::new(10)).map_err(|e| e.to_string())?;
    let get = |m, k, d| report.table.get(m, k, d).unwrap_or(f64::NAN);
    use EntropyDirection::*;
    use FeatureKind::*;
    use RankMode::*;
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in [Text, Math] {
        let (d, f) = (get(MDisc, kind, EntCls), get(MFreq, kind, EntCls));
        ok &= d <= f;
        parts.push(format!("{kind:?} EntCls MDisc {d:.3} <= MFreq {f:.3}"));
    }
    for mode in [MDisc, MFreq] {
        let (m, t) = (get(mode, Math, ClsEnt), get(mode, Text, ClsEnt));
        ok &= m <= t;
        parts.push(format!("{mode:?} ClsEnt Math {m:.3} <= Text {t:.3}"));
    }
    check(ok, parts.join("; "))
}

// ---- C11

fn pipeline(out: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_mathex"))
        .current_dir(root())
        .args(["--config", "data/demo/demo.toml", "--output-dir"])
        .arg(out)
        .arg("run")
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("pipeline exited with {status}"));
    }
    let read = |f: &str| std::fs::read(out.join(f)).map_err(|e| e.to_string());
    Ok((read("manifest.json")?, read("report.txt")?))
}

fn c11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = pipeline(&dir.path().join("a"))?;
    let b = pipeline(&dir.path().join("b"))?;
    check(a == b, format!("manifest {} bytes, report {} bytes; identical: {}", a.0.len(), a.1.len(), a == b))
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 11] = [
        ("C1 entropy and margin vs oracle", Some(5), c1),
        ("C2 library marginalization identities", Some(30), c2),
        ("C3 symbol vs name entropy gap", Some(10), c3),
        ("C4 tf-idf vs brute force", None, c4),
        ("C5 logistic regression checks", Some(60), c5),
        ("C6 ablation and augmentation", Some(120), c6),
        ("C7 twenty-tuple linking fixture", Some(1), c7),
        ("C8 formula concept window", Some(1), c8),
        ("C9 explanation agreement", Some(30), c9),
        ("C10 class-entity entropy ordering", Some(120), c10),
        ("C11 deterministic pipeline", None, c11),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let started = Instant::now();
        let outcome = f();
        let elapsed = started.elapsed();
        let in_time = limit.map_or(true, |s| elapsed <= Duration::from_secs(s));
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        let budget = limit.map_or(String::new(), |s| format!(" (limit {s}s)"));
        println!("{} {name}: {detail} [{:.2}s{budget}]", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
