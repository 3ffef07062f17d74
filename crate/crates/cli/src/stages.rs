//! Pipeline stages. Each stage reads its inputs, writes TSV/JSON tables into
//! the output directory and records digests in the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mathex::augment::{run_ablation_experiment, run_augmentation_experiment, ConceptCategoryMap, ExperimentConfig, SymbolNameSource};
use mathex::classify::{
    document_labels, predict_categories, predict_label_map, train_and_evaluate, stratified_split, Granularity, LabelAxis,
    LabelMode, PredictionDirection,
};
use mathex::corpus::{Corpus, Document};
use mathex::encode::TokenStream;
use mathex::explain::{run_explain_analysis, ExplainConfig, RankConfig};
use mathex::linker::{
    concept_links_tsv, evaluate_linking, link_formula_concepts, link_text_entities, links_tsv, mathel_coverage_report, EvalMode,
    Gazetteer, GazetteerSource, LinkOptions,
};
use mathex::stats::{
    argmax_predict, build_cooccurrence, build_distribution_library_with, compare_predictions, entropy_summary, shannon_entropy,
    uncertainty_report, ClassAxis, CountDistribution, Direction, DistributionLibrary, KeyAxis,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{sha256_hex, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Stats,
    Correspond,
    Classify,
    Augment,
    Ablate,
    Link,
    Mathel,
    Explain,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Ingest,
        Stage::Stats,
        Stage::Correspond,
        Stage::Classify,
        Stage::Augment,
        Stage::Ablate,
        Stage::Link,
        Stage::Mathel,
        Stage::Explain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Stats => "stats",
            Stage::Correspond => "correspond",
            Stage::Classify => "classify",
            Stage::Augment => "augment",
            Stage::Ablate => "ablate",
            Stage::Link => "link",
            Stage::Mathel => "mathel",
            Stage::Explain => "explain",
        }
    }

    /// Files the stage always writes.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &["corpus_summary.tsv"],
            Stage::Stats => &["library.json", "entropy_summary.tsv"],
            Stage::Correspond => &[
                "cooccurrence.tsv",
                "uncertainty_arxiv.tsv",
                "uncertainty_msc.tsv",
                "argmax.tsv",
                "category_prediction.tsv",
                "prediction_comparison.tsv",
            ],
            Stage::Classify => &["classify.tsv", "model.json"],
            Stage::Augment => &["augmentation.tsv"],
            Stage::Ablate => &["ablation.tsv", "coverage_violations.tsv"],
            Stage::Link => &["entity_links.tsv", "link_eval.tsv"],
            Stage::Mathel => &["concept_links.tsv", "mathel_coverage.tsv"],
            Stage::Explain => &["entropy_table.tsv", "entity_rankings.tsv"],
        }
    }
}

/// Output directory, configuration and manifest of one invocation.
pub struct Run {
    pub config: RunConfig,
    pub manifest: RunManifest,
}

impl Run {
    pub fn open(config: RunConfig) -> CliResult<Self> {
        std::fs::create_dir_all(&config.output_dir)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", config.output_dir.display())))?;
        let manifest = RunManifest::open(&config.output_dir, &config.digest())?;
        Ok(Run { config, manifest })
    }

    pub fn out_dir(&self) -> &Path {
        &self.config.output_dir
    }

    fn record_input(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.inputs.insert(path.to_string_lossy().into_owned(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn write(&mut self, stage: &str, file: &str, contents: &str) -> CliResult<()> {
        let path = self.out_dir().join(file);
        std::fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        self.manifest
            .stages
            .entry(stage.to_string())
            .or_default()
            .insert(file.to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }

    /// Start a stage afresh so outputs of an earlier run do not linger.
    fn begin(&mut self, stage: &str) {
        self.manifest.stages.remove(stage);
    }

    fn finish(&mut self) -> CliResult<()> {
        self.manifest.save(&self.config.output_dir)
    }

    fn load_text(&mut self, path: &Path) -> CliResult<String> {
        let bytes = self.record_input(path)?;
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    fn load_corpus_at(&mut self, path: &Path) -> CliResult<Corpus> {
        let text = self.load_text(path)?;
        Ok(Corpus::from_reader(text.as_bytes(), &path.display().to_string())?)
    }

    /// The configured corpus, restricted to the configured classes.
    pub fn corpus(&mut self) -> CliResult<Corpus> {
        let path = self.config.corpus.clone();
        let corpus = self.load_corpus_at(&path)?;
        filter_classes(corpus, &self.config.classes, self.config.class_axis)
    }

    fn concepts(&mut self) -> CliResult<ConceptCategoryMap> {
        let path = self.config.augment.concepts.clone();
        let text = self.load_text(&path)?;
        Ok(ConceptCategoryMap::parse(&text, &path.display().to_string())?)
    }

    fn library(&self, corpus: &Corpus) -> CliResult<DistributionLibrary> {
        Ok(build_distribution_library_with(corpus, self.config.class_axis, self.config.execution())?)
    }

    pub fn run_stage(&mut self, stage: Stage) -> CliResult<()> {
        log::info!("stage {}", stage.name());
        self.begin(stage.name());
        match stage {
            Stage::Ingest => self.ingest(),
            Stage::Stats => self.stats(),
            Stage::Correspond => self.correspond(),
            Stage::Classify => self.classify(),
            Stage::Augment => self.augment(),
            Stage::Ablate => self.ablate(),
            Stage::Link => self.link(),
            Stage::Mathel => self.mathel(),
            Stage::Explain => self.explain(),
        }?;
        self.finish()
    }

    fn ingest(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let axis = self.config.class_axis;
        let mut rows: BTreeMap<String, [usize; 4]> = BTreeMap::new();
        for doc in &corpus.documents {
            let class = axis.primary_label(doc).unwrap_or("-").to_string();
            let occ = doc.identifier_occurrences()?;
            let row = rows.entry(class).or_default();
            row[0] += 1;
            row[1] += doc.formulas().len();
            row[2] += occ.len();
            row[3] += occ.iter().filter(|o| o.name.is_some()).count();
        }
        let mut out = String::from("class\tdocuments\tformulas\tidentifiers\tnamed_identifiers\n");
        let mut total = [0usize; 4];
        for (class, r) in &rows {
            writeln!(out, "{class}\t{}\t{}\t{}\t{}", r[0], r[1], r[2], r[3]).unwrap();
            for i in 0..4 {
                total[i] += r[i];
            }
        }
        writeln!(out, "#total\t{}\t{}\t{}\t{}", total[0], total[1], total[2], total[3]).unwrap();
        self.write("ingest", "corpus_summary.tsv", &out)
    }

    fn stats(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let library = self.library(&corpus)?;
        let views: serde_json::Map<String, serde_json::Value> =
            library.named_views().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let mut json = serde_json::to_string_pretty(&views).expect("views serialize");
        json.push('\n');
        self.write("stats", "library.json", &json)?;
        let mut out = String::from("key\tkeys\tmin\tmean\tmax\n");
        for (label, axis) in [("symbol", KeyAxis::SymbolKeyed), ("name", KeyAxis::NameKeyed)] {
            let s = entropy_summary(&library, axis)?;
            writeln!(out, "{label}\t{}\t{:.6}\t{:.6}\t{:.6}", s.keys, s.min, s.mean, s.max).unwrap();
        }
        self.write("stats", "entropy_summary.tsv", &out)
    }

    fn correspond(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let seed = self.config.stage_seed("correspond");
        let matrix = build_cooccurrence(&corpus)?;
        self.write("correspond", "cooccurrence.tsv", &matrix.to_tsv())?;
        self.write("correspond", "uncertainty_arxiv.tsv", &uncertainty_report(&matrix, Direction::Rows)?.to_tsv())?;
        self.write("correspond", "uncertainty_msc.tsv", &uncertainty_report(&matrix, Direction::Columns)?.to_tsv())?;

        let directions = [
            (PredictionDirection::MscFromArxiv, Direction::Rows),
            (PredictionDirection::ArxivFromMsc, Direction::Columns),
        ];
        let mut argmax = String::from("direction\tsource\tpredicted\n");
        let mut comparison = String::from("direction\tmatches\tmismatches\tunpaired\n");
        for (pd, d) in directions {
            let by_count = argmax_predict(&matrix, d);
            for (s, t) in &by_count {
                writeln!(argmax, "{}\t{s}\t{t}", direction_name(pd)).unwrap();
            }
            let by_model = predict_label_map(&corpus, pd, &self.config.logreg, seed)?;
            let c = compare_predictions(&by_count, &by_model);
            writeln!(comparison, "{}\t{}\t{}\t{}", direction_name(pd), c.matches, c.mismatches, c.unpaired).unwrap();
        }
        self.write("correspond", "argmax.tsv", &argmax)?;
        self.write("correspond", "prediction_comparison.tsv", &comparison)?;

        let mut table = String::from("direction\tlabel_mode\tgranularity\tdocuments\ttrain_instances\ttest_instances\ttrain_accuracy\ttest_accuracy\n");
        for (pd, _) in directions {
            for mode in [LabelMode::Single, LabelMode::Multi] {
                for gran in [Granularity::Fine, Granularity::Coarse] {
                    let r = predict_categories(&corpus, pd, mode, gran, &self.config.logreg, seed)?;
                    writeln!(
                        table,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}",
                        direction_name(pd),
                        lower(mode),
                        lower(gran),
                        r.documents,
                        r.train_instances,
                        r.test_instances,
                        r.train_accuracy,
                        r.test_accuracy
                    )
                    .unwrap();
                }
            }
        }
        self.write("correspond", "category_prediction.tsv", &table)
    }

    fn classify(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let seed = self.config.stage_seed("classify");
        let params = self.config.classify.clone();
        let axis = match self.config.class_axis {
            ClassAxis::ArxivPrimary => LabelAxis::Arxiv,
            ClassAxis::MscPrimary => LabelAxis::Msc,
        };
        let rows: Vec<(TokenStream, Vec<String>)> = corpus
            .documents
            .iter()
            .map(|d| (mathex::augment::text_stream(d), document_labels(d, axis, params.label_mode, params.granularity)))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        if rows.is_empty() {
            return Err(CliError::Input("no document carries a class label".into()));
        }
        let strata: Vec<String> = rows.iter().map(|(_, l)| l[0].clone()).collect();
        let split = stratified_split(&strata, params.test_fraction, seed);
        if split.test.is_empty() {
            return Err(CliError::Input("split left no test documents".into()));
        }
        let expand = |idx: &[usize]| {
            let mut s = Vec::new();
            let mut l = Vec::new();
            for &i in idx {
                for label in &rows[i].1 {
                    s.push(rows[i].0.clone());
                    l.push(label.clone());
                }
            }
            (s, l)
        };
        let (train_s, train_l) = expand(&split.train);
        let (test_s, test_l) = expand(&split.test);
        let (clf, acc) = train_and_evaluate((&train_s, &train_l), (&test_s, &test_l), &self.config.logreg, seed)?;
        let out = format!(
            "label_mode\tgranularity\tclasses\ttrain_instances\ttest_instances\titerations\ttrain_accuracy\ttest_accuracy\n{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\n",
            lower(params.label_mode),
            lower(params.granularity),
            clf.model.classes.len(),
            acc.train_instances,
            acc.test_instances,
            acc.iterations,
            acc.train_accuracy,
            acc.test_accuracy
        );
        self.write("classify", "classify.tsv", &out)?;
        let mut json = serde_json::to_string_pretty(&clf).map_err(|e| CliError::Runtime(e.to_string()))?;
        json.push('\n');
        self.write("classify", "model.json", &json)
    }

    fn experiment_config(&self, stage: &str) -> ExperimentConfig {
        ExperimentConfig {
            logreg: self.config.logreg,
            test_fraction: self.config.classify.test_fraction,
            seed: self.config.stage_seed(stage),
            execution: self.config.execution(),
        }
    }

    fn augment(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let mut sources = Vec::new();
        for spec in self.config.augment.sources.clone() {
            let text = self.load_text(&spec.path)?;
            sources.push(SymbolNameSource::parse(spec.name, &text, &spec.path.display().to_string())?);
        }
        if sources.is_empty() {
            sources.push(SymbolNameSource::from_library("corpus", &self.library(&corpus)?));
        }
        let report = run_augmentation_experiment(&corpus, &sources, &self.config.augment.top_k, &self.experiment_config("augment"))?;
        self.write("augment", "augmentation.tsv", &report.to_tsv())
    }

    fn ablate(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let concepts = self.concepts()?;
        let report = run_ablation_experiment(&corpus, &concepts, &self.experiment_config("ablate"))?;
        self.write("ablate", "ablation.tsv", &report.to_tsv())?;
        let mut out = String::from("phrase\tclass\n");
        for v in &report.coverage_violations {
            writeln!(out, "{}\t{}", v.phrase, v.class).unwrap();
        }
        self.write("ablate", "coverage_violations.tsv", &out)
    }

    fn link(&mut self) -> CliResult<()> {
        let l = self.config.linker.clone();
        let corpus = self.load_corpus_at(&l.corpus)?;
        let mut gazetteers = Vec::new();
        for (path, source) in [
            (&l.wikidump, GazetteerSource::Wikidump),
            (&l.item_name, GazetteerSource::ItemName),
            (&l.sparql_export, GazetteerSource::SparqlExport),
        ] {
            let text = self.load_text(path)?;
            gazetteers.push(Gazetteer::parse(&text, source, &path.display().to_string())?);
        }
        let mut all_links = Vec::new();
        let mut eval = String::new();
        let evaluated: Vec<&Document> = corpus.documents.iter().filter(|d| d.gold.as_ref().is_some_and(|g| !g.entity_relevance.is_empty())).collect();
        for doc in &corpus.documents {
            let mut links = Vec::new();
            for g in &gazetteers {
                for lemmatized in [false, true] {
                    links.extend(link_text_entities(doc, g, &LinkOptions { min_n: l.min_n, max_n: l.max_n, lemmatized }));
                }
            }
            if let Some(gold) = doc.gold.as_ref().filter(|g| !g.entity_relevance.is_empty()) {
                let report = evaluate_linking(&links, gold, &EvalMode::ALL)?;
                if evaluated.len() > 1 {
                    writeln!(eval, "#document\t{}", doc.doc_id).unwrap();
                }
                eval.push_str(&report.to_tsv());
            }
            all_links.extend(links);
        }
        if evaluated.is_empty() {
            eval.push_str("tuple\trelevance\turl\titem\n");
        }
        self.write("link", "entity_links.tsv", &links_tsv(&all_links))?;
        self.write("link", "link_eval.tsv", &eval)
    }

    fn mathel(&mut self) -> CliResult<()> {
        let l = self.config.linker.clone();
        let corpus = self.load_corpus_at(&l.mathel_corpus)?;
        let text = self.load_text(&l.mathel_gazetteer)?;
        let gazetteer = Gazetteer::parse(&text, l.mathel_source, &l.mathel_gazetteer.display().to_string())?;
        let mut links = Vec::new();
        let mut coverage = String::from("doc\tcandidates\twith_article\twith_item\tin_window\thighly_relevant\tarticle_fraction\titem_fraction\twindow_fraction\n");
        for doc in &corpus.documents {
            let doc_links = link_formula_concepts(doc, &gazetteer, l.window, l.mathel_max_n);
            if let Some(gold) = doc.gold.as_ref().filter(|g| !g.concept_relevance.is_empty()) {
                let c = mathel_coverage_report(&doc_links, gold, &gazetteer)?;
                writeln!(
                    coverage,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                    doc.doc_id,
                    c.candidates,
                    c.with_article,
                    c.with_item,
                    c.in_window,
                    c.highly_relevant,
                    c.article_fraction,
                    c.item_fraction,
                    c.window_fraction
                )
                .unwrap();
            }
            links.extend(doc_links);
        }
        self.write("mathel", "concept_links.tsv", &concept_links_tsv(&links))?;
        self.write("mathel", "mathel_coverage.tsv", &coverage)
    }

    fn explain(&mut self) -> CliResult<()> {
        let corpus = self.corpus()?;
        let concepts = self.concepts()?;
        let config = ExplainConfig {
            logreg: self.config.logreg,
            rank: RankConfig {
                budget: self.config.explain.budget,
                lime: self.config.lime,
                seed: self.config.stage_seed("explain"),
                execution: self.config.execution(),
            },
            top_m: self.config.explain.top_m,
        };
        let report = run_explain_analysis(&corpus, &concepts, &config)?;
        self.write("explain", "entropy_table.tsv", &report.table.to_tsv())?;
        let mut rankings = String::new();
        for (i, r) in report.rankings.iter().enumerate() {
            let tsv = r.to_tsv();
            rankings.push_str(if i == 0 { &tsv } else { tsv.split_once('\n').map_or("", |(_, body)| body) });
        }
        self.write("explain", "entity_rankings.tsv", &rankings)
    }

    /// Summary of every stage. Fails, naming the files, when outputs are missing.
    pub fn report(&mut self) -> CliResult<()> {
        let dir = self.out_dir().to_path_buf();
        let missing: Vec<String> = Stage::ALL
            .iter()
            .flat_map(|s| s.outputs().iter().map(move |f| (s, *f)))
            .filter(|(_, f)| !dir.join(f).is_file())
            .map(|(s, f)| format!("{} ({})", dir.join(f).display(), s.name()))
            .collect();
        if !missing.is_empty() {
            return Err(CliError::Input(format!("missing inputs for report: {}", missing.join(", "))));
        }
        let mut out = format!("mathex {} report\nconfig sha256 {}\n", env!("CARGO_PKG_VERSION"), self.manifest.config_sha256);
        for (title, file) in [
            ("corpus", "corpus_summary.tsv"),
            ("identifier and name entropy", "entropy_summary.tsv"),
            ("category prediction", "category_prediction.tsv"),
            ("argmax agreement", "prediction_comparison.tsv"),
            ("text classification", "classify.tsv"),
            ("identifier augmentation", "augmentation.tsv"),
            ("text/math ablation", "ablation.tsv"),
            ("entity linking", "link_eval.tsv"),
            ("formula concept coverage", "mathel_coverage.tsv"),
            ("class-entity entropy", "entropy_table.tsv"),
        ] {
            let path = dir.join(file);
            let body = std::fs::read_to_string(&path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            write!(out, "\n== {title} ({file})\n{body}").unwrap();
        }
        self.begin("report");
        self.write("report", "report.txt", &out)?;
        self.finish()
    }

    pub fn plotdata(&mut self, kind: PlotKind) -> CliResult<Vec<PathBuf>> {
        self.begin(kind.stage());
        let files = match kind {
            PlotKind::SymbolNameDistribution => {
                let corpus = self.corpus()?;
                let library = self.library(&corpus)?;
                let p = self.config.plotdata.clone();
                let symbol = library
                    .identifier_class
                    .get(&p.symbol)
                    .ok_or_else(|| CliError::Config(format!("symbol {:?} does not occur in the corpus", p.symbol)))?;
                let name = library
                    .semantics_class
                    .get(&p.name)
                    .ok_or_else(|| CliError::Config(format!("name {:?} does not occur in the corpus", p.name)))?;
                let files = [
                    (format!("plot_symbol_{}.tsv", file_safe(&p.symbol)), symbol),
                    (format!("plot_name_{}.tsv", file_safe(&p.name)), name),
                ];
                for (file, dist) in &files {
                    self.write(kind.stage(), file, &normalized_tsv(dist)?)?;
                }
                files.into_iter().map(|(f, _)| f).collect::<Vec<_>>()
            }
            PlotKind::EntropyTable => {
                let path = self.out_dir().join("entropy_table.tsv");
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Input(format!("cannot read {} (run explain first): {e}", path.display())))?;
                let mut rows = Vec::new();
                for line in text.lines().skip(1) {
                    let (label, value) = line
                        .split_once('\t')
                        .ok_or_else(|| CliError::Input(format!("malformed row {line:?} in {}", path.display())))?;
                    let v: f64 = value.parse().map_err(|_| CliError::Input(format!("bad entropy {value:?} in {}", path.display())))?;
                    rows.push((label.to_string(), v));
                }
                let total: f64 = rows.iter().map(|r| r.1).sum();
                if !(total > 0.0) {
                    return Err(CliError::Runtime("entropy table sums to zero; nothing to normalize".into()));
                }
                let mut out = String::from("label\tfrequency\n");
                for (label, v) in rows {
                    writeln!(out, "{label}\t{}", v / total).unwrap();
                }
                let file = "plot_entropy_table.tsv".to_string();
                self.write(kind.stage(), &file, &out)?;
                vec![file]
            }
        };
        self.finish()?;
        Ok(files.into_iter().map(|f| self.out_dir().join(f)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    SymbolNameDistribution,
    EntropyTable,
}

impl PlotKind {
    fn stage(self) -> &'static str {
        match self {
            PlotKind::SymbolNameDistribution => "plotdata-symbol-name-distribution",
            PlotKind::EntropyTable => "plotdata-entropy-table",
        }
    }
}

impl std::str::FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "symbol-name-distribution" => Ok(PlotKind::SymbolNameDistribution),
            "entropy-table" => Ok(PlotKind::EntropyTable),
            other => Err(CliError::Config(format!(
                "unknown report {other:?}; expected symbol-name-distribution or entropy-table"
            ))),
        }
    }
}

fn normalized_tsv(dist: &CountDistribution) -> CliResult<String> {
    let total = dist.total();
    if total == 0 {
        return Err(CliError::Runtime("empty distribution".into()));
    }
    let mut out = String::from("label\tfrequency\n");
    for (label, count) in dist.ranked() {
        writeln!(out, "{label}\t{}", count as f64 / total as f64).unwrap();
    }
    let h = shannon_entropy(dist)?;
    log::info!("plotted distribution has entropy {h:.4} bits");
    Ok(out)
}

fn file_safe(s: &str) -> String {
    s.chars().map(|c| if c.is_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn direction_name(d: PredictionDirection) -> &'static str {
    match d {
        PredictionDirection::ArxivFromMsc => "arxiv-from-msc",
        PredictionDirection::MscFromArxiv => "msc-from-arxiv",
    }
}

fn lower<T: serde::Serialize>(v: T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Documents whose primary label on `axis` is listed. An empty list keeps
/// everything; a filter that keeps nothing is a configuration error.
pub fn filter_classes(corpus: Corpus, classes: &[String], axis: ClassAxis) -> CliResult<Corpus> {
    if classes.is_empty() {
        return Ok(corpus);
    }
    let documents: Vec<Document> = corpus
        .documents
        .into_iter()
        .filter(|d| axis.primary_label(d).is_some_and(|l| classes.iter().any(|c| c == l)))
        .collect();
    if documents.is_empty() {
        return Err(CliError::Config(format!("class filter {classes:?} selects no documents")));
    }
    Ok(Corpus { documents })
}
