//! Run configuration: a TOML file, overridden by command-line flags.
//!
//! Precedence is flags > config file > built-in defaults. Every flag writes
//! the same key the config file would, so the two paths cannot drift.
//! Relative paths are resolved against the working directory.

use std::path::{Path, PathBuf};

use mathex::classify::{Granularity, LabelMode, LogRegConfig};
use mathex::explain::LimeConfig;
use mathex::linker::GazetteerSource;
use mathex::stats::ClassAxis;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::sha256_hex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Root of all randomness. Required.
    pub seed: u64,
    #[serde(default = "default_corpus")]
    pub corpus: PathBuf,
    /// Keep only documents whose primary label (on `class_axis`) is listed.
    /// Empty keeps everything.
    #[serde(default)]
    pub classes: Vec<String>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub class_axis: ClassAxis,
    /// Use the thread pool for data-parallel loops. Results are identical
    /// either way.
    #[serde(default = "yes")]
    pub parallel: bool,
    #[serde(default)]
    pub logreg: LogRegConfig,
    #[serde(default)]
    pub classify: ClassifyParams,
    #[serde(default)]
    pub augment: AugmentParams,
    #[serde(default)]
    pub lime: LimeConfig,
    #[serde(default)]
    pub explain: ExplainParams,
    #[serde(default)]
    pub linker: LinkerParams,
    #[serde(default)]
    pub plotdata: PlotParams,
}

fn default_corpus() -> PathBuf {
    "data/demo/corpus.jsonl".into()
}

fn default_output_dir() -> PathBuf {
    "out".into()
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyParams {
    pub test_fraction: f64,
    pub label_mode: LabelMode,
    pub granularity: Granularity,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams { test_fraction: 0.2, label_mode: LabelMode::Single, granularity: Granularity::Fine }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NameSourceSpec {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentParams {
    pub top_k: Vec<usize>,
    /// Symbol-name sources. When empty, a source derived from the corpus's
    /// own gold names is used.
    pub sources: Vec<NameSourceSpec>,
    pub concepts: PathBuf,
}

impl Default for AugmentParams {
    fn default() -> Self {
        AugmentParams { top_k: vec![3, 5], sources: Vec::new(), concepts: "data/demo/concepts.tsv".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainParams {
    /// Documents explained per class for discriminative ranking.
    pub budget: usize,
    /// Entities per class entering the entropy table.
    pub top_m: usize,
}

impl Default for ExplainParams {
    fn default() -> Self {
        ExplainParams { budget: 10, top_m: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkerParams {
    /// Documents with gold relevance for text linking.
    pub corpus: PathBuf,
    pub wikidump: PathBuf,
    pub item_name: PathBuf,
    pub sparql_export: PathBuf,
    pub min_n: usize,
    pub max_n: usize,
    /// Documents with gold concept scores for formula linking.
    pub mathel_corpus: PathBuf,
    pub mathel_gazetteer: PathBuf,
    pub mathel_source: GazetteerSource,
    pub window: usize,
    pub mathel_max_n: usize,
}

impl Default for LinkerParams {
    fn default() -> Self {
        LinkerParams {
            corpus: "data/linking/nl_abstract.jsonl".into(),
            wikidump: "data/linking/wikidump.tsv".into(),
            item_name: "data/linking/item-name.tsv".into(),
            sparql_export: "data/linking/sparql-export.tsv".into(),
            // the shipped relevance annotations cover bigrams
            min_n: 2,
            max_n: 2,
            mathel_corpus: "data/linking/mathel_formula.jsonl".into(),
            mathel_gazetteer: "data/linking/concepts.tsv".into(),
            mathel_source: GazetteerSource::SparqlExport,
            window: 10,
            mathel_max_n: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotParams {
    pub symbol: String,
    pub name: String,
}

impl Default for PlotParams {
    fn default() -> Self {
        PlotParams { symbol: "t".into(), name: "time".into() }
    }
}

/// Values given on the command line. Each maps to one config key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub corpus: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub classes: Option<Vec<String>>,
    pub class_axis: Option<String>,
    pub test_fraction: Option<f64>,
    pub top_k: Option<Vec<usize>>,
    pub lime_samples: Option<usize>,
    pub window: Option<usize>,
    pub sequential: bool,
}

fn path_value(p: &Path) -> Value {
    Value::String(p.to_string_lossy().into_owned())
}

fn int(key: &str, v: u64) -> CliResult<Value> {
    i64::try_from(v).map(Value::Integer).map_err(|_| CliError::Config(format!("{key} = {v} does not fit a TOML integer")))
}

fn section<'a>(table: &'a mut Table, name: &str) -> CliResult<&'a mut Table> {
    table
        .entry(name)
        .or_insert_with(|| Value::Table(Table::new()))
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("`{name}` must be a table")))
}

impl Overrides {
    /// Write the overrides into a parsed config table.
    pub fn apply(&self, table: &mut Table) -> CliResult<()> {
        if let Some(seed) = self.seed {
            table.insert("seed".into(), int("seed", seed)?);
        }
        if let Some(p) = &self.corpus {
            table.insert("corpus".into(), path_value(p));
        }
        if let Some(p) = &self.output_dir {
            table.insert("output_dir".into(), path_value(p));
        }
        if let Some(c) = &self.classes {
            table.insert("classes".into(), Value::Array(c.iter().cloned().map(Value::String).collect()));
        }
        if let Some(a) = &self.class_axis {
            table.insert("class_axis".into(), Value::String(a.clone()));
        }
        if self.sequential {
            table.insert("parallel".into(), Value::Boolean(false));
        }
        if let Some(f) = self.test_fraction {
            section(table, "classify")?.insert("test_fraction".into(), Value::Float(f));
        }
        if let Some(ks) = &self.top_k {
            let ks = ks.iter().map(|&k| int("top_k", k as u64)).collect::<CliResult<Vec<_>>>()?;
            section(table, "augment")?.insert("top_k".into(), Value::Array(ks));
        }
        if let Some(n) = self.lime_samples {
            section(table, "lime")?.insert("num_samples".into(), int("num_samples", n as u64)?);
        }
        if let Some(w) = self.window {
            section(table, "linker")?.insert("window".into(), int("window", w as u64)?);
        }
        Ok(())
    }
}

impl RunConfig {
    /// Defaults with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        let mut t = Table::new();
        t.insert("seed".into(), Value::Integer(seed as i64));
        RunConfig::from_table(t).expect("defaults are valid")
    }

    pub fn from_table(table: Table) -> CliResult<Self> {
        let config: RunConfig = table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string().trim().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        Self::parse_with(text, &Overrides::default())
    }

    pub fn parse_with(text: &str, overrides: &Overrides) -> CliResult<Self> {
        let mut table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string().trim().to_string()))?;
        overrides.apply(&mut table)?;
        Self::from_table(table)
    }

    /// Read `path` (when given) and apply the overrides.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::parse_with(&text, overrides)
    }

    fn validate(&self) -> CliResult<()> {
        let fail = |m: String| Err(CliError::Config(m));
        if !(self.classify.test_fraction > 0.0 && self.classify.test_fraction < 1.0) {
            return fail(format!("classify.test_fraction must lie in (0, 1), got {}", self.classify.test_fraction));
        }
        if self.augment.top_k.is_empty() || self.augment.top_k.contains(&0) {
            return fail("augment.top_k must list positive values".into());
        }
        if self.lime.num_samples < 2 || self.lime.top_k == 0 || !(self.lime.ridge >= 0.0) {
            return fail("lime needs num_samples >= 2, top_k >= 1 and ridge >= 0".into());
        }
        if self.explain.budget == 0 || self.explain.top_m == 0 {
            return fail("explain.budget and explain.top_m must be positive".into());
        }
        let l = &self.linker;
        if l.min_n == 0 || l.min_n > l.max_n || l.mathel_max_n == 0 {
            return fail("linker needs 1 <= min_n <= max_n and mathel_max_n >= 1".into());
        }
        if !(self.logreg.step > 0.0) || !(self.logreg.l2 >= 0.0) || self.logreg.max_iterations == 0 {
            return fail("logreg needs step > 0, l2 >= 0 and max_iterations >= 1".into());
        }
        let mut names: Vec<&str> = self.augment.sources.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return fail("augment.sources names must be distinct".into());
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Digest of everything that affects results. The output directory
    /// does not, so runs into different directories compare equal.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        sha256_hex(c.to_toml().as_bytes())
    }

    /// Seed for one stage, derived from the run seed and the stage name.
    pub fn stage_seed(&self, stage: &str) -> u64 {
        mathex::explain::derive_seed(self.seed, stage)
    }

    pub fn execution(&self) -> mathex::Execution {
        if self.parallel {
            mathex::Execution::Parallel
        } else {
            mathex::Execution::Sequential
        }
    }
}

/// Defaults as an editable TOML document.
pub fn default_config_text() -> String {
    let body = RunConfig::with_seed(20210301).to_toml();
    format!("# mathex run configuration; `seed` is required, everything else is optional.\n{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_mandatory() {
        let e = RunConfig::parse("corpus = \"x.jsonl\"").unwrap_err();
        assert!(matches!(e, CliError::Config(ref m) if m.contains("seed")), "{e:?}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse("seed = 1\ncolour = 2").is_err());
        assert!(RunConfig::parse("seed = 1\n[logreg]\nstep_size = 2").is_err());
    }

    #[test]
    fn printed_defaults_round_trip() {
        let text = default_config_text();
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(c, RunConfig::with_seed(20210301));
        assert_eq!(c.augment.top_k, [3, 5]);
        assert_eq!(c.lime.num_samples, 1000);
    }

    #[test]
    fn flags_beat_file_beats_defaults() {
        let file = "seed = 1\noutput_dir = \"from-file\"\n[classify]\ntest_fraction = 0.3\n";
        let c = RunConfig::parse(file).unwrap();
        assert_eq!(c.output_dir, PathBuf::from("from-file"));
        assert_eq!(c.classify.test_fraction, 0.3);
        assert_eq!(c.corpus, default_corpus());

        let o = Overrides {
            seed: Some(9),
            test_fraction: Some(0.25),
            classes: Some(vec!["hep-th".into()]),
            sequential: true,
            ..Default::default()
        };
        let c = RunConfig::parse_with(file, &o).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.classify.test_fraction, 0.25);
        assert_eq!(c.output_dir, PathBuf::from("from-file"));
        assert_eq!(c.classes, ["hep-th"]);
        assert!(!c.parallel);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for text in [
            "seed = 1\n[classify]\ntest_fraction = 1.5",
            "seed = 1\nclass_axis = \"diagonal\"",
            "seed = 1\n[augment]\ntop_k = [0]",
            "seed = -1",
        ] {
            assert!(matches!(RunConfig::parse(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn digest_ignores_output_dir_only() {
        let a = RunConfig::with_seed(1);
        let mut b = a.clone();
        b.output_dir = "elsewhere".into();
        assert_eq!(a.digest(), b.digest());
        b.seed = 2;
        assert_ne!(a.digest(), b.digest());
    }
}
