//! Command-line driver for the mathex pipeline.

pub mod config;
pub mod error;
pub mod manifest;
pub mod stages;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mathex::augment::SymbolNameSource;
use mathex::corpus::synthetic::Lexicon;
use mathex::corpus::{generate_synthetic_corpus, SyntheticConfig};
use mathex::stats::{build_distribution_library, ClassAxis};

use config::{default_config_text, Overrides, RunConfig};
use error::{CliError, CliResult};
use stages::{PlotKind, Run, Stage};

#[derive(Debug, Parser)]
#[command(name = "mathex", version, about = "Identifier semantics, category classification and entity linking")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Each one overrides a config key.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// corpus
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// output_dir
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// classes (comma separated)
    #[arg(long, global = true, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
    /// class_axis: arxiv-primary or msc-primary
    #[arg(long, global = true)]
    pub class_axis: Option<String>,
    /// classify.test_fraction
    #[arg(long, global = true)]
    pub test_fraction: Option<f64>,
    /// augment.top_k (comma separated)
    #[arg(long, global = true, value_delimiter = ',')]
    pub top_k: Option<Vec<usize>>,
    /// lime.num_samples
    #[arg(long, global = true)]
    pub lime_samples: Option<usize>,
    /// linker.window
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// parallel = false
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            corpus: self.corpus.clone(),
            output_dir: self.output_dir.clone(),
            classes: self.classes.clone(),
            class_axis: self.class_axis.clone(),
            test_fraction: self.test_fraction,
            top_k: self.top_k.clone(),
            lime_samples: self.lime_samples,
            window: self.window,
            sequential: self.sequential,
        }
    }

    fn is_empty(&self) -> bool {
        self.config.is_none() && self.overrides() == Overrides::default()
    }

    pub fn load(&self) -> CliResult<RunConfig> {
        RunConfig::load(self.config.as_deref(), &self.overrides())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the corpus and summarize it per class
    Ingest,
    /// Distribution library and identifier/name entropies
    Stats,
    /// arXiv/MSC co-occurrence, uncertainty and category prediction
    Correspond,
    /// Text classification into the configured classes
    Classify,
    /// Classification with identifier names appended
    Augment,
    /// Text/math feature ablation
    Ablate,
    /// Link text n-grams against the gazetteers and evaluate
    Link,
    /// Link formulas to nearby concept phrases
    Mathel,
    /// Class-entity entropy of frequency and explanation rankings
    Explain,
    /// Summarize all stage outputs
    Report,
    /// Every stage followed by the report
    Run,
    /// Two-column plot tables: symbol-name-distribution or entropy-table
    Plotdata { report: String },
    /// Print the effective configuration (defaults when nothing is given)
    PrintConfig,
    /// Write a synthetic corpus with matching concept and name tables
    Generate {
        #[arg(long)]
        out: PathBuf,
        /// TOML generator settings; the built-in demo settings otherwise
        #[arg(long)]
        synthetic: Option<PathBuf>,
    },
}

/// Execute a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let stage = |s: Stage| -> CliResult<()> { Run::open(cli.global.load()?)?.run_stage(s) };
    match &cli.command {
        Command::Ingest => stage(Stage::Ingest),
        Command::Stats => stage(Stage::Stats),
        Command::Correspond => stage(Stage::Correspond),
        Command::Classify => stage(Stage::Classify),
        Command::Augment => stage(Stage::Augment),
        Command::Ablate => stage(Stage::Ablate),
        Command::Link => stage(Stage::Link),
        Command::Mathel => stage(Stage::Mathel),
        Command::Explain => stage(Stage::Explain),
        Command::Report => Run::open(cli.global.load()?)?.report(),
        Command::Run => {
            let mut run = Run::open(cli.global.load()?)?;
            for s in Stage::ALL {
                run.run_stage(s)?;
            }
            run.report()
        }
        Command::Plotdata { report } => {
            let kind: PlotKind = report.parse()?;
            let mut run = Run::open(cli.global.load()?)?;
            for path in run.plotdata(kind)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::PrintConfig => {
            if cli.global.is_empty() {
                print!("{}", default_config_text());
            } else {
                print!("{}", cli.global.load()?.to_toml());
            }
            Ok(())
        }
        Command::Generate { out, synthetic } => generate(out, synthetic.as_deref()),
    }
}

/// Corpus, concept map and library-derived name table of a synthetic config.
pub fn generate_files(config: &SyntheticConfig) -> CliResult<[(&'static str, String); 3]> {
    let corpus = generate_synthetic_corpus(config)?;
    let lexicon = Lexicon::new(config);
    let mut concepts = String::new();
    for (k, phrases) in lexicon.concepts.iter().enumerate() {
        for p in phrases {
            concepts.push_str(&format!("{p}\t{}\n", config.classes[k]));
        }
    }
    let library = build_distribution_library(&corpus, ClassAxis::ArxivPrimary)?;
    let names = SymbolNameSource::from_library("corpus", &library).to_tsv();
    Ok([("corpus.jsonl", corpus.to_jsonl()), ("concepts.tsv", concepts), ("names.tsv", names)])
}

fn generate(out: &std::path::Path, synthetic: Option<&std::path::Path>) -> CliResult<()> {
    let config = match synthetic {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e: toml::de::Error| CliError::Config(e.to_string().trim().to_string()))?
        }
        None => SyntheticConfig::demo(),
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out.display())))?;
    for (file, contents) in generate_files(&config)? {
        let path = out.join(file);
        std::fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}
