use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};

use gda_core::corpus::{load_conllu, AbstractDoc};
use gda_core::entities::{load_pubtator, AnnotationPool};
use gda_core::eval::{load_truth, Average, GroundTruthRow};
use gda_core::extraction::DoidMap;
use gda_core::lexicons::{load_lexicons, LexiconError, Lexicons};
use gda_core::patterns::PatternSet;
use gda_core::resources;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Tsv,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CoNLL-U corpus.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// PubTator annotation file; repeatable.
    #[arg(long)]
    pub pubtator: Vec<PathBuf>,
    /// Directory with typeA.dp and typeB.dp (default: shipped patterns).
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Directory with one <category>.txt per lexicon (default: shipped).
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Two-column MEDIC_ID<tab>DOID table.
    #[arg(long = "doid-map")]
    pub doid_map: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Diagnostics JSONL file.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
    /// Truth TSV; needed by --use-truth-mentions.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Use mentions built from the truth rows instead of PubTator.
    #[arg(long = "use-truth-mentions")]
    pub use_truth_mentions: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Ground-truth TSV.
    #[arg(long)]
    pub truth: PathBuf,
    /// Score this JSONL output instead of running extraction.
    #[arg(long, conflicts_with = "use_truth_mentions")]
    pub predictions: Option<PathBuf>,
    #[arg(long = "use-truth-mentions", conflicts_with = "both")]
    pub use_truth_mentions: bool,
    /// Run with PubTator and with truth mentions; print both conditions.
    #[arg(long)]
    pub both: bool,
    /// Averaging used for precision, recall and F1 in the table.
    #[arg(long, default_value = "weighted", value_parser = parse_average)]
    pub average: Average,
    /// Write the full report as JSON.
    #[arg(long = "report-json")]
    pub report_json: Option<PathBuf>,
}

fn parse_average(s: &str) -> Result<Average, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// CoNLL-U files to validate; repeatable.
    #[arg(long)]
    pub corpus: Vec<PathBuf>,
    /// PubTator files to validate; repeatable.
    #[arg(long)]
    pub pubtator: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    pub pmid: String,
    pub sent_id: usize,
    #[command(flatten)]
    pub input: InputArgs,
}

/// Every path a run needs, checked before any processing starts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub pubtator: Vec<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub lexicons: Option<PathBuf>,
    pub doid_map: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub use_truth_mentions: bool,
}

impl RunConfig {
    pub fn from_input(input: &InputArgs) -> Self {
        RunConfig {
            corpus: input.corpus.clone(),
            pubtator: input.pubtator.clone(),
            patterns: input.patterns.clone(),
            lexicons: input.lexicons.clone(),
            doid_map: input.doid_map.clone(),
            truth: None,
            use_truth_mentions: false,
        }
    }

    pub fn validate(&self, need_corpus: bool) -> Result<(), Failure> {
        if need_corpus && self.corpus.is_none() {
            return Err(Failure::Config(anyhow!("--corpus is required")));
        }
        if self.use_truth_mentions && self.truth.is_none() {
            return Err(Failure::Config(anyhow!("--use-truth-mentions needs --truth")));
        }
        let files = self
            .corpus
            .iter()
            .chain(&self.pubtator)
            .chain(&self.doid_map)
            .chain(&self.truth);
        for f in files {
            if !f.is_file() {
                return Err(Failure::Config(anyhow!("file not found: {}", f.display())));
            }
        }
        for d in self.patterns.iter().chain(&self.lexicons) {
            if !d.is_dir() {
                return Err(Failure::Config(anyhow!("directory not found: {}", d.display())));
            }
        }
        Ok(())
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(Failure::Config)
}

pub fn patterns(dir: Option<&Path>) -> Result<PatternSet, Failure> {
    let Some(dir) = dir else {
        return Ok(resources::builtin_patterns());
    };
    let read = |name: &str| {
        let p = dir.join(name);
        std::fs::read_to_string(&p)
            .with_context(|| format!("cannot read {}", p.display()))
            .map_err(Failure::Config)
    };
    let (a, b) = (read("typeA.dp")?, read("typeB.dp")?);
    PatternSet::from_sources(&a, &b)
        .with_context(|| format!("invalid patterns in {}", dir.display()))
        .map_err(Failure::Processing)
}

pub fn lexicons(dir: Option<&Path>) -> Result<Lexicons, Failure> {
    let Some(dir) = dir else {
        return Ok(resources::builtin_lexicons());
    };
    if !dir.is_dir() {
        return Err(Failure::Config(anyhow!("lexicon directory not found: {}", dir.display())));
    }
    load_lexicons(dir).map_err(|e| {
        let missing = matches!(e, LexiconError::MissingCategories(_));
        let e = anyhow::Error::new(e).context(format!("lexicons in {}", dir.display()));
        if missing {
            Failure::Config(e)
        } else {
            Failure::Processing(e)
        }
    })
}

pub fn corpus(path: &Path) -> Result<Vec<AbstractDoc>, Failure> {
    load_conllu(open(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Processing)
}

pub fn pool(paths: &[PathBuf]) -> Result<AnnotationPool, Failure> {
    let mut all = Vec::new();
    for p in paths {
        let batch = load_pubtator(open(p)?)
            .with_context(|| format!("in {}", p.display()))
            .map_err(Failure::Processing)?;
        log::info!("{}: {} mentions, {} rows skipped", p.display(), batch.mentions.len(), batch.skipped_rows);
        all.extend(batch.mentions);
    }
    Ok(AnnotationPool::new(all))
}

pub fn doid(path: Option<&Path>) -> Result<Option<DoidMap>, Failure> {
    path.map(|p| {
        DoidMap::load(open(p)?)
            .with_context(|| format!("in {}", p.display()))
            .map_err(Failure::Processing)
    })
    .transpose()
}

pub fn truth(path: &Path) -> Result<Vec<GroundTruthRow>, Failure> {
    let rows = load_truth(open(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Processing)?;
    if rows.is_empty() {
        return Err(Failure::Config(anyhow!("truth file {} has no rows", path.display())));
    }
    Ok(rows)
}
