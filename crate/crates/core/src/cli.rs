//! Command-line front end: `train`, `segment`, `evaluate`, `induce-abbrevs`
//! and `learning-curve`.
//!
//! Logs go to standard error; data goes to standard output or `--output`.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{self, Encoding};
use crate::detector::{self, Detector, TrainConfig};
use crate::error::{Error, Result};
use crate::eval;
use crate::features::{ResourceLexicons, TemplateSet};
use crate::maxent::GisConfig;
use crate::model::{self, Model};

#[derive(Debug, Parser)]
#[command(name = "sentbound", version, about = "Maximum-entropy sentence boundary detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model from a one-sentence-per-line corpus.
    Train(TrainArgs),
    /// Split raw text into sentences.
    Segment(SegmentArgs),
    /// Score a model against an annotated corpus.
    Evaluate(EvaluateArgs),
    /// Write the abbreviations induced from an annotated corpus.
    InduceAbbrevs(InduceArgs),
    /// Accuracy as a function of training-set size.
    LearningCurve(CurveArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LexiconArgs {
    #[arg(long, value_name = "PATH")]
    pub honorifics: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub designators: Option<PathBuf>,
}

impl LexiconArgs {
    fn load_for(&self, templates: TemplateSet) -> Result<Option<ResourceLexicons>> {
        match templates {
            TemplateSet::Portable => Ok(None),
            TemplateSet::Best => Ok(Some(ResourceLexicons::load(
                self.honorifics.as_deref(),
                self.designators.as_deref(),
            )?)),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainingArgs {
    #[arg(long, default_value = "portable", value_parser = parse_templates)]
    pub templates: TemplateSet,
    /// Minimum training count for a predicate to be kept.
    #[arg(long, default_value_t = 1)]
    pub cutoff: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    /// Match induced abbreviations ignoring case.
    #[arg(long)]
    pub case_insensitive_abbrevs: bool,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
}

impl TrainingArgs {
    fn config(&self) -> Result<TrainConfig> {
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::Invalid(format!("tolerance {} is negative", self.tolerance)));
        }
        Ok(TrainConfig {
            template_set: self.templates,
            cutoff: self.cutoff,
            gis: GisConfig {
                max_iters: self.max_iters,
                tolerance: self.tolerance,
                ..GisConfig::default()
            },
            case_sensitive_abbrevs: !self.case_insensitive_abbrevs,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[arg(long, default_value = "utf8", value_parser = parse_encoding)]
    pub encoding: Encoding,
}

#[derive(Debug, Clone, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the byte offset of every boundary mark instead of sentences.
    #[arg(long)]
    pub offsets: bool,
    /// Refuse to run unless the model uses these templates.
    #[arg(long, value_parser = parse_templates)]
    pub templates: Option<TemplateSet>,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long, default_value = "utf8", value_parser = parse_encoding)]
    pub encoding: Encoding,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Annotated test corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_parser = parse_templates)]
    pub templates: Option<TemplateSet>,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long, default_value = "utf8", value_parser = parse_encoding)]
    pub encoding: Encoding,
}

#[derive(Debug, Clone, Args)]
pub struct InduceArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub case_insensitive_abbrevs: bool,
    #[arg(long, default_value = "utf8", value_parser = parse_encoding)]
    pub encoding: Encoding,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Pool of annotated training sentences.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Held-out annotated evaluation corpus.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[arg(long, default_value = "utf8", value_parser = parse_encoding)]
    pub encoding: Encoding,
}

fn parse_templates(s: &str) -> std::result::Result<TemplateSet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_encoding(s: &str) -> std::result::Result<Encoding, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn encode_output(text: &str, encoding: Encoding) -> Vec<u8> {
    match encoding {
        Encoding::Utf8 => text.as_bytes().to_vec(),
        Encoding::Latin1 => text
            .chars()
            .map(|c| u8::try_from(u32::from(c)).unwrap_or(b'?'))
            .collect(),
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => model::write_atomic(path, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Error::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn load_detector(
    model_path: &Path,
    templates: Option<TemplateSet>,
    lexicons: &LexiconArgs,
) -> Result<Detector> {
    let model = Model::load(model_path)?;
    if let Some(requested) = templates {
        if requested != model.template_set {
            return Err(Error::TemplateMismatch {
                model: model.template_set.name(),
                requested: requested.name(),
            });
        }
    }
    let lex = lexicons.load_for(model.template_set)?;
    Detector::new(model, lex)
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let config = args.training.config()?;
    let lex = args.training.lexicons.load_for(config.template_set)?;
    let corpus = corpus::load_annotated(&args.corpus, args.encoding)?;
    log::info!(
        "loaded {} sentences ({} tokens) from {}",
        corpus.len(),
        corpus.token_count(),
        args.corpus.display()
    );
    let trained = detector::train(&corpus, &config, lex.as_ref())?;
    for (i, (ll, v)) in trained
        .log
        .log_likelihood
        .iter()
        .zip(&trained.log.max_violation)
        .enumerate()
    {
        log::info!("iteration {i}: log-likelihood {ll:.6} max-violation {v:.3e}");
    }
    trained.detector.model().save(&args.model)?;
    log::info!("wrote {}", args.model.display());
    Ok(())
}

pub fn cmd_segment(args: &SegmentArgs) -> Result<()> {
    let detector = load_detector(&args.model, args.templates, &args.lexicons)?;
    let text = corpus::load_raw(&args.input, args.encoding)?;
    let mut out = String::new();
    if args.offsets {
        for c in detector.boundaries(&text) {
            out.push_str(&args.encoding.source_offset(&text, c.stream_position).to_string());
            out.push('\n');
        }
    } else {
        for s in detector.sentences(&text) {
            out.push_str(&s);
            out.push('\n');
        }
    }
    emit(args.output.as_deref(), &encode_output(&out, args.encoding))
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let detector = load_detector(&args.model, args.templates, &args.lexicons)?;
    let corpus = corpus::load_annotated(&args.corpus, args.encoding)?;
    let labeled = corpus::label_candidates(&corpus);
    let report = eval::evaluate(&detector, &labeled)?;
    let out = format!("{}\n{}", report.to_table(), report.to_key_values());
    emit(args.output.as_deref(), out.as_bytes())
}

pub fn cmd_induce_abbrevs(args: &InduceArgs) -> Result<()> {
    let corpus = corpus::load_annotated(&args.corpus, args.encoding)?;
    let labeled = corpus::label_candidates(&corpus);
    let abbrevs = corpus::induce_abbreviations(&labeled, !args.case_insensitive_abbrevs);
    log::info!("induced {} abbreviations", abbrevs.len());
    emit(args.output.as_deref(), abbrevs.to_text().as_bytes())
}

pub fn cmd_learning_curve(args: &CurveArgs) -> Result<()> {
    let config = args.training.config()?;
    let pool = corpus::load_annotated(&args.corpus, args.encoding)?;
    if let Some(&size) = args.sizes.iter().find(|&&s| s > pool.len()) {
        return Err(Error::SizeExceedsCorpus {
            size,
            available: pool.len(),
        });
    }
    let lex = args.training.lexicons.load_for(config.template_set)?;
    let heldout = corpus::load_annotated(&args.input, args.encoding)?;
    let points = eval::learning_curve(&pool, &heldout, &args.sizes, &config, lex.as_ref(), args.seed)?;
    let out = format!("{}\n{}", eval::curve_table(&points), eval::curve_csv(&points));
    emit(args.output.as_deref(), out.as_bytes())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Segment(a) => cmd_segment(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::InduceAbbrevs(a) => cmd_induce_abbrevs(a),
        Command::LearningCurve(a) => cmd_learning_curve(a),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Info)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}
