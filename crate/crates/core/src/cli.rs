//! Command-line interface.
//!
//! Every flag can also be set through an environment variable named
//! `PMIVEC_` plus the flag in upper snake case, e.g. `PMIVEC_DIM=100`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cooc::{count_corpus, stream_pairs, ContextSpace, Marginals};
use crate::corpus::{for_each_id_sentence, load_corpus, vocab_from_file};
use crate::error::{Error, IoContext, Result};
use crate::eval::{self, AnalogyMethod, Combo, EvalOptions, ReportRow};
use crate::extmem::{self, CollapseSummary, ExternalConfig, PairWriter, WriteSummary};
use crate::negsampler::{SamplerTable, DEFAULT_ALPHA};
use crate::trainer::{train_standard, EmbeddingPair, TrainConfig};
use crate::vectors::{load_vectors, save_vectors};
use crate::vocab::{Subsampler, Vocabulary};

#[derive(Debug, Parser)]
#[command(name = "pmivec", version, about = "Train and evaluate PPMI-factorization word embeddings")]
pub struct Cli {
    /// Log progress (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count a corpus and write its vocabulary.
    Vocab(VocabArgs),
    /// Write the raw, collapsed and marginals files of the external pipeline.
    Pairs(PairsArgs),
    /// Train embeddings and write them as a text vector file.
    Train(TrainArgs),
    /// Spearman correlation on word-similarity datasets.
    EvalSim(EvalSimArgs),
    /// Accuracy on analogy datasets.
    EvalAnalogy(EvalAnalogyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// In memory.
    Standard,
    /// From the collapsed pair file, `tot` updates per tuple.
    Mi,
    /// From the collapsed pair file expanded to one update per line.
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Add,
    Mul,
    Both,
}

#[derive(Debug, Args)]
pub struct VocabArgs {
    /// Whitespace-tokenized text, one sentence per line.
    #[arg(long, env = "PMIVEC_CORPUS")]
    pub corpus: PathBuf,
    #[arg(long, short, env = "PMIVEC_OUTPUT")]
    pub output: PathBuf,
    #[arg(long, env = "PMIVEC_MIN_COUNT", default_value_t = 5)]
    pub min_count: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, env = "PMIVEC_DIM", default_value_t = 300)]
    pub dim: usize,
    #[arg(long, env = "PMIVEC_WINDOW", default_value_t = 2)]
    pub window: usize,
    #[arg(long, env = "PMIVEC_ITERATIONS", default_value_t = 5)]
    pub iterations: usize,
    #[arg(long, env = "PMIVEC_NEGATIVES", default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, env = "PMIVEC_LR", default_value_t = 0.025)]
    pub lr: f64,
    /// Subsampling threshold.
    #[arg(long, env = "PMIVEC_SUBSAMPLE", default_value_t = 1e-5)]
    pub subsample: f64,
    /// Context distribution smoothing exponent.
    #[arg(long, env = "PMIVEC_CDS", default_value_t = 0.75)]
    pub cds: f64,
    #[arg(long, env = "PMIVEC_MIN_COUNT", default_value_t = 5)]
    pub min_count: u64,
    /// Use (word, offset) contexts.
    #[arg(long, env = "PMIVEC_POSITIONAL")]
    pub positional: bool,
    #[arg(long, env = "PMIVEC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "PMIVEC_THREADS", default_value_t = 1)]
    pub threads: usize,
}

impl ModelArgs {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            dim: self.dim,
            win: self.window,
            iterations: self.iterations,
            negatives: self.negatives,
            lr: self.lr,
            subsample: self.subsample,
            cds_alpha: self.cds,
            neg_alpha: DEFAULT_ALPHA,
            positional: self.positional,
            seed: self.seed,
            threads: self.threads,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExternalArgs {
    /// Shuffle buckets.
    #[arg(long, env = "PMIVEC_BUCKETS", default_value_t = 16)]
    pub buckets: usize,
    /// Raw records sorted in memory per run.
    #[arg(long, env = "PMIVEC_CHUNK_SIZE", default_value_t = 1 << 22)]
    pub chunk_size: usize,
    /// Directory for temporary files.
    #[arg(long, env = "PMIVEC_TMP_DIR")]
    pub tmp_dir: Option<PathBuf>,
}

impl ExternalArgs {
    pub fn config(&self) -> ExternalConfig {
        ExternalConfig { chunk_size: self.chunk_size, buckets: self.buckets, tmp_dir: self.tmp_dir.clone() }
    }
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[arg(long, env = "PMIVEC_CORPUS")]
    pub corpus: PathBuf,
    /// Vocabulary file; built from the corpus when absent.
    #[arg(long, env = "PMIVEC_VOCAB")]
    pub vocab: Option<PathBuf>,
    /// Directory receiving `pairs.raw`, `pairs.collapsed`, `marginals`.
    #[arg(long, env = "PMIVEC_OUT_DIR")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub external: ExternalArgs,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, env = "PMIVEC_CORPUS")]
    pub corpus: PathBuf,
    /// Output vector file.
    #[arg(long, short, env = "PMIVEC_OUTPUT")]
    pub output: PathBuf,
    /// Vocabulary file; built from the corpus and written next to the output when absent.
    #[arg(long, env = "PMIVEC_VOCAB")]
    pub vocab: Option<PathBuf>,
    #[arg(long, env = "PMIVEC_MODE", value_enum, default_value_t = Mode::Standard)]
    pub mode: Mode,
    /// Vectors to write: W, W+Wc (plain contexts) or W+Wpos (positional contexts).
    #[arg(long, env = "PMIVEC_COMBO", default_value = "W", value_parser = parse_combo)]
    pub combo: Combo,
    /// Directory for pair files in mi/si mode [default: <output>.pairs].
    #[arg(long, env = "PMIVEC_WORK_DIR")]
    pub work_dir: Option<PathBuf>,
    /// Run manifest [default: <output>.manifest.toml].
    #[arg(long, env = "PMIVEC_MANIFEST")]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub external: ExternalArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Text vector file.
    #[arg(long, env = "PMIVEC_VECTORS")]
    pub vectors: PathBuf,
    /// Dataset files; may be repeated.
    #[arg(long = "dataset", required = true)]
    pub datasets: Vec<PathBuf>,
    /// Look dataset words up as written instead of lowercased.
    #[arg(long, env = "PMIVEC_NO_LOWERCASE")]
    pub no_lowercase: bool,
    /// Print `dataset<TAB>metric<TAB>value<TAB>coverage` lines instead of a table.
    #[arg(long)]
    pub tsv: bool,
}

#[derive(Debug, Args)]
pub struct EvalSimArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Args)]
pub struct EvalAnalogyArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Score questions with unknown words as wrong instead of skipping them.
    #[arg(long, env = "PMIVEC_OOV_AS_WRONG")]
    pub oov_as_wrong: bool,
}

fn parse_combo(s: &str) -> std::result::Result<Combo, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything a training run used and produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub corpus: PathBuf,
    pub mode: Mode,
    pub combo: String,
    pub positional: bool,
    pub seed: u64,
    pub min_count: u64,
    pub config: TrainConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external: Option<ExternalSettings>,
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalSettings {
    pub buckets: usize,
    pub chunk_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub vocab: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_pairs: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapsed_pairs: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginals: Option<PathBuf>,
    pub embeddings: PathBuf,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize manifest: {e}")))?;
        std::fs::write(path, text).at(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).at(path)?;
        toml::from_str(&text).map_err(|e| Error::parse(path, 0, e.to_string()))
    }
}

/// Paths of the external pipeline's files.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFiles {
    pub raw: PathBuf,
    pub collapsed: PathBuf,
    pub marginals: PathBuf,
}

impl PairFiles {
    pub fn in_dir(dir: &Path) -> Self {
        PairFiles { raw: dir.join("pairs.raw"), collapsed: dir.join("pairs.collapsed"), marginals: dir.join("marginals") }
    }
}

fn no_pairs(config: &TrainConfig) -> Error {
    Error::Config(format!("no window pairs left after subsampling at threshold {}; raise --subsample", config.subsample))
}

/// Column marginals of the subsampled corpus, streamed from disk.
fn stream_marginals(corpus: &Path, vocab: &Vocabulary, space: ContextSpace, config: &TrainConfig) -> Result<Marginals> {
    let subsampler = Subsampler::new(vocab, config.subsample)?;
    let mut rng = config.subsample_rng();
    let mut m = Marginals::zeros(&space);
    for_each_id_sentence(corpus, vocab, |ids| {
        for (w, c) in stream_pairs(&subsampler.filter(ids, &mut rng), space) {
            m.add(w, c, 1);
        }
        Ok(())
    })?;
    Ok(m)
}

/// Subsample the corpus, write every window pair and negative sample, then
/// sort, collapse and record the marginals. Memory use is bounded by the
/// marginals and the sort chunk.
pub fn build_pair_files(
    corpus: &Path,
    vocab: &Vocabulary,
    config: &TrainConfig,
    ext: &ExternalConfig,
    dir: &Path,
) -> Result<(PairFiles, WriteSummary, CollapseSummary)> {
    config.validate()?;
    std::fs::create_dir_all(dir).at(dir)?;
    let files = PairFiles::in_dir(dir);
    let space = ContextSpace::new(vocab.len(), config.win, config.positional)?;
    let sampler = if config.positional {
        let m = stream_marginals(corpus, vocab, space, config)?;
        if m.total() == 0 {
            return Err(no_pairs(config));
        }
        SamplerTable::positional(&m, config.neg_alpha)?
    } else {
        SamplerTable::unigram(vocab, config.neg_alpha)?
    };
    let subsampler = Subsampler::new(vocab, config.subsample)?;
    let mut sub_rng = config.subsample_rng();
    let mut neg_rng = config.negatives_rng();
    let mut writer = PairWriter::create(&files.raw, space, &sampler, config.negatives)?;
    for_each_id_sentence(corpus, vocab, |ids| {
        let kept = subsampler.filter(ids, &mut sub_rng);
        if kept.is_empty() {
            return Ok(());
        }
        writer.push_sentence(&kept, &mut neg_rng)
    })?;
    let written = writer.finish()?;
    if written.corpus_records == 0 {
        return Err(no_pairs(config));
    }
    log::info!(
        "wrote {} raw records ({} window, {} negative) for {} targets",
        written.records(),
        written.corpus_records,
        written.negative_records,
        written.targets
    );
    extmem::write_marginals(&written.marginals, &files.marginals)?;
    let collapsed = extmem::sort_collapse(&files.raw, &files.collapsed, ext)?;
    log::info!("collapsed into {} tuples from {} runs", collapsed.tuples, collapsed.runs);
    if collapsed.total_corpus != written.marginals.total() || collapsed.total_tot != written.records() {
        return Err(Error::Integrity(format!(
            "collapsed totals ({} corpus, {} all) disagree with the raw file ({}, {})",
            collapsed.total_corpus,
            collapsed.total_tot,
            written.marginals.total(),
            written.records()
        )));
    }
    Ok((files, written, collapsed))
}

fn resolve_vocab(corpus: &Path, vocab: Option<&Path>, min_count: u64) -> Result<Vocabulary> {
    match vocab {
        Some(p) => Vocabulary::read(p),
        None => vocab_from_file(corpus, min_count),
    }
}

fn check_combo(combo: Combo, positional: bool) -> Result<()> {
    match (combo, positional) {
        (Combo::WPlusContext, true) => Err(Error::Config("--combo W+Wc needs plain contexts; use W+Wpos with --positional".into())),
        (Combo::WPlusPositional, false) => Err(Error::Config("--combo W+Wpos needs --positional".into())),
        _ => Ok(()),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Train in memory on the subsampled corpus.
pub fn train_in_memory(corpus: &Path, vocab: &Vocabulary, config: &TrainConfig) -> Result<EmbeddingPair> {
    config.validate()?;
    let full = load_corpus(corpus, vocab)?;
    let subsampler = Subsampler::new(vocab, config.subsample)?;
    let sub = full.subsample(&subsampler, &mut config.subsample_rng());
    log::info!("{} of {} tokens kept after subsampling", sub.num_tokens(), full.num_tokens());
    let space = ContextSpace::new(vocab.len(), config.win, config.positional)?;
    let stats = count_corpus(&sub, space);
    if stats.grand_total() == 0 {
        return Err(no_pairs(config));
    }
    let sampler = if config.positional {
        SamplerTable::positional(stats.marginals(), config.neg_alpha)?
    } else {
        SamplerTable::unigram(vocab, config.neg_alpha)?
    };
    train_standard(&sub, &stats, &sampler, config)
}

pub fn cmd_vocab(args: &VocabArgs) -> Result<()> {
    let vocab = vocab_from_file(&args.corpus, args.min_count)?;
    vocab.write(&args.output)?;
    log::info!("{} words, {} tokens", vocab.len(), vocab.total_tokens());
    Ok(())
}

pub fn cmd_pairs(args: &PairsArgs) -> Result<()> {
    let vocab = resolve_vocab(&args.corpus, args.vocab.as_deref(), args.model.min_count)?;
    let (files, written, collapsed) = build_pair_files(&args.corpus, &vocab, &args.model.config(), &args.external.config(), &args.out_dir)?;
    println!(
        "{}: {} records\n{}: {} tuples\n{}: total {}",
        files.raw.display(),
        written.records(),
        files.collapsed.display(),
        collapsed.tuples,
        files.marginals.display(),
        written.marginals.total()
    );
    Ok(())
}

pub fn cmd_train(args: &TrainArgs) -> Result<RunManifest> {
    let config = args.model.config();
    config.validate()?;
    check_combo(args.combo, config.positional)?;
    let vocab_path = match &args.vocab {
        Some(p) => p.clone(),
        None => {
            let p = with_suffix(&args.output, ".vocab");
            vocab_from_file(&args.corpus, args.model.min_count)?.write(&p)?;
            p
        }
    };
    let vocab = Vocabulary::read(&vocab_path)?;
    let space = ContextSpace::new(vocab.len(), config.win, config.positional)?;
    let ext = args.external.config();

    let (emb, files) = match args.mode {
        Mode::Standard => (train_in_memory(&args.corpus, &vocab, &config)?, None),
        Mode::Mi | Mode::Si => {
            let dir = args.work_dir.clone().unwrap_or_else(|| with_suffix(&args.output, ".pairs"));
            let (files, _, _) = build_pair_files(&args.corpus, &vocab, &config, &ext, &dir)?;
            let marginals = extmem::read_marginals(&files.marginals, &space)?;
            let emb = if args.mode == Mode::Mi {
                extmem::train_mi(&files.collapsed, marginals, &config, &ext)?
            } else {
                extmem::train_si(&files.collapsed, marginals, &config, &ext)?
            };
            (emb, Some(files))
        }
    };
    if !emb.all_finite() {
        return Err(Error::Integrity("training diverged to non-finite values; lower --lr".into()));
    }
    let vs = eval::combine(&emb, vocab.words(), args.combo, &space)?;
    save_vectors(&vs, &args.output)?;

    let manifest = RunManifest {
        corpus: args.corpus.clone(),
        mode: args.mode,
        combo: args.combo.to_string(),
        positional: config.positional,
        seed: config.seed,
        min_count: args.model.min_count,
        external: files.as_ref().map(|_| ExternalSettings { buckets: ext.buckets, chunk_size: ext.chunk_size }),
        outputs: Outputs {
            vocab: vocab_path,
            raw_pairs: files.as_ref().map(|f| f.raw.clone()),
            collapsed_pairs: files.as_ref().map(|f| f.collapsed.clone()),
            marginals: files.as_ref().map(|f| f.marginals.clone()),
            embeddings: args.output.clone(),
        },
        config,
    };
    let manifest_path = args.manifest.clone().unwrap_or_else(|| with_suffix(&args.output, ".manifest.toml"));
    manifest.write(&manifest_path)?;
    Ok(manifest)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn print_report(rows: &[ReportRow], tsv: bool) {
    if tsv {
        print!("{}", eval::render_machine(rows));
    } else {
        print!("{}", eval::render_table(rows));
    }
}

pub fn cmd_eval_sim(args: &EvalSimArgs) -> Result<()> {
    let vs = load_vectors(&args.eval.vectors)?;
    let opts = EvalOptions { lowercase: !args.eval.no_lowercase, oov_as_wrong: false };
    let mut rows = Vec::new();
    for path in &args.eval.datasets {
        let data = eval::read_similarity(path)?;
        let r = eval::eval_similarity(&vs, &data, &opts)?;
        rows.push(ReportRow::similarity(&dataset_name(path), &r));
    }
    print_report(&rows, args.eval.tsv);
    Ok(())
}

pub fn cmd_eval_analogy(args: &EvalAnalogyArgs) -> Result<()> {
    let vs = load_vectors(&args.eval.vectors)?;
    let opts = EvalOptions { lowercase: !args.eval.no_lowercase, oov_as_wrong: args.oov_as_wrong };
    let methods: &[AnalogyMethod] = match args.method {
        MethodArg::Add => &[AnalogyMethod::CosAdd],
        MethodArg::Mul => &[AnalogyMethod::CosMul],
        MethodArg::Both => &[AnalogyMethod::CosAdd, AnalogyMethod::CosMul],
    };
    let mut rows = Vec::new();
    for path in &args.eval.datasets {
        let questions = eval::read_analogies(path)?;
        for &m in methods {
            let r = eval::eval_analogy(&vs, &questions, m, &opts)?;
            rows.extend(ReportRow::analogy(&dataset_name(path), &r));
        }
    }
    print_report(&rows, args.eval.tsv);
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Vocab(a) => cmd_vocab(a),
        Command::Pairs(a) => cmd_pairs(a),
        Command::Train(a) => cmd_train(a).map(|_| ()),
        Command::EvalSim(a) => cmd_eval_sim(a),
        Command::EvalAnalogy(a) => cmd_eval_analogy(a),
    }
}
