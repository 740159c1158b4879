//! External-memory training.
//!
//! Every window pair and every negative sample is appended to a raw pair
//! file. The file is sorted and duplicate pairs collapsed into tuples
//! `w c marker tot corpus_count`, where `tot` counts all occurrences and
//! `corpus_count` only those from the corpus. Training then streams over a
//! shuffled copy of the tuple file (multiple iteration, `tot` consecutive
//! updates per tuple) or of its expansion into `tot` single-update lines
//! (single iteration). Only marginals and the embeddings live in memory.
//!
//! File formats, all ASCII with `\n` line ends:
//!
//! * raw pairs: `<w> <c> <origin>`, origin `c` (corpus) or `n` (negative)
//! * collapsed: `<w> <c> <+|-> <tot> <corpus_count>`, sorted by `(w, c)`
//! * marginals: `TOTAL <M(*,*)>`, then `<context_id> <M(*,c)>` for every context

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cooc::{ContextId, ContextSpace, Marginals};
use crate::corpus::Corpus;
use crate::error::{Error, IoContext, Result};
use crate::hogwild::{self, SharedEmbeddings};
use crate::negsampler::SamplerTable;
use crate::ppmi::Ppmi;
use crate::trainer::{for_each_scheduled_pair, EmbeddingPair, LinearDecay, PairOrigin, Sgd, TrainConfig, UpdateLog};

/// Merge at most this many sorted runs at once.
const MAX_FAN_IN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawPairRecord {
    pub w: u32,
    pub c: ContextId,
    pub origin: PairOrigin,
}

impl fmt::Display for RawPairRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.origin {
            PairOrigin::Corpus => 'c',
            PairOrigin::Negative => 'n',
        };
        write!(f, "{} {} {}", self.w, self.c.0, o)
    }
}

impl RawPairRecord {
    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let mut it = line.split(' ');
        let (w, c, o) = match (it.next(), it.next(), it.next(), it.next()) {
            (Some(w), Some(c), Some(o), None) => (w, c, o),
            _ => return Err(format!("expected `<w> <c> <origin>`, got {line:?}")),
        };
        let w = w.parse().map_err(|e| format!("bad word id {w:?}: {e}"))?;
        let c = c.parse().map_err(|e| format!("bad context id {c:?}: {e}"))?;
        let origin = match o {
            "c" => PairOrigin::Corpus,
            "n" => PairOrigin::Negative,
            _ => return Err(format!("bad origin {o:?}")),
        };
        Ok(RawPairRecord { w, c: ContextId(c), origin })
    }
}

/// One collapsed pair. The `+`/`-` marker is derived from `corpus_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairTuple {
    pub w: u32,
    pub c: ContextId,
    pub tot: u64,
    pub corpus_count: u64,
}

impl PairTuple {
    pub fn key(&self) -> (u32, ContextId) {
        (self.w, self.c)
    }

    pub fn positive(&self) -> bool {
        self.corpus_count > 0
    }

    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let f: Vec<&str> = line.split(' ').collect();
        if f.len() != 5 {
            return Err(format!("expected `<w> <c> <marker> <tot> <corpus_count>`, got {line:?}"));
        }
        let w = f[0].parse().map_err(|e| format!("bad word id {:?}: {e}", f[0]))?;
        let c = f[1].parse().map_err(|e| format!("bad context id {:?}: {e}", f[1]))?;
        let tot: u64 = f[3].parse().map_err(|e| format!("bad tot {:?}: {e}", f[3]))?;
        let corpus_count: u64 = f[4].parse().map_err(|e| format!("bad corpus count {:?}: {e}", f[4]))?;
        let positive = match f[2] {
            "+" => true,
            "-" => false,
            m => return Err(format!("bad marker {m:?}")),
        };
        if positive != (corpus_count > 0) {
            return Err(format!("marker {} disagrees with corpus count {corpus_count}", f[2]));
        }
        if tot == 0 {
            return Err("tot must be positive".into());
        }
        Ok(PairTuple { w, c: ContextId(c), tot, corpus_count })
    }
}

impl fmt::Display for PairTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marker = if self.positive() { '+' } else { '-' };
        write!(f, "{} {} {} {} {}", self.w, self.c.0, marker, self.tot, self.corpus_count)
    }
}

/// Tuning knobs for the disk-backed stages.
#[derive(Debug, Clone)]
pub struct ExternalConfig {
    /// Raw records sorted in memory per run.
    pub chunk_size: usize,
    /// Buckets used by the two-pass shuffle.
    pub buckets: usize,
    /// Where temporary runs and buckets go; the system temp dir when `None`.
    pub tmp_dir: Option<PathBuf>,
}

impl Default for ExternalConfig {
    fn default() -> Self {
        ExternalConfig { chunk_size: 1 << 22, buckets: 16, tmp_dir: None }
    }
}

impl ExternalConfig {
    fn tempdir(&self) -> Result<tempfile::TempDir> {
        match &self.tmp_dir {
            Some(dir) => tempfile::tempdir_in(dir).at(dir),
            None => tempfile::tempdir().at(Path::new("<temp dir>")),
        }
    }
}

/// Counts produced while writing the raw pair file.
#[derive(Debug, Clone, PartialEq)]
pub struct WriteSummary {
    pub corpus_records: u64,
    pub negative_records: u64,
    pub targets: u64,
    pub marginals: Marginals,
}

impl WriteSummary {
    pub fn records(&self) -> u64 {
        self.corpus_records + self.negative_records
    }
}

/// Streams sentences into a raw pair file, keeping only the marginals resident.
pub struct PairWriter<'a> {
    out: BufWriter<File>,
    path: PathBuf,
    space: ContextSpace,
    sampler: &'a SamplerTable,
    k: usize,
    summary: WriteSummary,
}

impl<'a> PairWriter<'a> {
    pub fn create(path: &Path, space: ContextSpace, sampler: &'a SamplerTable, k: usize) -> Result<Self> {
        if sampler.len() != space.len() {
            return Err(Error::Config(format!("sampler covers {} contexts, context space has {}", sampler.len(), space.len())));
        }
        let file = File::create(path).at(path)?;
        Ok(PairWriter {
            out: BufWriter::with_capacity(1 << 20, file),
            path: path.to_path_buf(),
            space,
            sampler,
            k,
            summary: WriteSummary { corpus_records: 0, negative_records: 0, targets: 0, marginals: Marginals::zeros(&space) },
        })
    }

    pub fn push_sentence<R: Rng + ?Sized>(&mut self, sentence: &[u32], rng: &mut R) -> Result<()> {
        for &w in sentence {
            self.space.check_word(w)?;
        }
        let PairWriter { out, path, space, sampler, k, summary } = self;
        summary.targets += sentence.len() as u64;
        for_each_scheduled_pair(sentence, *space, sampler, *k, rng, |w, c, origin| {
            match origin {
                PairOrigin::Corpus => {
                    summary.corpus_records += 1;
                    summary.marginals.add(w, c, 1);
                }
                PairOrigin::Negative => summary.negative_records += 1,
            }
            writeln!(out, "{}", RawPairRecord { w, c, origin }).at(path)
        })
    }

    pub fn finish(mut self) -> Result<WriteSummary> {
        self.out.flush().at(&self.path)?;
        Ok(self.summary)
    }
}

/// Write every window pair and `k` negatives per target of an in-memory corpus.
pub fn write_pairs<R: Rng + ?Sized>(
    corpus: &Corpus,
    space: ContextSpace,
    sampler: &SamplerTable,
    k: usize,
    rng: &mut R,
    out: &Path,
) -> Result<WriteSummary> {
    let mut writer = PairWriter::create(out, space, sampler, k)?;
    for sentence in corpus.sentences() {
        writer.push_sentence(sentence, rng)?;
    }
    writer.finish()
}

pub fn write_marginals(marginals: &Marginals, path: &Path) -> Result<()> {
    let file = File::create(path).at(path)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "TOTAL {}", marginals.total()).at(path)?;
    for (c, n) in marginals.cols().iter().enumerate() {
        writeln!(out, "{c} {n}").at(path)?;
    }
    out.flush().at(path)
}

/// Read a marginals file. Word marginals are not stored: with a symmetric
/// window, `M(w,*)` equals the sum of the column marginals of `w`'s contexts.
pub fn read_marginals(path: &Path, space: &ContextSpace) -> Result<Marginals> {
    let file = File::open(path).at(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().transpose().at(path)?.ok_or_else(|| Error::parse(path, 1, "missing TOTAL header"))?;
    let total: u64 = header
        .strip_prefix("TOTAL ")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("expected `TOTAL <count>`, got {header:?}")))?;
    let mut cols = vec![0u64; space.len()];
    let mut seen = vec![false; space.len()];
    for (idx, line) in lines.enumerate() {
        let line = line.at(path)?;
        let lineno = idx + 2;
        let (c, n) = line.split_once(' ').ok_or_else(|| Error::parse(path, lineno, "expected `<context_id> <count>`"))?;
        let c: usize = c.parse().map_err(|e| Error::parse(path, lineno, format!("bad context id: {e}")))?;
        let n: u64 = n.parse().map_err(|e| Error::parse(path, lineno, format!("bad count: {e}")))?;
        if c >= cols.len() {
            return Err(Error::parse(path, lineno, format!("context id {c} outside [0, {})", cols.len())));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::parse(path, lineno, format!("duplicate context id {c}")));
        }
        cols[c] = n;
    }
    let rows = (0..space.vocab_size() as u32).map(|w| space.contexts_of(w).map(|c| cols[c as usize]).sum()).collect();
    Marginals::from_parts(rows, cols, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseSummary {
    pub tuples: u64,
    pub total_tot: u64,
    pub total_corpus: u64,
    pub runs: usize,
}

/// How equal keys combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Collapse {
    /// Raw records and their partial aggregates: counts add up.
    Count,
    /// Collapsed or expanded tuples: `tot` adds up, `corpus_count` is the
    /// pair's total and must agree.
    Replicate,
}

impl Collapse {
    fn combine(self, acc: &mut PairTuple, t: &PairTuple) -> Result<()> {
        acc.tot += t.tot;
        match self {
            Collapse::Count => acc.corpus_count += t.corpus_count,
            Collapse::Replicate if acc.corpus_count != t.corpus_count => {
                return Err(Error::Integrity(format!(
                    "pair ({}, {}) appears with corpus counts {} and {}",
                    t.w, t.c.0, acc.corpus_count, t.corpus_count
                )))
            }
            Collapse::Replicate => {}
        }
        Ok(())
    }
}

fn collapse_sorted(records: &mut [PairTuple], mode: Collapse) -> Result<Vec<PairTuple>> {
    records.sort_unstable_by_key(PairTuple::key);
    let mut out: Vec<PairTuple> = Vec::new();
    for t in records.iter() {
        match out.last_mut() {
            Some(acc) if acc.key() == t.key() => mode.combine(acc, t)?,
            _ => out.push(*t),
        }
    }
    Ok(out)
}

fn write_tuples<'t>(tuples: impl IntoIterator<Item = &'t PairTuple>, path: &Path) -> Result<()> {
    let file = File::create(path).at(path)?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    for t in tuples {
        writeln!(out, "{t}").at(path)?;
    }
    out.flush().at(path)
}

/// Sequential reader of a collapsed tuple file.
pub struct TupleReader {
    lines: Lines<BufReader<File>>,
    path: PathBuf,
    line: usize,
}

impl TupleReader {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).at(path)?;
        Ok(TupleReader { lines: BufReader::with_capacity(1 << 16, file).lines(), path: path.to_path_buf(), line: 0 })
    }
}

impl Iterator for TupleReader {
    type Item = Result<PairTuple>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = self.lines.next()?;
        self.line += 1;
        Some(match line {
            Ok(l) => PairTuple::parse(&l).map_err(|m| Error::parse(&self.path, self.line, m)),
            Err(source) => Err(Error::Io { path: self.path.clone(), source }),
        })
    }
}

/// K-way merge of sorted, collapsed runs into `out`.
fn merge_runs(runs: &[PathBuf], out: &Path, mode: Collapse) -> Result<CollapseSummary> {
    let mut readers = runs.iter().map(|p| TupleReader::open(p)).collect::<Result<Vec<_>>>()?;
    let mut heap = BinaryHeap::new();
    for (i, r) in readers.iter_mut().enumerate() {
        if let Some(t) = r.next().transpose()? {
            heap.push(Reverse((t.key(), i, t)));
        }
    }
    let file = File::create(out).at(out)?;
    let mut writer = BufWriter::with_capacity(1 << 20, file);
    let mut summary = CollapseSummary { tuples: 0, total_tot: 0, total_corpus: 0, runs: runs.len() };
    let mut pending: Option<PairTuple> = None;
    while let Some(Reverse((_, i, t))) = heap.pop() {
        if let Some(next) = readers[i].next().transpose()? {
            if next.key() <= t.key() {
                return Err(Error::parse(&runs[i], readers[i].line, "run is not strictly sorted"));
            }
            heap.push(Reverse((next.key(), i, next)));
        }
        match &mut pending {
            Some(p) if p.key() == t.key() => mode.combine(p, &t)?,
            _ => {
                if let Some(p) = pending.replace(t) {
                    emit(&mut writer, out, &p, &mut summary)?;
                }
            }
        }
    }
    if let Some(p) = pending {
        emit(&mut writer, out, &p, &mut summary)?;
    }
    writer.flush().at(out)?;
    Ok(summary)
}

fn emit(w: &mut impl Write, path: &Path, t: &PairTuple, s: &mut CollapseSummary) -> Result<()> {
    s.tuples += 1;
    s.total_tot += t.tot;
    s.total_corpus += t.corpus_count;
    writeln!(w, "{t}").at(path)
}

/// Sort by `(w, c)` and collapse duplicates, holding at most `chunk_size`
/// lines in memory.
///
/// The input is either a raw pair file, whose records are counted, or a
/// tuple file such as the output of [`expand_si`], whose `tot` values add up
/// while the corpus count is carried over. Collapsing an expanded file
/// therefore restores the original.
pub fn sort_collapse(input: &Path, out: &Path, ext: &ExternalConfig) -> Result<CollapseSummary> {
    if ext.chunk_size == 0 {
        return Err(Error::Config("chunk size must be positive".into()));
    }
    let tmp = ext.tempdir()?;
    let file = File::open(input).at(input)?;
    let mut mode = None;
    let mut runs: Vec<PathBuf> = Vec::new();
    let mut chunk: Vec<PairTuple> = Vec::with_capacity(ext.chunk_size.min(1 << 24));
    let flush = |chunk: &mut Vec<PairTuple>, runs: &mut Vec<PathBuf>, mode: Collapse| -> Result<()> {
        let tuples = collapse_sorted(chunk, mode)?;
        let path = tmp.path().join(format!("run-{}", runs.len()));
        write_tuples(&tuples, &path)?;
        runs.push(path);
        chunk.clear();
        Ok(())
    };
    for (idx, line) in BufReader::with_capacity(1 << 20, file).lines().enumerate() {
        let line = line.at(input)?;
        let kind = *mode.get_or_insert(if line.split(' ').count() == 5 { Collapse::Replicate } else { Collapse::Count });
        let t = match kind {
            Collapse::Count => RawPairRecord::parse(&line).map(|r| PairTuple {
                w: r.w,
                c: r.c,
                tot: 1,
                corpus_count: (r.origin == PairOrigin::Corpus) as u64,
            }),
            Collapse::Replicate => PairTuple::parse(&line),
        }
        .map_err(|m| Error::parse(input, idx + 1, m))?;
        chunk.push(t);
        if chunk.len() == ext.chunk_size {
            flush(&mut chunk, &mut runs, kind)?;
        }
    }
    let mode = mode.unwrap_or(Collapse::Count);
    if !chunk.is_empty() || runs.is_empty() {
        flush(&mut chunk, &mut runs, mode)?;
    }
    log::debug!("sort_collapse: {} runs from {}", runs.len(), input.display());

    let mut generation = 0;
    while runs.len() > MAX_FAN_IN {
        let mut next = Vec::new();
        for (i, group) in runs.chunks(MAX_FAN_IN).enumerate() {
            let path = tmp.path().join(format!("merge-{generation}-{i}"));
            merge_runs(group, &path, mode)?;
            next.push(path);
        }
        for old in &runs {
            std::fs::remove_file(old).at(old)?;
        }
        runs = next;
        generation += 1;
    }
    let mut summary = merge_runs(&runs, out, mode)?;
    summary.runs = runs.len();
    Ok(summary)
}

/// Two-pass external shuffle: scatter lines into random buckets, then
/// permute each bucket in memory and concatenate. One bucket is an exact
/// Fisher-Yates permutation.
pub fn shuffle_file<R: Rng + ?Sized>(input: &Path, output: &Path, ext: &ExternalConfig, rng: &mut R) -> Result<u64> {
    let buckets = ext.buckets;
    if buckets == 0 {
        return Err(Error::Config("shuffle needs at least one bucket".into()));
    }
    let tmp = ext.tempdir()?;
    let paths: Vec<PathBuf> = (0..buckets).map(|b| tmp.path().join(format!("bucket-{b}"))).collect();
    let mut lines_total = 0u64;
    {
        let mut writers = paths.iter().map(|p| Ok(BufWriter::new(File::create(p).at(p)?))).collect::<Result<Vec<_>>>()?;
        let file = File::open(input).at(input)?;
        for line in BufReader::with_capacity(1 << 20, file).lines() {
            let line = line.at(input)?;
            let b = if buckets == 1 { 0 } else { rng.gen_range(0..buckets) };
            writeln!(writers[b], "{line}").at(&paths[b])?;
            lines_total += 1;
        }
        for (w, p) in writers.iter_mut().zip(&paths) {
            w.flush().at(p)?;
        }
    }
    let file = File::create(output).at(output)?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    for p in &paths {
        let text = std::fs::read_to_string(p).at(p)?;
        let mut lines: Vec<&str> = text.lines().collect();
        lines.shuffle(rng);
        for l in lines {
            writeln!(out, "{l}").at(output)?;
        }
        std::fs::remove_file(p).at(p)?;
    }
    out.flush().at(output)?;
    Ok(lines_total)
}

/// Expand each tuple into `tot` lines with `tot = 1`. Returns the line count.
pub fn expand_si(collapsed: &Path, out: &Path) -> Result<u64> {
    let file = File::create(out).at(out)?;
    let mut writer = BufWriter::with_capacity(1 << 20, file);
    let mut lines = 0;
    for t in TupleReader::open(collapsed)? {
        let t = t?;
        let unit = PairTuple { tot: 1, ..t };
        for _ in 0..t.tot {
            writeln!(writer, "{unit}").at(out)?;
        }
        lines += t.tot;
    }
    writer.flush().at(out)?;
    Ok(lines)
}

fn context_space_for(marginals: &Marginals, config: &TrainConfig) -> Result<ContextSpace> {
    let space = ContextSpace::new(marginals.rows().len(), config.win, config.positional)?;
    if space.len() != marginals.cols().len() {
        return Err(Error::Config(format!(
            "marginals cover {} contexts; window {} {} over {} words needs {}",
            marginals.cols().len(),
            config.win,
            if config.positional { "positional" } else { "plain" },
            space.vocab_size(),
            space.len()
        )));
    }
    Ok(space)
}

fn tuple_target(ppmi: &Ppmi, space: &ContextSpace, t: &PairTuple) -> Result<f64> {
    space.check_word(t.w)?;
    space.check_context(t.c)?;
    if t.positive() {
        ppmi.value(t.w, t.c, t.corpus_count)
    } else {
        Ok(0.0)
    }
}

fn total_tot(path: &Path) -> Result<u64> {
    TupleReader::open(path)?.try_fold(0u64, |acc, t| Ok(acc + t?.tot))
}

/// Train from a collapsed file, `tot` consecutive updates per tuple.
pub fn train_mi(collapsed: &Path, marginals: Marginals, config: &TrainConfig, ext: &ExternalConfig) -> Result<EmbeddingPair> {
    let space = context_space_for(&marginals, config)?;
    let init = config.init_embeddings(&space)?;
    train_mi_from(collapsed, marginals, config, ext, init, &mut ())
}

pub fn train_mi_from<L: UpdateLog>(
    collapsed: &Path,
    marginals: Marginals,
    config: &TrainConfig,
    ext: &ExternalConfig,
    init: EmbeddingPair,
    log: &mut L,
) -> Result<EmbeddingPair> {
    replay(collapsed, marginals, config, ext, init, log)
}

/// Expand the collapsed file to single-update lines, then train on it.
pub fn train_si(collapsed: &Path, marginals: Marginals, config: &TrainConfig, ext: &ExternalConfig) -> Result<EmbeddingPair> {
    let space = context_space_for(&marginals, config)?;
    let init = config.init_embeddings(&space)?;
    train_si_from(collapsed, marginals, config, ext, init, &mut ())
}

pub fn train_si_from<L: UpdateLog>(
    collapsed: &Path,
    marginals: Marginals,
    config: &TrainConfig,
    ext: &ExternalConfig,
    init: EmbeddingPair,
    log: &mut L,
) -> Result<EmbeddingPair> {
    let tmp = ext.tempdir()?;
    let expanded = tmp.path().join("expanded");
    let lines = expand_si(collapsed, &expanded)?;
    log::info!("expanded {} into {lines} single-update lines", collapsed.display());
    replay(&expanded, marginals, config, ext, init, log)
}

fn replay<L: UpdateLog>(
    tuples: &Path,
    marginals: Marginals,
    config: &TrainConfig,
    ext: &ExternalConfig,
    mut emb: EmbeddingPair,
    log: &mut L,
) -> Result<EmbeddingPair> {
    config.validate()?;
    let space = context_space_for(&marginals, config)?;
    if emb.n_words() != space.vocab_size() || emb.n_contexts() != space.len() || emb.dim() != config.dim {
        return Err(Error::Config("initial embeddings do not match the context space".into()));
    }
    let ppmi = Ppmi::new(marginals, config.cds_alpha)?;
    let per_epoch = total_tot(tuples)?;
    let schedule = LinearDecay::new(config.lr, per_epoch * config.iterations as u64);
    let tmp = ext.tempdir()?;
    let shuffled = tmp.path().join("shuffled");

    if config.threads > 1 {
        let shared = SharedEmbeddings::from(emb);
        for epoch in 0..config.iterations {
            shuffle_file(tuples, &shuffled, ext, &mut config.shuffle_rng(epoch))?;
            replay_parallel(&shuffled, &ppmi, &space, &shared, &schedule, config.threads)?;
            log::info!("epoch {}/{} done ({} threads)", epoch + 1, config.iterations, config.threads);
        }
        return Ok(shared.into_embeddings());
    }

    let mut sgd = Sgd { emb: &mut emb, schedule, step: 0 };
    for epoch in 0..config.iterations {
        shuffle_file(tuples, &shuffled, ext, &mut config.shuffle_rng(epoch))?;
        let mut loss = 0.0;
        for t in TupleReader::open(&shuffled)? {
            let t = t?;
            let target = tuple_target(&ppmi, &space, &t)?;
            for _ in 0..t.tot {
                log.record(epoch, t.w, t.c, target);
                loss += sgd.update(t.w, t.c, target);
            }
        }
        log::info!(
            "epoch {}/{}: mean pair loss {:.6}, lr {:.6}",
            epoch + 1,
            config.iterations,
            loss / per_epoch.max(1) as f64,
            sgd.schedule.at(sgd.step)
        );
    }
    Ok(emb)
}

/// Worker `t` of `n` takes the lines whose index is `t` mod `n`.
fn replay_parallel(
    path: &Path,
    ppmi: &Ppmi,
    space: &ContextSpace,
    shared: &SharedEmbeddings,
    schedule: &LinearDecay,
    threads: usize,
) -> Result<()> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || -> Result<()> {
                    for tuple in TupleReader::open(path)?.skip(t).step_by(threads) {
                        let tuple = tuple?;
                        let target = tuple_target(ppmi, space, &tuple)?;
                        for _ in 0..tuple.tot {
                            shared.update(tuple.w, tuple.c, target, schedule);
                        }
                    }
                    Ok(())
                })
            })
            .collect();
        handles.into_iter().try_for_each(hogwild::join)
    })
}
