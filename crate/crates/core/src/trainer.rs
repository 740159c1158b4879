//! SGD on the squared PPMI reconstruction error, and the in-memory training
//! loop that interleaves window pairs with negative samples.

use rand::Rng;

use crate::cooc::{window_pair_count, ContextId, ContextSpace, CoocStats};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::hogwild::{self, SharedEmbeddings};
use crate::negsampler::SamplerTable;
use crate::ppmi::Ppmi;
use crate::seed::{stage_rng, Rng as StageRng};

/// Final learning rate as a fraction of the initial one.
pub const LR_FLOOR: f64 = 1e-4;

/// Word matrix `W` (`|V| x d`) and context matrix `Wc` (`|C| x d`), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPair {
    dim: usize,
    n_words: usize,
    n_contexts: usize,
    words: Vec<f64>,
    contexts: Vec<f64>,
}

impl EmbeddingPair {
    pub fn zeros(n_words: usize, n_contexts: usize, dim: usize) -> Self {
        EmbeddingPair { dim, n_words, n_contexts, words: vec![0.0; n_words * dim], contexts: vec![0.0; n_contexts * dim] }
    }

    /// Entries uniform in `(-0.5/d, 0.5/d)`.
    pub fn random<R: Rng + ?Sized>(n_words: usize, n_contexts: usize, dim: usize, rng: &mut R) -> Result<Self> {
        if n_words == 0 || n_contexts == 0 || dim == 0 {
            return Err(Error::Config(format!("embedding shape must be positive, got {n_words}x{dim} / {n_contexts}x{dim}")));
        }
        let half = 0.5 / dim as f64;
        let mut draw = || loop {
            let x = rng.gen_range(-half..half);
            if x != -half {
                return x;
            }
        };
        let words = (0..n_words * dim).map(|_| draw()).collect();
        let contexts = (0..n_contexts * dim).map(|_| draw()).collect();
        Ok(EmbeddingPair { dim, n_words, n_contexts, words, contexts })
    }

    pub fn from_parts(n_words: usize, n_contexts: usize, dim: usize, words: Vec<f64>, contexts: Vec<f64>) -> Result<Self> {
        if words.len() != n_words * dim || contexts.len() != n_contexts * dim {
            return Err(Error::Config("embedding buffers do not match their shape".into()));
        }
        Ok(EmbeddingPair { dim, n_words, n_contexts, words, contexts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_words(&self) -> usize {
        self.n_words
    }

    pub fn n_contexts(&self) -> usize {
        self.n_contexts
    }

    #[inline]
    pub fn word(&self, w: u32) -> &[f64] {
        let s = w as usize * self.dim;
        &self.words[s..s + self.dim]
    }

    #[inline]
    pub fn context(&self, c: ContextId) -> &[f64] {
        let s = c.index() * self.dim;
        &self.contexts[s..s + self.dim]
    }

    pub fn word_mut(&mut self, w: u32) -> &mut [f64] {
        let s = w as usize * self.dim;
        &mut self.words[s..s + self.dim]
    }

    pub fn context_mut(&mut self, c: ContextId) -> &mut [f64] {
        let s = c.index() * self.dim;
        &mut self.contexts[s..s + self.dim]
    }

    pub fn word_matrix(&self) -> &[f64] {
        &self.words
    }

    pub fn context_matrix(&self) -> &[f64] {
        &self.contexts
    }

    pub(crate) fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.words, self.contexts)
    }

    #[inline]
    pub fn dot(&self, w: u32, c: ContextId) -> f64 {
        dot(self.word(w), self.context(c))
    }

    pub fn all_finite(&self) -> bool {
        self.words.iter().chain(&self.contexts).all(|x| x.is_finite())
    }
}

pub fn init_embeddings<R: Rng + ?Sized>(n_words: usize, n_contexts: usize, dim: usize, rng: &mut R) -> Result<EmbeddingPair> {
    EmbeddingPair::random(n_words, n_contexts, dim, rng)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One gradient step on `1/2 (W_w . Wc_c - target)^2`. Both rows move using
/// their values from before the step. Returns the loss before the step.
#[inline]
pub fn sgd_update(emb: &mut EmbeddingPair, w: u32, c: ContextId, target: f64, lr: f64) -> f64 {
    let dim = emb.dim;
    let (ws, cs) = (w as usize * dim, c.index() * dim);
    let word = &mut emb.words[ws..ws + dim];
    let ctx = &mut emb.contexts[cs..cs + dim];
    let err = dot(word, ctx) - target;
    let g = lr * err;
    for (x, y) in word.iter_mut().zip(ctx.iter_mut()) {
        let (xo, yo) = (*x, *y);
        *x = xo - g * yo;
        *y = yo - g * xo;
    }
    0.5 * err * err
}

/// Learning rate falling linearly from `lr0` to `lr0 * LR_FLOOR` over `total` steps.
#[derive(Debug, Clone, Copy)]
pub struct LinearDecay {
    lr0: f64,
    total: u64,
}

impl LinearDecay {
    pub fn new(lr0: f64, total: u64) -> Self {
        LinearDecay { lr0, total: total.max(1) }
    }

    #[inline]
    pub fn at(&self, step: u64) -> f64 {
        let progress = (step as f64 / self.total as f64).min(1.0);
        self.lr0 * (1.0 - (1.0 - LR_FLOOR) * progress)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairOrigin {
    Corpus,
    Negative,
}

/// Receives every scheduled update, in application order.
pub trait UpdateLog {
    fn record(&mut self, epoch: usize, w: u32, c: ContextId, target: f64);
}

impl UpdateLog for () {
    #[inline]
    fn record(&mut self, _: usize, _: u32, _: ContextId, _: f64) {}
}

/// Collects `(w, c, target bits)` per epoch; targets compare bit-exactly.
#[derive(Debug, Default, Clone)]
pub struct UpdateRecorder {
    pub epochs: Vec<Vec<(u32, u32, u64)>>,
}

impl UpdateLog for UpdateRecorder {
    fn record(&mut self, epoch: usize, w: u32, c: ContextId, target: f64) {
        if self.epochs.len() <= epoch {
            self.epochs.resize_with(epoch + 1, Vec::new);
        }
        self.epochs[epoch].push((w, c.0, target.to_bits()));
    }
}

impl UpdateRecorder {
    /// Per-epoch update multisets, as sorted vectors.
    pub fn multisets(&self) -> Vec<Vec<(u32, u32, u64)>> {
        self.epochs
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.sort_unstable();
                e
            })
            .collect()
    }
}

/// Window pairs of every position followed by `k` negatives for that
/// position's target, in corpus order. The external pair writer and the
/// in-memory trainer both draw through this, so a shared seed gives both the
/// same pair sequence.
pub fn for_each_scheduled_pair<R, F>(
    sentence: &[u32],
    space: ContextSpace,
    sampler: &SamplerTable,
    k: usize,
    rng: &mut R,
    mut f: F,
) -> Result<()>
where
    R: Rng + ?Sized,
    F: FnMut(u32, ContextId, PairOrigin) -> Result<()>,
{
    let n = sentence.len() as i64;
    for (p, &w) in sentence.iter().enumerate() {
        for o in space.offsets() {
            let q = p as i64 + o;
            if (0..n).contains(&q) {
                f(w, space.encode_unchecked(sentence[q as usize], o), PairOrigin::Corpus)?;
            }
        }
        for _ in 0..k {
            f(w, sampler.sample(rng), PairOrigin::Negative)?;
        }
    }
    Ok(())
}

/// Updates scheduled in one pass over `corpus`: window pairs plus `k` per token.
pub fn updates_per_epoch(corpus: &Corpus, win: usize, k: usize) -> u64 {
    corpus.sentences().map(|s| window_pair_count(s.len(), win) + (k * s.len()) as u64).sum()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrainConfig {
    pub dim: usize,
    pub win: usize,
    pub iterations: usize,
    pub negatives: usize,
    pub lr: f64,
    pub subsample: f64,
    pub cds_alpha: f64,
    pub neg_alpha: f64,
    pub positional: bool,
    pub seed: u64,
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 300,
            win: 2,
            iterations: 5,
            negatives: 5,
            lr: 0.025,
            subsample: 1e-5,
            cds_alpha: 0.75,
            neg_alpha: 0.75,
            positional: false,
            seed: 1,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if self.dim == 0 {
            return bad("dimension must be positive");
        }
        if self.win == 0 {
            return bad("window must be positive");
        }
        if self.iterations == 0 {
            return bad("iterations must be positive");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return bad("subsampling threshold must be in (0, 1]");
        }
        if !(self.cds_alpha > 0.0 && self.cds_alpha <= 1.0) {
            return bad("cds exponent must be in (0, 1]");
        }
        if !(self.neg_alpha > 0.0 && self.neg_alpha <= 1.0) {
            return bad("negative sampling exponent must be in (0, 1]");
        }
        if self.threads == 0 {
            return bad("threads must be positive");
        }
        Ok(())
    }

    pub fn init_rng(&self) -> StageRng {
        stage_rng(self.seed, "init")
    }

    pub fn negatives_rng(&self) -> StageRng {
        stage_rng(self.seed, "negatives")
    }

    pub fn subsample_rng(&self) -> StageRng {
        stage_rng(self.seed, "subsample")
    }

    pub fn shuffle_rng(&self, epoch: usize) -> StageRng {
        stage_rng(self.seed, &format!("shuffle-{epoch}"))
    }

    pub fn init_embeddings(&self, space: &ContextSpace) -> Result<EmbeddingPair> {
        EmbeddingPair::random(space.vocab_size(), space.len(), self.dim, &mut self.init_rng())
    }
}

/// Sequential SGD driver with the shared learning-rate schedule.
pub(crate) struct Sgd<'a> {
    pub emb: &'a mut EmbeddingPair,
    pub schedule: LinearDecay,
    pub step: u64,
}

impl Sgd<'_> {
    #[inline]
    pub fn update(&mut self, w: u32, c: ContextId, target: f64) -> f64 {
        let lr = self.schedule.at(self.step);
        self.step += 1;
        sgd_update(self.emb, w, c, target, lr)
    }
}

fn check_shapes(emb: &EmbeddingPair, space: &ContextSpace, sampler: &SamplerTable) -> Result<()> {
    if emb.n_words() != space.vocab_size() || emb.n_contexts() != space.len() {
        return Err(Error::Config(format!(
            "embeddings are {}x{} words / {} contexts, context space needs {} / {}",
            emb.n_words(),
            emb.dim(),
            emb.n_contexts(),
            space.vocab_size(),
            space.len()
        )));
    }
    if sampler.len() != space.len() {
        return Err(Error::Config(format!("sampler covers {} contexts, context space has {}", sampler.len(), space.len())));
    }
    Ok(())
}

/// PPMI target for a scheduled pair; window pairs must be present in `stats`.
#[inline]
fn target_for(stats: &CoocStats, ppmi: &Ppmi, w: u32, c: ContextId, origin: PairOrigin) -> Result<f64> {
    let m = stats.count(w, c);
    if m == 0 && origin == PairOrigin::Corpus {
        return Err(Error::Integrity(format!("window pair ({w}, {}) has no count; statistics were built from a different stream", c.0)));
    }
    ppmi.value(w, c, m)
}

/// In-memory training from randomly initialised embeddings.
pub fn train_standard(corpus: &Corpus, stats: &CoocStats, sampler: &SamplerTable, config: &TrainConfig) -> Result<EmbeddingPair> {
    let init = config.init_embeddings(stats.space())?;
    train_standard_from(corpus, stats, sampler, config, init, &mut ())
}

/// In-memory training from given embeddings, reporting every update to `log`.
///
/// Each pass replays the corpus with the negative-sample stream reseeded, so
/// every pass sees the same pair multiset as the external pipeline's pair file.
pub fn train_standard_from<L: UpdateLog>(
    corpus: &Corpus,
    stats: &CoocStats,
    sampler: &SamplerTable,
    config: &TrainConfig,
    mut emb: EmbeddingPair,
    log: &mut L,
) -> Result<EmbeddingPair> {
    config.validate()?;
    let space = *stats.space();
    check_shapes(&emb, &space, sampler)?;
    if space.win() != config.win || space.positional() != config.positional {
        return Err(Error::Config("statistics context space does not match the configuration".into()));
    }
    let ppmi = Ppmi::from_stats(stats, config.cds_alpha)?;
    let per_epoch = updates_per_epoch(corpus, config.win, config.negatives);
    let schedule = LinearDecay::new(config.lr, per_epoch * config.iterations as u64);

    if config.threads > 1 {
        return train_standard_parallel(corpus, stats, &ppmi, sampler, config, emb, schedule);
    }

    let mut sgd = Sgd { emb: &mut emb, schedule, step: 0 };
    for epoch in 0..config.iterations {
        let mut rng = config.negatives_rng();
        let mut loss = 0.0;
        for sentence in corpus.sentences() {
            for_each_scheduled_pair(sentence, space, sampler, config.negatives, &mut rng, |w, c, origin| {
                let target = target_for(stats, &ppmi, w, c, origin)?;
                log.record(epoch, w, c, target);
                loss += sgd.update(w, c, target);
                Ok(())
            })?;
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

fn train_standard_parallel(
    corpus: &Corpus,
    stats: &CoocStats,
    ppmi: &Ppmi,
    sampler: &SamplerTable,
    config: &TrainConfig,
    emb: EmbeddingPair,
    schedule: LinearDecay,
) -> Result<EmbeddingPair> {
    let sentences: Vec<&[u32]> = corpus.sentences().collect();
    let shared = SharedEmbeddings::from(emb);
    let threads = config.threads;
    let chunk = sentences.len().div_ceil(threads).max(1);
    let space = *stats.space();
    for epoch in 0..config.iterations {
        std::thread::scope(|scope| -> Result<()> {
            let handles: Vec<_> = sentences
                .chunks(chunk)
                .enumerate()
                .map(|(t, part)| {
                    let shared = &shared;
                    scope.spawn(move || -> Result<()> {
                        let mut rng = stage_rng(config.seed, &format!("negatives-{t}"));
                        for sentence in part {
                            for_each_scheduled_pair(sentence, space, sampler, config.negatives, &mut rng, |w, c, origin| {
                                let target = target_for(stats, ppmi, w, c, origin)?;
                                shared.update(w, c, target, &schedule);
                                Ok(())
                            })?;
                        }
                        Ok(())
                    })
                })
                .collect();
            handles.into_iter().try_for_each(hogwild::join)
        })?;
        log::info!("epoch {}/{} done ({} threads)", epoch + 1, config.iterations, threads);
    }
    Ok(shared.into_embeddings())
}

/// Exact global objective: window term weighted by `M(w,c)` plus, for every
/// target occurrence, `k` times the expected negative-sample loss.
///
/// `target_counts[w]` is the number of times `w` was a training target.
/// Refuses instances with more than `max_cells` word-context cells.
pub fn global_loss(
    emb: &EmbeddingPair,
    stats: &CoocStats,
    ppmi: &Ppmi,
    sampler: &SamplerTable,
    target_counts: &[u64],
    k: usize,
    max_cells: u64,
) -> Result<f64> {
    let space = stats.space();
    let cells = space.vocab_size() as u64 * space.len() as u64;
    if cells > max_cells {
        return Err(Error::TooLarge { cells, limit: max_cells });
    }
    check_shapes(emb, space, sampler)?;
    if target_counts.len() != space.vocab_size() {
        return Err(Error::Config("target counts must cover the vocabulary".into()));
    }
    let mut cells_nz: Vec<_> = stats.pairs().collect();
    cells_nz.sort_unstable();
    let mut window = 0.0;
    for ((w, c), m) in cells_nz {
        let err = emb.dot(w, c) - ppmi.value(w, c, m)?;
        window += m as f64 * 0.5 * err * err;
    }
    let mut negative = 0.0;
    if k > 0 {
        for w in 0..space.vocab_size() as u32 {
            let occurrences = target_counts[w as usize];
            if occurrences == 0 {
                continue;
            }
            let mut expected = 0.0;
            for c in 0..space.len() as u32 {
                let c = ContextId(c);
                let p = sampler.probability(c);
                if p == 0.0 {
                    continue;
                }
                let err = emb.dot(w, c) - ppmi.value(w, c, stats.count(w, c))?;
                expected += p * 0.5 * err * err;
            }
            negative += occurrences as f64 * k as f64 * expected;
        }
    }
    Ok(window + negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooc::{count_corpus, stream_pairs};
    use crate::seed::stage_rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn init_range_and_determinism() {
        let a = init_embeddings(10, 20, 300, &mut stage_rng(1, "init")).unwrap();
        assert!(a.word_matrix().iter().chain(a.context_matrix()).all(|x| x.abs() < 1.0 / 600.0));
        let b = init_embeddings(10, 20, 300, &mut stage_rng(1, "init")).unwrap();
        assert_eq!(a, b);
        let c = init_embeddings(10, 20, 300, &mut stage_rng(2, "init")).unwrap();
        assert_ne!(a, c);
        assert!(init_embeddings(0, 1, 1, &mut stage_rng(1, "init")).is_err());
    }

    #[test]
    fn update_at_optimum_is_a_no_op() {
        let mut e = EmbeddingPair::from_parts(1, 1, 2, vec![1.0, 2.0], vec![3.0, 0.5]).unwrap();
        let before = e.clone();
        let loss = sgd_update(&mut e, 0, ContextId(0), 4.0, 0.1);
        assert_eq!(loss, 0.0);
        assert_eq!(e, before);
    }

    #[test]
    fn hand_computed_step() {
        let mut e = EmbeddingPair::from_parts(1, 1, 1, vec![1.0], vec![2.0]).unwrap();
        let loss = sgd_update(&mut e, 0, ContextId(0), 0.0, 0.1);
        assert_eq!(loss, 2.0);
        assert!((e.word(0)[0] - 0.6).abs() < 1e-15);
        assert!((e.context(ContextId(0))[0] - 1.8).abs() < 1e-15);
    }

    #[test]
    fn lr_decays_linearly_to_floor() {
        let s = LinearDecay::new(0.025, 1000);
        assert_eq!(s.at(0), 0.025);
        assert!((s.at(1000) - 0.025 * LR_FLOOR).abs() < 1e-18);
        assert!((s.at(500) - 0.025 * (1.0 - (1.0 - LR_FLOOR) * 0.5)).abs() < 1e-15);
        assert!(s.at(2000) > 0.0);
    }

    fn abab() -> (Corpus, CoocStats, SamplerTable) {
        let corpus = Corpus::from_sentences([vec![0u32, 1]]);
        let space = ContextSpace::new(2, 1, false).unwrap();
        let stats = count_corpus(&corpus, space);
        let sampler = SamplerTable::from_counts(&[1, 1], 0.75).unwrap();
        (corpus, stats, sampler)
    }

    #[test]
    fn no_negatives_one_pass_schedules_window_pairs_only() {
        let (corpus, stats, sampler) = abab();
        let config = TrainConfig { dim: 4, win: 1, iterations: 1, negatives: 0, ..TrainConfig::default() };
        let mut log = UpdateRecorder::default();
        let init = config.init_embeddings(stats.space()).unwrap();
        train_standard_from(&corpus, &stats, &sampler, &config, init, &mut log).unwrap();
        let ppmi = Ppmi::from_stats(&stats, 0.75).unwrap();
        let t01 = ppmi.value(0, ContextId(1), 1).unwrap();
        let t10 = ppmi.value(1, ContextId(0), 1).unwrap();
        assert_eq!(log.epochs, vec![vec![(0, 1, t01.to_bits()), (1, 0, t10.to_bits())]]);
        assert_eq!(updates_per_epoch(&corpus, 1, 0), 2);
        assert_eq!(updates_per_epoch(&corpus, 1, 5), 12);
    }

    #[test]
    fn mismatched_stats_are_integrity_errors() {
        let (_, stats, sampler) = abab();
        let other = Corpus::from_sentences([vec![0u32, 0]]);
        let config = TrainConfig { dim: 2, win: 1, negatives: 0, ..TrainConfig::default() };
        let err = train_standard(&other, &stats, &sampler, &config).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
    }

    #[test]
    fn updates_stay_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut e = init_embeddings(5, 5, 8, &mut rng).unwrap();
        for i in 0..20_000 {
            let (w, c) = (rng.gen_range(0..5), ContextId(rng.gen_range(0..5)));
            let target = rng.gen_range(0.0..8.0);
            let lr = 0.025 * (1.0 - i as f64 / 20_000.0);
            sgd_update(&mut e, w, c, target, lr);
        }
        assert!(e.all_finite());
    }

    /// Naive loss: dense PPMI and dense counts, double loop over every cell.
    fn naive_loss(emb: &EmbeddingPair, corpus: &Corpus, space: ContextSpace, cds: f64, neg_counts: &[u64], alpha: f64, k: usize) -> f64 {
        let (v, nc) = (space.vocab_size(), space.len());
        let mut m = vec![vec![0f64; nc]; v];
        for s in corpus.sentences() {
            for (w, c) in stream_pairs(s, space) {
                m[w as usize][c.index()] += 1.0;
            }
        }
        let total: f64 = m.iter().flatten().sum();
        let rows: Vec<f64> = m.iter().map(|r| r.iter().sum()).collect();
        let cols: Vec<f64> = (0..nc).map(|c| m.iter().map(|r| r[c]).sum()).collect();
        let sc: Vec<f64> = cols.iter().map(|x| x.powf(cds)).collect();
        let st: f64 = sc.iter().sum();
        let pw: Vec<f64> = neg_counts.iter().map(|&x| (x as f64).powf(alpha)).collect();
        let pt: f64 = pw.iter().sum();
        let targets = corpus.target_counts(v);
        let mut loss = 0.0;
        for w in 0..v {
            for c in 0..nc {
                let ppmi = if m[w][c] == 0.0 { 0.0 } else { ((m[w][c] / total) / ((rows[w] / total) * (sc[c] / st))).ln().max(0.0) };
                let d: f64 = emb.word(w as u32).iter().zip(emb.context(ContextId(c as u32))).map(|(a, b)| a * b).sum();
                let sq = 0.5 * (d - ppmi) * (d - ppmi);
                loss += m[w][c] * sq + targets[w] as f64 * k as f64 * (pw[c] / pt) * sq;
            }
        }
        loss
    }

    #[test]
    fn global_loss_matches_naive_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for positional in [false, true] {
            let corpus = Corpus::from_sentences((0..30).map(|_| (0..7).map(|_| rng.gen_range(0..8u32)).collect::<Vec<_>>()));
            let space = ContextSpace::new(8, 2, positional).unwrap();
            let stats = count_corpus(&corpus, space);
            let counts: Vec<u64> = if positional { stats.marginals().cols().to_vec() } else { corpus.target_counts(8) };
            let sampler = SamplerTable::from_counts(&counts, 0.75).unwrap();
            let ppmi = Ppmi::from_stats(&stats, 0.75).unwrap();
            let emb = init_embeddings(8, space.len(), 6, &mut rng).unwrap();
            let emb = EmbeddingPair::from_parts(
                8,
                space.len(),
                6,
                emb.word_matrix().iter().map(|x| x * 300.0).collect(),
                emb.context_matrix().iter().map(|x| x * 300.0).collect(),
            )
            .unwrap();
            for k in [0, 3] {
                let got = global_loss(&emb, &stats, &ppmi, &sampler, &corpus.target_counts(8), k, 1 << 20).unwrap();
                let want = naive_loss(&emb, &corpus, space, 0.75, &counts, 0.75, k);
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn exact_factorization_has_zero_loss_and_guard_refuses() {
        // one pair type: a b, plain win 1; PPMI(a,b) = PPMI(b,a) = ln 2 at alpha 1
        let (corpus, stats, sampler) = abab();
        let ppmi = Ppmi::from_stats(&stats, 1.0).unwrap();
        let t = 2f64.ln();
        assert!((ppmi.value(0, ContextId(1), 1).unwrap() - t).abs() < 1e-15);
        // W = [[1,0],[0,1]], Wc chosen so W_w . Wc_c equals the PPMI cell
        let emb = EmbeddingPair::from_parts(2, 2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.0, t, t, 0.0]).unwrap();
        let counts = corpus.target_counts(2);
        let loss = global_loss(&emb, &stats, &ppmi, &sampler, &counts, 2, 100).unwrap();
        assert!(loss.abs() < 1e-30);
        assert!(matches!(global_loss(&emb, &stats, &ppmi, &sampler, &counts, 2, 3), Err(Error::TooLarge { .. })));
    }
}
