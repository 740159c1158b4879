//! Lock-free shared embeddings for parallel SGD.
//!
//! Workers update rows without mutual exclusion. Entries are stored as
//! relaxed atomics, so concurrent writes to the same row may be lost but never
//! tear a value. Results depend on thread scheduling.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread::ScopedJoinHandle;

use crate::cooc::ContextId;
use crate::error::{Error, Result};
use crate::trainer::{EmbeddingPair, LinearDecay};

pub struct SharedEmbeddings {
    dim: usize,
    n_words: usize,
    n_contexts: usize,
    words: Vec<AtomicU64>,
    contexts: Vec<AtomicU64>,
    step: AtomicU64,
}

fn to_atomic(v: Vec<f64>) -> Vec<AtomicU64> {
    v.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect()
}

fn from_atomic(v: Vec<AtomicU64>) -> Vec<f64> {
    v.into_iter().map(|x| f64::from_bits(x.into_inner())).collect()
}

impl From<EmbeddingPair> for SharedEmbeddings {
    fn from(emb: EmbeddingPair) -> Self {
        let (dim, n_words, n_contexts) = (emb.dim(), emb.n_words(), emb.n_contexts());
        let (words, contexts) = emb.into_parts();
        SharedEmbeddings { dim, n_words, n_contexts, words: to_atomic(words), contexts: to_atomic(contexts), step: AtomicU64::new(0) }
    }
}

impl SharedEmbeddings {
    pub fn into_embeddings(self) -> EmbeddingPair {
        EmbeddingPair::from_parts(self.n_words, self.n_contexts, self.dim, from_atomic(self.words), from_atomic(self.contexts))
            .expect("shape preserved")
    }

    /// One SGD step at the learning rate of the next global step.
    pub fn update(&self, w: u32, c: ContextId, target: f64, schedule: &LinearDecay) -> f64 {
        let lr = schedule.at(self.step.fetch_add(1, Ordering::Relaxed));
        let d = self.dim;
        let word = &self.words[w as usize * d..(w as usize + 1) * d];
        let ctx = &self.contexts[c.index() * d..(c.index() + 1) * d];
        let load = |x: &AtomicU64| f64::from_bits(x.load(Ordering::Relaxed));
        let err: f64 = word.iter().zip(ctx).map(|(x, y)| load(x) * load(y)).sum::<f64>() - target;
        let g = lr * err;
        for (x, y) in word.iter().zip(ctx) {
            let (xo, yo) = (load(x), load(y));
            x.store((xo - g * yo).to_bits(), Ordering::Relaxed);
            y.store((yo - g * xo).to_bits(), Ordering::Relaxed);
        }
        0.5 * err * err
    }
}

pub(crate) fn join(handle: ScopedJoinHandle<'_, Result<()>>) -> Result<()> {
    handle.join().map_err(|_| Error::Integrity("training worker panicked".into()))?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trainer::sgd_update;

    #[test]
    fn single_thread_matches_sequential_kernel() {
        let base = EmbeddingPair::from_parts(2, 2, 3, vec![0.1, -0.2, 0.3, 0.0, 0.5, 0.1], vec![0.2, 0.2, -0.1, 0.4, 0.0, 0.3]).unwrap();
        let schedule = LinearDecay::new(0.05, 10);
        let shared = SharedEmbeddings::from(base.clone());
        let mut seq = base;
        let ops = [(0u32, 1u32, 1.5), (1, 0, 0.0), (0, 0, 0.7), (1, 1, 2.0)];
        for (i, &(w, c, t)) in ops.iter().enumerate() {
            let a = shared.update(w, ContextId(c), t, &schedule);
            let b = sgd_update(&mut seq, w, ContextId(c), t, schedule.at(i as u64));
            assert_eq!(a, b);
        }
        assert_eq!(shared.into_embeddings(), seq);
    }
}
