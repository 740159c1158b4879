//! Negative-sample distributions `P(c) = count(c)^a / sum count^a`.
//!
//! Plain contexts use corpus unigram counts; positional contexts use the
//! column marginals of the positional co-occurrence matrix. Sampling inverts
//! the cumulative table by binary search.

use rand::Rng;

use crate::cooc::{ContextId, Marginals};
use crate::error::{Error, Result};
use crate::vocab::Vocabulary;

pub const DEFAULT_ALPHA: f64 = 0.75;

#[derive(Debug, Clone)]
pub struct SamplerTable {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    total_weight: f64,
    alpha: f64,
}

impl SamplerTable {
    pub fn from_counts(counts: &[u64], alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Config(format!("sampling exponent must be in (0, 1], got {alpha}")));
        }
        if counts.len() > u32::MAX as usize {
            return Err(Error::Config("too many contexts for a sampler".into()));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| if c == 0 { 0.0 } else { (c as f64).powf(alpha) }).collect();
        let total_weight: f64 = weights.iter().sum();
        if total_weight <= 0.0 {
            return Err(Error::Config("negative sampler needs at least one positive count".into()));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total_weight
            })
            .collect();
        // pin the tail so every u in [0, 1) lands on a positive-weight entry
        let last = weights.iter().rposition(|&w| w > 0.0).expect("positive weight exists");
        for c in &mut cumulative[last..] {
            *c = 1.0;
        }
        Ok(SamplerTable { weights, cumulative, total_weight, alpha })
    }

    /// Plain-context table over corpus unigram counts.
    pub fn unigram(vocab: &Vocabulary, alpha: f64) -> Result<Self> {
        Self::from_counts(vocab.freqs(), alpha)
    }

    /// Positional-context table over the column marginals `M(*, c)`.
    pub fn positional(marginals: &Marginals, alpha: f64) -> Result<Self> {
        Self::from_counts(marginals.cols(), alpha)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn probability(&self, c: ContextId) -> f64 {
        self.weights[c.index()] / self.total_weight
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ContextId {
        let u: f64 = rng.gen();
        let idx = self.cumulative.partition_point(|&x| x <= u);
        ContextId(idx.min(self.cumulative.len() - 1) as u32)
    }
}

pub fn build_sampler(counts: &[u64], alpha: f64) -> Result<SamplerTable> {
    SamplerTable::from_counts(counts, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooc::{count_corpus, ContextSpace};
    use crate::corpus::Corpus;
    use crate::seed::stage_rng;

    #[test]
    fn hand_evaluated_distribution() {
        let t = build_sampler(&[1, 16], 0.75).unwrap();
        assert!((t.probability(ContextId(0)) - 1.0 / 9.0).abs() < 1e-15);
        assert!((t.probability(ContextId(1)) - 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(*t.cumulative().last().unwrap(), 1.0);
    }

    #[test]
    fn uniform_counts_give_uniform_distribution() {
        for alpha in [0.3, 0.75, 1.0] {
            let t = build_sampler(&[5; 8], alpha).unwrap();
            for c in 0..8 {
                assert!((t.probability(ContextId(c)) - 0.125).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_counts_are_never_drawn() {
        let t = build_sampler(&[3, 0, 0], 0.75).unwrap();
        let mut rng = stage_rng(0, "t");
        assert!((0..10_000).all(|_| t.sample(&mut rng) == ContextId(0)));
        assert_eq!(t.probability(ContextId(1)), 0.0);

        let t = build_sampler(&[0, 2, 0, 5, 0], 1.0).unwrap();
        let mut rng = stage_rng(1, "t");
        for _ in 0..10_000 {
            let c = t.sample(&mut rng);
            assert!(c == ContextId(1) || c == ContextId(3));
        }
        assert!(t.cumulative().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn invalid_inputs() {
        assert!(build_sampler(&[0, 0], 0.75).is_err());
        assert!(build_sampler(&[], 0.75).is_err());
        assert!(build_sampler(&[1], 0.0).is_err());
        assert!(build_sampler(&[1], 1.5).is_err());
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let t = build_sampler(&[1, 2, 3, 4], 0.75).unwrap();
        let a: Vec<_> = {
            let mut r = stage_rng(4, "n");
            (0..100).map(|_| t.sample(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = stage_rng(4, "n");
            (0..100).map(|_| t.sample(&mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn positional_weights_fold_to_plain_marginals() {
        let corpus = Corpus::from_sentences([vec![0u32, 1, 2, 1, 0, 3], vec![2, 2, 1], vec![3, 0]]);
        let pos = ContextSpace::new(4, 2, true).unwrap();
        let stats = count_corpus(&corpus, pos);
        let table = SamplerTable::positional(stats.marginals(), 1.0).unwrap();
        let folded: Vec<u64> = (0..4).map(|w| pos.contexts_of(w).map(|c| stats.col_marginal(ContextId(c))).sum()).collect();
        let plain = build_sampler(&folded, 1.0).unwrap();
        for w in 0..4u32 {
            let summed: f64 = pos.contexts_of(w).map(|c| table.weights()[c as usize]).sum();
            let ratio = summed / table.weights().iter().sum::<f64>();
            assert!((ratio - plain.probability(ContextId(w))).abs() < 1e-12);
        }
    }
}
