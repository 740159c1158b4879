//! Window sampling and sparse co-occurrence counts.
//!
//! Contexts are either plain words or positional `(word, offset)` pairs. The
//! positional layout is word-major: the `2 * win` contexts of a word occupy
//! consecutive ids, ordered `-win..-1, 1..win`.

use std::collections::HashMap;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextId(pub u32);

impl ContextId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The set of contexts for a vocabulary, window size, and context kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextSpace {
    vocab_size: usize,
    win: usize,
    positional: bool,
}

impl ContextSpace {
    pub fn new(vocab_size: usize, win: usize, positional: bool) -> Result<Self> {
        if win == 0 {
            return Err(Error::Config("window size must be at least 1".into()));
        }
        if vocab_size == 0 {
            return Err(Error::Config("vocabulary size must be positive".into()));
        }
        let space = ContextSpace { vocab_size, win, positional };
        if space.len() > u32::MAX as usize {
            return Err(Error::Config(format!("{} contexts do not fit 32-bit ids", space.len())));
        }
        Ok(space)
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn win(&self) -> usize {
        self.win
    }

    pub fn positional(&self) -> bool {
        self.positional
    }

    /// Number of distinct contexts: `|V|` plain, `2 * win * |V|` positional.
    pub fn len(&self) -> usize {
        if self.positional {
            2 * self.win * self.vocab_size
        } else {
            self.vocab_size
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Window offsets in emission order.
    pub fn offsets(&self) -> impl Iterator<Item = i64> + Clone {
        let w = self.win as i64;
        (-w..0).chain(1..=w)
    }

    pub fn encode(&self, word: u32, offset: i64) -> Result<ContextId> {
        if (word as usize) >= self.vocab_size {
            return Err(Error::OutOfRange { what: "word id", index: word as u64, limit: self.vocab_size as u64 });
        }
        encode_context(word, offset, self.win, self.positional)
    }

    #[inline]
    pub(crate) fn encode_unchecked(&self, word: u32, offset: i64) -> ContextId {
        if self.positional {
            ContextId(word * (2 * self.win as u32) + slot(offset, self.win))
        } else {
            ContextId(word)
        }
    }

    /// Inverse of `encode`: the context word and, for positional spaces, its offset.
    pub fn decode(&self, c: ContextId) -> (u32, Option<i64>) {
        if !self.positional {
            return (c.0, None);
        }
        let width = 2 * self.win as u32;
        let (word, slot) = (c.0 / width, (c.0 % width) as i64);
        let win = self.win as i64;
        let offset = if slot < win { slot - win } else { slot - win + 1 };
        (word, Some(offset))
    }

    /// All context ids that belong to `word`: one plain id, or its `2 * win` positional ids.
    pub fn contexts_of(&self, word: u32) -> std::ops::Range<u32> {
        if self.positional {
            let width = 2 * self.win as u32;
            word * width..(word + 1) * width
        } else {
            word..word + 1
        }
    }

    pub fn check_context(&self, c: ContextId) -> Result<()> {
        if c.index() >= self.len() {
            return Err(Error::OutOfRange { what: "context id", index: c.0 as u64, limit: self.len() as u64 });
        }
        Ok(())
    }

    pub fn check_word(&self, w: u32) -> Result<()> {
        if w as usize >= self.vocab_size {
            return Err(Error::OutOfRange { what: "word id", index: w as u64, limit: self.vocab_size as u64 });
        }
        Ok(())
    }
}

#[inline]
fn slot(offset: i64, win: usize) -> u32 {
    let win = win as i64;
    (if offset < 0 { offset + win } else { offset + win - 1 }) as u32
}

/// Encode a context word seen at `offset` from its target.
pub fn encode_context(word: u32, offset: i64, win: usize, positional: bool) -> Result<ContextId> {
    if offset == 0 || offset.unsigned_abs() as usize > win {
        return Err(Error::InvalidOffset { offset, win });
    }
    if positional {
        Ok(ContextId(word * (2 * win as u32) + slot(offset, win)))
    } else {
        Ok(ContextId(word))
    }
}

/// Window pairs of one sentence: for each position, every in-bounds offset
/// `-win..-1, 1..win`, in that order.
pub fn stream_pairs<'a>(sentence: &'a [u32], space: ContextSpace) -> impl Iterator<Item = (u32, ContextId)> + 'a {
    let n = sentence.len() as i64;
    (0..sentence.len()).flat_map(move |p| {
        space.offsets().filter_map(move |o| {
            let q = p as i64 + o;
            (0..n).contains(&q).then(|| (sentence[p], space.encode_unchecked(sentence[q as usize], o)))
        })
    })
}

/// Number of window pairs a sentence of `len` tokens produces.
pub fn window_pair_count(len: usize, win: usize) -> u64 {
    let (n, w) = (len as u64, win as u64);
    if n == 0 {
        return 0;
    }
    // each of the min(w, n - 1) distances contributes 2 * (n - d) pairs
    (1..=w.min(n - 1)).map(|d| 2 * (n - d)).sum()
}

/// Row, column and grand totals of the co-occurrence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginals {
    row: Vec<u64>,
    col: Vec<u64>,
    total: u64,
}

impl Marginals {
    pub fn zeros(space: &ContextSpace) -> Self {
        Marginals { row: vec![0; space.vocab_size()], col: vec![0; space.len()], total: 0 }
    }

    pub fn from_parts(row: Vec<u64>, col: Vec<u64>, total: u64) -> Result<Self> {
        let m = Marginals { row, col, total };
        m.check_consistency()?;
        Ok(m)
    }

    #[inline]
    pub fn add(&mut self, w: u32, c: ContextId, count: u64) {
        self.row[w as usize] += count;
        self.col[c.index()] += count;
        self.total += count;
    }

    pub fn row(&self, w: u32) -> u64 {
        self.row[w as usize]
    }

    pub fn col(&self, c: ContextId) -> u64 {
        self.col[c.index()]
    }

    pub fn rows(&self) -> &[u64] {
        &self.row
    }

    pub fn cols(&self) -> &[u64] {
        &self.col
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn merge(&mut self, other: &Marginals) -> Result<()> {
        if self.row.len() != other.row.len() || self.col.len() != other.col.len() {
            return Err(Error::Integrity("merging marginals of different shapes".into()));
        }
        self.row.iter_mut().zip(&other.row).for_each(|(a, b)| *a += b);
        self.col.iter_mut().zip(&other.col).for_each(|(a, b)| *a += b);
        self.total += other.total;
        Ok(())
    }

    pub fn check_consistency(&self) -> Result<()> {
        let rows: u64 = self.row.iter().sum();
        let cols: u64 = self.col.iter().sum();
        if rows != self.total || cols != self.total {
            return Err(Error::Integrity(format!("marginal sums disagree: rows {rows}, columns {cols}, total {}", self.total)));
        }
        Ok(())
    }
}

/// Sparse co-occurrence counts `M(w, c)` with their marginals.
#[derive(Debug, Clone)]
pub struct CoocStats {
    space: ContextSpace,
    pairs: HashMap<(u32, ContextId), u64>,
    marginals: Marginals,
}

impl CoocStats {
    pub fn new(space: ContextSpace) -> Self {
        CoocStats { space, pairs: HashMap::new(), marginals: Marginals::zeros(&space) }
    }

    #[inline]
    pub fn add(&mut self, w: u32, c: ContextId) {
        *self.pairs.entry((w, c)).or_insert(0) += 1;
        self.marginals.add(w, c, 1);
    }

    pub fn count(&self, w: u32, c: ContextId) -> u64 {
        self.pairs.get(&(w, c)).copied().unwrap_or(0)
    }

    pub fn space(&self) -> &ContextSpace {
        &self.space
    }

    pub fn marginals(&self) -> &Marginals {
        &self.marginals
    }

    pub fn row_marginal(&self, w: u32) -> u64 {
        self.marginals.row(w)
    }

    pub fn col_marginal(&self, c: ContextId) -> u64 {
        self.marginals.col(c)
    }

    pub fn grand_total(&self) -> u64 {
        self.marginals.total()
    }

    /// Nonzero cells, in unspecified order.
    pub fn pairs(&self) -> impl Iterator<Item = ((u32, ContextId), u64)> + '_ {
        self.pairs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn nonzero_cells(&self) -> usize {
        self.pairs.len()
    }

    /// Shard-wise counting: merging is associative and commutative.
    pub fn merge(&mut self, other: &CoocStats) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Integrity("merging counts over different context spaces".into()));
        }
        for (k, v) in &other.pairs {
            *self.pairs.entry(*k).or_insert(0) += v;
        }
        self.marginals.merge(&other.marginals)
    }

    pub fn check_consistency(&self) -> Result<()> {
        let mut rows = vec![0u64; self.space.vocab_size()];
        let mut cols = vec![0u64; self.space.len()];
        for ((w, c), n) in &self.pairs {
            rows[*w as usize] += n;
            cols[c.index()] += n;
        }
        if rows != self.marginals.rows() || cols != self.marginals.cols() {
            return Err(Error::Integrity("cell counts disagree with marginals".into()));
        }
        self.marginals.check_consistency()
    }
}

pub fn count_pairs<I>(pairs: I, space: ContextSpace) -> CoocStats
where
    I: IntoIterator<Item = (u32, ContextId)>,
{
    let mut stats = CoocStats::new(space);
    for (w, c) in pairs {
        stats.add(w, c);
    }
    stats
}

pub fn count_corpus(corpus: &Corpus, space: ContextSpace) -> CoocStats {
    count_pairs(corpus.sentences().flat_map(|s| stream_pairs(s, space)), space)
}
