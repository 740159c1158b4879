//! Vocabulary construction and dirty subsampling.
//!
//! Ids are assigned by descending corpus frequency, ties broken by the order
//! in which words were first seen, so the same corpus always yields the same
//! id layout.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, IoContext, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, u32>,
    freq: Vec<u64>,
    total_tokens: u64,
    oov_tokens: u64,
}

impl Vocabulary {
    /// Count a token stream and keep every word seen at least `min_count` times.
    pub fn build<I, S>(tokens: I, min_count: u64) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut counter = VocabCounter::default();
        counter.extend(tokens);
        counter.finish(min_count)
    }

    /// Rebuild a vocabulary from `(word, freq)` entries already in id order.
    pub fn from_entries(entries: Vec<(String, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary("no entries".into()));
        }
        let mut words = Vec::with_capacity(entries.len());
        let mut freq = Vec::with_capacity(entries.len());
        let mut ids = HashMap::with_capacity(entries.len());
        for (id, (word, count)) in entries.into_iter().enumerate() {
            if ids.insert(word.clone(), id as u32).is_some() {
                return Err(Error::Integrity(format!("duplicate vocabulary word {word:?}")));
            }
            words.push(word);
            freq.push(count);
        }
        let total_tokens = freq.iter().sum();
        Ok(Vocabulary { words, ids, freq, total_tokens, oov_tokens: 0 })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn freq(&self, id: u32) -> u64 {
        self.freq[id as usize]
    }

    pub fn freqs(&self) -> &[u64] {
        &self.freq
    }

    /// Occurrences of retained words.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Occurrences of words dropped by the `min_count` filter.
    pub fn oov_tokens(&self) -> u64 {
        self.oov_tokens
    }

    pub fn unigram_probability(&self, id: u32) -> f64 {
        self.freq(id) as f64 / self.total_tokens as f64
    }

    /// Write one `word<TAB>freq` line per id, in id order.
    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).at(path)?;
        let mut out = BufWriter::new(file);
        for (word, freq) in self.words.iter().zip(&self.freq) {
            writeln!(out, "{word}\t{freq}").at(path)?;
        }
        out.flush().at(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).at(path)?;
        let mut entries = Vec::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.at(path)?;
            let lineno = idx + 1;
            let (word, freq) = line.split_once('\t').ok_or_else(|| Error::parse(path, lineno, "expected word<TAB>freq"))?;
            if word.is_empty() {
                return Err(Error::parse(path, lineno, "empty word"));
            }
            let freq = freq.parse::<u64>().map_err(|e| Error::parse(path, lineno, format!("bad frequency: {e}")))?;
            entries.push((word.to_owned(), freq));
        }
        Self::from_entries(entries).map_err(|e| match e {
            Error::EmptyVocabulary(_) => Error::EmptyVocabulary(format!("{} has no entries", path.display())),
            other => other,
        })
    }
}

/// Streaming word counter; feed tokens in corpus order, then call `finish`.
#[derive(Debug, Default)]
pub struct VocabCounter {
    // word -> (count, first occurrence rank)
    counts: HashMap<String, (u64, usize)>,
}

impl VocabCounter {
    pub fn push(&mut self, token: &str) {
        let next = self.counts.len();
        match self.counts.get_mut(token) {
            Some(entry) => entry.0 += 1,
            None => {
                self.counts.insert(token.to_owned(), (1, next));
            }
        }
    }

    pub fn extend<I, S>(&mut self, tokens: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for token in tokens {
            self.push(token.as_ref());
        }
    }

    pub fn finish(self, min_count: u64) -> Result<Vocabulary> {
        if min_count == 0 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        if self.counts.is_empty() {
            return Err(Error::EmptyVocabulary("empty token stream".into()));
        }
        let mut kept = Vec::new();
        let mut oov_tokens = 0;
        for (word, (count, first)) in self.counts {
            if count >= min_count {
                kept.push((word, count, first));
            } else {
                oov_tokens += count;
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyVocabulary(format!("no token occurs at least {min_count} times")));
        }
        kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
        let mut vocab = Vocabulary::from_entries(kept.into_iter().map(|(w, c, _)| (w, c)).collect())?;
        vocab.oov_tokens = oov_tokens;
        Ok(vocab)
    }
}

/// Dirty subsampling: a token with unigram probability `f > t` is dropped with
/// probability `1 - sqrt(t / f)`. Frequencies are the raw corpus ones.
#[derive(Debug, Clone)]
pub struct Subsampler {
    keep: Vec<f64>,
}

impl Subsampler {
    pub fn new(vocab: &Vocabulary, t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Config(format!("subsampling threshold must be in (0, 1], got {t}")));
        }
        let keep = (0..vocab.len() as u32)
            .map(|id| {
                let f = vocab.unigram_probability(id);
                if f > t {
                    (t / f).sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Subsampler { keep })
    }

    pub fn keep_probability(&self, id: u32) -> f64 {
        self.keep[id as usize]
    }

    /// Filter `ids` in place order. Tokens that always survive consume no randomness.
    pub fn filter<R: Rng + ?Sized>(&self, ids: &[u32], rng: &mut R) -> Vec<u32> {
        ids.iter()
            .copied()
            .filter(|&id| {
                let p = self.keep[id as usize];
                p >= 1.0 || rng.gen::<f64>() < p
            })
            .collect()
    }
}

pub fn build_vocab<I, S>(tokens: I, min_count: u64) -> Result<Vocabulary>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    Vocabulary::build(tokens, min_count)
}

pub fn subsample_stream<R: Rng + ?Sized>(ids: &[u32], vocab: &Vocabulary, t: f64, rng: &mut R) -> Result<Vec<u32>> {
    Ok(Subsampler::new(vocab, t)?.filter(ids, rng))
}
