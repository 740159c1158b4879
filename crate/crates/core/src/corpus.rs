//! Tokenized corpora: whitespace-separated tokens, one sentence per line.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::Rng;

use crate::error::{IoContext, Result};
use crate::vocab::{Subsampler, VocabCounter, Vocabulary};

/// A corpus of word ids with sentence boundaries, stored flat.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    tokens: Vec<u32>,
    ends: Vec<usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sentences<I, S>(sentences: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut corpus = Corpus::new();
        for s in sentences {
            corpus.push_sentence(s.as_ref());
        }
        corpus
    }

    /// Empty sentences are dropped.
    pub fn push_sentence(&mut self, ids: &[u32]) {
        if ids.is_empty() {
            return;
        }
        self.tokens.extend_from_slice(ids);
        self.ends.push(self.tokens.len());
    }

    pub fn sentences(&self) -> impl Iterator<Item = &[u32]> + '_ {
        let starts = std::iter::once(0).chain(self.ends.iter().copied());
        starts.zip(self.ends.iter().copied()).map(move |(s, e)| &self.tokens[s..e])
    }

    pub fn num_tokens(&self) -> usize {
        self.tokens.len()
    }

    pub fn num_sentences(&self) -> usize {
        self.ends.len()
    }

    pub fn tokens(&self) -> &[u32] {
        &self.tokens
    }

    pub fn subsample<R: Rng + ?Sized>(&self, subsampler: &Subsampler, rng: &mut R) -> Corpus {
        Corpus::from_sentences(self.sentences().map(|s| subsampler.filter(s, rng)))
    }

    /// Occurrences of each word id as a token, i.e. as a training target.
    pub fn target_counts(&self, vocab_size: usize) -> Vec<u64> {
        let mut counts = vec![0u64; vocab_size];
        for &id in &self.tokens {
            counts[id as usize] += 1;
        }
        counts
    }
}

/// Call `f` with the tokens of every line of a text file.
pub fn for_each_sentence<F>(path: &Path, mut f: F) -> Result<()>
where
    F: FnMut(&[&str]) -> Result<()>,
{
    let file = File::open(path).at(path)?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line).at(path)? == 0 {
            return Ok(());
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        f(&tokens)?;
    }
}

pub fn vocab_from_file(path: &Path, min_count: u64) -> Result<Vocabulary> {
    let mut counter = VocabCounter::default();
    for_each_sentence(path, |tokens| {
        counter.extend(tokens.iter());
        Ok(())
    })?;
    counter.finish(min_count)
}

/// Map tokens to ids, dropping out-of-vocabulary words.
pub fn to_ids(vocab: &Vocabulary, tokens: &[&str]) -> Vec<u32> {
    tokens.iter().filter_map(|t| vocab.id(t)).collect()
}

/// Stream a text file as id sentences.
pub fn for_each_id_sentence<F>(path: &Path, vocab: &Vocabulary, mut f: F) -> Result<()>
where
    F: FnMut(&[u32]) -> Result<()>,
{
    let mut ids = Vec::new();
    for_each_sentence(path, |tokens| {
        ids.clear();
        ids.extend(tokens.iter().filter_map(|t| vocab.id(t)));
        f(&ids)
    })
}

pub fn load_corpus(path: &Path, vocab: &Vocabulary) -> Result<Corpus> {
    let mut corpus = Corpus::new();
    for_each_id_sentence(path, vocab, |ids| {
        corpus.push_sentence(ids);
        Ok(())
    })?;
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences_keep_boundaries() {
        let c = Corpus::from_sentences([vec![0, 1], vec![], vec![2], vec![3, 4, 5]]);
        let s: Vec<&[u32]> = c.sentences().collect();
        assert_eq!(s, vec![&[0, 1][..], &[2][..], &[3, 4, 5][..]]);
        assert_eq!(c.num_tokens(), 6);
        assert_eq!(c.target_counts(6), vec![1; 6]);
    }

    #[test]
    fn file_loading_drops_oov() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "a b a\n\nb c a\nzz\n").unwrap();
        let vocab = vocab_from_file(&path, 2).unwrap();
        assert_eq!(vocab.words(), &["a", "b"]);
        let corpus = load_corpus(&path, &vocab).unwrap();
        let s: Vec<&[u32]> = corpus.sentences().collect();
        assert_eq!(s, vec![&[0, 1, 0][..], &[1, 0][..]]);
    }
}
