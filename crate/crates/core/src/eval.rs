//! Intrinsic evaluation: word similarity and analogies.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::cooc::{ContextId, ContextSpace};
use crate::error::{Error, IoContext, Result};
use crate::trainer::EmbeddingPair;

/// Which matrices a word's vector is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combo {
    /// Word vectors only.
    W,
    /// Word plus plain context vector.
    WPlusContext,
    /// Word plus the sum of the word's positional context vectors.
    WPlusPositional,
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Combo::W => "W",
            Combo::WPlusContext => "W+Wc",
            Combo::WPlusPositional => "W+Wpos",
        })
    }
}

impl FromStr for Combo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" => Ok(Combo::W),
            "W+Wc" => Ok(Combo::WPlusContext),
            "W+Wpos" => Ok(Combo::WPlusPositional),
            _ => Err(Error::Config(format!("unknown combination {s:?} (expected W, W+Wc or W+Wpos)"))),
        }
    }
}

/// Named word vectors, one row per vocabulary entry.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSet {
    words: Vec<String>,
    index: HashMap<String, u32>,
    dim: usize,
    data: Vec<f64>,
    combo: Option<Combo>,
}

impl VectorSet {
    pub fn new(words: Vec<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != words.len() * dim {
            return Err(Error::Config(format!("{} values for {} words of dimension {dim}", data.len(), words.len())));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i as u32).is_some() {
                return Err(Error::Config(format!("duplicate word {w:?}")));
            }
        }
        Ok(VectorSet { words, index, dim, data, combo: None })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn vector(&self, id: u32) -> &[f64] {
        let d = self.dim;
        &self.data[id as usize * d..(id as usize + 1) * d]
    }

    pub fn vector_mut(&mut self, id: u32) -> &mut [f64] {
        let d = self.dim;
        &mut self.data[id as usize * d..(id as usize + 1) * d]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// The combination these vectors were built with; `None` when loaded from disk.
    pub fn combo(&self) -> Option<Combo> {
        self.combo
    }
}

/// Build evaluation vectors from trained embeddings.
pub fn combine(emb: &EmbeddingPair, words: &[String], combo: Combo, space: &ContextSpace) -> Result<VectorSet> {
    if emb.n_words() != words.len() || emb.n_words() != space.vocab_size() || emb.n_contexts() != space.len() {
        return Err(Error::Config(format!(
            "embeddings ({} words, {} contexts) do not match vocabulary of {} and context space of {}",
            emb.n_words(),
            emb.n_contexts(),
            words.len(),
            space.len()
        )));
    }
    match (combo, space.positional()) {
        (Combo::WPlusContext, true) => return Err(Error::Config("W+Wc needs plain contexts; use W+Wpos for positional embeddings".into())),
        (Combo::WPlusPositional, false) => return Err(Error::Config("W+Wpos needs positional contexts".into())),
        _ => {}
    }
    let mut data = emb.word_matrix().to_vec();
    if combo != Combo::W {
        let d = emb.dim();
        for w in 0..words.len() as u32 {
            let row = &mut data[w as usize * d..(w as usize + 1) * d];
            for c in space.contexts_of(w) {
                for (x, y) in row.iter_mut().zip(emb.context(ContextId(c))) {
                    *x += y;
                }
            }
        }
    }
    let mut vs = VectorSet::new(words.to_vec(), emb.dim(), data)?;
    vs.combo = Some(combo);
    Ok(vs)
}

/// Ranks starting at 1, tied values sharing their mean rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        let mean = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = mean;
        }
        i = j;
    }
    ranks
}

/// Tie-corrected Spearman correlation: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Config(format!("spearman inputs differ in length ({} vs {})", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two observations"));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::UndefinedCorrelation("NaN input"));
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (a, b) = (a - mean, b - mean);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant ranks"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity, `None` if either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some(crate::trainer::dot(a, b) / (na * nb))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Lowercase dataset words before lookup.
    pub lowercase: bool,
    /// Count out-of-vocabulary questions as wrong instead of skipping them.
    pub oov_as_wrong: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { lowercase: true, oov_as_wrong: false }
    }
}

impl EvalOptions {
    fn lookup(&self, vs: &VectorSet, word: &str) -> Option<u32> {
        if self.lowercase {
            vs.id(&word.to_lowercase())
        } else {
            vs.id(word)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityPair {
    pub first: String,
    pub second: String,
    pub score: f64,
}

/// Read `word1 word2 score` lines; blank lines and `#` comments are skipped.
pub fn read_similarity(path: &Path) -> Result<Vec<SimilarityPair>> {
    let text = std::fs::read_to_string(path).at(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::parse(path, i + 1, "expected `word1 word2 score`"));
        }
        let score = f[2].parse().map_err(|e| Error::parse(path, i + 1, format!("bad score {:?}: {e}", f[2])))?;
        out.push(SimilarityPair { first: f[0].to_string(), second: f[1].to_string(), score });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityResult {
    pub rho: f64,
    pub covered: usize,
    pub total: usize,
    /// Pairs dropped because a vector had zero norm.
    pub zero_norm: usize,
}

impl SimilarityResult {
    pub fn coverage(&self) -> f64 {
        self.covered as f64 / self.total as f64
    }
}

pub fn eval_similarity(vs: &VectorSet, dataset: &[SimilarityPair], opts: &EvalOptions) -> Result<SimilarityResult> {
    if dataset.is_empty() {
        return Err(Error::Config("empty similarity dataset".into()));
    }
    let (mut model, mut human) = (Vec::new(), Vec::new());
    let mut zero_norm = 0;
    for p in dataset {
        let (Some(a), Some(b)) = (opts.lookup(vs, &p.first), opts.lookup(vs, &p.second)) else {
            continue;
        };
        match cosine(vs.vector(a), vs.vector(b)) {
            Some(c) => {
                model.push(c);
                human.push(p.score);
            }
            None => zero_norm += 1,
        }
    }
    if zero_norm > 0 {
        log::warn!("{zero_norm} similarity pairs skipped: zero-norm vector");
    }
    if model.is_empty() {
        return Err(Error::NoCoverage { total: dataset.len() });
    }
    Ok(SimilarityResult { rho: spearman(&model, &human)?, covered: model.len(), total: dataset.len(), zero_norm })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalogyMethod {
    CosAdd,
    CosMul,
}

impl fmt::Display for AnalogyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalogyMethod::CosAdd => "3CosAdd",
            AnalogyMethod::CosMul => "3CosMul",
        })
    }
}

pub const COSMUL_EPSILON: f64 = 0.001;

/// Unit-normalized copy of a vector set for analogy queries. Zero vectors stay zero.
pub struct AnalogySolver {
    dim: usize,
    unit: Vec<f64>,
}

impl AnalogySolver {
    pub fn new(vs: &VectorSet) -> Self {
        let d = vs.dim();
        let mut unit = vs.data().to_vec();
        if d > 0 {
            for row in unit.chunks_mut(d) {
                let n = norm(row);
                if n > 0.0 {
                    row.iter_mut().for_each(|x| *x /= n);
                }
            }
        }
        AnalogySolver { dim: d, unit }
    }

    fn row(&self, id: u32) -> &[f64] {
        &self.unit[id as usize * self.dim..(id as usize + 1) * self.dim]
    }

    fn len(&self) -> usize {
        self.unit.len().checked_div(self.dim).unwrap_or(0)
    }

    /// Best `b*` for "a is to a* as b is to b*", excluding the query words.
    /// Ties go to the lowest id; `None` if no other word exists.
    pub fn solve(&self, a: u32, a_star: u32, b: u32, method: AnalogyMethod) -> Option<u32> {
        let (va, vas, vb) = (self.row(a), self.row(a_star), self.row(b));
        let mut best: Option<(u32, f64)> = None;
        for cand in 0..self.len() as u32 {
            if cand == a || cand == a_star || cand == b {
                continue;
            }
            let v = self.row(cand);
            let (ca, cas, cb) = (crate::trainer::dot(v, va), crate::trainer::dot(v, vas), crate::trainer::dot(v, vb));
            let score = match method {
                AnalogyMethod::CosAdd => cas - ca + cb,
                AnalogyMethod::CosMul => {
                    let s = |x: f64| (x + 1.0) / 2.0;
                    s(cas) * s(cb) / (s(ca) + COSMUL_EPSILON)
                }
            };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((cand, score));
            }
        }
        best.map(|(id, _)| id)
    }
}

pub fn solve_analogy(vs: &VectorSet, a: u32, a_star: u32, b: u32, method: AnalogyMethod) -> Option<u32> {
    AnalogySolver::new(vs).solve(a, a_star, b, method)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalogyQuestion {
    pub section: String,
    pub a: String,
    pub a_star: String,
    pub b: String,
    pub b_star: String,
}

/// Read questions: `: section` headers followed by `a a* b b*` lines.
pub fn read_analogies(path: &Path) -> Result<Vec<AnalogyQuestion>> {
    let text = std::fs::read_to_string(path).at(path)?;
    let mut section = String::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix(':') {
            section = name.trim().to_string();
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::parse(path, i + 1, "expected `a a* b b*`"));
        }
        out.push(AnalogyQuestion {
            section: section.clone(),
            a: f[0].to_string(),
            a_star: f[1].to_string(),
            b: f[2].to_string(),
            b_star: f[3].to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalogyScore {
    pub name: String,
    pub correct: usize,
    pub scored: usize,
    pub total: usize,
}

impl AnalogyScore {
    pub fn accuracy(&self) -> f64 {
        if self.scored == 0 {
            0.0
        } else {
            self.correct as f64 / self.scored as f64
        }
    }

    /// Fraction of questions with every word in the vocabulary.
    pub fn coverage(&self, covered: usize) -> f64 {
        covered as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyResult {
    pub method: AnalogyMethod,
    /// Per section, in first-appearance order.
    pub sections: Vec<AnalogyScore>,
    pub overall: AnalogyScore,
    pub covered: usize,
}

impl AnalogyResult {
    pub fn accuracy(&self) -> f64 {
        self.overall.accuracy()
    }

    pub fn coverage(&self) -> f64 {
        self.covered as f64 / self.overall.total as f64
    }
}

pub fn eval_analogy(vs: &VectorSet, questions: &[AnalogyQuestion], method: AnalogyMethod, opts: &EvalOptions) -> Result<AnalogyResult> {
    if questions.is_empty() {
        return Err(Error::Config("empty analogy dataset".into()));
    }
    let solver = AnalogySolver::new(vs);
    let mut sections: Vec<AnalogyScore> = Vec::new();
    let mut overall = AnalogyScore { name: "overall".into(), ..AnalogyScore::default() };
    let mut covered = 0;
    for q in questions {
        if sections.last().is_none_or(|s| s.name != q.section) {
            match sections.iter().position(|s| s.name == q.section) {
                Some(i) => {
                    let s = sections.remove(i);
                    sections.push(s);
                }
                None => sections.push(AnalogyScore { name: q.section.clone(), ..AnalogyScore::default() }),
            }
        }
        let sec = sections.last_mut().expect("section pushed");
        sec.total += 1;
        overall.total += 1;
        let ids = [&q.a, &q.a_star, &q.b, &q.b_star].map(|w| opts.lookup(vs, w));
        let [Some(a), Some(a_star), Some(b), Some(b_star)] = ids else {
            if opts.oov_as_wrong {
                sec.scored += 1;
                overall.scored += 1;
            }
            continue;
        };
        covered += 1;
        sec.scored += 1;
        overall.scored += 1;
        if solver.solve(a, a_star, b, method) == Some(b_star) {
            sec.correct += 1;
            overall.correct += 1;
        }
    }
    if covered == 0 {
        return Err(Error::NoCoverage { total: questions.len() });
    }
    // restore first-appearance order
    let first: HashMap<&str, usize> = questions.iter().enumerate().rev().map(|(i, q)| (q.section.as_str(), i)).collect();
    sections.sort_by_key(|s| first[s.name.as_str()]);
    Ok(AnalogyResult { method, sections, overall, covered })
}

/// One reported number.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub metric: String,
    pub value: f64,
    pub coverage: f64,
}

impl ReportRow {
    pub fn similarity(dataset: &str, r: &SimilarityResult) -> Self {
        ReportRow { dataset: dataset.to_string(), metric: "spearman".into(), value: r.rho, coverage: r.coverage() }
    }

    /// Overall row first, then one row per section.
    pub fn analogy(dataset: &str, r: &AnalogyResult) -> Vec<Self> {
        let mut rows =
            vec![ReportRow { dataset: dataset.to_string(), metric: r.method.to_string(), value: r.accuracy(), coverage: r.coverage() }];
        for s in &r.sections {
            rows.push(ReportRow {
                dataset: format!("{dataset}/{}", s.name),
                metric: r.method.to_string(),
                value: s.accuracy(),
                coverage: if s.total == 0 { 0.0 } else { s.scored as f64 / s.total as f64 },
            });
        }
        rows
    }
}

/// Aligned table for humans.
pub fn render_table(rows: &[ReportRow]) -> String {
    let dw = rows.iter().map(|r| r.dataset.len()).chain([7]).max().unwrap_or(7);
    let mw = rows.iter().map(|r| r.metric.len()).chain([6]).max().unwrap_or(6);
    let mut out = format!("{:<dw$}  {:<mw$}  {:>8}  {:>8}\n", "dataset", "metric", "value", "coverage");
    for r in rows {
        out += &format!("{:<dw$}  {:<mw$}  {:>8.4}  {:>8.4}\n", r.dataset, r.metric, r.value, r.coverage);
    }
    out
}

/// `dataset<TAB>metric<TAB>value<TAB>coverage` lines.
pub fn render_machine(rows: &[ReportRow]) -> String {
    rows.iter().map(|r| format!("{}\t{}\t{:.6}\t{:.6}\n", r.dataset, r.metric, r.value, r.coverage)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stage_rng;
    use rand::Rng;

    fn set(rows: &[&[f64]]) -> VectorSet {
        let words = (0..rows.len()).map(|i| format!("w{i}")).collect();
        VectorSet::new(words, rows[0].len(), rows.concat()).unwrap()
    }

    #[test]
    fn spearman_extremes() {
        let x = [1.0, 5.0, 2.0, 9.0];
        assert_eq!(spearman(&x, &x).unwrap(), 1.0);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(spearman(&x, &y).unwrap(), -1.0);
        assert!(matches!(spearman(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::UndefinedCorrelation(_))));
        assert!(matches!(spearman(&[1.0], &[1.0]), Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn average_ranks_ties() {
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[3.0, 3.0, 3.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn tied_spearman_by_hand() {
        // ranks [1, 2.5, 2.5, 4] vs [1, 3, 2, 4]: sxy = 4.5, sxx = 4.5, syy = 5
        let rho = spearman(&[1.0, 2.0, 2.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn combos() {
        let space = ContextSpace::new(2, 1, false).unwrap();
        let emb = EmbeddingPair::from_parts(2, 2, 2, vec![1.0, 2.0, 3.0, 4.0], vec![10.0, 20.0, 30.0, 40.0]).unwrap();
        let words = vec!["a".to_string(), "b".to_string()];
        assert_eq!(combine(&emb, &words, Combo::W, &space).unwrap().data(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(combine(&emb, &words, Combo::WPlusContext, &space).unwrap().data(), &[11.0, 22.0, 33.0, 44.0]);
        assert!(matches!(combine(&emb, &words, Combo::WPlusPositional, &space), Err(Error::Config(_))));

        let space = ContextSpace::new(1, 2, true).unwrap();
        let mut ctx = vec![0.0; 16];
        for i in 0..4 {
            ctx[i * 4 + i] = 1.0;
        }
        let emb = EmbeddingPair::from_parts(1, 4, 4, vec![0.5; 4], ctx).unwrap();
        let words = vec!["a".to_string()];
        assert_eq!(combine(&emb, &words, Combo::WPlusPositional, &space).unwrap().data(), &[1.5; 4]);
        assert!(matches!(combine(&emb, &words, Combo::WPlusContext, &space), Err(Error::Config(_))));
    }

    #[test]
    fn combo_names_round_trip() {
        for c in [Combo::W, Combo::WPlusContext, Combo::WPlusPositional] {
            assert_eq!(c.to_string().parse::<Combo>().unwrap(), c);
        }
        assert!("W+X".parse::<Combo>().is_err());
    }

    #[test]
    fn orthonormal_analogy() {
        let s = 1.0 / 3f64.sqrt();
        let vs = set(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[-s, s, s, 0.0]]);
        assert_eq!(solve_analogy(&vs, 0, 1, 2, AnalogyMethod::CosAdd), Some(4));
    }

    #[test]
    fn same_a_is_nearest_neighbour_of_b() {
        let mut rng = stage_rng(4, "vs");
        let rows: Vec<Vec<f64>> = (0..12).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let vs = set(&refs);
        let nn = (0..12u32)
            .filter(|&c| c != 3 && c != 7)
            .max_by(|&x, &y| {
                let cx = cosine(vs.vector(x), vs.vector(7)).unwrap();
                let cy = cosine(vs.vector(y), vs.vector(7)).unwrap();
                cx.total_cmp(&cy).then(y.cmp(&x))
            })
            .unwrap();
        assert_eq!(solve_analogy(&vs, 3, 3, 7, AnalogyMethod::CosAdd), Some(nn));
    }

    #[test]
    fn similarity_coverage_and_errors() {
        let vs = set(&[&[1.0, 0.0], &[1.0, 0.1], &[0.0, 1.0], &[0.0, 0.0]]);
        let pair = |a: &str, b: &str, s: f64| SimilarityPair { first: a.into(), second: b.into(), score: s };
        let data = vec![pair("w0", "w1", 9.0), pair("W0", "w2", 1.0), pair("w1", "w2", 2.0), pair("w0", "zz", 5.0), pair("w3", "w0", 3.0)];
        let r = eval_similarity(&vs, &data, &EvalOptions::default()).unwrap();
        assert_eq!((r.covered, r.total, r.zero_norm), (3, 5, 1));
        assert!((r.rho - 1.0).abs() < 1e-12);
        let strict = EvalOptions { lowercase: false, ..EvalOptions::default() };
        assert_eq!(eval_similarity(&vs, &data, &strict).unwrap().covered, 2);
        assert!(matches!(eval_similarity(&vs, &[pair("x", "y", 1.0)], &EvalOptions::default()), Err(Error::NoCoverage { total: 1 })));
    }

    #[test]
    fn analogy_sections_and_oov() {
        let s = 1.0 / 3f64.sqrt();
        let vs = set(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[-s, s, s, 0.0]]);
        let q = |sec: &str, b_star: &str| AnalogyQuestion {
            section: sec.into(),
            a: "w0".into(),
            a_star: "w1".into(),
            b: "w2".into(),
            b_star: b_star.into(),
        };
        let qs = vec![q("x", "w4"), q("x", "w3"), q("y", "w4"), q("y", "nope"), q("x", "w4")];
        let r = eval_analogy(&vs, &qs, AnalogyMethod::CosAdd, &EvalOptions::default()).unwrap();
        assert_eq!((r.overall.correct, r.overall.scored, r.covered), (3, 4, 4));
        assert_eq!(r.sections.iter().map(|s| (s.name.as_str(), s.correct, s.scored)).collect::<Vec<_>>(), vec![("x", 2, 3), ("y", 1, 1)]);
        let strict = EvalOptions { oov_as_wrong: true, ..EvalOptions::default() };
        assert_eq!(eval_analogy(&vs, &qs, AnalogyMethod::CosAdd, &strict).unwrap().overall.scored, 5);
        assert!(matches!(
            eval_analogy(&vs, &[q("z", "nope")], AnalogyMethod::CosMul, &EvalOptions::default()),
            Err(Error::NoCoverage { .. })
        ));
    }

    #[test]
    fn report_formats() {
        let rows = vec![ReportRow { dataset: "toy".into(), metric: "spearman".into(), value: 0.5, coverage: 1.0 }];
        assert_eq!(render_machine(&rows), "toy\tspearman\t0.500000\t1.000000\n");
        assert_eq!(render_table(&rows).lines().count(), 2);
    }

    #[test]
    fn dataset_parsers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sim");
        std::fs::write(&p, "# header\nold new 1.5\n\ncat dog\t7\n").unwrap();
        let d = read_similarity(&p).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[1].score, 7.0);
        std::fs::write(&p, "a b c\n").unwrap();
        assert!(matches!(read_similarity(&p), Err(Error::Parse { line: 1, .. })));

        std::fs::write(&p, ": capital\nathens greece oslo norway\n: family\nboy girl king queen\n").unwrap();
        let q = read_analogies(&p).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q[1].section, "family");
        assert_eq!(q[1].b_star, "queen");
    }
}
