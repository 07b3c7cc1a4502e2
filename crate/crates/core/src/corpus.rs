//! Sentence corpora and the idf-modified cosine similarity between sentences.
//!
//! Every sentence counts as one document when computing inverse document
//! frequencies: `idf(w) = ln(N / df(w))` with no smoothing, so a word that
//! occurs in every sentence carries no weight.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix_io;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub body: String,
}

impl Sentence {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            body: body.into(),
        }
    }
}

/// Ordered sentences; verified ones come first, generated ones after them.
#[derive(Debug, Clone)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    n_verified: usize,
}

impl Corpus {
    /// A corpus where every sentence is verified.
    pub fn new(sentences: Vec<Sentence>) -> Result<Self> {
        let n = sentences.len();
        Self::with_split(sentences, n)
    }

    /// Verified sentences followed by generated ones.
    pub fn with_generated(verified: Vec<Sentence>, generated: Vec<Sentence>) -> Result<Self> {
        let n_verified = verified.len();
        let mut sentences = verified;
        sentences.extend(generated);
        Self::with_split(sentences, n_verified)
    }

    /// The first `n_verified` sentences are verified, the rest generated.
    pub fn with_split(sentences: Vec<Sentence>, n_verified: usize) -> Result<Self> {
        if n_verified > sentences.len() {
            return Err(Error::Parameter(format!(
                "n_verified = {n_verified} exceeds corpus size {}",
                sentences.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &sentences {
            if s.id.is_empty() {
                return Err(Error::Parameter("sentence id must be nonempty".into()));
            }
            if s.body.trim().is_empty() {
                return Err(Error::Parameter(format!(
                    "sentence {} has an empty body",
                    s.id
                )));
            }
            if !seen.insert(s.id.as_str()) {
                return Err(Error::Parameter(format!("duplicate sentence id {}", s.id)));
            }
        }
        Ok(Self {
            sentences,
            n_verified,
        })
    }

    /// Parses one sentence per line with an optional `id<TAB>` prefix.
    /// Lines without an id get `s1`, `s2`, ... by position; blank lines are skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut sentences = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: origin.to_string(),
                line: idx + 1,
                message,
            };
            let sentence = match line.split_once('\t') {
                Some((id, body)) => {
                    let id = id.trim();
                    if id.is_empty() {
                        return Err(parse_err("empty id before tab".into()));
                    }
                    if body.trim().is_empty() {
                        return Err(parse_err(format!("sentence {id} has no text")));
                    }
                    Sentence::new(id, body.trim())
                }
                None => Sentence::new(format!("s{}", sentences.len() + 1), line.trim()),
            };
            sentences.push(sentence);
        }
        if sentences.is_empty() {
            return Err(Error::Parse {
                path: origin.to_string(),
                line: 0,
                message: "no sentences found".into(),
            });
        }
        Self::new(sentences).map_err(|e| Error::Parse {
            path: origin.to_string(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn ids(&self) -> Vec<String> {
        self.sentences.iter().map(|s| s.id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn n_verified(&self) -> usize {
        self.n_verified
    }

    pub fn n_generated(&self) -> usize {
        self.sentences.len() - self.n_verified
    }

    /// Marks the first `n_verified` sentences as verified.
    pub fn split_at(mut self, n_verified: usize) -> Result<Self> {
        if n_verified > self.sentences.len() {
            return Err(Error::Parameter(format!(
                "n_verified = {n_verified} exceeds corpus size {}",
                self.sentences.len()
            )));
        }
        self.n_verified = n_verified;
        Ok(self)
    }

    fn position(&self, sentence: &Sentence) -> Option<usize> {
        self.sentences.iter().position(|s| s.id == sentence.id)
    }
}

/// Lowercased alphanumeric word tokens in order of appearance.
pub fn tokenize(body: &str) -> Vec<String> {
    body.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Inverse document frequencies over a corpus, one document per sentence.
#[derive(Debug, Clone)]
pub struct IdfTable {
    idf: HashMap<String, f64>,
}

impl IdfTable {
    pub fn from_tokens(docs: &[Vec<String>]) -> Self {
        let mut df: HashMap<&str, usize> = HashMap::new();
        for doc in docs {
            let unique: HashSet<&str> = doc.iter().map(String::as_str).collect();
            for w in unique {
                *df.entry(w).or_default() += 1;
            }
        }
        let n = docs.len() as f64;
        let idf = df
            .into_iter()
            .map(|(w, count)| (w.to_string(), (n / count as f64).ln()))
            .collect();
        Self { idf }
    }

    pub fn from_corpus(corpus: &Corpus) -> Self {
        let docs: Vec<Vec<String>> = corpus.sentences.iter().map(|s| tokenize(&s.body)).collect();
        Self::from_tokens(&docs)
    }

    /// Unknown words weigh nothing.
    pub fn get(&self, word: &str) -> f64 {
        self.idf.get(word).copied().unwrap_or(0.0)
    }
}

/// Sparse tf-idf vector; `BTreeMap` keeps the summation order fixed.
#[derive(Debug, Clone)]
struct WeightedBag {
    counts: BTreeMap<String, f64>,
    weights: BTreeMap<String, f64>,
    norm: f64,
}

impl WeightedBag {
    fn new(tokens: &[String], idf: &IdfTable) -> Self {
        let mut tf: BTreeMap<String, f64> = BTreeMap::new();
        for t in tokens {
            *tf.entry(t.clone()).or_default() += 1.0;
        }
        let weights: BTreeMap<String, f64> = tf
            .iter()
            .map(|(w, count)| (w.clone(), count * idf.get(w)))
            .collect();
        let norm = weights.values().map(|v| v * v).sum::<f64>().sqrt();
        Self {
            counts: tf,
            weights,
            norm,
        }
    }

    fn cosine(&self, other: &Self) -> f64 {
        if self.norm == 0.0 || other.norm == 0.0 {
            // identical nonempty bags point the same way under any weighting
            let same = !self.counts.is_empty() && self.counts == other.counts;
            return if same { 1.0 } else { 0.0 };
        }
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        let dot: f64 = small
            .weights
            .iter()
            .filter_map(|(w, a)| large.weights.get(w).map(|b| a * b))
            .sum();
        (dot / (self.norm * other.norm)).clamp(0.0, 1.0)
    }
}

/// Idf-modified cosine between two sentences of `corpus`.
///
/// A sentence is fully similar to itself. Sentences whose tf-idf vector is
/// zero (no tokens, or only tokens present everywhere) score 0 against others,
/// except against a sentence with exactly the same nonempty token counts.
pub fn idf_modified_cosine(a: &Sentence, b: &Sentence, corpus: &Corpus) -> Result<f64> {
    let ia = corpus
        .position(a)
        .ok_or_else(|| Error::Parameter(format!("sentence {} is not in the corpus", a.id)))?;
    let ib = corpus
        .position(b)
        .ok_or_else(|| Error::Parameter(format!("sentence {} is not in the corpus", b.id)))?;
    if ia == ib {
        return Ok(1.0);
    }
    let idf = IdfTable::from_corpus(corpus);
    let bag_a = WeightedBag::new(&tokenize(&a.body), &idf);
    let bag_b = WeightedBag::new(&tokenize(&b.body), &idf);
    Ok(bag_a.cosine(&bag_b))
}

/// Symmetric matrix of pairwise sentence similarities with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix(DMatrix<f64>);

impl SimilarityMatrix {
    /// Validates symmetry (1e-12), unit diagonal and the `[0, 1]` range.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        let n = values.nrows();
        if n == 0 || values.ncols() != n {
            return Err(Error::Construction(format!(
                "similarity matrix must be square and nonempty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        for i in 0..n {
            if (values[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::Construction(format!(
                    "diagonal entry {i} is {} instead of 1",
                    values[(i, i)]
                )));
            }
            for j in 0..n {
                let v = values[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Construction(format!(
                        "entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if (v - values[(j, i)]).abs() > 1e-12 {
                    return Err(Error::Construction(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn to_csv(&self) -> String {
        matrix_io::to_csv(&self.0)
    }

    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        Self::from_matrix(matrix_io::from_csv(text, origin)?)
    }
}

/// Pairwise idf-modified cosine similarities for the whole corpus.
pub fn build_similarity_matrix(corpus: &Corpus) -> Result<SimilarityMatrix> {
    if corpus.is_empty() {
        return Err(Error::Parameter("corpus is empty".into()));
    }
    let docs: Vec<Vec<String>> = corpus.sentences.iter().map(|s| tokenize(&s.body)).collect();
    let idf = IdfTable::from_tokens(&docs);
    let bags: Vec<WeightedBag> = docs.iter().map(|d| WeightedBag::new(d, &idf)).collect();
    let n = bags.len();
    let mut values = DMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let s = bags[i].cosine(&bags[j]);
            values[(i, j)] = s;
            values[(j, i)] = s;
        }
    }
    Ok(SimilarityMatrix(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(bodies: &[&str]) -> Corpus {
        Corpus::new(
            bodies
                .iter()
                .enumerate()
                .map(|(i, b)| Sentence::new(format!("s{}", i + 1), *b))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Iraq refuses to back down."),
            vec!["iraq", "refuses", "to", "back", "down"]
        );
        assert!(tokenize("").is_empty());
        assert_eq!(
            tokenize("UNSCOM, in charge"),
            vec!["unscom", "in", "charge"]
        );
        assert_eq!(
            tokenize("Iraq’s “weapons” 1990"),
            vec!["iraq", "s", "weapons", "1990"]
        );
    }

    #[test]
    fn self_similarity_is_one() {
        let c = corpus(&["alpha beta", "gamma delta", "alpha gamma"]);
        let s = &c.sentences()[0];
        assert_eq!(idf_modified_cosine(s, s, &c).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_sentences_score_zero() {
        let c = corpus(&["alpha beta", "gamma delta"]);
        let v = idf_modified_cosine(&c.sentences()[0], &c.sentences()[1], &c).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn zero_weight_sentence_scores_zero_against_others() {
        // "common" appears everywhere, so its idf is zero
        let c = corpus(&["common", "common rare", "common other"]);
        let m = build_similarity_matrix(&c).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn foreign_sentence_is_rejected() {
        let c = corpus(&["alpha"]);
        let stranger = Sentence::new("x", "alpha");
        assert!(idf_modified_cosine(&stranger, &c.sentences()[0], &c).is_err());
    }

    #[test]
    fn single_sentence_matrix() {
        let m = build_similarity_matrix(&corpus(&["just one"])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn identical_sentences_give_all_ones() {
        // every token has idf 0 here
        let c = corpus(&["red apple", "red apple"]);
        let m = build_similarity_matrix(&c).unwrap();
        assert_eq!(m.values(), &DMatrix::from_element(2, 2, 1.0));

        let c = corpus(&["red apple", "red apple", "blue sky"]);
        let m = build_similarity_matrix(&c).unwrap();
        assert!((m.get(0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_token_sentence_never_matches() {
        let c = corpus(&["...", "!!!", "word"]);
        let m = build_similarity_matrix(&c).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn parse_mixed_ids() {
        let c = Corpus::parse("a1\tFirst one.\n\nSecond one.\n", "mem").unwrap();
        assert_eq!(c.ids(), vec!["a1", "s2"]);
        assert_eq!(c.n_verified(), 2);
        assert!(Corpus::parse("", "mem").is_err());
        assert!(Corpus::parse("\tno id\n", "mem").is_err());
        assert!(Corpus::parse("x\tone\nx\ttwo\n", "mem").is_err());
    }

    #[test]
    fn split_counts() {
        let c = corpus(&["a", "b", "c"]).split_at(2).unwrap();
        assert_eq!((c.n_verified(), c.n_generated()), (2, 1));
        assert!(corpus(&["a"]).split_at(2).is_err());
    }
}
