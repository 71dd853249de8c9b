//! Two non-neural predictors.
//!
//! SPAR answers every sentence with one fixed DRS: the training DRS most
//! similar on average to all others. SIM-SPAR answers with the DRS of the
//! training sentence whose averaged word embedding is closest in cosine.

use std::collections::HashMap;
use std::io::{self, BufRead};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::ClausalForm;
use crate::counter::{match_score, MatchConfig, MatchError};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("training corpus is empty")]
    EmptyTraining,
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error("line {line}: {message}")]
    Embedding { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Word vectors keyed by lowercase token, all of one dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Adds a vector unless the token (lowercased) is already present.
    /// Returns false when the dimension is wrong.
    pub fn insert(&mut self, token: &str, vector: Vec<f64>) -> bool {
        if vector.len() != self.dim {
            return false;
        }
        self.vectors.entry(token.to_lowercase()).or_insert(vector);
        true
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(&token.to_lowercase()).map(Vec::as_slice)
    }

    /// Parses `token v1 v2 ... vd` lines. The first line fixes the
    /// dimension; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, BaselineError> {
        Self::read(text.as_bytes())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self, BaselineError> {
        let mut table: Option<EmbeddingTable> = None;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let mut fields = line.split_whitespace();
            let Some(token) = fields.next() else { continue };
            let vector = fields
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| BaselineError::Embedding {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            let table = table.get_or_insert_with(|| EmbeddingTable::new(vector.len()));
            let found = vector.len();
            if !table.insert(token, vector) {
                return Err(BaselineError::Embedding {
                    line: i + 1,
                    message: format!("expected {} values, found {found}", table.dim),
                });
            }
        }
        Ok(table.unwrap_or_default())
    }

    /// Multiplies every vector by `factor`.
    pub fn scaled(&self, factor: f64) -> EmbeddingTable {
        EmbeddingTable {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|x| x * factor).collect()))
                .collect(),
        }
    }
}

/// Lowercases, splits on whitespace and trims ASCII punctuation from both
/// ends of each token.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Mean vector of the in-vocabulary tokens; zero when none are known.
pub fn embed_sentence<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> Vec<f64> {
    let mut sum = vec![0.0; table.dim()];
    let mut n = 0usize;
    for v in tokens.iter().filter_map(|t| table.get(t.as_ref())) {
        for (s, x) in sum.iter_mut().zip(v) {
            *s += x;
        }
        n += 1;
    }
    if n > 0 {
        for s in &mut sum {
            *s /= n as f64;
        }
    }
    sum
}

/// Cosine similarity, taken as -1 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        -1.0
    } else {
        dot / (na * nb)
    }
}

/// Index of the training DRS with the highest mean f1 against the others.
///
/// With `sample`, the mean runs over a seeded random subset of that size
/// (shared by all candidates) instead of the whole corpus.
pub fn spar_select_index(
    training: &[ClausalForm],
    config: &MatchConfig,
    sample: Option<usize>,
) -> Result<usize, BaselineError> {
    if training.is_empty() {
        return Err(BaselineError::EmptyTraining);
    }
    let n = training.len();
    let reference: Vec<usize> = match sample {
        Some(k) if k < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut picked = index::sample(&mut rng, n, k).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..n).collect(),
    };
    let mut best = (0, f64::NEG_INFINITY);
    for (i, candidate) in training.iter().enumerate() {
        let others: Vec<usize> = reference.iter().copied().filter(|&j| j != i).collect();
        let mut total = 0.0;
        for &j in &others {
            total += match_score(candidate, &training[j], config)?.f1;
        }
        let mean = if others.is_empty() { 0.0 } else { total / others.len() as f64 };
        if mean > best.1 {
            best = (i, mean);
        }
    }
    Ok(best.0)
}

pub fn spar_select(
    training: &[ClausalForm],
    config: &MatchConfig,
    sample: Option<usize>,
) -> Result<ClausalForm, BaselineError> {
    spar_select_index(training, config, sample).map(|i| training[i].clone())
}

/// `n` copies of the default DRS with ids `0..n`.
pub fn spar_predict(n: usize, default: &ClausalForm) -> Vec<ClausalForm> {
    (0..n)
        .map(|i| ClausalForm {
            doc_id: i.to_string(),
            ..default.clone()
        })
        .collect()
}

/// For each input sentence, the DRS of the most similar training sentence.
/// Outputs carry the input sentence as raw text and ids `0..n`.
pub fn sim_spar_predict<S: AsRef<str>>(
    inputs: &[S],
    training: &[(String, ClausalForm)],
    table: &EmbeddingTable,
) -> Result<Vec<ClausalForm>, BaselineError> {
    if training.is_empty() {
        return Err(BaselineError::EmptyTraining);
    }
    let train: Vec<Vec<f64>> = training.iter().map(|(s, _)| embed_sentence(&tokenize(s), table)).collect();
    Ok(inputs
        .iter()
        .enumerate()
        .map(|(i, input)| {
            let v = embed_sentence(&tokenize(input.as_ref()), table);
            let mut best = (0, f64::NEG_INFINITY);
            for (j, t) in train.iter().enumerate() {
                let sim = cosine(&v, t);
                if sim > best.1 {
                    best = (j, sim);
                }
            }
            ClausalForm::new(i.to_string(), input.as_ref(), training[best.0].1.clauses.clone())
        })
        .collect())
}

/// Training pairs from a corpus, using each document's raw text.
pub fn training_pairs(corpus: &[ClausalForm]) -> Vec<(String, ClausalForm)> {
    corpus.iter().map(|d| (d.raw_text.clone(), d.clone())).collect()
}
