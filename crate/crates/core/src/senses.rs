//! Sense normalization: mapping word senses to a canonical synset so that
//! synonyms (`fox.n.02`, `dodger.n.01`) compare equal.

use std::collections::HashMap;

use thiserror::Error;

use crate::clause::{Clause, Synset, Term};
use crate::corpus::ClausalForm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynsetMapError {
    #[error("line {line}: expected `lemma.pos.sense<TAB>lemma.pos.sense`")]
    BadRecord { line: usize },
    #[error("line {line}: {message}")]
    BadSynset { line: usize, message: String },
    #[error("mapping cycle through {0}")]
    Cycle(Synset),
}

/// Association from a sense to its canonical sense.
///
/// Chains are resolved on construction so that lookups are idempotent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynsetMap {
    canonical: HashMap<Synset, Synset>,
}

impl SynsetMap {
    pub fn new() -> Self {
        SynsetMap::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, SynsetMapError>
    where
        I: IntoIterator<Item = (Synset, Synset)>,
    {
        let raw: HashMap<Synset, Synset> = pairs.into_iter().filter(|(k, v)| k != v).collect();
        let mut canonical = HashMap::with_capacity(raw.len());
        for start in raw.keys() {
            let mut current = start;
            let mut steps = 0;
            while let Some(next) = raw.get(current) {
                current = next;
                steps += 1;
                if steps > raw.len() {
                    return Err(SynsetMapError::Cycle(start.clone()));
                }
            }
            canonical.insert(start.clone(), current.clone());
        }
        Ok(SynsetMap { canonical })
    }

    /// Parses the tab-separated file format; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, SynsetMapError> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (from, to) = line
                .split_once('\t')
                .ok_or(SynsetMapError::BadRecord { line: i + 1 })?;
            let parse = |s: &str| {
                s.trim().parse::<Synset>().map_err(|e| SynsetMapError::BadSynset {
                    line: i + 1,
                    message: e.to_string(),
                })
            };
            pairs.push((parse(from)?, parse(to)?));
        }
        SynsetMap::from_pairs(pairs)
    }

    /// The canonical sense; keys not in the map are their own canonical form.
    pub fn canonical<'a>(&'a self, synset: &'a Synset) -> &'a Synset {
        self.canonical.get(synset).unwrap_or(synset)
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
}

/// Replaces the sense of every concept clause by its canonical sense.
pub fn normalize_senses(form: &ClausalForm, map: &SynsetMap) -> ClausalForm {
    let clauses = form
        .clauses
        .iter()
        .map(|clause| {
            let referent = clause.args.get(1).and_then(Term::as_variable);
            match (clause.synset(), referent) {
                (Some(synset), Some(referent)) if map.canonical(synset) != synset => {
                    Clause::concept(clause.box_label.clone(), map.canonical(synset).clone(), referent.clone())
                        .with_alignment(clause.alignment.clone())
                }
                _ => clause.clone(),
            }
        })
        .collect();
    form.with_clauses(clauses)
}
