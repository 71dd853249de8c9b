//! Corpus-level evaluation and the analyses built on it.
//!
//! Ill-formed system documents are not scored as they stand: they are
//! replaced by a single clause that cannot match gold, so they cost one
//! produced clause and all of their gold clauses.

mod categories;
mod length;
mod oracle;
mod report;
mod significance;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clause::{Clause, OperatorTag, PartOfSpeech, Synset, Variable};
use crate::corpus::{has_default_ids, ClausalForm};
use crate::counter::{match_score, micro_average, MatchConfig, MatchError, MatchResult};
use crate::referee::validate;
use crate::senses::{normalize_senses, SynsetMap};

pub use categories::{fine_grained, ClauseCategory};
pub use length::{length_breakdown, token_count, token_counts_from, LengthBucket};
pub use oracle::{oracle_transform, OracleMode};
pub use report::{analyze, AnalysisReport};
pub use significance::{approx_randomization, SignificanceResult};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("{left} documents against {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("document {0} has no counterpart")]
    UnpairedDocument(String),
    #[error("at least one randomization round is required")]
    NoRounds,
    #[error(transparent)]
    Match(#[from] MatchError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocScore {
    pub doc_id: String,
    pub result: MatchResult,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    pub per_doc: Vec<DocScore>,
    pub micro: MatchResult,
    pub perfect_count: usize,
    pub ill_formed_count: usize,
}

impl CorpusScore {
    fn from_docs(per_doc: Vec<DocScore>) -> CorpusScore {
        let results: Vec<MatchResult> = per_doc.iter().map(|d| d.result.clone()).collect();
        CorpusScore {
            micro: micro_average(&results),
            perfect_count: per_doc.iter().filter(|d| d.result.f1 == 1.0).count(),
            ill_formed_count: per_doc.iter().filter(|d| !d.valid).count(),
            per_doc,
        }
    }

    pub fn counts(&self) -> Vec<crate::counter::ClauseCounts> {
        self.per_doc.iter().map(|d| d.result.counts()).collect()
    }
}

/// A system/gold pair ready for matching: sense-normalized, and with an
/// ill-formed system form already replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedPair {
    pub doc_id: String,
    pub system: ClausalForm,
    pub gold: ClausalForm,
    pub valid: bool,
}

/// Lemma used for the replacement clause of ill-formed documents.
pub const RESERVED_LEMMA: &str = "ill_formed";

/// The one-clause stand-in for an ill-formed system form. Its lemma and
/// variables are chosen to be absent from `gold`.
pub fn replacement_form(system: &ClausalForm, gold: &ClausalForm) -> ClausalForm {
    let lemmas: HashSet<&str> = gold.clauses.iter().filter_map(|c| c.synset()).map(|s| s.lemma.as_str()).collect();
    let mut lemma = RESERVED_LEMMA.to_string();
    while lemmas.contains(lemma.as_str()) {
        lemma.push('_');
    }
    let used: HashSet<&str> = gold.clauses.iter().flat_map(Clause::variables).map(Variable::as_str).collect();
    let fresh = |prefix: &str| {
        (0..)
            .map(|i| format!("{prefix}{i}"))
            .find(|v| !used.contains(v.as_str()))
            .and_then(|v| Variable::new(v).ok())
            .expect("an unused name exists")
    };
    let clause = Clause::concept(fresh("b"), Synset::new(lemma, PartOfSpeech::Noun, 99), fresh("x"));
    system.with_clauses(vec![clause])
}

/// Pairs documents by id when both sides carry the same ids, otherwise by
/// position when either side has default sequential ids.
fn pair_indices(system: &[ClausalForm], gold: &[ClausalForm]) -> Result<Vec<usize>, EvalError> {
    if system.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            left: system.len(),
            right: gold.len(),
        });
    }
    let by_id: HashMap<&str, usize> = gold.iter().enumerate().map(|(i, g)| (g.doc_id.as_str(), i)).collect();
    let unique = by_id.len() == gold.len();
    if let Some(pairs) = unique
        .then(|| system.iter().map(|s| by_id.get(s.doc_id.as_str()).copied()).collect::<Option<Vec<_>>>())
        .flatten()
    {
        let distinct: HashSet<usize> = pairs.iter().copied().collect();
        if distinct.len() == pairs.len() {
            return Ok(pairs);
        }
    }
    if has_default_ids(system) || has_default_ids(gold) {
        return Ok((0..system.len()).collect());
    }
    let missing = system
        .iter()
        .find(|s| !by_id.contains_key(s.doc_id.as_str()))
        .or(system.first())
        .map(|s| s.doc_id.clone())
        .unwrap_or_default();
    Err(EvalError::UnpairedDocument(missing))
}

/// Pairs, normalizes and validates the documents of two corpora.
pub fn prepare(
    system: &[ClausalForm],
    gold: &[ClausalForm],
    map: Option<&SynsetMap>,
) -> Result<Vec<PreparedPair>, EvalError> {
    let pairs = pair_indices(system, gold)?;
    Ok(system
        .iter()
        .zip(pairs)
        .map(|(s, gi)| {
            let g = &gold[gi];
            let (s, g) = match map {
                Some(map) => (normalize_senses(s, map), normalize_senses(g, map)),
                None => (s.clone(), g.clone()),
            };
            let valid = validate(&s).valid;
            let s = if valid { s } else { replacement_form(&s, &g) };
            PreparedPair {
                doc_id: g.doc_id.clone(),
                system: s,
                gold: g,
                valid,
            }
        })
        .collect())
}

pub fn score_prepared(pairs: &[PreparedPair], config: &MatchConfig) -> Result<CorpusScore, EvalError> {
    let per_doc = pairs
        .iter()
        .map(|p| {
            Ok(DocScore {
                doc_id: p.doc_id.clone(),
                result: match_score(&p.system, &p.gold, config)?,
                valid: p.valid,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(CorpusScore::from_docs(per_doc))
}

/// Scores a system corpus against gold.
pub fn score_corpus(
    system: &[ClausalForm],
    gold: &[ClausalForm],
    config: &MatchConfig,
    map: Option<&SynsetMap>,
) -> Result<CorpusScore, EvalError> {
    score_prepared(&prepare(system, gold, map)?, config)
}

/// Micro F of every output against every other, row as system and column
/// as gold. The diagonal is `None`.
pub fn pairwise_matrix(outputs: &[Vec<ClausalForm>], config: &MatchConfig) -> Result<Vec<Vec<Option<f64>>>, EvalError> {
    if let Some(first) = outputs.first() {
        if let Some(other) = outputs.iter().find(|o| o.len() != first.len()) {
            return Err(EvalError::LengthMismatch {
                left: first.len(),
                right: other.len(),
            });
        }
    }
    let mut matrix = vec![vec![None; outputs.len()]; outputs.len()];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = Some(score_corpus(&outputs[i], &outputs[j], config, None)?.micro.f1);
            }
        }
    }
    Ok(matrix)
}

/// Which system the per-document oracle picks for each document: the
/// highest f1, ties to the lowest system index.
pub fn ensemble_choices(scores: &[CorpusScore]) -> Vec<usize> {
    let docs = scores.first().map_or(0, |s| s.per_doc.len());
    (0..docs)
        .map(|d| {
            let mut best = 0;
            for (i, s) in scores.iter().enumerate() {
                if s.per_doc[d].result.f1 > scores[best].per_doc[d].result.f1 {
                    best = i;
                }
            }
            best
        })
        .collect()
}

/// Micro score of picking the best system output for every document.
pub fn ensemble_oracle(
    outputs: &[Vec<ClausalForm>],
    gold: &[ClausalForm],
    config: &MatchConfig,
) -> Result<MatchResult, EvalError> {
    let scores = outputs
        .iter()
        .map(|o| score_corpus(o, gold, config, None))
        .collect::<Result<Vec<_>, _>>()?;
    let kept: Vec<MatchResult> = ensemble_choices(&scores)
        .into_iter()
        .enumerate()
        .map(|(d, i)| scores[i].per_doc[d].result.clone())
        .collect();
    Ok(micro_average(&kept))
}

/// Category of a clause by its tag.
pub(crate) fn is_operator(tag: &OperatorTag) -> bool {
    !matches!(tag, OperatorTag::Role(_) | OperatorTag::Concept(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::ClauseCounts;
    use crate::fixtures::{self, load};

    fn with_id(mut f: ClausalForm, id: &str) -> ClausalForm {
        f.doc_id = id.into();
        f
    }

    #[test]
    fn gold_against_gold() {
        let gold: Vec<_> = fixtures::ALL.iter().enumerate().map(|(i, t)| with_id(load(t), &i.to_string())).collect();
        let s = score_corpus(&gold, &gold, &MatchConfig::default(), None).unwrap();
        assert_eq!(s.micro.f1, 1.0);
        assert_eq!(s.perfect_count, gold.len());
        assert_eq!(s.ill_formed_count, 0);
    }

    #[test]
    fn everything_new_plus_identity() {
        let sys = vec![load(fixtures::EVERYTHING_NEW_SYSTEM), with_id(load(fixtures::EVERYTHING_NEW_GOLD), "1")];
        let gold = vec![load(fixtures::EVERYTHING_NEW_GOLD), with_id(load(fixtures::EVERYTHING_NEW_GOLD), "1")];
        let s = score_corpus(&sys, &gold, &MatchConfig::exhaustive(), None).unwrap();
        assert_eq!(s.micro.counts(), ClauseCounts::new(10, 14, 14));
        assert!((s.micro.f1 - 10.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn unbound_referent_is_replaced() {
        let gold = load(fixtures::TOM_AFRAID);
        let mut broken = gold.clone();
        broken.clauses.retain(|c| c.to_string() != "b1 REF x1");
        assert!(!validate(&broken).valid);
        let s = score_corpus(&[broken], std::slice::from_ref(&gold), &MatchConfig::default(), None).unwrap();
        let g = crate::counter::strip_redundant_refs(&gold).clauses.len();
        assert_eq!(s.per_doc[0].result.counts(), ClauseCounts::new(0, 1, g));
        assert!(!s.per_doc[0].valid);
        assert_eq!(s.ill_formed_count, 1);
    }

    #[test]
    fn replacement_avoids_gold_names() {
        let gold = load(fixtures::TOM_AFRAID);
        let r = replacement_form(&gold, &gold);
        let c = &r.clauses[0];
        assert!(gold.clauses.iter().all(|g| !g.variables().any(|v| c.variables().any(|w| v == w))));
        assert_eq!(c.synset().unwrap().pos_sense(), "n.99");
    }

    #[test]
    fn pairing() {
        let a = with_id(load(fixtures::TOM_AFRAID), "a");
        let b = with_id(load(fixtures::NICK_LEESON), "b");
        // by id, regardless of order
        let pairs = prepare(&[b.clone(), a.clone()], &[a.clone(), b.clone()], None).unwrap();
        assert_eq!(pairs[0].gold, b);
        // different ids on both sides cannot be paired
        let c = with_id(load(fixtures::TOM_AFRAID), "c");
        assert_eq!(
            prepare(&[c.clone(), b.clone()], &[a.clone(), b.clone()], None).unwrap_err(),
            EvalError::UnpairedDocument("c".into())
        );
        // default ids on one side pair by position
        let plain = parse_defaults(&[fixtures::NICK_LEESON, fixtures::TOM_AFRAID]);
        let pairs = prepare(&plain, &[a.clone(), b.clone()], None).unwrap();
        assert_eq!(pairs[0].gold, a);
        assert_eq!(
            prepare(&plain[..1], &[a, b], None).unwrap_err(),
            EvalError::LengthMismatch { left: 1, right: 2 }
        );
    }

    fn parse_defaults(texts: &[&str]) -> Vec<ClausalForm> {
        texts.iter().enumerate().map(|(i, t)| with_id(load(t), &i.to_string())).collect()
    }

    #[test]
    fn all_invalid_scores_zero() {
        let gold = parse_defaults(&[fixtures::TOM_AFRAID, fixtures::HIS_MONEY]);
        let bad: Vec<_> = gold
            .iter()
            .map(|g| g.with_clauses(vec!["b1 NOT b1".parse().unwrap()]))
            .collect();
        let s = score_corpus(&bad, &gold, &MatchConfig::default(), None).unwrap();
        assert_eq!(s.micro.precision, 0.0);
        assert_eq!(s.micro.recall, 0.0);
        assert_eq!(s.ill_formed_count, 2);
    }

    #[test]
    fn pairwise_identical() {
        let c = parse_defaults(&[fixtures::TOM_AFRAID]);
        let m = pairwise_matrix(&[c.clone(), c], &MatchConfig::default()).unwrap();
        assert_eq!(m, vec![vec![None, Some(1.0)], vec![Some(1.0), None]]);
    }

    #[test]
    fn ensemble_complementary() {
        let gold = parse_defaults(&[fixtures::TOM_AFRAID, fixtures::HIS_MONEY]);
        let bad = |f: &ClausalForm| f.with_clauses(vec!["b1 NOT b1".parse().unwrap()]);
        let a = vec![gold[0].clone(), bad(&gold[1])];
        let b = vec![bad(&gold[0]), gold[1].clone()];
        let config = MatchConfig::default();
        assert_eq!(ensemble_oracle(&[a.clone(), b], &gold, &config).unwrap().f1, 1.0);
        let single = ensemble_oracle(std::slice::from_ref(&a), &gold, &config).unwrap();
        assert_eq!(single, score_corpus(&a, &gold, &config, None).unwrap().micro);
    }
}
