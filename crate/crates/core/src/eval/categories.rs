use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::clause::{Clause, OperatorTag, PartOfSpeech};
use crate::corpus::ClausalForm;
use crate::counter::{strip_redundant_refs, ClauseCounts, MatchConfig, MatchResult};

use super::is_operator;

/// Clause groups for the fine-grained breakdown. `Operators`, `Roles` and
/// `Synsets` partition all clauses; `SynsetsByPos` splits `Synsets`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClauseCategory {
    Operators,
    Roles,
    Synsets,
    SynsetsByPos(PartOfSpeech),
}

impl ClauseCategory {
    pub fn of(clause: &Clause) -> ClauseCategory {
        match &clause.tag {
            OperatorTag::Role(_) => ClauseCategory::Roles,
            OperatorTag::Concept(_) => ClauseCategory::Synsets,
            tag => {
                debug_assert!(is_operator(tag));
                ClauseCategory::Operators
            }
        }
    }

    /// The category and, for concepts, the part-of-speech refinement.
    fn all_of(clause: &Clause) -> impl Iterator<Item = ClauseCategory> {
        let pos = clause.synset().map(|s| ClauseCategory::SynsetsByPos(s.pos));
        std::iter::once(ClauseCategory::of(clause)).chain(pos)
    }

    pub fn label(&self) -> String {
        match self {
            ClauseCategory::Operators => "operators".into(),
            ClauseCategory::Roles => "roles".into(),
            ClauseCategory::Synsets => "synsets".into(),
            ClauseCategory::SynsetsByPos(p) => match p {
                PartOfSpeech::Noun => "nouns",
                PartOfSpeech::Verb => "verbs",
                PartOfSpeech::Adjective => "adjectives",
                PartOfSpeech::Adverb => "adverbs",
            }
            .into(),
        }
    }

    /// Every category, in report order.
    pub fn all() -> Vec<ClauseCategory> {
        let mut out = vec![ClauseCategory::Operators, ClauseCategory::Roles, ClauseCategory::Synsets];
        out.extend(PartOfSpeech::ALL.iter().map(|p| ClauseCategory::SynsetsByPos(*p)));
        out
    }
}

/// Per-category scores under the mapping already found for the pair.
///
/// `config` must be the one used to produce `result`, so that the same
/// redundant `REF` clauses are left out.
pub fn fine_grained(
    system: &ClausalForm,
    gold: &ClausalForm,
    result: &MatchResult,
    config: &MatchConfig,
) -> BTreeMap<ClauseCategory, MatchResult> {
    let (system, gold) = if config.include_ref {
        (system.clone(), gold.clone())
    } else {
        (strip_redundant_refs(system), strip_redundant_refs(gold))
    };
    let mut counts: BTreeMap<ClauseCategory, ClauseCounts> =
        ClauseCategory::all().into_iter().map(|c| (c, ClauseCounts::default())).collect();

    let mut remaining: HashMap<Clause, usize> = HashMap::new();
    for g in &gold.clauses {
        *remaining.entry(g.without_alignment()).or_default() += 1;
        for c in ClauseCategory::all_of(g) {
            counts.get_mut(&c).expect("listed").gold += 1;
        }
    }
    for s in &system.clauses {
        let hit = result.mapping.apply(s).and_then(|image| remaining.get_mut(&image)).filter(|n| **n > 0);
        let matched = match hit {
            Some(n) => {
                *n -= 1;
                1
            }
            None => 0,
        };
        for c in ClauseCategory::all_of(s) {
            let entry = counts.get_mut(&c).expect("listed");
            entry.produced += 1;
            entry.matched += matched;
        }
    }
    counts.into_iter().map(|(c, n)| (c, MatchResult::from_counts(n))).collect()
}
