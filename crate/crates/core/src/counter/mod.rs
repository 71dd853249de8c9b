//! Clause-level F-score between a system DRS and a gold DRS.
//!
//! Variables are aligned by an injective, kind-preserving mapping from system
//! variables to gold variables. A system clause counts as matched when its
//! image under the mapping is identical to a gold clause not already claimed.
//! The best mapping is found by hill-climbing with restarts, or by exact
//! search for small instances.
//!
//! Redundant `REF` clauses (`b REF x` where the same box also has a concept
//! clause on `x`) are removed from both sides before matching unless
//! [`MatchConfig::include_ref`] is set.

mod problem;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clause::{Clause, OperatorTag, Term, Variable};
use crate::corpus::ClausalForm;

pub(crate) use problem::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Search {
    HillClimb,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub search: Search,
    pub include_ref: bool,
    /// Seed the first restart from concept and role co-occurrence.
    pub smart_init: bool,
    /// Largest per-kind variable count (on the smaller side) accepted by
    /// exhaustive search.
    pub exhaustive_limit: usize,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            restarts: 10,
            seed: 0,
            search: Search::HillClimb,
            include_ref: false,
            smart_init: true,
            exhaustive_limit: 10,
        }
    }
}

impl MatchConfig {
    pub fn exhaustive() -> Self {
        MatchConfig {
            search: Search::Exhaustive,
            ..MatchConfig::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("restarts must be at least 1")]
    NoRestarts,
    #[error("exhaustive search over {count} variables exceeds the limit of {limit}")]
    SearchSpaceTooLarge { count: usize, limit: usize },
}

/// Injective partial mapping from system variables to gold variables, in
/// system first-occurrence order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMapping(pub Vec<(Variable, Variable)>);

impl VariableMapping {
    pub fn get(&self, var: &Variable) -> Option<&Variable> {
        self.0.iter().find(|(s, _)| s == var).map(|(_, g)| g)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rewrites a clause's variables; `None` when any variable is unmapped.
    pub fn apply(&self, clause: &Clause) -> Option<Clause> {
        let box_label = self.get(&clause.box_label)?.clone();
        let args = clause
            .args
            .iter()
            .map(|a| match a {
                Term::Variable(v) => self.get(v).cloned().map(Term::Variable),
                Term::Constant(_) => Some(a.clone()),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Clause {
            box_label,
            tag: clause.tag.clone(),
            args,
            alignment: Vec::new(),
        })
    }
}

/// Matched, produced and gold clause counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCounts {
    pub matched: usize,
    pub produced: usize,
    pub gold: usize,
}

impl ClauseCounts {
    pub fn new(matched: usize, produced: usize, gold: usize) -> Self {
        ClauseCounts { matched, produced, gold }
    }

    pub fn precision(&self) -> f64 {
        ratio(self.matched, self.produced)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.matched, self.gold)
    }

    pub fn f1(&self) -> f64 {
        f_score(self.precision(), self.recall())
    }
}

impl std::ops::Add for ClauseCounts {
    type Output = ClauseCounts;

    fn add(self, o: ClauseCounts) -> ClauseCounts {
        ClauseCounts::new(self.matched + o.matched, self.produced + o.produced, self.gold + o.gold)
    }
}

impl std::iter::Sum for ClauseCounts {
    fn sum<I: Iterator<Item = ClauseCounts>>(iter: I) -> Self {
        iter.fold(ClauseCounts::default(), |a, b| a + b)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub mapping: VariableMapping,
    pub matched: usize,
    pub produced: usize,
    pub gold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MatchResult {
    pub fn from_counts(counts: ClauseCounts) -> Self {
        MatchResult::with_mapping(VariableMapping::default(), counts)
    }

    pub fn with_mapping(mapping: VariableMapping, counts: ClauseCounts) -> Self {
        MatchResult {
            mapping,
            matched: counts.matched,
            produced: counts.produced,
            gold: counts.gold,
            precision: counts.precision(),
            recall: counts.recall(),
            f1: counts.f1(),
        }
    }

    pub fn counts(&self) -> ClauseCounts {
        ClauseCounts::new(self.matched, self.produced, self.gold)
    }
}

/// Whether `b REF x` is redundant: the same box has a concept clause on `x`.
fn is_redundant_ref(clause: &Clause, form: &ClausalForm) -> bool {
    if clause.tag != OperatorTag::Ref {
        return false;
    }
    let Some(referent) = clause.args.first() else {
        return false;
    };
    form.clauses.iter().any(|c| {
        matches!(c.tag, OperatorTag::Concept(_)) && c.box_label == clause.box_label && c.args.last() == Some(referent)
    })
}

/// Drops redundant `REF` clauses, keeping everything else in order.
pub fn strip_redundant_refs(form: &ClausalForm) -> ClausalForm {
    let clauses = form
        .clauses
        .iter()
        .filter(|c| !is_redundant_ref(c, form))
        .cloned()
        .collect();
    form.with_clauses(clauses)
}

/// Scores `system` against `gold` under the best mapping found.
pub fn match_score(system: &ClausalForm, gold: &ClausalForm, config: &MatchConfig) -> Result<MatchResult, MatchError> {
    if config.restarts == 0 {
        return Err(MatchError::NoRestarts);
    }
    let (system, gold) = if config.include_ref {
        (system.clone(), gold.clone())
    } else {
        (strip_redundant_refs(system), strip_redundant_refs(gold))
    };
    let problem = Problem::new(&system.clauses, &gold.clauses);
    let assignment = match config.search {
        Search::HillClimb => search::hill_climb(&problem, config),
        Search::Exhaustive => {
            let count = problem.largest_kind_overlap();
            if count > config.exhaustive_limit {
                return Err(MatchError::SearchSpaceTooLarge {
                    count,
                    limit: config.exhaustive_limit,
                });
            }
            search::exhaustive(&problem)
        }
    };
    let matched = problem.score(&assignment);
    Ok(MatchResult::with_mapping(
        problem.mapping(&assignment),
        ClauseCounts::new(matched, system.clauses.len(), gold.clauses.len()),
    ))
}

/// Sums counts over documents and recomputes the scores.
pub fn micro_average(results: &[MatchResult]) -> MatchResult {
    MatchResult::from_counts(results.iter().map(MatchResult::counts).sum())
}
