use serde::{Deserialize, Serialize};

use crate::clause::{Clause, OperatorTag, Synset};
use crate::corpus::ClausalForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleMode {
    /// Correct sense numbers of concepts whose lemma and pos appear in gold.
    Senses,
    /// Replace whole synsets by gold synsets.
    Synsets,
    /// Replace role names by gold role names.
    Roles,
}

impl OracleMode {
    pub const ALL: [OracleMode; 3] = [OracleMode::Senses, OracleMode::Synsets, OracleMode::Roles];

    pub fn label(&self) -> &'static str {
        match self {
            OracleMode::Senses => "oracle senses",
            OracleMode::Synsets => "oracle synsets",
            OracleMode::Roles => "oracle roles",
        }
    }
}

/// The symbol a mode may rewrite, if the clause has one.
enum Symbol<'a> {
    Synset(&'a Synset),
    Role(&'a str),
}

fn symbol(clause: &Clause, mode: OracleMode) -> Option<Symbol<'_>> {
    match (&clause.tag, mode) {
        (OperatorTag::Concept(s), OracleMode::Senses | OracleMode::Synsets) => Some(Symbol::Synset(s)),
        (OperatorTag::Role(r), OracleMode::Roles) => Some(Symbol::Role(r)),
        _ => None,
    }
}

fn same(a: &Symbol, b: &Symbol) -> bool {
    match (a, b) {
        (Symbol::Synset(x), Symbol::Synset(y)) => x == y,
        (Symbol::Role(x), Symbol::Role(y)) => x == y,
        _ => false,
    }
}

/// Rewrites system symbols towards gold for an upper-bound analysis.
///
/// System clauses whose symbol already occurs in gold claim a gold clause
/// with that symbol and stay as they are. The others take the symbol of the
/// first unclaimed compatible gold clause, in clause order; under `Senses` a
/// gold clause is compatible when it has the same lemma and part of speech.
/// Symbols that cannot occur in gold are the only ones changed, so no
/// mapping loses a match.
pub fn oracle_transform(system: &ClausalForm, gold: &ClausalForm, mode: OracleMode) -> ClausalForm {
    let gold_symbols: Vec<Symbol> = gold.clauses.iter().filter_map(|c| symbol(c, mode)).collect();
    let mut claimed = vec![false; gold_symbols.len()];

    let mut rewrite = vec![false; system.clauses.len()];
    for (i, clause) in system.clauses.iter().enumerate() {
        let Some(sym) = symbol(clause, mode) else { continue };
        if !gold_symbols.iter().any(|g| same(g, &sym)) {
            rewrite[i] = true;
            continue;
        }
        if let Some(j) = (0..gold_symbols.len()).find(|&j| !claimed[j] && same(&gold_symbols[j], &sym)) {
            claimed[j] = true;
        }
    }

    let clauses = system
        .clauses
        .iter()
        .zip(&rewrite)
        .map(|(clause, &rewrite)| {
            if !rewrite {
                return clause.clone();
            }
            let compatible = |g: &Symbol| match (symbol(clause, mode), g) {
                (Some(Symbol::Synset(s)), Symbol::Synset(t)) => {
                    mode == OracleMode::Synsets || (s.lemma == t.lemma && s.pos == t.pos)
                }
                (Some(Symbol::Role(_)), Symbol::Role(_)) => true,
                _ => false,
            };
            let Some(j) = (0..gold_symbols.len()).find(|&j| !claimed[j] && compatible(&gold_symbols[j])) else {
                return clause.clone();
            };
            claimed[j] = true;
            let mut out = clause.clone();
            match &gold_symbols[j] {
                Symbol::Synset(t) => {
                    out.tag = OperatorTag::Concept((*t).clone());
                    out.args[0] = crate::clause::Term::constant(t.pos_sense());
                }
                Symbol::Role(r) => out.tag = OperatorTag::Role(r.to_string()),
            }
            out
        })
        .collect();
    system.with_clauses(clauses)
}
