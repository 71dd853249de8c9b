use std::collections::HashMap;

use crate::clause::{Clause, OperatorTag, Term, Variable};
use crate::referee::{variable_positions, VarKind};

use super::VariableMapping;

/// System variable index to gold variable index.
pub(crate) type Assignment = Vec<Option<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Var(usize),
    Const(String),
}

/// A clause with variables replaced by indices, plus its multiplicity.
#[derive(Clone, Debug)]
pub(crate) struct Pattern {
    pub tag: OperatorTag,
    pub slots: Vec<Slot>,
    pub count: usize,
}

/// A system/gold clause pair that matches once every variable pair in
/// `needs` is part of the mapping.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub weight: usize,
    pub needs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Side {
    pub vars: Vec<Variable>,
    pub kinds: Vec<VarKind>,
    pub patterns: Vec<Pattern>,
}

impl Side {
    fn new(clauses: &[Clause]) -> Side {
        let mut index: HashMap<&Variable, usize> = HashMap::new();
        let mut vars = Vec::new();
        let mut kinds = Vec::new();
        for clause in clauses {
            for (v, kind) in variable_positions(clause) {
                let i = *index.entry(v).or_insert_with(|| {
                    vars.push(v.clone());
                    kinds.push(kind);
                    vars.len() - 1
                });
                // a variable seen in any box position counts as a box label
                if kind == VarKind::BoxLabel {
                    kinds[i] = VarKind::BoxLabel;
                }
            }
        }
        let mut patterns: Vec<Pattern> = Vec::new();
        let mut seen: HashMap<Clause, usize> = HashMap::new();
        for clause in clauses {
            let key = clause.without_alignment();
            if let Some(&p) = seen.get(&key) {
                patterns[p].count += 1;
                continue;
            }
            let slots = std::iter::once(Slot::Var(index[&clause.box_label]))
                .chain(clause.args.iter().map(|a| match a {
                    Term::Variable(v) => Slot::Var(index[v]),
                    Term::Constant(c) => Slot::Const(c.clone()),
                }))
                .collect();
            seen.insert(key, patterns.len());
            patterns.push(Pattern {
                tag: clause.tag.clone(),
                slots,
                count: 1,
            });
        }
        Side { vars, kinds, patterns }
    }

    pub fn of_kind(&self, kind: VarKind) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.kinds[i] == kind).collect()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub system: Side,
    pub gold: Side,
    pub candidates: Vec<Candidate>,
    /// Candidates mentioning each system variable.
    pub by_system_var: Vec<Vec<usize>>,
    /// Gold variables of each kind, in first-occurrence order.
    pub gold_by_kind: [Vec<usize>; 2],
}

pub(crate) fn kind_index(kind: VarKind) -> usize {
    match kind {
        VarKind::BoxLabel => 0,
        VarKind::Referent => 1,
    }
}

impl Problem {
    pub fn new(system: &[Clause], gold: &[Clause]) -> Problem {
        let system = Side::new(system);
        let gold = Side::new(gold);
        let mut gold_by_tag: HashMap<&OperatorTag, Vec<usize>> = HashMap::new();
        for (i, p) in gold.patterns.iter().enumerate() {
            gold_by_tag.entry(&p.tag).or_default().push(i);
        }
        let mut candidates = Vec::new();
        for s in &system.patterns {
            for &gi in gold_by_tag.get(&s.tag).map(Vec::as_slice).unwrap_or(&[]) {
                let g = &gold.patterns[gi];
                if let Some(needs) = pair_needs(s, g, &system.kinds, &gold.kinds) {
                    candidates.push(Candidate {
                        weight: s.count.min(g.count),
                        needs,
                    });
                }
            }
        }
        let mut by_system_var = vec![Vec::new(); system.vars.len()];
        for (ci, c) in candidates.iter().enumerate() {
            for &(sv, _) in &c.needs {
                by_system_var[sv].push(ci);
            }
        }
        let gold_by_kind = [gold.of_kind(VarKind::BoxLabel), gold.of_kind(VarKind::Referent)];
        Problem {
            system,
            gold,
            candidates,
            by_system_var,
            gold_by_kind,
        }
    }

    pub fn is_satisfied(&self, candidate: usize, assignment: &[Option<usize>]) -> bool {
        self.candidates[candidate]
            .needs
            .iter()
            .all(|&(s, g)| assignment[s] == Some(g))
    }

    pub fn score(&self, assignment: &[Option<usize>]) -> usize {
        (0..self.candidates.len())
            .filter(|&c| self.is_satisfied(c, assignment))
            .map(|c| self.candidates[c].weight)
            .sum()
    }

    pub fn mapping(&self, assignment: &[Option<usize>]) -> VariableMapping {
        VariableMapping(
            assignment
                .iter()
                .enumerate()
                .filter_map(|(s, g)| g.map(|g| (self.system.vars[s].clone(), self.gold.vars[g].clone())))
                .collect(),
        )
    }

    /// Largest per-kind count of variables on the smaller side.
    pub fn largest_kind_overlap(&self) -> usize {
        [VarKind::BoxLabel, VarKind::Referent]
            .into_iter()
            .map(|k| self.system.of_kind(k).len().min(self.gold.of_kind(k).len()))
            .max()
            .unwrap_or(0)
    }
}

/// Variable pairs forced by matching `s` to `g`, or `None` when the clauses
/// can never match under an injective kind-preserving mapping.
fn pair_needs(s: &Pattern, g: &Pattern, s_kinds: &[VarKind], g_kinds: &[VarKind]) -> Option<Vec<(usize, usize)>> {
    if s.slots.len() != g.slots.len() {
        return None;
    }
    let mut needs: Vec<(usize, usize)> = Vec::with_capacity(s.slots.len());
    for (a, b) in s.slots.iter().zip(&g.slots) {
        match (a, b) {
            (Slot::Const(x), Slot::Const(y)) if x == y => {}
            (Slot::Var(sv), Slot::Var(gv)) => {
                if s_kinds[*sv] != g_kinds[*gv] {
                    return None;
                }
                let mut known = false;
                for &(ps, pg) in &needs {
                    if (ps == *sv) != (pg == *gv) {
                        return None;
                    }
                    known |= ps == *sv;
                }
                if !known {
                    needs.push((*sv, *gv));
                }
            }
            _ => return None,
        }
    }
    Some(needs)
}
