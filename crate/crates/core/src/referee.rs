//! Well-formedness checks and reconstruction of the recursive box structure.
//!
//! Validation runs in stages and collects every violation it finds:
//!
//! 1. clause shape (arity, constants where variables are required);
//! 2. variable typing: each variable is a box label or a discourse referent,
//!    never both;
//! 3. binding: every referent used in a condition is introduced by some `REF`,
//!    and no box introduces the same referent twice;
//! 4. structure: the subordination graph is acyclic, segmented boxes are
//!    consistent, and exactly one top-level box is the main box.
//!
//! Binding is global, not DRT accessibility along subordination chains.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clause::{Clause, OperatorTag, Synset, Term, Variable};
use crate::corpus::ClausalForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    BoxLabel,
    Referent,
}

/// Variables of a clause with the kind their position forces.
pub(crate) fn variable_positions(clause: &Clause) -> Vec<(&Variable, VarKind)> {
    let mut out = vec![(&clause.box_label, VarKind::BoxLabel)];
    let vars = clause.args.iter().map(Term::as_variable);
    match &clause.tag {
        OperatorTag::Ref | OperatorTag::Role(_) | OperatorTag::Comparison(_) => {
            out.extend(vars.flatten().map(|v| (v, VarKind::Referent)));
        }
        OperatorTag::Concept(_) => {
            out.extend(vars.skip(1).flatten().map(|v| (v, VarKind::Referent)));
        }
        OperatorTag::Prp => {
            let mut vars = vars;
            if let Some(Some(v)) = vars.next() {
                out.push((v, VarKind::Referent));
            }
            if let Some(Some(v)) = vars.next() {
                out.push((v, VarKind::BoxLabel));
            }
        }
        _ => out.extend(vars.flatten().map(|v| (v, VarKind::BoxLabel))),
    }
    out
}

/// Referents a clause uses as a condition argument (not `REF` introductions).
fn used_referents(clause: &Clause) -> impl Iterator<Item = &Variable> {
    let skip_ref = clause.tag == OperatorTag::Ref;
    variable_positions(clause)
        .into_iter()
        .filter(move |(_, kind)| !skip_ref && *kind == VarKind::Referent)
        .map(|(v, _)| v)
}

/// Box labels a clause embeds below its own box.
fn subordinated(clause: &Clause) -> Vec<&Variable> {
    match clause.tag {
        OperatorTag::Not | OperatorTag::Pos | OperatorTag::Nec | OperatorTag::Imp | OperatorTag::DrsMember => {
            clause.args.iter().filter_map(Term::as_variable).collect()
        }
        OperatorTag::Prp => clause.args.get(1).and_then(Term::as_variable).into_iter().collect(),
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableTyping {
    kinds: BTreeMap<Variable, VarKind>,
}

impl VariableTyping {
    pub fn kind(&self, var: &Variable) -> Option<VarKind> {
        self.kinds.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, VarKind)> {
        self.kinds.iter().map(|(v, k)| (v, *k))
    }

    pub fn of_kind(&self, kind: VarKind) -> BTreeSet<&Variable> {
        self.iter().filter(|(_, k)| *k == kind).map(|(v, _)| v).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("variable {variable} is used both as a box label and as a referent (clause {clause})")]
pub struct TypeConflict {
    pub variable: Variable,
    pub clause: usize,
}

fn collect_typing(form: &ClausalForm) -> (VariableTyping, Vec<TypeConflict>) {
    let mut kinds = BTreeMap::new();
    let mut conflicts: Vec<TypeConflict> = Vec::new();
    for (i, clause) in form.clauses.iter().enumerate() {
        for (var, kind) in variable_positions(clause) {
            match kinds.get(var) {
                None => {
                    kinds.insert(var.clone(), kind);
                }
                Some(k) if *k != kind && !conflicts.iter().any(|c| &c.variable == var) => {
                    conflicts.push(TypeConflict {
                        variable: var.clone(),
                        clause: i,
                    });
                }
                _ => {}
            }
        }
    }
    (VariableTyping { kinds }, conflicts)
}

/// Assigns each variable its kind from the positions it occupies.
pub fn infer_variable_types(form: &ClausalForm) -> Result<VariableTyping, TypeConflict> {
    let (typing, mut conflicts) = collect_typing(form);
    if conflicts.is_empty() {
        Ok(typing)
    } else {
        Err(conflicts.swap_remove(0))
    }
}

/// A condition inside a simple box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Concept { synset: Synset, referent: Variable },
    Role { name: String, left: Term, right: Term },
    Comparison { name: String, left: Term, right: Term },
    Not(Variable),
    Pos(Variable),
    Nec(Variable),
    Imp(Variable, Variable),
    Prp { referent: Variable, label: Variable },
}

impl Condition {
    fn from_clause(clause: &Clause) -> Option<Condition> {
        let var = |i: usize| clause.args.get(i).and_then(Term::as_variable).cloned();
        let term = |i: usize| clause.args.get(i).cloned();
        Some(match &clause.tag {
            OperatorTag::Concept(s) => Condition::Concept {
                synset: s.clone(),
                referent: var(1)?,
            },
            OperatorTag::Role(n) => Condition::Role {
                name: n.clone(),
                left: term(0)?,
                right: term(1)?,
            },
            OperatorTag::Comparison(n) => Condition::Comparison {
                name: n.clone(),
                left: term(0)?,
                right: term(1)?,
            },
            OperatorTag::Not => Condition::Not(var(0)?),
            OperatorTag::Pos => Condition::Pos(var(0)?),
            OperatorTag::Nec => Condition::Nec(var(0)?),
            OperatorTag::Imp => Condition::Imp(var(0)?, var(1)?),
            OperatorTag::Prp => Condition::Prp {
                referent: var(0)?,
                label: var(1)?,
            },
            _ => return None,
        })
    }

    fn to_clause(&self, label: &Variable) -> Clause {
        let b = label.clone();
        let v = |x: &Variable| Term::Variable(x.clone());
        let (tag, args) = match self {
            Condition::Concept { synset, referent } => return Clause::concept(b, synset.clone(), referent.clone()),
            Condition::Role { name, left, right } => (OperatorTag::Role(name.clone()), vec![left.clone(), right.clone()]),
            Condition::Comparison { name, left, right } => {
                (OperatorTag::Comparison(name.clone()), vec![left.clone(), right.clone()])
            }
            Condition::Not(x) => (OperatorTag::Not, vec![v(x)]),
            Condition::Pos(x) => (OperatorTag::Pos, vec![v(x)]),
            Condition::Nec(x) => (OperatorTag::Nec, vec![v(x)]),
            Condition::Imp(x, y) => (OperatorTag::Imp, vec![v(x), v(y)]),
            Condition::Prp { referent, label } => (OperatorTag::Prp, vec![v(referent), v(label)]),
        };
        Clause {
            box_label: b,
            tag,
            args,
            alignment: Vec::new(),
        }
    }

    /// Boxes embedded by this condition.
    pub fn embedded(&self) -> Vec<&Variable> {
        match self {
            Condition::Not(x) | Condition::Pos(x) | Condition::Nec(x) => vec![x],
            Condition::Imp(x, y) => vec![x, y],
            Condition::Prp { label, .. } => vec![label],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseCondition {
    pub relation: String,
    pub left: Variable,
    pub right: Variable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleBox {
    /// In order of first `REF`.
    pub referents: Vec<Variable>,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentedBox {
    pub members: Vec<Variable>,
    pub relations: Vec<DiscourseCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrsBox {
    Simple(SimpleBox),
    Segmented(SegmentedBox),
}

impl DrsBox {
    /// Boxes directly subordinate to this one.
    pub fn children(&self) -> Vec<&Variable> {
        match self {
            DrsBox::Simple(b) => b.conditions.iter().flat_map(Condition::embedded).collect(),
            DrsBox::Segmented(s) => s.members.iter().collect(),
        }
    }
}

/// The recursive DRS: labelled boxes, the main box and its presuppositions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxStructure {
    pub boxes: BTreeMap<Variable, DrsBox>,
    /// Boxes not embedded under any complex condition or segmented box.
    pub top_level: BTreeSet<Variable>,
    pub main: Variable,
    /// Remaining top-level boxes, in label order.
    pub presuppositions: Vec<Variable>,
}

impl BoxStructure {
    pub fn get(&self, label: &Variable) -> Option<&DrsBox> {
        self.boxes.get(label)
    }

    /// Rebuilds clauses from the structure (without alignments), box by box.
    pub fn to_clauses(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        for (label, drs_box) in &self.boxes {
            match drs_box {
                DrsBox::Simple(b) => {
                    out.extend(b.referents.iter().map(|r| Clause {
                        box_label: label.clone(),
                        tag: OperatorTag::Ref,
                        args: vec![Term::Variable(r.clone())],
                        alignment: Vec::new(),
                    }));
                    out.extend(b.conditions.iter().map(|c| c.to_clause(label)));
                }
                DrsBox::Segmented(s) => {
                    out.extend(s.members.iter().map(|m| Clause {
                        box_label: label.clone(),
                        tag: OperatorTag::DrsMember,
                        args: vec![Term::Variable(m.clone())],
                        alignment: Vec::new(),
                    }));
                    out.extend(s.relations.iter().map(|r| Clause {
                        box_label: label.clone(),
                        tag: OperatorTag::DiscourseRelation(r.relation.clone()),
                        args: vec![Term::Variable(r.left.clone()), Term::Variable(r.right.clone())],
                        alignment: Vec::new(),
                    }));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("subordination cycle through {}", join(.0))]
    CyclicSubordination(Vec<Variable>),
    #[error("box {0} mixes simple conditions with segment membership")]
    MixedBox(Variable),
    #[error("relation {relation} in {segmented} relates {label}, which is not one of its segments")]
    DanglingDiscourseRelation {
        segmented: Variable,
        relation: String,
        label: Variable,
    },
    #[error("no top-level box")]
    NoMainBox,
    #[error("cannot pick a main box among {}", join(.0))]
    AmbiguousMainBox(Vec<Variable>),
}

fn join(vars: &[Variable]) -> String {
    vars.iter().map(Variable::as_str).collect::<Vec<_>>().join(", ")
}

/// Orders labels by their embedded numbers, so `b2` sorts before `b10`.
pub fn label_order(a: &Variable, b: &Variable) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a.as_str()), chunks(b.as_str()));
    for ((da, xa), (db, xb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (xa.trim_start_matches('0'), xb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            xa.cmp(xb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Builds the box structure, reporting the first structural problem.
///
/// `_typing` must come from [`infer_variable_types`] on the same form; the
/// structure itself is read off the operator positions.
pub fn build_box_structure(form: &ClausalForm, _typing: &VariableTyping) -> Result<BoxStructure, StructureError> {
    let (structure, mut errors) = analyze_structure(form);
    match structure {
        Some(s) if errors.is_empty() => Ok(s),
        _ => Err(errors.swap_remove(0)),
    }
}

/// Assembles boxes and checks them; the structure is returned only when no
/// error was found.
fn analyze_structure(form: &ClausalForm) -> (Option<BoxStructure>, Vec<StructureError>) {
    let mut errors = Vec::new();

    let mut by_box: BTreeMap<&Variable, Vec<&Clause>> = BTreeMap::new();
    for clause in &form.clauses {
        by_box.entry(&clause.box_label).or_default().push(clause);
        for target in subordinated(clause) {
            by_box.entry(target).or_default();
        }
    }

    let mut boxes = BTreeMap::new();
    for (&label, clauses) in &by_box {
        let segmental = |c: &&&Clause| matches!(c.tag, OperatorTag::DrsMember | OperatorTag::DiscourseRelation(_));
        let has_segments = clauses.iter().any(|c| segmental(&c));
        let has_simple = clauses.iter().any(|c| !segmental(&c));
        if has_segments && has_simple {
            errors.push(StructureError::MixedBox(label.clone()));
        }
        let drs_box = if has_segments {
            let mut seg = SegmentedBox::default();
            for c in clauses {
                match &c.tag {
                    OperatorTag::DrsMember => {
                        if let Some(m) = c.args[0].as_variable() {
                            if !seg.members.contains(m) {
                                seg.members.push(m.clone());
                            }
                        }
                    }
                    OperatorTag::DiscourseRelation(r) => {
                        if let (Some(l), Some(rr)) = (c.args[0].as_variable(), c.args[1].as_variable()) {
                            seg.relations.push(DiscourseCondition {
                                relation: r.clone(),
                                left: l.clone(),
                                right: rr.clone(),
                            });
                        }
                    }
                    _ => {}
                }
            }
            for rel in &seg.relations {
                for arg in [&rel.left, &rel.right] {
                    if !seg.members.contains(arg) {
                        errors.push(StructureError::DanglingDiscourseRelation {
                            segmented: label.clone(),
                            relation: rel.relation.clone(),
                            label: arg.clone(),
                        });
                    }
                }
            }
            DrsBox::Segmented(seg)
        } else {
            let mut simple = SimpleBox::default();
            for c in clauses {
                if c.tag == OperatorTag::Ref {
                    if let Some(r) = c.args[0].as_variable() {
                        if !simple.referents.contains(r) {
                            simple.referents.push(r.clone());
                        }
                    }
                } else if let Some(cond) = Condition::from_clause(c) {
                    simple.conditions.push(cond);
                }
            }
            DrsBox::Simple(simple)
        };
        boxes.insert(label.clone(), drs_box);
    }

    let children: HashMap<&Variable, Vec<&Variable>> = form
        .clauses
        .iter()
        .fold(HashMap::new(), |mut acc, c| {
            acc.entry(&c.box_label).or_insert_with(Vec::new).extend(subordinated(c));
            acc
        });
    errors.extend(find_cycles(by_box.keys().copied(), &children));

    let embedded: HashSet<&Variable> = children.values().flatten().copied().collect();
    let top_level: BTreeSet<Variable> = by_box
        .keys()
        .filter(|l| !embedded.contains(*l))
        .map(|l| (*l).clone())
        .collect();

    let main = select_main(form, &top_level, &children);
    let main = match main {
        Ok(m) => Some(m),
        Err(e) => {
            errors.push(e);
            None
        }
    };

    let structure = match main {
        Some(main) if errors.is_empty() => {
            let mut presuppositions: Vec<Variable> = top_level.iter().filter(|l| **l != main).cloned().collect();
            presuppositions.sort_by(label_order);
            Some(BoxStructure {
                boxes,
                top_level,
                main,
                presuppositions,
            })
        }
        _ => None,
    };
    (structure, errors)
}

fn find_cycles<'a>(
    labels: impl Iterator<Item = &'a Variable>,
    children: &HashMap<&'a Variable, Vec<&'a Variable>>,
) -> Vec<StructureError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        node: &'a Variable,
        children: &HashMap<&'a Variable, Vec<&'a Variable>>,
        marks: &mut HashMap<&'a Variable, Mark>,
        path: &mut Vec<&'a Variable>,
        out: &mut Vec<StructureError>,
    ) {
        marks.insert(node, Mark::Open);
        path.push(node);
        for &child in children.get(node).map(Vec::as_slice).unwrap_or(&[]) {
            match marks.get(child) {
                Some(Mark::Open) => {
                    let start = path.iter().position(|n| *n == child).unwrap_or(0);
                    out.push(StructureError::CyclicSubordination(
                        path[start..].iter().map(|v| (*v).clone()).collect(),
                    ));
                }
                Some(Mark::Done) => {}
                None => visit(child, children, marks, path, out),
            }
        }
        path.pop();
        marks.insert(node, Mark::Done);
    }

    let mut marks = HashMap::new();
    let mut out = Vec::new();
    for label in labels {
        if !marks.contains_key(label) {
            visit(label, children, &mut marks, &mut Vec::new(), &mut out);
        }
    }
    out
}

fn subtree<'a>(root: &'a Variable, children: &HashMap<&'a Variable, Vec<&'a Variable>>) -> HashSet<&'a Variable> {
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            stack.extend(children.get(n).into_iter().flatten().copied());
        }
    }
    seen
}

/// A top-level box is a presupposition when a referent it introduces is used
/// in a box outside its own subordination subtree. Exactly one top-level box
/// must remain.
fn select_main(
    form: &ClausalForm,
    top_level: &BTreeSet<Variable>,
    children: &HashMap<&Variable, Vec<&Variable>>,
) -> Result<Variable, StructureError> {
    if top_level.is_empty() {
        return Err(StructureError::NoMainBox);
    }
    let mut users: HashMap<&Variable, HashSet<&Variable>> = HashMap::new();
    for c in &form.clauses {
        for r in used_referents(c) {
            users.entry(r).or_default().insert(&c.box_label);
        }
    }
    let mut candidates = Vec::new();
    for label in top_level {
        let inside = subtree(label, children);
        let presupposed = form
            .clauses
            .iter()
            .filter(|c| &c.box_label == label && c.tag == OperatorTag::Ref)
            .filter_map(|c| c.args[0].as_variable())
            .any(|r| {
                users
                    .get(r)
                    .is_some_and(|boxes| boxes.iter().any(|b| !inside.contains(b)))
            });
        if !presupposed {
            candidates.push(label.clone());
        }
    }
    match candidates.len() {
        1 => Ok(candidates.swap_remove(0)),
        _ => {
            if candidates.is_empty() {
                candidates = top_level.iter().cloned().collect();
            }
            candidates.sort_by(label_order);
            Err(StructureError::AmbiguousMainBox(candidates))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    EmptyDocument,
    ClauseShape,
    TypeConflict,
    UnboundReferent,
    DuplicateRef,
    CyclicSubordination,
    MixedBox,
    DanglingDiscourseRelation,
    NoMainBox,
    AmbiguousMainBox,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::EmptyDocument => "EmptyDocument",
            Rule::ClauseShape => "ClauseShape",
            Rule::TypeConflict => "TypeConflict",
            Rule::UnboundReferent => "UnboundReferent",
            Rule::DuplicateRef => "DuplicateRef",
            Rule::CyclicSubordination => "CyclicSubordination",
            Rule::MixedBox => "MixedBox",
            Rule::DanglingDiscourseRelation => "DanglingDiscourseRelation",
            Rule::NoMainBox => "NoMainBox",
            Rule::AmbiguousMainBox => "AmbiguousMainBox",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a violation was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Document,
    Clause(usize),
    Box(Variable),
    Variable(Variable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
    pub location: Location,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn rules(&self) -> BTreeSet<Rule> {
        self.violations.iter().map(|v| v.rule).collect()
    }
}

/// Checks a form for well-formedness, gathering all violations.
pub fn validate(form: &ClausalForm) -> ValidationReport {
    if form.clauses.is_empty() {
        return ValidationReport::from_violations(vec![Violation {
            rule: Rule::EmptyDocument,
            message: "document has no clauses".into(),
            location: Location::Document,
        }]);
    }
    let mut violations = Vec::new();

    for (i, clause) in form.clauses.iter().enumerate() {
        if let Err(e) = clause.check_shape() {
            violations.push(Violation {
                rule: Rule::ClauseShape,
                message: e.to_string(),
                location: Location::Clause(i),
            });
        }
    }

    let (_, conflicts) = collect_typing(form);
    for c in &conflicts {
        violations.push(Violation {
            rule: Rule::TypeConflict,
            message: c.to_string(),
            location: Location::Variable(c.variable.clone()),
        });
    }

    let mut introduced: HashSet<&Variable> = HashSet::new();
    let mut per_box: BTreeMap<(&Variable, &Variable), usize> = BTreeMap::new();
    for c in form.clauses.iter().filter(|c| c.tag == OperatorTag::Ref) {
        if let Some(r) = c.args.first().and_then(Term::as_variable) {
            introduced.insert(r);
            *per_box.entry((&c.box_label, r)).or_default() += 1;
        }
    }
    for ((label, r), count) in per_box {
        if count > 1 {
            violations.push(Violation {
                rule: Rule::DuplicateRef,
                message: format!("{r} is introduced {count} times in {label}"),
                location: Location::Box(label.clone()),
            });
        }
    }
    let mut unbound: BTreeSet<&Variable> = BTreeSet::new();
    for c in &form.clauses {
        unbound.extend(used_referents(c).filter(|r| !introduced.contains(r)));
    }
    for r in unbound {
        violations.push(Violation {
            rule: Rule::UnboundReferent,
            message: format!("referent {r} is never introduced by REF"),
            location: Location::Variable(r.clone()),
        });
    }

    if conflicts.is_empty() {
        let (_, errors) = analyze_structure(form);
        for e in errors {
            let (rule, location) = match &e {
                StructureError::CyclicSubordination(path) => (Rule::CyclicSubordination, Location::Box(path[0].clone())),
                StructureError::MixedBox(b) => (Rule::MixedBox, Location::Box(b.clone())),
                StructureError::DanglingDiscourseRelation { segmented, .. } => {
                    (Rule::DanglingDiscourseRelation, Location::Box(segmented.clone()))
                }
                StructureError::NoMainBox => (Rule::NoMainBox, Location::Document),
                StructureError::AmbiguousMainBox(_) => (Rule::AmbiguousMainBox, Location::Document),
            };
            violations.push(Violation {
                rule,
                message: e.to_string(),
                location,
            });
        }
    }
    ValidationReport::from_violations(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, load};

    fn var(s: &str) -> Variable {
        Variable::new(s).unwrap()
    }

    fn form(lines: &[&str]) -> ClausalForm {
        ClausalForm::new("0", "", lines.iter().map(|l| l.parse().unwrap()).collect())
    }

    fn without(text: &str, line: &str) -> ClausalForm {
        let mut f = load(text);
        let before = f.clauses.len();
        f.clauses.retain(|c| c.to_string() != line);
        assert_eq!(f.clauses.len() + 1, before, "fixture lacks `{line}`");
        f
    }

    #[test]
    fn typing_tom() {
        let t = infer_variable_types(&load(fixtures::TOM_AFRAID)).unwrap();
        let names = |k| t.of_kind(k).into_iter().map(|v| v.as_str().to_string()).collect::<Vec<_>>();
        assert_eq!(names(VarKind::BoxLabel), ["b1", "b2", "b3"]);
        assert_eq!(names(VarKind::Referent), ["s1", "t1", "x1", "x2"]);
    }

    #[test]
    fn typing_his_money() {
        let t = infer_variable_types(&load(fixtures::HIS_MONEY)).unwrap();
        for r in ["x1", "x2", "x3", "x4", "t1", "e1"] {
            assert_eq!(t.kind(&var(r)), Some(VarKind::Referent), "{r}");
        }
        for b in ["b1", "b2", "b3", "b4", "b5", "b6"] {
            assert_eq!(t.kind(&var(b)), Some(VarKind::BoxLabel), "{b}");
        }
    }

    #[test]
    fn typing_conflict() {
        let err = infer_variable_types(&form(&["b1 NOT b2", "b2 REF b1"])).unwrap_err();
        assert_eq!(err.variable, var("b1"));
    }

    #[test]
    fn segmented_piano() {
        let f = load(fixtures::PIANO_SANG);
        let s = build_box_structure(&f, &infer_variable_types(&f).unwrap()).unwrap();
        match s.get(&var("b6")).unwrap() {
            DrsBox::Segmented(seg) => assert_eq!(seg.members, vec![var("b1"), var("b4")]),
            other => panic!("b6 not segmented: {other:?}"),
        }
        let top: Vec<_> = s.top_level.iter().map(Variable::as_str).collect();
        assert_eq!(top, ["b2", "b3", "b5", "b6"]);
        assert_eq!(s.main, var("b6"));
        assert_eq!(s.presuppositions, vec![var("b2"), var("b3"), var("b5")]);
    }

    #[test]
    fn tom_main_and_presupposition() {
        let f = load(fixtures::TOM_AFRAID);
        let s = build_box_structure(&f, &infer_variable_types(&f).unwrap()).unwrap();
        assert_eq!(s.main, var("b2"));
        assert_eq!(s.presuppositions, vec![var("b1")]);
    }

    #[test]
    fn his_money_nested_presuppositions() {
        let f = load(fixtures::HIS_MONEY);
        let s = build_box_structure(&f, &infer_variable_types(&f).unwrap()).unwrap();
        assert_eq!(s.main, var("b2"));
        assert_eq!(s.presuppositions, vec![var("b1"), var("b4"), var("b6")]);
    }

    #[test]
    fn two_cycle() {
        let f = form(&["b1 NOT b2", "b2 NOT b1", "b1 REF x1", "b1 man \"n.01\" x1"]);
        let t = infer_variable_types(&f).unwrap();
        assert!(matches!(
            build_box_structure(&f, &t),
            Err(StructureError::CyclicSubordination(_))
        ));
        let report = validate(&f);
        assert!(report.has(Rule::CyclicSubordination));
        assert!(report.has(Rule::NoMainBox));
    }

    #[test]
    fn fixtures_validate() {
        for text in fixtures::ALL {
            let report = validate(&load(text));
            assert!(report.valid, "{:?}", report.violations);
        }
    }

    #[test]
    fn missing_ref_is_unbound() {
        let report = validate(&without(fixtures::TOM_AFRAID, "b3 REF x2"));
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::UnboundReferent && v.location == Location::Variable(var("x2"))));
    }

    #[test]
    fn missing_membership_dangles() {
        let report = validate(&without(fixtures::PIANO_SANG, "b6 DRS b4"));
        assert!(report.has(Rule::DanglingDiscourseRelation));
    }

    #[test]
    fn mixed_box() {
        let report = validate(&form(&["b1 DRS b2", "b1 REF x1", "b2 REF x2", "b1 man \"n.01\" x1"]));
        assert!(report.has(Rule::MixedBox));
    }

    #[test]
    fn duplicate_ref_in_box() {
        let report = validate(&form(&["b1 REF x1", "b1 REF x1", "b1 man \"n.01\" x1"]));
        assert_eq!(report.rules(), [Rule::DuplicateRef].into());
    }

    #[test]
    fn ambiguous_main() {
        let report = validate(&form(&["b1 REF x1", "b2 REF x2"]));
        assert!(report.has(Rule::AmbiguousMainBox));
    }

    #[test]
    fn empty_form() {
        let report = validate(&form(&[]));
        assert_eq!(report.rules(), [Rule::EmptyDocument].into());
    }

    #[test]
    fn bad_shape_reported() {
        let mut f = form(&["b1 REF x1"]);
        f.clauses[0].args = vec![Term::constant("x1")];
        assert!(validate(&f).has(Rule::ClauseShape));
    }

    #[test]
    fn structure_recovers_clauses() {
        for text in fixtures::ALL {
            let f = load(text);
            let s = build_box_structure(&f, &infer_variable_types(&f).unwrap()).unwrap();
            let mut expected: Vec<String> = f.clauses.iter().map(|c| c.without_alignment().to_string()).collect();
            let mut got: Vec<String> = s.to_clauses().iter().map(ToString::to_string).collect();
            expected.sort();
            got.sort();
            assert_eq!(expected, got);
        }
    }

    #[test]
    fn natural_label_order() {
        let mut labels = [var("b10"), var("b2"), var("b1"), var("a3")];
        labels.sort_by(label_order);
        let names: Vec<_> = labels.iter().map(Variable::as_str).collect();
        assert_eq!(names, ["a3", "b1", "b2", "b10"]);
    }
}
