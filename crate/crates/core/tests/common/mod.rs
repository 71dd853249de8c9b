//! Random clausal forms and an independent brute-force matcher.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use drskit::clause::{Clause, OperatorTag, PartOfSpeech, Synset, Term, Variable};
use drskit::corpus::ClausalForm;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn var(name: String) -> Variable {
    Variable::new(name).unwrap()
}

const LEMMAS: [&str; 5] = ["dog", "cat", "man", "run", "time"];
const ROLES: [&str; 4] = ["Agent", "Theme", "Time", "Name"];

/// A random form over `boxes` box labels `b*` and `refs` referents `x*`.
/// Labels only ever occur in box positions, so the prefix gives the kind.
pub fn random_form(rng: &mut ChaCha8Rng, boxes: usize, refs: usize, extra: usize) -> ClausalForm {
    let b = |rng: &mut ChaCha8Rng| var(format!("b{}", rng.gen_range(0..boxes)));
    let x = |rng: &mut ChaCha8Rng| var(format!("x{}", rng.gen_range(0..refs)));
    let mut clauses = Vec::new();
    for i in 0..refs {
        clauses.push(Clause::new(b(rng), OperatorTag::Ref, vec![Term::Variable(var(format!("x{i}")))]).unwrap());
    }
    for _ in 0..extra {
        let label = b(rng);
        let clause = match rng.gen_range(0..10) {
            0..=3 => {
                let pos = if rng.gen_bool(0.7) { PartOfSpeech::Noun } else { PartOfSpeech::Verb };
                let synset = Synset::new(*LEMMAS.choose(rng).unwrap(), pos, rng.gen_range(1..=2));
                Clause::concept(label, synset, x(rng))
            }
            4..=6 => {
                let role = ROLES.choose(rng).unwrap().to_string();
                let right = if rng.gen_bool(0.2) {
                    Term::constant(["tom", "now"].choose(rng).unwrap().to_string())
                } else {
                    Term::Variable(x(rng))
                };
                Clause::new(label, OperatorTag::Role(role), vec![Term::Variable(x(rng)), right]).unwrap()
            }
            7 => Clause::new(label, OperatorTag::Not, vec![Term::Variable(b(rng))]).unwrap(),
            8 => Clause::new(label, OperatorTag::Imp, vec![Term::Variable(b(rng)), Term::Variable(b(rng))]).unwrap(),
            _ => Clause::new(
                label,
                OperatorTag::Comparison("EQU".into()),
                vec![Term::Variable(x(rng)), Term::constant("now")],
            )
            .unwrap(),
        };
        clauses.push(clause);
    }
    ClausalForm::new("0", "", clauses)
}

/// Renames variables by a random permutation within each kind.
pub fn shuffle_names(rng: &mut ChaCha8Rng, form: &ClausalForm) -> ClausalForm {
    let mut names: Vec<BTreeSet<String>> = vec![BTreeSet::new(), BTreeSet::new()];
    for c in &form.clauses {
        for v in c.variables() {
            names[usize::from(v.as_str().starts_with('x'))].insert(v.to_string());
        }
    }
    let mut rename: HashMap<String, String> = HashMap::new();
    for set in names {
        let from: Vec<String> = set.into_iter().collect();
        let mut to = from.clone();
        to.shuffle(rng);
        rename.extend(from.into_iter().zip(to));
    }
    rename_with(form, |v| rename[v].clone())
}

pub fn rename_with(form: &ClausalForm, f: impl Fn(&str) -> String) -> ClausalForm {
    let map = |v: &Variable| var(f(v.as_str()));
    let clauses = form
        .clauses
        .iter()
        .map(|c| Clause {
            box_label: map(&c.box_label),
            tag: c.tag.clone(),
            args: c
                .args
                .iter()
                .map(|a| match a {
                    Term::Variable(v) => Term::Variable(map(v)),
                    t => t.clone(),
                })
                .collect(),
            alignment: Vec::new(),
        })
        .collect();
    form.with_clauses(clauses)
}

/// A noisy copy: renamed, with some clauses dropped, altered or added.
pub fn perturb(rng: &mut ChaCha8Rng, gold: &ClausalForm, boxes: usize, refs: usize) -> ClausalForm {
    let mut clauses = Vec::new();
    let noise = random_form(rng, boxes, refs, 4).clauses;
    for c in &gold.clauses {
        match rng.gen_range(0..10) {
            0 => {}
            1 => clauses.push(noise.choose(rng).unwrap().clone()),
            _ => clauses.push(c.clone()),
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        clauses.push(noise.choose(rng).unwrap().clone());
    }
    shuffle_names(rng, &gold.with_clauses(clauses))
}

/// A gold form and a noisy system form of it.
pub fn random_pair(seed: u64, max_per_kind: usize) -> (ClausalForm, ClausalForm) {
    let mut r = rng(seed);
    let boxes = r.gen_range(1..=max_per_kind);
    let refs = r.gen_range(1..=max_per_kind);
    let extra = r.gen_range(2..=12);
    let gold = random_form(&mut r, boxes, refs, extra);
    let system = perturb(&mut r, &gold, boxes, refs);
    (system, gold)
}

fn kind(v: &Variable) -> usize {
    usize::from(v.as_str().starts_with('x'))
}

/// All injective partial maps from `from` into `to`.
fn partial_injections(from: &[Variable], to: &[Variable]) -> Vec<Vec<(Variable, Variable)>> {
    let Some((first, rest)) = from.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for tail in partial_injections(rest, to) {
        out.push(tail.clone());
        for t in to {
            if tail.iter().all(|(_, used)| used != t) {
                let mut m = tail.clone();
                m.push((first.clone(), t.clone()));
                out.push(m);
            }
        }
    }
    out
}

fn vars_of(form: &ClausalForm, k: usize) -> Vec<Variable> {
    let set: BTreeSet<Variable> = form.clauses.iter().flat_map(|c| c.variables().cloned()).filter(|v| kind(v) == k).collect();
    set.into_iter().collect()
}

/// Matched clauses under `mapping`, counting duplicates as a multiset.
pub fn count_matched(system: &ClausalForm, gold: &ClausalForm, mapping: &[(Variable, Variable)]) -> usize {
    let lookup: HashMap<&Variable, &Variable> = mapping.iter().map(|(a, b)| (a, b)).collect();
    let mut remaining: HashMap<String, usize> = HashMap::new();
    for g in &gold.clauses {
        *remaining.entry(g.without_alignment().to_string()).or_default() += 1;
    }
    let mut matched = 0;
    'clauses: for c in &system.clauses {
        let Some(label) = lookup.get(&c.box_label) else { continue };
        let mut args = Vec::new();
        for a in &c.args {
            match a {
                Term::Variable(v) => match lookup.get(v) {
                    Some(w) => args.push(Term::Variable((*w).clone())),
                    None => continue 'clauses,
                },
                t => args.push(t.clone()),
            }
        }
        let image = Clause {
            box_label: (*label).clone(),
            tag: c.tag.clone(),
            args,
            alignment: Vec::new(),
        }
        .to_string();
        if let Some(n) = remaining.get_mut(&image).filter(|n| **n > 0) {
            *n -= 1;
            matched += 1;
        }
    }
    matched
}

/// Best matched count over every kind-preserving injective partial mapping.
pub fn brute_force_matched(system: &ClausalForm, gold: &ClausalForm) -> usize {
    let boxes = partial_injections(&vars_of(system, 0), &vars_of(gold, 0));
    let refs = partial_injections(&vars_of(system, 1), &vars_of(gold, 1));
    let mut best = 0;
    for b in &boxes {
        for r in &refs {
            let mapping: Vec<_> = b.iter().chain(r).cloned().collect();
            best = best.max(count_matched(system, gold, &mapping));
        }
    }
    best
}

/// Number of distinct variables of each kind, whichever side has more.
pub fn vars_per_kind(system: &ClausalForm, gold: &ClausalForm) -> usize {
    (0..2).map(|k| vars_of(system, k).len().max(vars_of(gold, k).len())).max().unwrap()
}

/// `docs` gold forms plus `systems` noisy outputs of each.
pub fn random_corpora(seed: u64, docs: usize, systems: usize) -> (Vec<ClausalForm>, Vec<Vec<ClausalForm>>) {
    let mut r = rng(seed);
    let mut gold = Vec::new();
    let mut outputs = vec![Vec::new(); systems];
    for i in 0..docs {
        let boxes = r.gen_range(1..=3);
        let refs = r.gen_range(1..=5);
        let extra = r.gen_range(2..=12);
        let mut g = random_form(&mut r, boxes, refs, extra);
        g.doc_id = i.to_string();
        for out in outputs.iter_mut() {
            let mut s = perturb(&mut r, &g, boxes, refs);
            s.doc_id = i.to_string();
            out.push(s);
        }
        gold.push(g);
    }
    (gold, outputs)
}
