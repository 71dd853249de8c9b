use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::referee::VarKind;

use super::problem::{kind_index, Assignment, Problem, Slot};
use super::MatchConfig;

/// Mutable search state with cached satisfaction of every candidate.
/// Reassignments of system variables, applied together.
type Move = Vec<(usize, Option<usize>)>;

struct State<'p> {
    problem: &'p Problem,
    assign: Assignment,
    owner: Vec<Option<usize>>,
    satisfied: Vec<bool>,
    score: usize,
}

impl<'p> State<'p> {
    fn new(problem: &'p Problem, assign: Assignment) -> State<'p> {
        let mut owner = vec![None; problem.gold.vars.len()];
        for (s, g) in assign.iter().enumerate() {
            if let Some(g) = g {
                owner[*g] = Some(s);
            }
        }
        let satisfied: Vec<bool> = (0..problem.candidates.len())
            .map(|c| problem.is_satisfied(c, &assign))
            .collect();
        let score = satisfied
            .iter()
            .zip(&problem.candidates)
            .filter(|(s, _)| **s)
            .map(|(_, c)| c.weight)
            .sum();
        State {
            problem,
            assign,
            owner,
            satisfied,
            score,
        }
    }

    fn image(&self, var: usize, changes: &[(usize, Option<usize>)]) -> Option<usize> {
        changes
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, g)| *g)
            .unwrap_or(self.assign[var])
    }

    /// Candidates touched by a move, each listed once.
    fn affected(&self, changes: &[(usize, Option<usize>)]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, (v, _)) in changes.iter().enumerate() {
            for &c in &self.problem.by_system_var[*v] {
                let earlier = changes[..i]
                    .iter()
                    .any(|(w, _)| self.problem.candidates[c].needs.iter().any(|(s, _)| s == w));
                if !earlier {
                    out.push(c);
                }
            }
        }
        out
    }

    fn gain(&self, changes: &[(usize, Option<usize>)]) -> isize {
        let mut gain = 0isize;
        for c in self.affected(changes) {
            let cand = &self.problem.candidates[c];
            let now = cand.needs.iter().all(|&(s, g)| self.image(s, changes) == Some(g));
            if now != self.satisfied[c] {
                let w = cand.weight as isize;
                gain += if now { w } else { -w };
            }
        }
        gain
    }

    fn apply(&mut self, changes: &[(usize, Option<usize>)]) {
        for (v, _) in changes {
            if let Some(g) = self.assign[*v] {
                if self.owner[g] == Some(*v) {
                    self.owner[g] = None;
                }
            }
        }
        for (v, g) in changes {
            self.assign[*v] = *g;
        }
        for (v, g) in changes {
            if let Some(g) = g {
                self.owner[*g] = Some(*v);
            }
        }
        for c in self.affected(changes) {
            let now = self.problem.is_satisfied(c, &self.assign);
            if now != self.satisfied[c] {
                let w = self.problem.candidates[c].weight;
                if now {
                    self.score += w;
                } else {
                    self.score -= w;
                }
                self.satisfied[c] = now;
            }
        }
    }

    /// The first move with the largest positive gain, in a fixed order:
    /// per system variable, remap to each free gold variable, unmap, then
    /// swap with each later system variable of the same kind.
    fn best_move(&self) -> Option<Move> {
        let p = self.problem;
        let mut best: Option<(isize, Move)> = None;
        let mut consider = |changes: Move, gain: isize| {
            if gain > 0 && best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, changes));
            }
        };
        for v in 0..p.system.vars.len() {
            if p.by_system_var[v].is_empty() {
                continue;
            }
            let kind = p.system.kinds[v];
            for &g in &p.gold_by_kind[kind_index(kind)] {
                if self.owner[g].is_none() {
                    let changes = vec![(v, Some(g))];
                    let gain = self.gain(&changes);
                    consider(changes, gain);
                }
            }
            if self.assign[v].is_some() {
                let changes = vec![(v, None)];
                let gain = self.gain(&changes);
                consider(changes, gain);
            }
            for w in v + 1..p.system.vars.len() {
                if p.system.kinds[w] != kind || self.assign[v] == self.assign[w] {
                    continue;
                }
                let changes = vec![(v, self.assign[w]), (w, self.assign[v])];
                let gain = self.gain(&changes);
                consider(changes, gain);
            }
        }
        best.map(|(_, c)| c)
    }

    fn climb(&mut self) {
        while let Some(changes) = self.best_move() {
            self.apply(&changes);
        }
    }
}

/// Pairs variables of concept clauses with the same lemma and of role or
/// comparison clauses with the same name, first come first served.
fn smart_init(problem: &Problem) -> Assignment {
    let mut assign: Assignment = vec![None; problem.system.vars.len()];
    let mut owned = vec![false; problem.gold.vars.len()];
    let mut pair = |s: usize, g: usize, assign: &mut Assignment| {
        if assign[s].is_none() && !owned[g] && problem.system.kinds[s] == problem.gold.kinds[g] {
            assign[s] = Some(g);
            owned[g] = true;
        }
    };
    for sp in &problem.system.patterns {
        for gp in &problem.gold.patterns {
            use crate::clause::OperatorTag::*;
            let related = match (&sp.tag, &gp.tag) {
                (Concept(a), Concept(b)) => a.lemma == b.lemma,
                (Role(a), Role(b)) | (Comparison(a), Comparison(b)) => a == b,
                _ => false,
            };
            if !related || sp.slots.len() != gp.slots.len() {
                continue;
            }
            for (a, b) in sp.slots.iter().zip(&gp.slots) {
                if let (Slot::Var(s), Slot::Var(g)) = (a, b) {
                    pair(*s, *g, &mut assign);
                }
            }
        }
    }
    assign
}

/// A uniformly random injection within each kind.
fn random_init(problem: &Problem, rng: &mut ChaCha8Rng) -> Assignment {
    let mut assign: Assignment = vec![None; problem.system.vars.len()];
    for kind in [VarKind::BoxLabel, VarKind::Referent] {
        let mut sys = problem.system.of_kind(kind);
        let mut gold = problem.gold_by_kind[kind_index(kind)].clone();
        sys.shuffle(rng);
        gold.shuffle(rng);
        for (s, g) in sys.into_iter().zip(gold) {
            assign[s] = Some(g);
        }
    }
    assign
}

pub(crate) fn hill_climb(problem: &Problem, config: &MatchConfig) -> Assignment {
    let mut best: Option<State> = None;
    for restart in 0..config.restarts {
        let init = if restart == 0 && config.smart_init {
            smart_init(problem)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(restart as u64);
            random_init(problem, &mut rng)
        };
        let mut state = State::new(problem, init);
        state.climb();
        if best.as_ref().is_none_or(|b| state.score > b.score) {
            best = Some(state);
        }
    }
    best.map(|b| b.assign).unwrap_or_else(|| vec![None; problem.system.vars.len()])
}

/// Exact search: depth-first over system variables with an upper bound of
/// the current score plus every candidate not yet ruled out.
pub(crate) fn exhaustive(problem: &Problem) -> Assignment {
    let n = problem.system.vars.len();
    let mut order: Vec<usize> = (0..n).filter(|&v| !problem.by_system_var[v].is_empty()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(problem.by_system_var[v].len()));

    // a single greedy climb gives a starting bound
    let start = {
        let mut s = State::new(problem, smart_init(problem));
        s.climb();
        s
    };
    let mut search = Exact {
        problem,
        order,
        assign: vec![None; n],
        owner: vec![None; problem.gold.vars.len()],
        decided: vec![false; n],
        best_score: start.score,
        best: start.assign,
    };
    search.dfs(0);
    search.best
}

struct Exact<'p> {
    problem: &'p Problem,
    order: Vec<usize>,
    assign: Assignment,
    owner: Vec<Option<usize>>,
    decided: Vec<bool>,
    best_score: usize,
    best: Assignment,
}

impl Exact<'_> {
    fn possible(&self, c: usize) -> bool {
        self.problem.candidates[c].needs.iter().all(|&(s, g)| {
            if self.decided[s] {
                self.assign[s] == Some(g)
            } else {
                self.owner[g].is_none()
            }
        })
    }

    fn upper_bound(&self) -> usize {
        (0..self.problem.candidates.len())
            .filter(|&c| self.possible(c))
            .map(|c| self.problem.candidates[c].weight)
            .sum()
    }

    fn dfs(&mut self, depth: usize) {
        if self.upper_bound() <= self.best_score {
            return;
        }
        if depth == self.order.len() {
            // every candidate still possible is satisfied here
            self.best_score = self.problem.score(&self.assign);
            self.best = self.assign.clone();
            return;
        }
        let v = self.order[depth];
        self.decided[v] = true;
        let kind = kind_index(self.problem.system.kinds[v]);
        for i in 0..self.problem.gold_by_kind[kind].len() {
            let g = self.problem.gold_by_kind[kind][i];
            if self.owner[g].is_some() {
                continue;
            }
            self.assign[v] = Some(g);
            self.owner[g] = Some(v);
            self.dfs(depth + 1);
            self.owner[g] = None;
            self.assign[v] = None;
        }
        self.dfs(depth + 1);
        self.decided[v] = false;
    }
}
