//! Brute-force oracle for the four temporal patterns.
//!
//! Each pattern is decided straight from its definition over the explicit
//! graph: a violating run is a path to some state `a` followed by a cycle
//! through `a`. With fairness on, every process set `E` is tried: restricted
//! to states whose enabled processes all lie in `E`, it asks for a cycle
//! through `a` that contains an edge of every process in `E`.

use std::collections::VecDeque;

use indexmap::IndexSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sandal::checker::{eval_prop, Counterexample, GlobalState, ProcState, SpecPattern, StateGraph, StepLabel};
use sandal::ir::LocId;
use sandal::ltl::Formula;
use sandal::sema::SystemInstance;
use sandal::types::{BinOp, Type, Value, VarId};

pub struct Naive<'g> {
    g: &'g StateGraph,
    preds: Vec<Vec<u32>>,
    enabled: Vec<u32>,
    processes: usize,
}

impl<'g> Naive<'g> {
    pub fn new(g: &'g StateGraph, processes: usize) -> Self {
        let mut preds = vec![Vec::new(); g.len()];
        let mut enabled = vec![0u32; g.len()];
        for (u, out) in g.edges.iter().enumerate() {
            for &(l, v) in out {
                preds[v as usize].push(u as u32);
                if let Some(p) = l.process() {
                    enabled[u] |= 1 << p;
                }
            }
        }
        Naive {
            g,
            preds,
            enabled,
            processes,
        }
    }

    /// States reachable from `starts` through `allowed` states, starts
    /// included when allowed.
    fn forward(&self, starts: &[u32], allowed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.g.len()];
        let mut queue = VecDeque::new();
        for &s in starts {
            if allowed[s as usize] && !seen[s as usize] {
                seen[s as usize] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(_, v) in &self.g.edges[u as usize] {
                if allowed[v as usize] && !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn backward(&self, target: u32, allowed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.g.len()];
        seen[target as usize] = true;
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.preds[v as usize] {
                if allowed[u as usize] && !seen[u as usize] {
                    seen[u as usize] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    fn on_cycle(&self, a: u32, allowed: &[bool]) -> bool {
        let succ: Vec<u32> = self.g.edges[a as usize].iter().map(|e| e.1).collect();
        self.forward(&succ, allowed)[a as usize]
    }

    /// Whether an admissible cycle through `a` stays inside `allowed`.
    fn cycle_through(&self, a: u32, allowed: &[bool], fairness: bool) -> bool {
        if !allowed[a as usize] || !self.on_cycle(a, allowed) {
            return false;
        }
        if !fairness {
            return true;
        }
        for set in 0u32..(1 << self.processes) {
            let sub: Vec<bool> = (0..self.g.len())
                .map(|s| allowed[s] && self.enabled[s] & !set == 0)
                .collect();
            if !sub[a as usize] || !self.on_cycle(a, &sub) {
                continue;
            }
            let fwd = self.forward(&[a], &sub);
            let bwd = self.backward(a, &sub);
            let covered = (0..self.processes).filter(|q| set & (1 << q) != 0).all(|q| {
                self.g.edges.iter().enumerate().any(|(u, out)| {
                    fwd[u]
                        && out
                            .iter()
                            .any(|&(l, v)| l.process() == Some(q) && sub[v as usize] && bwd[v as usize])
                })
            });
            if covered {
                return true;
            }
        }
        false
    }

    /// True when a violating run exists.
    pub fn violated(&self, pattern: &SpecPattern, fairness: bool) -> bool {
        let n = self.g.len();
        let not_p: Vec<bool> = self.g.states.iter().map(|s| !eval_prop(pattern.prop(), s)).collect();
        let all = vec![true; n];
        let reach = self.forward(&[0], &all);
        let states = 0..n as u32;
        match pattern {
            SpecPattern::Always(_) => states.clone().any(|a| {
                reach[a as usize] && not_p[a as usize] && {
                    let after = self.forward(&[a], &all);
                    states.clone().any(|b| after[b as usize] && self.cycle_through(b, &all, fairness))
                }
            }),
            SpecPattern::Eventually(_) => {
                let r = self.forward(&[0], &not_p);
                states.clone().any(|a| r[a as usize] && self.cycle_through(a, &not_p, fairness))
            }
            SpecPattern::AlwaysEventually(_) => states
                .clone()
                .any(|a| reach[a as usize] && self.cycle_through(a, &not_p, fairness)),
            SpecPattern::EventuallyAlways(_) => states.clone().any(|a| {
                reach[a as usize] && not_p[a as usize] && self.cycle_through(a, &all, fairness)
            }),
        }
    }
}

/// Checks a lasso against the graph, the pattern and the fairness rule
/// without reference to how it was found.
pub fn validate(g: &StateGraph, cx: &Counterexample, pattern: &SpecPattern, fairness: bool) {
    let k = cx.loop_start.expect("liveness counterexample is a lasso");
    let n = cx.steps.len();
    assert!(k < n, "empty loop");
    assert_eq!(cx.state(n), cx.state(k), "loop not closed");
    assert_eq!(g.states.get_index_of(&cx.initial), Some(0));
    for i in 0..n {
        let u = g.states.get_index_of(cx.state(i)).unwrap();
        let v = g.states.get_index_of(cx.state(i + 1)).unwrap() as u32;
        assert!(g.edges[u].contains(&(cx.steps[i].label, v)), "step {} not in graph", i + 1);
    }
    let p = |i: usize| eval_prop(pattern.prop(), cx.state(i));
    match pattern {
        SpecPattern::Always(_) => assert!((0..=n).any(|i| !p(i))),
        SpecPattern::Eventually(_) => assert!((0..=n).all(|i| !p(i))),
        SpecPattern::AlwaysEventually(_) => assert!((k..=n).all(|i| !p(i))),
        SpecPattern::EventuallyAlways(_) => assert!((k..=n).any(|i| !p(i))),
    }
    if fairness {
        let mut enabled = 0u32;
        let mut stepped = 0u32;
        for i in k..n {
            let u = g.states.get_index_of(cx.state(i)).unwrap();
            for (l, _) in &g.edges[u] {
                if let Some(q) = l.process() {
                    enabled |= 1 << q;
                }
            }
            if let Some(q) = cx.steps[i].label.process() {
                stepped |= 1 << q;
            }
        }
        assert_eq!(enabled & !stepped, 0, "unfair loop");
    }
}

pub fn random_prop(rng: &mut ChaCha8Rng, atoms: &[Formula], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.1) {
            Formula::Const(Value::Bool(rng.gen()))
        } else {
            atoms[rng.gen_range(0..atoms.len())].clone()
        };
    }
    match rng.gen_range(0..5) {
        0 => random_prop(rng, atoms, depth - 1).negate(),
        i => {
            let op = [BinOp::And, BinOp::Or, BinOp::Implies, BinOp::Eq][i - 1];
            Formula::bin(op, random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1))
        }
    }
}

pub fn pattern(i: usize, p: Formula) -> SpecPattern {
    match i % 4 {
        0 => SpecPattern::Always(p),
        1 => SpecPattern::Eventually(p),
        2 => SpecPattern::EventuallyAlways(p),
        _ => SpecPattern::AlwaysEventually(p),
    }
}

/// A graph with `n` states carrying two boolean variables, random
/// process-labelled edges, and stutter loops at dead ends.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, processes: usize) -> StateGraph {
    let mut states = IndexSet::new();
    for i in 0..n {
        states.insert(GlobalState {
            procs: vec![ProcState {
                loc: LocId(i as u32),
                locals: vec![Value::Bool(rng.gen()), Value::Bool(rng.gen_bool(0.3))].into(),
            }],
            chans: Vec::new(),
        });
    }
    let edges = (0..n)
        .map(|i| {
            let mut out = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let e = (
                    StepLabel::Fire {
                        process: rng.gen_range(0..processes),
                        transition: rng.gen_range(0..3),
                    },
                    rng.gen_range(0..n) as u32,
                );
                if !out.contains(&e) {
                    out.push(e);
                }
            }
            if out.is_empty() {
                out.push((StepLabel::Stutter, i as u32));
            }
            out
        })
        .collect();
    StateGraph { states, edges }
}

/// Boolean variables and `enum == constructor` tests over the visible
/// variables of every process.
pub fn atoms_of(sys: &SystemInstance) -> Vec<Formula> {
    let mut out = Vec::new();
    for p in 0..sys.processes.len() {
        for (i, l) in sys.template_of(p).locals.iter().enumerate() {
            if l.hidden {
                continue;
            }
            let var = Formula::Var {
                process: p,
                var: VarId(i as u32),
            };
            match l.ty {
                Type::Bool => out.push(var),
                Type::Enum(_) => {
                    for v in sys.types.values(l.ty) {
                        out.push(Formula::bin(BinOp::Eq, var.clone(), Formula::Const(v)));
                    }
                }
            }
        }
    }
    out
}
