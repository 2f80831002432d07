//! Lasso search for liveness counterexamples.
//!
//! The negated property is tracked by a two-phase product: phase 0 is the
//! finite prefix, phase 1 the part that must repeat forever. A pattern is
//! described by which states may appear in each phase, which states may
//! start phase 1, and which phase-1 states are accepting.

use std::collections::VecDeque;

use super::{eval_prop, Counterexample, SpecPattern, StateGraph, StepLabel, TraceStep};

const UNSET: u32 = u32::MAX;

/// A path `prefix` from the initial state to some state `s`, then `cycle`
/// from `s` back to `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Lasso {
    pub prefix: Vec<(StepLabel, u32)>,
    pub cycle: Vec<(StepLabel, u32)>,
}

impl Lasso {
    pub fn into_counterexample(self, graph: &StateGraph) -> Counterexample {
        let loop_start = Some(self.prefix.len());
        let steps = self
            .prefix
            .into_iter()
            .chain(self.cycle)
            .map(|(label, s)| TraceStep {
                label,
                state: graph.state(s).clone(),
            })
            .collect();
        Counterexample {
            initial: graph.state(0).clone(),
            steps,
            loop_start,
        }
    }
}

struct Product<'g> {
    graph: &'g StateGraph,
    prefix_ok: Vec<bool>,
    enter_ok: Vec<bool>,
    loop_ok: Vec<bool>,
    accept: Vec<bool>,
}

impl<'g> Product<'g> {
    fn new(graph: &'g StateGraph, pattern: &SpecPattern) -> Self {
        let p: Vec<bool> = graph.states.iter().map(|s| eval_prop(pattern.prop(), s)).collect();
        let not_p: Vec<bool> = p.iter().map(|b| !b).collect();
        let all = vec![true; p.len()];
        let (prefix_ok, enter_ok, loop_ok, accept) = match pattern {
            SpecPattern::Always(_) => (all.clone(), not_p, all.clone(), all),
            SpecPattern::Eventually(_) => (not_p.clone(), not_p.clone(), not_p, all),
            SpecPattern::AlwaysEventually(_) => (all.clone(), not_p.clone(), not_p, all),
            SpecPattern::EventuallyAlways(_) => (all.clone(), all.clone(), all, not_p),
        };
        Product {
            graph,
            prefix_ok,
            enter_ok,
            loop_ok,
            accept,
        }
    }

    fn roots(&self) -> Vec<u32> {
        let mut out = Vec::new();
        if self.prefix_ok[0] {
            out.push(0);
        }
        if self.enter_ok[0] {
            out.push(1);
        }
        out
    }

    fn succ(&self, node: u32) -> Vec<(StepLabel, u32)> {
        let mut out = Vec::new();
        for &(label, t) in &self.graph.edges[(node / 2) as usize] {
            let ti = t as usize;
            if node.is_multiple_of(2) {
                if self.prefix_ok[ti] {
                    out.push((label, 2 * t));
                }
                if self.enter_ok[ti] {
                    out.push((label, 2 * t + 1));
                }
            } else if self.loop_ok[ti] {
                out.push((label, 2 * t + 1));
            }
        }
        out
    }

    fn accepting(&self, node: u32) -> bool {
        node % 2 == 1 && self.accept[(node / 2) as usize]
    }
}

/// Searches for a run violating `pattern`. With `fairness` on, the run's
/// loop must step every process that is enabled somewhere in it.
pub(crate) fn find_lasso(
    graph: &StateGraph,
    pattern: &SpecPattern,
    processes: usize,
    fairness: bool,
) -> Option<Lasso> {
    let product = Product::new(graph, pattern);
    if fairness {
        fair_scc(&product, processes)
    } else {
        nested_dfs(&product)
    }
}

struct Frame {
    node: u32,
    via: Option<StepLabel>,
    succ: Vec<(StepLabel, u32)>,
    next: usize,
}

impl Frame {
    fn new(product: &Product<'_>, node: u32, via: Option<StepLabel>) -> Self {
        Frame {
            node,
            via,
            succ: product.succ(node),
            next: 0,
        }
    }
}

fn path_of(stack: &[Frame]) -> Vec<(StepLabel, u32)> {
    stack
        .iter()
        .filter_map(|f| f.via.map(|l| (l, f.node / 2)))
        .collect()
}

/// Two-pass nested depth-first search; the inner pass starts at each
/// accepting node in post-order and looks for a way back to it.
fn nested_dfs(product: &Product<'_>) -> Option<Lasso> {
    let nodes = product.graph.len() * 2;
    let mut blue = vec![false; nodes];
    let mut red = vec![false; nodes];
    for root in product.roots() {
        if blue[root as usize] {
            continue;
        }
        blue[root as usize] = true;
        let mut stack = vec![Frame::new(product, root, None)];
        while let Some(top) = stack.last_mut() {
            if top.next < top.succ.len() {
                let (label, m) = top.succ[top.next];
                top.next += 1;
                if !blue[m as usize] {
                    blue[m as usize] = true;
                    stack.push(Frame::new(product, m, Some(label)));
                }
                continue;
            }
            let seed = top.node;
            if product.accepting(seed) {
                if let Some(cycle) = red_search(product, seed, &mut red) {
                    return Some(Lasso {
                        prefix: path_of(&stack),
                        cycle,
                    });
                }
            }
            stack.pop();
        }
    }
    None
}

fn red_search(product: &Product<'_>, seed: u32, red: &mut [bool]) -> Option<Vec<(StepLabel, u32)>> {
    red[seed as usize] = true;
    let mut stack = vec![Frame::new(product, seed, None)];
    while let Some(top) = stack.last_mut() {
        if top.next < top.succ.len() {
            let (label, m) = top.succ[top.next];
            top.next += 1;
            if m == seed {
                let mut cycle = path_of(&stack);
                cycle.push((label, seed / 2));
                return Some(cycle);
            }
            if !red[m as usize] {
                red[m as usize] = true;
                stack.push(Frame::new(product, m, Some(label)));
            }
        } else {
            stack.pop();
        }
    }
    None
}

/// Fair-cycle detection by repeated SCC decomposition of the phase-1
/// region. An SCC that leaves some process enabled without ever stepping
/// it is shrunk to the states where those processes are disabled and
/// decomposed again.
fn fair_scc(product: &Product<'_>, processes: usize) -> Option<Lasso> {
    let graph = product.graph;
    let n = graph.len();
    let mut parent: Vec<Option<(u32, StepLabel)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for r in product.roots() {
        seen[r as usize] = true;
        queue.push_back(r);
    }
    while let Some(u) = queue.pop_front() {
        for (label, v) in product.succ(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                parent[v as usize] = Some((u, label));
                queue.push_back(v);
            }
        }
    }

    let enabled: Vec<Vec<bool>> = graph
        .edges
        .iter()
        .map(|out| {
            let mut e = vec![false; processes];
            for (label, _) in out {
                if let Some(p) = label.process() {
                    e[p] = true;
                }
            }
            e
        })
        .collect();

    let region: Vec<u32> = (0..n as u32)
        .filter(|&s| seen[2 * s as usize + 1] && product.loop_ok[s as usize])
        .collect();
    let mut mask = vec![false; n];
    let mut work = vec![region];
    while let Some(cand) = work.pop() {
        for &s in &cand {
            mask[s as usize] = true;
        }
        let components = sccs(graph, &cand, &mask);
        for &s in &cand {
            mask[s as usize] = false;
        }
        for comp in components {
            for &s in &comp {
                mask[s as usize] = true;
            }
            let nontrivial = comp.len() > 1
                || graph.edges[comp[0] as usize].iter().any(|&(_, t)| t == comp[0]);
            let mut found = None;
            if nontrivial {
                let mut on = vec![false; processes];
                let mut stepped = vec![false; processes];
                for &s in &comp {
                    for (p, &e) in enabled[s as usize].iter().enumerate() {
                        on[p] |= e;
                    }
                    for &(label, t) in &graph.edges[s as usize] {
                        if let Some(p) = label.process() {
                            if mask[t as usize] {
                                stepped[p] = true;
                            }
                        }
                    }
                }
                let bad: Vec<usize> = (0..processes).filter(|&p| on[p] && !stepped[p]).collect();
                if bad.is_empty() {
                    if let Some(&a) = comp.iter().find(|&&s| product.accept[s as usize]) {
                        found = Some(build_fair_lasso(product, &parent, &mask, &stepped, a));
                    }
                } else {
                    let refined: Vec<u32> = comp
                        .iter()
                        .copied()
                        .filter(|&s| bad.iter().all(|&p| !enabled[s as usize][p]))
                        .collect();
                    if !refined.is_empty() {
                        work.push(refined);
                    }
                }
            }
            for &s in &comp {
                mask[s as usize] = false;
            }
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Strongly connected components of the subgraph induced by `mask`,
/// restricted to those reachable from `nodes`.
fn sccs(graph: &StateGraph, nodes: &[u32], mask: &[bool]) -> Vec<Vec<u32>> {
    let n = graph.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0u32;
    let mut out = Vec::new();
    for &root in nodes {
        if index[root as usize] != UNSET {
            continue;
        }
        let mut call: Vec<(u32, usize)> = Vec::new();
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        call.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            let edges = &graph.edges[v as usize];
            if *ei < edges.len() {
                let w = edges[*ei].1;
                *ei += 1;
                if !mask[w as usize] {
                    continue;
                }
                if index[w as usize] == UNSET {
                    index[w as usize] = counter;
                    low[w as usize] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u as usize] = low[u as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w as usize] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Shortest path from `from` to `to` inside `mask`; empty when they coincide.
fn path_within(graph: &StateGraph, mask: &[bool], from: u32, to: u32) -> Vec<(StepLabel, u32)> {
    if from == to {
        return Vec::new();
    }
    let mut parent: Vec<Option<(u32, StepLabel)>> = vec![None; graph.len()];
    let mut seen = vec![false; graph.len()];
    seen[from as usize] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(label, v) in &graph.edges[u as usize] {
            if !mask[v as usize] || seen[v as usize] {
                continue;
            }
            seen[v as usize] = true;
            parent[v as usize] = Some((u, label));
            if v == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (prev, l) = parent[cur as usize].expect("bfs parent");
                    path.push((l, cur));
                    cur = prev;
                }
                path.reverse();
                return path;
            }
            queue.push_back(v);
        }
    }
    unreachable!("states of one component are mutually reachable")
}

/// Loop through `a` that takes one step of every process in `stepped`,
/// preceded by the shortest product path to phase-1 `a`.
fn build_fair_lasso(
    product: &Product<'_>,
    parent: &[Option<(u32, StepLabel)>],
    mask: &[bool],
    stepped: &[bool],
    a: u32,
) -> Lasso {
    let graph = product.graph;
    let mut cycle = Vec::new();
    let mut cur = a;
    for (p, _) in stepped.iter().enumerate().filter(|(_, &s)| s) {
        let (u, label, v) = (0..graph.len() as u32)
            .filter(|&u| mask[u as usize])
            .find_map(|u| {
                graph.edges[u as usize]
                    .iter()
                    .find(|(l, v)| l.process() == Some(p) && mask[*v as usize])
                    .map(|&(l, v)| (u, l, v))
            })
            .expect("stepped process has an edge inside the component");
        cycle.extend(path_within(graph, mask, cur, u));
        cycle.push((label, v));
        cur = v;
    }
    cycle.extend(path_within(graph, mask, cur, a));
    if cycle.is_empty() {
        let &(label, v) = graph.edges[a as usize]
            .iter()
            .find(|(_, v)| mask[*v as usize])
            .expect("nontrivial component");
        cycle.push((label, v));
        cycle.extend(path_within(graph, mask, v, a));
    }

    let mut prefix = Vec::new();
    let mut node = 2 * a + 1;
    while let Some((prev, label)) = parent[node as usize] {
        prefix.push((label, node / 2));
        node = prev;
    }
    prefix.reverse();
    Lasso { prefix, cycle }
}
