//! Independent brute-force enumerator for straight-line rendezvous systems.
//!
//! It interprets straight-line processes directly from
//! the three-flag handshake rules (sender offers when the channel is not
//! ready and waits for the received flag; receiver takes a value when the
//! channel is ready and not yet received) without going through lowering.

use std::collections::{HashMap, VecDeque};

use sandal::checker::{ChannelState, GlobalState, StateGraph, StepLabel};
use sandal::ir::Action;
use sandal::types::Value;
use sandal::System;

#[derive(Debug, Clone, Copy)]
pub enum Op {
    /// `var x bool` without initializer.
    Var(usize),
    Send(usize, bool),
    Recv(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Var,
    Offer,
    Ack,
    Recv,
    Stutter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OState {
    pc: Vec<usize>,
    waiting: Vec<bool>,
    vars: Vec<Vec<bool>>,
    chans: Vec<(bool, bool, Option<bool>)>,
}

/// Labelled edge to a target state index.
pub type Edge = ((usize, Kind), usize);

pub struct Oracle {
    pub procs: Vec<Vec<Op>>,
    pub nvars: Vec<usize>,
    pub nchans: usize,
}

impl Oracle {
    pub fn initial(&self) -> OState {
        OState {
            pc: vec![0; self.procs.len()],
            waiting: vec![false; self.procs.len()],
            vars: self.nvars.iter().map(|&n| vec![false; n]).collect(),
            chans: vec![(false, false, None); self.nchans],
        }
    }

    pub fn steps(&self, s: &OState) -> Vec<((usize, Kind), OState)> {
        let mut out = Vec::new();
        for (p, ops) in self.procs.iter().enumerate() {
            let Some(&op) = ops.get(s.pc[p]) else { continue };
            let mut t = s.clone();
            let kind = match op {
                Op::Var(x) => {
                    t.vars[p][x] = false;
                    t.pc[p] += 1;
                    Kind::Var
                }
                Op::Send(c, v) if !s.waiting[p] => {
                    if s.chans[c].0 {
                        continue;
                    }
                    t.chans[c] = (true, s.chans[c].1, Some(v));
                    t.waiting[p] = true;
                    Kind::Offer
                }
                Op::Send(c, _) => {
                    if !s.chans[c].1 {
                        continue;
                    }
                    t.chans[c] = (false, false, s.chans[c].2);
                    t.waiting[p] = false;
                    t.pc[p] += 1;
                    Kind::Ack
                }
                Op::Recv(c, x) => {
                    let (ready, received, buf) = s.chans[c];
                    if !ready || received {
                        continue;
                    }
                    t.vars[p][x] = buf.unwrap();
                    t.chans[c].1 = true;
                    t.pc[p] += 1;
                    Kind::Recv
                }
            };
            out.push(((p, kind), t));
        }
        if out.is_empty() {
            out.push(((usize::MAX, Kind::Stutter), s.clone()));
        }
        out
    }

    pub fn explore(&self) -> (Vec<OState>, Vec<Vec<Edge>>) {
        let mut index = HashMap::new();
        let mut states = vec![self.initial()];
        index.insert(states[0].clone(), 0);
        let mut edges = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let mut out = Vec::new();
            for (label, t) in self.steps(&states[i].clone()) {
                let next = states.len();
                let j = *index.entry(t.clone()).or_insert(next);
                if j == next {
                    states.push(t);
                }
                out.push((label, j));
            }
            edges.push(out);
            i += 1;
        }
        (states, edges)
    }
}

pub fn kind_of(sys: &System, label: StepLabel) -> (usize, Kind) {
    let StepLabel::Fire {
        process,
        transition,
    } = label
    else {
        return (usize::MAX, Kind::Stutter);
    };
    let t = &sys.automata[process].transitions[transition];
    let kind = if t.actions.iter().any(|a| matches!(a, Action::SetReady(_, true))) {
        Kind::Offer
    } else if t.actions.iter().any(|a| matches!(a, Action::SetReady(_, false))) {
        Kind::Ack
    } else if t.actions.iter().any(|a| matches!(a, Action::CopyBuffer(..))) {
        Kind::Recv
    } else {
        Kind::Var
    };
    (process, kind)
}

/// Local variable values of the checker state, in the oracle's layout.
pub fn vars_of(sys: &System, s: &GlobalState, names: &[Vec<&str>]) -> Vec<Vec<bool>> {
    names
        .iter()
        .enumerate()
        .map(|(p, vs)| {
            vs.iter()
                .map(|v| {
                    let id = sys.instance.template_of(p).local(v).unwrap();
                    s.local(p, id) == Value::Bool(true)
                })
                .collect()
        })
        .collect()
}

/// Pairs states of both graphs breadth-first along equal edge labels and
/// fails unless the pairing is a label-preserving bijection that also
/// agrees on variable values.
pub fn assert_isomorphic(sys: &System, graph: &StateGraph, oracle: &Oracle, names: &[Vec<&str>]) {
    let (ostates, oedges) = oracle.explore();
    assert_eq!(graph.len(), ostates.len(), "reachable state count");
    assert_eq!(
        graph.transition_count(),
        oedges.iter().map(Vec::len).sum::<usize>(),
        "transition count"
    );
    let mut to_checker = vec![u32::MAX; ostates.len()];
    let mut to_oracle = vec![usize::MAX; graph.len()];
    to_checker[0] = 0;
    to_oracle[0] = 0;
    let mut queue = VecDeque::from([(0usize, 0u32)]);
    while let Some((o, c)) = queue.pop_front() {
        assert_eq!(vars_of(sys, graph.state(c), names), ostates[o].vars);
        let mut oe: Vec<((usize, Kind), usize)> = oedges[o].clone();
        let mut ce: Vec<((usize, Kind), u32)> = graph.edges[c as usize]
            .iter()
            .map(|&(l, t)| (kind_of(sys, l), t))
            .collect();
        oe.sort();
        ce.sort();
        let ol: Vec<_> = oe.iter().map(|e| e.0).collect();
        let cl: Vec<_> = ce.iter().map(|e| e.0).collect();
        assert_eq!(ol, cl, "edge labels differ at oracle state {o}");
        for ((_, ot), (_, ct)) in oe.into_iter().zip(ce) {
            match (to_checker[ot], to_oracle[ct as usize]) {
                (u32::MAX, usize::MAX) => {
                    to_checker[ot] = ct;
                    to_oracle[ct as usize] = ot;
                    queue.push_back((ot, ct));
                }
                (a, b) => assert!(a == ct && b == ot, "pairing is not a bijection"),
            }
        }
    }
    assert!(to_checker.iter().all(|&c| c != u32::MAX));
}

pub fn handshake_safe(s: &GlobalState) -> bool {
    s.chans.iter().all(|c| match c {
        ChannelState::Rendezvous {
            ready, received, ..
        } => !*received || *ready,
        ChannelState::Buffered { .. } => true,
    })
}
