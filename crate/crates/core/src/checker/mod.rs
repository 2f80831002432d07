//! Explicit-state verification of the composed system.
//!
//! The global transition system interleaves one enabled transition of one
//! process per step. A state where no process can move gets a single
//! stutter self-loop, so every maximal run is infinite.

mod liveness;
mod pattern;
mod state;
mod trace;

use std::collections::VecDeque;

use indexmap::IndexSet;
use thiserror::Error;

use crate::ltl::Formula;
use crate::System;

pub use pattern::{eval_prop, SpecPattern};
pub use state::{ChannelState, GlobalState, ProcState};
pub use trace::{Counterexample, ReplayError, TraceStep};

pub const DEFAULT_MAX_STATES: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("state limit exceeded: more than {limit} reachable states")]
    StateLimitExceeded { limit: usize },
    #[error("unsupported formula `{formula}`: the built-in checker handles G p, F p, F G p and G F p")]
    UnsupportedFormula { formula: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub max_states: usize,
    /// Weak process fairness for liveness properties.
    pub fairness: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_states: DEFAULT_MAX_STATES,
            fairness: true,
        }
    }
}

/// Searches `graph` for an infinite run violating `pattern`, returned as a
/// lasso. With `fairness` on, a lasso counts only if every process enabled
/// at some state of its loop also fires somewhere in the loop. Processes are
/// numbered `0..processes` by the [`StepLabel::Fire`] labels of the graph.
pub fn find_lasso(
    graph: &StateGraph,
    pattern: &SpecPattern,
    processes: usize,
    fairness: bool,
) -> Option<Counterexample> {
    liveness::find_lasso(graph, pattern, processes, fairness).map(|l| l.into_counterexample(graph))
}

/// Identifies one step of the global transition system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepLabel {
    /// Self-loop added at a global deadlock.
    Stutter,
    Fire { process: usize, transition: usize },
}

impl StepLabel {
    pub fn process(self) -> Option<usize> {
        match self {
            StepLabel::Stutter => None,
            StepLabel::Fire { process, .. } => Some(process),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Counterexample),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(cx) => Some(cx),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// Reachable states visited before the verdict was reached.
    pub states: usize,
}

/// The full reachable state graph. State 0 is the initial state and states
/// are numbered in breadth-first discovery order.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub states: IndexSet<GlobalState>,
    pub edges: Vec<Vec<(StepLabel, u32)>>,
}

impl StateGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: u32) -> &GlobalState {
        &self.states[i as usize]
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

pub struct Checker<'s> {
    sys: &'s System,
    outgoing: Vec<Vec<Vec<usize>>>,
    config: CheckConfig,
}

impl<'s> Checker<'s> {
    pub fn new(sys: &'s System, config: CheckConfig) -> Self {
        Checker {
            sys,
            outgoing: sys.automata.iter().map(|a| a.outgoing()).collect(),
            config,
        }
    }

    pub fn system(&self) -> &'s System {
        self.sys
    }

    pub fn config(&self) -> CheckConfig {
        self.config
    }

    pub fn initial_state(&self) -> GlobalState {
        GlobalState::initial(self.sys)
    }

    /// Every enabled step from `s`, ordered by process index and then by
    /// transition declaration order; a lone stutter step if none is enabled.
    pub fn successors(&self, s: &GlobalState) -> Vec<(StepLabel, GlobalState)> {
        let mut out = Vec::new();
        for (p, a) in self.sys.automata.iter().enumerate() {
            let loc = s.procs[p].loc;
            for &ti in &self.outgoing[p][loc.index()] {
                let t = &a.transitions[ti];
                if !s.eval_bool(p, &t.guard) {
                    continue;
                }
                let mut next = s.clone();
                next.apply(p, &t.actions);
                next.procs[p].loc = t.to;
                out.push((
                    StepLabel::Fire {
                        process: p,
                        transition: ti,
                    },
                    next,
                ));
            }
        }
        if out.is_empty() {
            out.push((StepLabel::Stutter, s.clone()));
        }
        out
    }

    /// Whether `process` has an enabled transition in `s`.
    pub fn enabled(&self, s: &GlobalState, process: usize) -> bool {
        let a = &self.sys.automata[process];
        self.outgoing[process][s.procs[process].loc.index()]
            .iter()
            .any(|&ti| s.eval_bool(process, &a.transitions[ti].guard))
    }

    /// Builds the whole reachable state graph breadth-first.
    pub fn explore(&self) -> Result<StateGraph, CheckError> {
        let mut states = IndexSet::new();
        let mut edges = Vec::new();
        states.insert(self.initial_state());
        let mut next = 0;
        while next < states.len() {
            let succ = self.successors(&states[next]);
            let mut out = Vec::with_capacity(succ.len());
            for (label, t) in succ {
                let (idx, _) = states.insert_full(t);
                out.push((label, idx as u32));
            }
            if states.len() > self.config.max_states {
                return Err(CheckError::StateLimitExceeded {
                    limit: self.config.max_states,
                });
            }
            edges.push(out);
            next += 1;
        }
        Ok(StateGraph { states, edges })
    }

    /// Breadth-first search for a state violating `pred`; a failure carries
    /// a shortest path to such a state.
    pub fn check_invariant(&self, pred: impl Fn(&GlobalState) -> bool) -> Result<CheckOutcome, CheckError> {
        let mut states = IndexSet::new();
        let mut parent: Vec<Option<(u32, StepLabel)>> = Vec::new();
        let init = self.initial_state();
        let init_ok = pred(&init);
        states.insert(init);
        parent.push(None);
        if !init_ok {
            return Ok(self.safety_failure(&states, &parent, 0));
        }
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            for (label, t) in self.successors(&states[i as usize]) {
                let bad = !pred(&t);
                let (idx, fresh) = states.insert_full(t);
                if !fresh {
                    continue;
                }
                parent.push(Some((i, label)));
                if bad {
                    return Ok(self.safety_failure(&states, &parent, idx as u32));
                }
                if states.len() > self.config.max_states {
                    return Err(CheckError::StateLimitExceeded {
                        limit: self.config.max_states,
                    });
                }
                queue.push_back(idx as u32);
            }
        }
        Ok(CheckOutcome {
            verdict: Verdict::Pass,
            states: states.len(),
        })
    }

    fn safety_failure(
        &self,
        states: &IndexSet<GlobalState>,
        parent: &[Option<(u32, StepLabel)>],
        bad: u32,
    ) -> CheckOutcome {
        let mut steps = Vec::new();
        let mut cur = bad;
        while let Some((prev, label)) = parent[cur as usize] {
            steps.push(TraceStep {
                label,
                state: states[cur as usize].clone(),
            });
            cur = prev;
        }
        steps.reverse();
        CheckOutcome {
            verdict: Verdict::Fail(Counterexample {
                initial: states[0].clone(),
                steps,
                loop_start: None,
            }),
            states: states.len(),
        }
    }

    /// `G p`: `p` holds in every reachable state.
    pub fn check_safety(&self, p: &Formula) -> Result<CheckOutcome, CheckError> {
        self.check_invariant(|s| eval_prop(p, s))
    }

    /// `F p`, `F G p` or `G F p`, searched as a counterexample lasso.
    pub fn check_liveness(&self, pattern: &SpecPattern, fairness: bool) -> Result<CheckOutcome, CheckError> {
        let graph = self.explore()?;
        let verdict = find_lasso(&graph, pattern, self.sys.automata.len(), fairness)
            .map_or(Verdict::Pass, Verdict::Fail);
        Ok(CheckOutcome {
            verdict,
            states: graph.len(),
        })
    }

    /// Checks any formula inside the supported fragment. Safety ignores the
    /// fairness setting; liveness uses it.
    pub fn check(&self, f: &Formula) -> Result<CheckOutcome, CheckError> {
        match SpecPattern::extract(f) {
            Some(SpecPattern::Always(p)) => self.check_safety(&p),
            Some(pattern) => self.check_liveness(&pattern, self.config.fairness),
            None => Err(CheckError::UnsupportedFormula {
                formula: self.sys.instance.formula_text(f),
            }),
        }
    }
}
