//! Counterexample traces: replay against the transition relation and
//! human-readable rendering.

use std::fmt::Write;

use thiserror::Error;

use super::{ChannelState, Checker, GlobalState, StepLabel};
use crate::System;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub label: StepLabel,
    /// State after the step.
    pub state: GlobalState,
}

/// A finite path, or a lasso when `loop_start` is set: the steps from
/// state `loop_start` onward lead back to that state and repeat forever.
/// State 0 is `initial`; state `k` is the target of step `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub initial: GlobalState,
    pub steps: Vec<TraceStep>,
    pub loop_start: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("trace does not start in the initial state")]
    InitialMismatch,
    #[error("step #{step} is not a transition of the system")]
    NotATransition { step: usize },
    #[error("loop does not return to state #{start}")]
    LoopNotClosed { start: usize },
}

impl Counterexample {
    /// State `k`, where state 0 is the initial state.
    pub fn state(&self, k: usize) -> &GlobalState {
        if k == 0 {
            &self.initial
        } else {
            &self.steps[k - 1].state
        }
    }

    pub fn is_lasso(&self) -> bool {
        self.loop_start.is_some()
    }

    pub fn prefix(&self) -> &[TraceStep] {
        &self.steps[..self.loop_start.unwrap_or(self.steps.len())]
    }

    pub fn loop_steps(&self) -> &[TraceStep] {
        self.loop_start.map_or(&[], |k| &self.steps[k..])
    }

    /// Checks every step against the successor relation of `checker`.
    pub fn replay(&self, checker: &Checker<'_>) -> Result<(), ReplayError> {
        if self.initial != checker.initial_state() {
            return Err(ReplayError::InitialMismatch);
        }
        for (i, step) in self.steps.iter().enumerate() {
            let ok = checker
                .successors(self.state(i))
                .iter()
                .any(|(l, s)| *l == step.label && *s == step.state);
            if !ok {
                return Err(ReplayError::NotATransition { step: i + 1 });
            }
        }
        if let Some(start) = self.loop_start {
            if start >= self.steps.len() || self.state(self.steps.len()) != self.state(start) {
                return Err(ReplayError::LoopNotClosed { start });
            }
        }
        Ok(())
    }

    /// One block per step: the firing process and transition label, then
    /// every location, variable and channel that changed.
    pub fn render(&self, sys: &System) -> String {
        let mut out = String::from("#0 initial\n");
        for line in describe_changes(sys, None, &self.initial) {
            let _ = writeln!(out, "   {line}");
        }
        for (i, step) in self.steps.iter().enumerate() {
            let k = i + 1;
            match step.label {
                StepLabel::Stutter => {
                    let _ = writeln!(out, "#{k} *: STUTTER");
                }
                StepLabel::Fire {
                    process,
                    transition,
                } => {
                    let a = &sys.automata[process];
                    let _ = writeln!(
                        out,
                        "#{k} {}: {}",
                        a.process, a.transitions[transition].label
                    );
                }
            }
            for line in describe_changes(sys, Some(self.state(i)), &step.state) {
                let _ = writeln!(out, "   {line}");
            }
        }
        if let Some(j) = self.loop_start {
            let _ = writeln!(out, "LOOP back to step #{j}");
        }
        out
    }
}

fn describe_changes(sys: &System, before: Option<&GlobalState>, after: &GlobalState) -> Vec<String> {
    let types = &sys.instance.types;
    let mut lines = Vec::new();
    for (p, (a, ps)) in sys.automata.iter().zip(&after.procs).enumerate() {
        let prev = before.map(|b| &b.procs[p]);
        if prev.is_none_or(|q| q.loc != ps.loc) {
            let where_ = if Some(ps.loc) == a.shutdown {
                "shutdown".to_string()
            } else if ps.loc == a.terminal {
                format!("{} (terminal)", ps.loc)
            } else {
                ps.loc.to_string()
            };
            lines.push(format!("{} at {where_}", a.process));
        }
        for (i, local) in a.locals.iter().enumerate() {
            if local.hidden || prev.is_some_and(|q| q.locals[i] == ps.locals[i]) {
                continue;
            }
            lines.push(format!(
                "{}.{} = {}",
                a.process,
                local.name,
                types.value_name(ps.locals[i])
            ));
        }
    }
    for (c, (decl, cs)) in sys.instance.channels.iter().zip(&after.chans).enumerate() {
        if before.is_some_and(|b| b.chans[c] == *cs) {
            continue;
        }
        let text = match cs {
            ChannelState::Rendezvous {
                ready,
                received,
                buffer,
            } => format!(
                "ready={ready} received={received} value={}",
                buffer
                    .as_ref()
                    .map_or("-".to_string(), |v| types.display_values(v).to_string())
            ),
            ChannelState::Buffered { queue, .. } => {
                let items: Vec<String> = queue
                    .iter()
                    .map(|v| types.display_values(v).to_string())
                    .collect();
                format!("[{}]", items.join(", "))
            }
        };
        lines.push(format!("channel {}: {text}", decl.name));
    }
    lines
}
