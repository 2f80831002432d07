//! Shutdown and message-drop faults as automaton-to-automaton rewrites.
//!
//! Weaving only appends locations and transitions. Location ids and
//! transition indices of the input stay valid in the output, so any run of
//! the unwoven system is also a run of the woven one.

use std::fmt;

use crate::diag::Pos;
use crate::ir::{Expr, Label, LocId, ProcessAutomaton, Tag, Transition};
use crate::sema::SystemInstance;

/// How many fault transitions weaving added.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeaveReport {
    /// Per process: shutdown transitions added.
    pub shutdown: Vec<(String, usize)>,
    /// Per channel: sends that received a skip edge.
    pub drop: Vec<(String, usize)>,
}

impl fmt::Display for WeaveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shutdown transitions:")?;
        for (p, n) in &self.shutdown {
            writeln!(f, "  {p}: {n}")?;
        }
        writeln!(f, "dropped sends:")?;
        for (c, n) in &self.drop {
            writeln!(f, "  {c}: {n}")?;
        }
        Ok(())
    }
}

/// Adds an absorbing `shutdown` location and an unguarded, action-free
/// transition into it from every other location. Already-woven automata
/// are returned unchanged.
pub fn weave_shutdown(a: &ProcessAutomaton) -> ProcessAutomaton {
    let mut out = a.clone();
    if a.shutdown.is_some() {
        return out;
    }
    let crash = LocId(out.locations);
    out.locations += 1;
    out.shutdown = Some(crash);
    for loc in a.location_ids() {
        out.transitions.push(Transition {
            from: loc,
            to: crash,
            guard: Expr::TRUE,
            actions: Vec::new(),
            label: Label {
                text: "halt".into(),
                pos: Pos::default(),
                tag: Tag::Shutdown,
            },
        });
    }
    out
}

/// Gives every send over a `@drop` channel a skip edge from its entry to its
/// exit: the sender proceeds as if the message went out, and nothing reaches
/// the channel.
pub fn weave_drop(sys: &SystemInstance, automata: &[ProcessAutomaton]) -> Vec<ProcessAutomaton> {
    automata
        .iter()
        .map(|a| {
            let mut out = a.clone();
            for frag in out.sends.iter_mut() {
                if frag.dropped || !sys.channel(frag.chan).drop_fault {
                    continue;
                }
                frag.dropped = true;
                out.transitions.push(Transition {
                    from: frag.entry,
                    to: frag.exit,
                    guard: Expr::TRUE,
                    actions: Vec::new(),
                    label: Label {
                        text: format!("{} [lost]", frag.text),
                        pos: frag.pos,
                        tag: Tag::Drop,
                    },
                });
            }
            out
        })
        .collect()
}

/// Applies every fault marker of `sys`: drop edges for `@drop` channels,
/// then shutdown edges for `@shutdown` processes.
pub fn weave(sys: &SystemInstance, automata: &[ProcessAutomaton]) -> (Vec<ProcessAutomaton>, WeaveReport) {
    let dropped = weave_drop(sys, automata);
    let mut report = WeaveReport::default();
    for (i, c) in sys.channels.iter().enumerate() {
        let n = dropped
            .iter()
            .zip(automata)
            .map(|(after, before)| {
                after
                    .sends
                    .iter()
                    .zip(&before.sends)
                    .filter(|(x, y)| x.chan.index() == i && x.dropped && !y.dropped)
                    .count()
            })
            .sum();
        report.drop.push((c.name.clone(), n));
    }
    let woven = dropped
        .iter()
        .zip(&sys.processes)
        .map(|(a, decl)| {
            let out = if decl.shutdown_fault {
                weave_shutdown(a)
            } else {
                a.clone()
            };
            report
                .shutdown
                .push((decl.name.clone(), out.transitions.len() - a.transitions.len()));
            out
        })
        .collect();
    (woven, report)
}
