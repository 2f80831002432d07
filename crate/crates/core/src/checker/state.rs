use std::collections::VecDeque;

use crate::ir::{Action, Expr, LocId};
use crate::sema::ChannelKind;
use crate::types::{Value, VarId};
use crate::System;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProcState {
    pub loc: LocId,
    pub locals: Box<[Value]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChannelState {
    Rendezvous {
        ready: bool,
        received: bool,
        /// `None` until the first value is offered.
        buffer: Option<Box<[Value]>>,
    },
    Buffered {
        capacity: u32,
        queue: VecDeque<Box<[Value]>>,
    },
}

/// Composed state of every process and channel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalState {
    pub procs: Vec<ProcState>,
    pub chans: Vec<ChannelState>,
}

impl GlobalState {
    pub fn initial(sys: &System) -> GlobalState {
        let types = &sys.instance.types;
        let procs = sys
            .automata
            .iter()
            .map(|a| ProcState {
                loc: a.entry,
                locals: a.locals.iter().map(|l| types.zero(l.ty)).collect(),
            })
            .collect();
        let chans = sys
            .instance
            .channels
            .iter()
            .map(|c| match c.kind {
                ChannelKind::Rendezvous => ChannelState::Rendezvous {
                    ready: false,
                    received: false,
                    buffer: None,
                },
                ChannelKind::Buffered { capacity } => ChannelState::Buffered {
                    capacity,
                    queue: VecDeque::new(),
                },
            })
            .collect();
        GlobalState { procs, chans }
    }

    pub fn local(&self, process: usize, var: VarId) -> Value {
        self.procs[process].locals[var.index()]
    }

    pub(crate) fn eval(&self, process: usize, e: &Expr) -> Value {
        match e {
            Expr::Const(v) => *v,
            Expr::Local(v) => self.local(process, *v),
            Expr::Ready(c) => match &self.chans[c.index()] {
                ChannelState::Rendezvous { ready, .. } => Value::Bool(*ready),
                _ => unreachable!("ready flag of a buffered channel"),
            },
            Expr::Received(c) => match &self.chans[c.index()] {
                ChannelState::Rendezvous { received, .. } => Value::Bool(*received),
                _ => unreachable!("received flag of a buffered channel"),
            },
            Expr::CanPush(c) => match &self.chans[c.index()] {
                ChannelState::Buffered { capacity, queue } => {
                    Value::Bool(queue.len() < *capacity as usize)
                }
                _ => unreachable!("queue of a rendezvous channel"),
            },
            Expr::CanPop(c) => match &self.chans[c.index()] {
                ChannelState::Buffered { queue, .. } => Value::Bool(!queue.is_empty()),
                _ => unreachable!("queue of a rendezvous channel"),
            },
            Expr::Not(inner) => Value::Bool(!self.eval_bool(process, inner)),
            Expr::Bin(op, l, r) => op.apply(self.eval(process, l), self.eval(process, r)),
        }
    }

    pub(crate) fn eval_bool(&self, process: usize, e: &Expr) -> bool {
        self.eval(process, e).as_bool().expect("boolean guard")
    }

    /// Applies `actions` of `process` in order.
    pub(crate) fn apply(&mut self, process: usize, actions: &[Action]) {
        for a in actions {
            match a {
                Action::Assign(v, e) => {
                    let value = self.eval(process, e);
                    self.procs[process].locals[v.index()] = value;
                }
                Action::SetReady(c, b) => {
                    if let ChannelState::Rendezvous { ready, .. } = &mut self.chans[c.index()] {
                        *ready = *b;
                    }
                }
                Action::SetReceived(c, b) => {
                    if let ChannelState::Rendezvous { received, .. } = &mut self.chans[c.index()] {
                        *received = *b;
                    }
                }
                Action::SetBuffer(c, es) => {
                    let values: Box<[Value]> = es.iter().map(|e| self.eval(process, e)).collect();
                    if let ChannelState::Rendezvous { buffer, .. } = &mut self.chans[c.index()] {
                        *buffer = Some(values);
                    }
                }
                Action::CopyBuffer(c, vs) => {
                    let ChannelState::Rendezvous {
                        buffer: Some(values),
                        ..
                    } = &self.chans[c.index()]
                    else {
                        unreachable!("receive from an empty value slot")
                    };
                    let values = values.clone();
                    self.store(process, vs, &values);
                }
                Action::Push(c, es) => {
                    let values: Box<[Value]> = es.iter().map(|e| self.eval(process, e)).collect();
                    if let ChannelState::Buffered { queue, .. } = &mut self.chans[c.index()] {
                        queue.push_back(values);
                    }
                }
                Action::Pop(c, vs) => {
                    let ChannelState::Buffered { queue, .. } = &mut self.chans[c.index()] else {
                        unreachable!("pop from a rendezvous channel")
                    };
                    let values = queue.pop_front().expect("pop from an empty queue");
                    self.store(process, vs, &values);
                }
                Action::CopyHead(c, vs) => {
                    let ChannelState::Buffered { queue, .. } = &self.chans[c.index()] else {
                        unreachable!("peek on a rendezvous channel")
                    };
                    let values = queue.front().expect("peek on an empty queue").clone();
                    self.store(process, vs, &values);
                }
            }
        }
    }

    fn store(&mut self, process: usize, vars: &[VarId], values: &[Value]) {
        for (v, x) in vars.iter().zip(values) {
            self.procs[process].locals[v.index()] = *x;
        }
    }
}
