use super::{Action, Expr, Label, LocId, ProcessAutomaton, SendFragment, Tag, Transition};
use crate::diag::Pos;
use crate::frontend::ast::RecvMode;
use crate::sema::{Binding, CExpr, CStmt, CStmtKind, ChanRef, ChannelKind, SystemInstance};
use crate::types::{ChanId, Value, VarId};

/// Lowers every process of the system, in process order.
pub fn lower_system(sys: &SystemInstance) -> Vec<ProcessAutomaton> {
    (0..sys.processes.len())
        .map(|p| lower_process(sys, p))
        .collect()
}

/// Builds the automaton of one process instance. Location 0 is the entry,
/// location 1 the terminal; `for` loops are unrolled over the bound arrays.
pub fn lower_process(sys: &SystemInstance, process: usize) -> ProcessAutomaton {
    let decl = &sys.processes[process];
    let template = &sys.templates[decl.template];
    let mut l = Lowerer {
        sys,
        bindings: &decl.bindings,
        loops: Vec::new(),
        locations: 2,
        transitions: Vec::new(),
        sends: Vec::new(),
    };
    let (entry, terminal) = (LocId(0), LocId(1));
    l.block(&template.body, entry, terminal, Pos::default());
    ProcessAutomaton {
        process: decl.name.clone(),
        locations: l.locations,
        entry,
        terminal,
        shutdown: None,
        transitions: l.transitions,
        locals: template.locals.clone(),
        sends: l.sends,
    }
}

struct Lowerer<'a> {
    sys: &'a SystemInstance,
    bindings: &'a [Binding],
    /// Current channel of each enclosing loop variable.
    loops: Vec<(u32, ChanId)>,
    locations: u32,
    transitions: Vec<Transition>,
    sends: Vec<SendFragment>,
}

impl Lowerer<'_> {
    fn fresh(&mut self) -> LocId {
        self.locations += 1;
        LocId(self.locations - 1)
    }

    fn edge(&mut self, from: LocId, to: LocId, guard: Expr, actions: Vec<Action>, label: Label) {
        self.transitions.push(Transition {
            from,
            to,
            guard,
            actions,
            label,
        });
    }

    fn chan(&self, r: ChanRef) -> ChanId {
        match r {
            ChanRef::Param(i) => match &self.bindings[i] {
                Binding::Channel(c) => *c,
                b => unreachable!("channel parameter bound to {b:?}"),
            },
            ChanRef::Loop(id) => {
                self.loops
                    .iter()
                    .rev()
                    .find(|(l, _)| *l == id)
                    .expect("loop variable in scope")
                    .1
            }
        }
    }

    fn expr(&self, e: &CExpr) -> Expr {
        match e {
            CExpr::Const(v) => Expr::Const(*v),
            CExpr::Local(v) => Expr::Local(*v),
            CExpr::Param(i) => match &self.bindings[*i] {
                Binding::Value(v) => Expr::Const(*v),
                b => unreachable!("value parameter bound to {b:?}"),
            },
            CExpr::Not(inner) => Expr::Not(Box::new(self.expr(inner))),
            CExpr::Bin(op, l, r) => Expr::Bin(*op, Box::new(self.expr(l)), Box::new(self.expr(r))),
        }
    }

    fn block(&mut self, stmts: &[CStmt], from: LocId, to: LocId, pos: Pos) {
        if stmts.is_empty() {
            let label = Label {
                text: "skip".into(),
                pos,
                tag: Tag::Normal,
            };
            self.edge(from, to, Expr::TRUE, Vec::new(), label);
            return;
        }
        let mut cur = from;
        for (i, s) in stmts.iter().enumerate() {
            let next = if i + 1 == stmts.len() { to } else { self.fresh() };
            self.stmt(s, cur, next);
            cur = next;
        }
    }

    fn stmt(&mut self, s: &CStmt, from: LocId, to: LocId) {
        let label = |suffix: &str, tag: Tag| Label {
            text: if suffix.is_empty() {
                s.text.clone()
            } else {
                format!("{} [{suffix}]", s.text)
            },
            pos: s.pos,
            tag,
        };
        match &s.kind {
            CStmtKind::Assign { var, value } => {
                let action = Action::Assign(*var, self.expr(value));
                self.edge(from, to, Expr::TRUE, vec![action], label("", Tag::Normal));
            }
            CStmtKind::Send { chan, values } => {
                let ch = self.chan(*chan);
                let values: Vec<Expr> = values.iter().map(|v| self.expr(v)).collect();
                match self.sys.channel(ch).kind {
                    ChannelKind::Rendezvous => {
                        let mid = self.fresh();
                        self.edge(
                            from,
                            mid,
                            Expr::Ready(ch).negate(),
                            vec![Action::SetReady(ch, true), Action::SetBuffer(ch, values)],
                            label("offer", Tag::Normal),
                        );
                        self.edge(
                            mid,
                            to,
                            Expr::Received(ch),
                            vec![Action::SetReady(ch, false), Action::SetReceived(ch, false)],
                            label("ack", Tag::Normal),
                        );
                    }
                    ChannelKind::Buffered { .. } => {
                        self.edge(
                            from,
                            to,
                            Expr::CanPush(ch),
                            vec![Action::Push(ch, values)],
                            label("", Tag::Normal),
                        );
                    }
                }
                self.sends.push(SendFragment {
                    chan: ch,
                    entry: from,
                    exit: to,
                    text: s.text.clone(),
                    pos: s.pos,
                    dropped: false,
                });
            }
            CStmtKind::Recv {
                chan,
                form,
                targets,
                result,
            } => {
                let ch = self.chan(*chan);
                let (ready, mut actions) = match self.sys.channel(ch).kind {
                    ChannelKind::Rendezvous => (
                        Expr::Ready(ch).and(Expr::Received(ch).negate()),
                        vec![
                            Action::CopyBuffer(ch, targets.clone()),
                            Action::SetReceived(ch, true),
                        ],
                    ),
                    ChannelKind::Buffered { .. } => {
                        let take = if form.peek {
                            Action::CopyHead(ch, targets.clone())
                        } else {
                            Action::Pop(ch, targets.clone())
                        };
                        (Expr::CanPop(ch), vec![take])
                    }
                };
                let set_result = |b: bool| -> Vec<Action> {
                    result
                        .iter()
                        .map(|r: &VarId| Action::Assign(*r, Expr::Const(Value::Bool(b))))
                        .collect()
                };
                actions.extend(set_result(true));
                self.edge(from, to, ready.clone(), actions, label("", Tag::Normal));
                match form.mode {
                    RecvMode::Blocking => {}
                    RecvMode::Timeout => {
                        self.edge(from, to, Expr::TRUE, set_result(false), label("timeout", Tag::Timeout))
                    }
                    RecvMode::Nonblock => self.edge(
                        from,
                        to,
                        ready.negate(),
                        set_result(false),
                        label("empty", Tag::Normal),
                    ),
                }
            }
            CStmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                let cond = self.expr(cond);
                let then_entry = self.fresh();
                self.edge(from, then_entry, cond.clone(), Vec::new(), label("then", Tag::Normal));
                self.block(then_block, then_entry, to, s.pos);
                match else_block {
                    Some(b) => {
                        let else_entry = self.fresh();
                        self.edge(from, else_entry, cond.negate(), Vec::new(), label("else", Tag::Normal));
                        self.block(b, else_entry, to, s.pos);
                    }
                    None => self.edge(from, to, cond.negate(), Vec::new(), label("else", Tag::Normal)),
                }
            }
            CStmtKind::For { var, array, body } => {
                let chans = match &self.bindings[*array] {
                    Binding::Channels(cs) => cs.clone(),
                    b => unreachable!("array parameter bound to {b:?}"),
                };
                if chans.is_empty() {
                    self.edge(from, to, Expr::TRUE, Vec::new(), label("empty", Tag::Normal));
                    return;
                }
                let mut cur = from;
                for (i, ch) in chans.iter().enumerate() {
                    let next = if i + 1 == chans.len() { to } else { self.fresh() };
                    self.loops.push((*var, *ch));
                    self.block(body, cur, next, s.pos);
                    self.loops.pop();
                    cur = next;
                }
            }
            CStmtKind::Choice(blocks) => {
                for (i, b) in blocks.iter().enumerate() {
                    let entry = self.fresh();
                    self.edge(from, entry, Expr::TRUE, Vec::new(), label(&format!("branch {}", i + 1), Tag::Normal));
                    self.block(b, entry, to, s.pos);
                }
            }
        }
    }
}
