use std::fmt::Write;

use super::{Action, Expr, ProcessAutomaton};
use crate::sema::SystemInstance;
use crate::types::{ChanId, VarId};

/// Text listing of every automaton in the system.
pub fn dump_system(sys: &SystemInstance, automata: &[ProcessAutomaton]) -> String {
    let mut out = String::new();
    for a in automata {
        out.push_str(&dump_automaton(sys, a));
    }
    out
}

/// One line per transition, `from -> to [guard] / actions (label)`, sorted
/// by source location and then declaration order.
pub fn dump_automaton(sys: &SystemInstance, a: &ProcessAutomaton) -> String {
    let names = Names { sys, a };
    let mut out = String::new();
    write!(
        out,
        "process {} (entry {}, terminal {}",
        a.process, a.entry, a.terminal
    )
    .unwrap();
    if let Some(s) = a.shutdown {
        write!(out, ", shutdown {s}").unwrap();
    }
    out.push_str(")\n");
    let mut order: Vec<usize> = (0..a.transitions.len()).collect();
    order.sort_by_key(|&i| (a.transitions[i].from, i));
    for i in order {
        let t = &a.transitions[i];
        let actions: Vec<String> = t.actions.iter().map(|x| names.action(x)).collect();
        writeln!(
            out,
            "  {} -> {} [{}] / {} ({})",
            t.from,
            t.to,
            names.expr(&t.guard),
            if actions.is_empty() {
                "-".to_string()
            } else {
                actions.join(", ")
            },
            t.label
        )
        .unwrap();
    }
    out
}

struct Names<'a> {
    sys: &'a SystemInstance,
    a: &'a ProcessAutomaton,
}

impl Names<'_> {
    fn chan(&self, c: ChanId) -> &str {
        &self.sys.channel(c).name
    }

    fn var(&self, v: VarId) -> &str {
        &self.a.locals[v.index()].name
    }

    fn vars(&self, vs: &[VarId]) -> String {
        let names: Vec<&str> = vs.iter().map(|v| self.var(*v)).collect();
        if names.len() == 1 {
            names[0].to_string()
        } else {
            format!("({})", names.join(", "))
        }
    }

    fn exprs(&self, es: &[Expr]) -> String {
        let parts: Vec<String> = es.iter().map(|e| self.expr(e)).collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join(", "))
        }
    }

    pub(super) fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::Const(v) => self.sys.types.value_name(*v),
            Expr::Local(v) => self.var(*v).to_string(),
            Expr::Ready(c) => format!("{}.ready", self.chan(*c)),
            Expr::Received(c) => format!("{}.received", self.chan(*c)),
            Expr::CanPush(c) => format!("!full({})", self.chan(*c)),
            Expr::CanPop(c) => format!("!empty({})", self.chan(*c)),
            Expr::Not(inner) => match **inner {
                Expr::Bin(..) => format!("!({})", self.expr(inner)),
                _ => format!("!{}", self.expr(inner)),
            },
            Expr::Bin(op, l, r) => {
                let side = |x: &Expr| match x {
                    Expr::Bin(..) => format!("({})", self.expr(x)),
                    _ => self.expr(x),
                };
                format!("{} {} {}", side(l), op.symbol(), side(r))
            }
        }
    }

    fn action(&self, a: &Action) -> String {
        match a {
            Action::Assign(v, e) => format!("{} := {}", self.var(*v), self.expr(e)),
            Action::SetReady(c, b) => format!("{}.ready := {b}", self.chan(*c)),
            Action::SetReceived(c, b) => format!("{}.received := {b}", self.chan(*c)),
            Action::SetBuffer(c, es) => format!("{}.value := {}", self.chan(*c), self.exprs(es)),
            Action::CopyBuffer(c, vs) => format!("{} := {}.value", self.vars(vs), self.chan(*c)),
            Action::Push(c, es) => format!("push({}, {})", self.chan(*c), self.exprs(es)),
            Action::Pop(c, vs) => format!("{} := pop({})", self.vars(vs), self.chan(*c)),
            Action::CopyHead(c, vs) => format!("{} := head({})", self.vars(vs), self.chan(*c)),
        }
    }
}
