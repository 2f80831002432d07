use super::{CStmt, CStmtKind, ChanRef, CheckedModel, CheckedProc, SemaError};
use crate::diag::Pos;
use crate::ltl::Formula;
use crate::types::{ChanId, Type, TypeTable, Value, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Rendezvous,
    Buffered { capacity: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelDecl {
    pub name: String,
    pub payload: Vec<Type>,
    pub kind: ChannelKind,
    pub drop_fault: bool,
}

/// How a template parameter is bound in one process instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Value(Value),
    Channel(ChanId),
    Channels(Vec<ChanId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDecl {
    pub name: String,
    pub template: usize,
    pub bindings: Vec<Binding>,
    pub shutdown_fault: bool,
}

/// One `ltl` formula with its atoms resolved to process variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spec {
    /// The formula as written, normalized by the printer.
    pub text: String,
    pub formula: Formula,
    pub pos: Pos,
}

/// The closed system described by the init-block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemInstance {
    pub types: TypeTable,
    pub templates: Vec<CheckedProc>,
    pub channels: Vec<ChannelDecl>,
    pub processes: Vec<ProcessDecl>,
    pub specs: Vec<Spec>,
}

impl SystemInstance {
    pub fn channel(&self, id: ChanId) -> &ChannelDecl {
        &self.channels[id.index()]
    }

    pub fn template_of(&self, process: usize) -> &CheckedProc {
        &self.templates[self.processes[process].template]
    }

    pub fn process_index(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.name == name)
    }

    pub fn channel_index(&self, name: &str) -> Option<ChanId> {
        self.channels
            .iter()
            .position(|c| c.name == name)
            .map(|i| ChanId(i as u32))
    }

    /// `instance.variable` rendering of a process variable.
    pub fn var_name(&self, process: usize, var: VarId) -> String {
        format!(
            "{}.{}",
            self.processes[process].name,
            self.template_of(process).locals[var.index()].name
        )
    }

    /// Resolves `inst.var` for building formulas programmatically.
    pub fn var(&self, process: &str, var: &str) -> Option<Formula> {
        let p = self.process_index(process)?;
        let v = self.template_of(p).local(var)?;
        Some(Formula::Var { process: p, var: v })
    }

    pub fn formula_text(&self, f: &Formula) -> String {
        f.display(&self.types, &|p, v| self.var_name(p, v))
    }
}

/// Builds the closed [`SystemInstance`] from a checked model: one process
/// per process entry and one channel per channel entry, both in init-block
/// order, with fault markers carried over.
pub fn instantiate(checked: &CheckedModel) -> Result<SystemInstance, SemaError> {
    let processes: Vec<ProcessDecl> = checked
        .processes
        .iter()
        .map(|p| ProcessDecl {
            name: p.name.clone(),
            template: p.template,
            bindings: p.bindings.clone(),
            shutdown_fault: p.shutdown_fault,
        })
        .collect();
    for p in &processes {
        let template = &checked.templates[p.template];
        check_peeks(&template.body, &p.bindings, &mut Vec::new(), checked, &p.name)?;
    }
    Ok(SystemInstance {
        types: checked.types.clone(),
        templates: checked.templates.clone(),
        channels: checked.channels.clone(),
        processes,
        specs: checked.specs.clone(),
    })
}

/// Channels a [`ChanRef`] can denote under `bindings`, given the arrays the
/// enclosing loops iterate over.
pub(crate) fn chans_of(r: ChanRef, bindings: &[Binding], loops: &[(u32, usize)]) -> Vec<ChanId> {
    match r {
        ChanRef::Param(i) => match &bindings[i] {
            Binding::Channel(c) => vec![*c],
            _ => unreachable!("channel parameter bound to non-channel"),
        },
        ChanRef::Loop(id) => {
            let (_, array) = loops
                .iter()
                .rev()
                .find(|(l, _)| *l == id)
                .expect("loop variable in scope");
            match &bindings[*array] {
                Binding::Channels(cs) => cs.clone(),
                _ => unreachable!("array parameter bound to non-array"),
            }
        }
    }
}

fn check_peeks(
    body: &[CStmt],
    bindings: &[Binding],
    loops: &mut Vec<(u32, usize)>,
    checked: &CheckedModel,
    process: &str,
) -> Result<(), SemaError> {
    for stmt in body {
        match &stmt.kind {
            CStmtKind::Recv { chan, form, .. } if form.peek => {
                for c in chans_of(*chan, bindings, loops) {
                    let decl = checked.channel(c);
                    if decl.kind == ChannelKind::Rendezvous {
                        return Err(SemaError::ty(
                            stmt.pos,
                            format!(
                                "`{}` on rendezvous channel `{}` (in process `{process}`); peek needs a buffered channel",
                                form.keyword(),
                                decl.name
                            ),
                        ));
                    }
                }
            }
            CStmtKind::If {
                then_block,
                else_block,
                ..
            } => {
                check_peeks(then_block, bindings, loops, checked, process)?;
                if let Some(e) = else_block {
                    check_peeks(e, bindings, loops, checked, process)?;
                }
            }
            CStmtKind::For { var, array, body } => {
                loops.push((*var, *array));
                check_peeks(body, bindings, loops, checked, process)?;
                loops.pop();
            }
            CStmtKind::Choice(blocks) => {
                for b in blocks {
                    check_peeks(b, bindings, loops, checked, process)?;
                }
            }
            _ => {}
        }
    }
    Ok(())
}
