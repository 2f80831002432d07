//! Name resolution, type checking and init-block instantiation.

mod check;
mod instance;

use thiserror::Error;

use crate::diag::{Diagnostic, Pos};
use crate::frontend::ast::{self, RecvForm};
use crate::types::{BinOp, ChanId, Type, TypeTable, Value, VarId};

pub use check::resolve_and_check;
pub use instance::{instantiate, Binding, ChannelDecl, ChannelKind, ProcessDecl, Spec, SystemInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemaError {
    #[error("{pos}: name error: {message}")]
    Name { pos: Pos, message: String },
    #[error("{pos}: type error: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: arity error: {message}")]
    Arity { pos: Pos, message: String },
}

impl SemaError {
    pub(crate) fn name(pos: Pos, message: impl Into<String>) -> Self {
        SemaError::Name {
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn ty(pos: Pos, message: impl Into<String>) -> Self {
        SemaError::Type {
            pos,
            message: message.into(),
        }
    }
}

impl Diagnostic for SemaError {
    fn pos(&self) -> Pos {
        match self {
            SemaError::Name { pos, .. } | SemaError::Type { pos, .. } | SemaError::Arity { pos, .. } => {
                *pos
            }
        }
    }

    fn message(&self) -> String {
        match self {
            SemaError::Name { message, .. } => format!("name error: {message}"),
            SemaError::Type { message, .. } => format!("type error: {message}"),
            SemaError::Arity { message, .. } => format!("arity error: {message}"),
        }
    }
}

/// Declared type of a template parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamType {
    Value(Type),
    Channel(Vec<Type>),
    ChannelArray(Vec<Type>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVar {
    pub name: String,
    pub ty: Type,
    /// Compiler-introduced temporaries are not addressable from `ltl`.
    pub hidden: bool,
}

/// A channel operand inside a template body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChanRef {
    Param(usize),
    /// The variable of an enclosing `for` loop.
    Loop(u32),
}

/// Typed expression inside a template body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CExpr {
    Const(Value),
    Local(VarId),
    /// A value parameter, substituted at instantiation.
    Param(usize),
    Not(Box<CExpr>),
    Bin(BinOp, Box<CExpr>, Box<CExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CStmt {
    pub kind: CStmtKind,
    /// Source rendering of the statement head, used in labels.
    pub text: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CStmtKind {
    /// Assignments and variable declarations (a declaration without an
    /// initializer assigns the zero value).
    Assign { var: VarId, value: CExpr },
    Send { chan: ChanRef, values: Vec<CExpr> },
    /// Every receive-family operation. `result` receives the success flag
    /// when the operation was used as an expression.
    Recv {
        chan: ChanRef,
        form: RecvForm,
        targets: Vec<VarId>,
        result: Option<VarId>,
    },
    If {
        cond: CExpr,
        then_block: Vec<CStmt>,
        else_block: Option<Vec<CStmt>>,
    },
    For {
        var: u32,
        array: usize,
        body: Vec<CStmt>,
    },
    Choice(Vec<Vec<CStmt>>),
}

/// A type-checked process template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedProc {
    pub name: String,
    pub params: Vec<(String, ParamType)>,
    pub locals: Vec<LocalVar>,
    pub body: Vec<CStmt>,
}

impl CheckedProc {
    pub fn local(&self, name: &str) -> Option<VarId> {
        self.locals
            .iter()
            .position(|l| l.name == name && !l.hidden)
            .map(|i| VarId(i as u32))
    }
}

/// A process entry of the init-block with its arguments resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedProcess {
    pub name: String,
    pub template: usize,
    pub bindings: Vec<Binding>,
    pub shutdown_fault: bool,
    pub pos: Pos,
}

/// Output of [`resolve_and_check`]: the tree plus everything resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedModel {
    pub ast: ast::Model,
    pub types: TypeTable,
    pub templates: Vec<CheckedProc>,
    pub channels: Vec<ChannelDecl>,
    pub processes: Vec<CheckedProcess>,
    pub specs: Vec<Spec>,
}

impl CheckedModel {
    pub fn channel(&self, id: ChanId) -> &ChannelDecl {
        &self.channels[id.index()]
    }
}
