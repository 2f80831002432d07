//! Parse tree for model source.
//!
//! Every node that can be the subject of a diagnostic carries a [`Pos`].
//! Structural comparisons that should ignore layout go through
//! [`Model::without_positions`].

use crate::diag::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>, pos: Pos) -> Self {
        Ident {
            name: name.into(),
            pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub data: Vec<DataDecl>,
    pub procs: Vec<ProcDecl>,
    pub init: InitBlock,
    pub ltl: Vec<LtlSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDecl {
    pub name: Ident,
    pub ctors: Vec<Ident>,
}

/// A `proc` template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcDecl {
    pub name: Ident,
    pub params: Vec<Param>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Bool(Pos),
    Named(Ident),
    Channel(ChannelType),
    ChannelArray(ChannelType),
}

impl TypeExpr {
    pub fn pos(&self) -> Pos {
        match self {
            TypeExpr::Bool(pos) => *pos,
            TypeExpr::Named(id) => id.pos,
            TypeExpr::Channel(c) | TypeExpr::ChannelArray(c) => c.pos,
        }
    }
}

/// `channel { T, .. }` or the buffered form `channel [N] { T, .. }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelType {
    pub capacity: Option<u32>,
    pub payload: Vec<TypeExpr>,
    pub pos: Pos,
}

pub type Block = Vec<Stmt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    VarDecl {
        name: Ident,
        ty: TypeExpr,
        init: Option<Expr>,
    },
    Assign {
        target: Ident,
        value: Expr,
    },
    Send {
        chan: Expr,
        values: Vec<Expr>,
    },
    /// Statement-level `recv(..)` / `peek(..)`.
    Recv {
        form: RecvForm,
        chan: Expr,
        targets: Vec<Ident>,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
    },
    For {
        var: Ident,
        array: Expr,
        body: Block,
    },
    Choice(Vec<Block>),
    Expr(Expr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecvMode {
    Blocking,
    Timeout,
    Nonblock,
}

/// Which receive-family operation a call names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecvForm {
    pub mode: RecvMode,
    /// `peek` copies the head of the channel without removing it.
    pub peek: bool,
}

impl RecvForm {
    pub const RECV: RecvForm = RecvForm {
        mode: RecvMode::Blocking,
        peek: false,
    };

    pub fn from_keyword(kw: &str) -> Option<RecvForm> {
        let (mode, peek) = match kw {
            "recv" => (RecvMode::Blocking, false),
            "peek" => (RecvMode::Blocking, true),
            "timeout_recv" => (RecvMode::Timeout, false),
            "timeout_peek" => (RecvMode::Timeout, true),
            "nonblock_recv" => (RecvMode::Nonblock, false),
            "nonblock_peek" => (RecvMode::Nonblock, true),
            _ => return None,
        };
        Some(RecvForm { mode, peek })
    }

    pub fn keyword(self) -> &'static str {
        match (self.mode, self.peek) {
            (RecvMode::Blocking, false) => "recv",
            (RecvMode::Blocking, true) => "peek",
            (RecvMode::Timeout, false) => "timeout_recv",
            (RecvMode::Timeout, true) => "timeout_peek",
            (RecvMode::Nonblock, false) => "nonblock_recv",
            (RecvMode::Nonblock, true) => "nonblock_peek",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Bool(bool),
    Ident(String),
    /// `instance.variable`, only meaningful inside `ltl` blocks.
    Field(String, String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    /// A receive used as a boolean-valued expression.
    Recv {
        form: RecvForm,
        chan: Box<Expr>,
        targets: Vec<Ident>,
    },
    /// `[a, b]`, only accepted as a process-instantiation argument.
    Array(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Globally,
    Finally,
    Next,
}

impl UnaryOp {
    pub fn is_temporal(self) -> bool {
        !matches!(self, UnaryOp::Not)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
    Eq,
    Ne,
    Until,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
            BinaryOp::Implies => "->",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Until => "U",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitBlock {
    pub entries: Vec<InitEntry>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitEntry {
    pub name: Ident,
    pub payload: InitPayload,
    pub faults: Vec<FaultMarker>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitPayload {
    Process { template: Ident, args: Vec<Expr> },
    Channel(ChannelType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaultMarker {
    Shutdown,
    Drop,
}

impl FaultMarker {
    pub fn text(self) -> &'static str {
        match self {
            FaultMarker::Shutdown => "@shutdown",
            FaultMarker::Drop => "@drop",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlSpec {
    pub formula: Expr,
    pub pos: Pos,
}

impl Model {
    /// A copy with every position zeroed, for layout-insensitive comparison.
    pub fn without_positions(&self) -> Model {
        let mut m = self.clone();
        m.erase();
        m
    }
}

trait Erase {
    fn erase(&mut self);
}

impl<T: Erase> Erase for Vec<T> {
    fn erase(&mut self) {
        self.iter_mut().for_each(Erase::erase);
    }
}

impl<T: Erase> Erase for Option<T> {
    fn erase(&mut self) {
        if let Some(x) = self {
            x.erase();
        }
    }
}

impl Erase for Pos {
    fn erase(&mut self) {
        *self = Pos::default();
    }
}

impl Erase for Ident {
    fn erase(&mut self) {
        self.pos.erase();
    }
}

impl Erase for Model {
    fn erase(&mut self) {
        for d in &mut self.data {
            d.name.erase();
            d.ctors.erase();
        }
        for p in &mut self.procs {
            p.name.erase();
            for param in &mut p.params {
                param.name.erase();
                param.ty.erase();
            }
            p.body.erase();
        }
        self.init.pos.erase();
        for e in &mut self.init.entries {
            e.name.erase();
            match &mut e.payload {
                InitPayload::Process { template, args } => {
                    template.erase();
                    args.erase();
                }
                InitPayload::Channel(c) => c.erase(),
            }
        }
        for l in &mut self.ltl {
            l.pos.erase();
            l.formula.erase();
        }
    }
}

impl Erase for TypeExpr {
    fn erase(&mut self) {
        match self {
            TypeExpr::Bool(p) => p.erase(),
            TypeExpr::Named(id) => id.erase(),
            TypeExpr::Channel(c) | TypeExpr::ChannelArray(c) => c.erase(),
        }
    }
}

impl Erase for ChannelType {
    fn erase(&mut self) {
        self.pos.erase();
        self.payload.erase();
    }
}

impl Erase for Stmt {
    fn erase(&mut self) {
        self.pos.erase();
        match &mut self.kind {
            StmtKind::VarDecl { name, ty, init } => {
                name.erase();
                ty.erase();
                init.erase();
            }
            StmtKind::Assign { target, value } => {
                target.erase();
                value.erase();
            }
            StmtKind::Send { chan, values } => {
                chan.erase();
                values.erase();
            }
            StmtKind::Recv { chan, targets, .. } => {
                chan.erase();
                targets.erase();
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                cond.erase();
                then_block.erase();
                else_block.erase();
            }
            StmtKind::For { var, array, body } => {
                var.erase();
                array.erase();
                body.erase();
            }
            StmtKind::Choice(blocks) => blocks.erase(),
            StmtKind::Expr(e) => e.erase(),
        }
    }
}

impl Erase for Expr {
    fn erase(&mut self) {
        self.pos.erase();
        match &mut self.kind {
            ExprKind::Bool(_) | ExprKind::Ident(_) | ExprKind::Field(..) => {}
            ExprKind::Unary(_, e) => e.erase(),
            ExprKind::Binary(_, l, r) => {
                l.erase();
                r.erase();
            }
            ExprKind::Recv { chan, targets, .. } => {
                chan.erase();
                targets.erase();
            }
            ExprKind::Array(items) => items.erase(),
        }
    }
}
