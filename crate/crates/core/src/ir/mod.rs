//! Per-process guarded automata.
//!
//! A process body becomes a graph of locations joined by transitions. Each
//! transition carries a side-effect-free guard over the process's own locals
//! and the observable fields of the channels bound to it, plus an ordered
//! list of actions applied atomically when it fires.

mod dump;
mod lower;

use crate::diag::Pos;
use crate::sema::LocalVar;
use crate::types::{BinOp, ChanId, Value, VarId};

pub use dump::{dump_automaton, dump_system};
pub use lower::{lower_process, lower_system};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocId(pub u32);

impl LocId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for LocId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// Guard and value expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Value),
    Local(VarId),
    /// Rendezvous ready flag.
    Ready(ChanId),
    /// Rendezvous received flag.
    Received(ChanId),
    /// Buffered channel has room for one more message.
    CanPush(ChanId),
    /// Buffered channel holds at least one message.
    CanPop(ChanId),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub const TRUE: Expr = Expr::Const(Value::Bool(true));

    pub fn is_true(&self) -> bool {
        *self == Expr::TRUE
    }

    pub fn negate(self) -> Expr {
        match self {
            Expr::Const(Value::Bool(b)) => Expr::Const(Value::Bool(!b)),
            Expr::Not(inner) => *inner,
            e => Expr::Not(Box::new(e)),
        }
    }

    pub fn and(self, other: Expr) -> Expr {
        if self.is_true() {
            other
        } else if other.is_true() {
            self
        } else {
            Expr::Bin(BinOp::And, Box::new(self), Box::new(other))
        }
    }
}

/// Effects of a transition, applied in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Assign(VarId, Expr),
    SetReady(ChanId, bool),
    SetReceived(ChanId, bool),
    /// Fill the rendezvous value slot.
    SetBuffer(ChanId, Vec<Expr>),
    /// Copy the rendezvous value slot into locals.
    CopyBuffer(ChanId, Vec<VarId>),
    Push(ChanId, Vec<Expr>),
    Pop(ChanId, Vec<VarId>),
    /// Copy the head of a buffered channel without removing it.
    CopyHead(ChanId, Vec<VarId>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Normal,
    Timeout,
    Drop,
    Shutdown,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Normal => "normal",
            Tag::Timeout => "timeout",
            Tag::Drop => "drop",
            Tag::Shutdown => "shutdown",
        }
    }
}

/// Where a transition came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub text: String,
    pub pos: Pos,
    pub tag: Tag,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pos == Pos::default() {
            write!(f, "{}, {}", self.text, self.tag.as_str())
        } else {
            write!(f, "{} @{}, {}", self.text, self.pos, self.tag.as_str())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: LocId,
    pub to: LocId,
    pub guard: Expr,
    pub actions: Vec<Action>,
    pub label: Label,
}

/// Entry and exit locations of one lowered `send`, kept so message-drop
/// weaving can find every send over a faulty channel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SendFragment {
    pub chan: ChanId,
    pub entry: LocId,
    pub exit: LocId,
    pub text: String,
    pub pos: Pos,
    /// Set once a skip edge has been woven in.
    pub dropped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessAutomaton {
    pub process: String,
    /// Number of locations; ids are `0..locations`.
    pub locations: u32,
    pub entry: LocId,
    pub terminal: LocId,
    /// Absorbing crash location, present once shutdown faults are woven.
    pub shutdown: Option<LocId>,
    pub transitions: Vec<Transition>,
    pub locals: Vec<LocalVar>,
    pub sends: Vec<SendFragment>,
}

impl ProcessAutomaton {
    pub fn location_ids(&self) -> impl Iterator<Item = LocId> {
        (0..self.locations).map(LocId)
    }

    /// Indices of the transitions leaving each location, in declaration order.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.locations as usize];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from.index()].push(i);
        }
        out
    }
}
