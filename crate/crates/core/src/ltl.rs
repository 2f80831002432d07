//! Resolved temporal formulas over process variables.

use crate::types::{BinOp, TypeTable, Value, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(Value),
    /// A local variable of a process instance.
    Var { process: usize, var: VarId },
    Not(Box<Formula>),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Globally(Box<Formula>),
    Finally(Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Var { .. } => true,
            Formula::Not(p) => p.is_propositional(),
            Formula::Bin(_, l, r) => l.is_propositional() && r.is_propositional(),
            Formula::Globally(_) | Formula::Finally(_) | Formula::Next(_) | Formula::Until(..) => {
                false
            }
        }
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn bin(op: BinOp, l: Formula, r: Formula) -> Formula {
        Formula::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn globally(self) -> Formula {
        Formula::Globally(Box::new(self))
    }

    pub fn finally(self) -> Formula {
        Formula::Finally(Box::new(self))
    }

    /// Renders the formula with instance-qualified variable names.
    pub fn display(&self, types: &TypeTable, names: &dyn Fn(usize, VarId) -> String) -> String {
        match self {
            Formula::Const(v) => types.value_name(*v),
            Formula::Var { process, var } => names(*process, *var),
            Formula::Not(p) => format!("!{}", p.display_atom(types, names)),
            Formula::Bin(op, l, r) => format!(
                "{} {} {}",
                l.display_atom(types, names),
                op.symbol(),
                r.display_atom(types, names)
            ),
            Formula::Globally(p) => format!("G {}", p.display_atom(types, names)),
            Formula::Finally(p) => format!("F {}", p.display_atom(types, names)),
            Formula::Next(p) => format!("X {}", p.display_atom(types, names)),
            Formula::Until(l, r) => format!(
                "{} U {}",
                l.display_atom(types, names),
                r.display_atom(types, names)
            ),
        }
    }

    fn display_atom(&self, types: &TypeTable, names: &dyn Fn(usize, VarId) -> String) -> String {
        match self {
            Formula::Const(_) | Formula::Var { .. } => self.display(types, names),
            _ => format!("({})", self.display(types, names)),
        }
    }
}
