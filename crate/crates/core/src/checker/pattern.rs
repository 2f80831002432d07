//! The formula shapes the explicit-state checker accepts.

use super::GlobalState;
use crate::ltl::Formula;
use crate::types::{BinOp, Value};

/// A supported formula, with `p` propositional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecPattern {
    /// `G p`
    Always(Formula),
    /// `F p`
    Eventually(Formula),
    /// `F G p`
    EventuallyAlways(Formula),
    /// `G F p`
    AlwaysEventually(Formula),
}

impl SpecPattern {
    /// Matches `f` against the supported shapes. A bare propositional
    /// formula is read as `G p`.
    pub fn extract(f: &Formula) -> Option<SpecPattern> {
        if f.is_propositional() {
            return Some(SpecPattern::Always(f.clone()));
        }
        match f {
            Formula::Globally(inner) => match &**inner {
                p if p.is_propositional() => Some(SpecPattern::Always(p.clone())),
                Formula::Finally(p) if p.is_propositional() => {
                    Some(SpecPattern::AlwaysEventually((**p).clone()))
                }
                _ => None,
            },
            Formula::Finally(inner) => match &**inner {
                p if p.is_propositional() => Some(SpecPattern::Eventually(p.clone())),
                Formula::Globally(p) if p.is_propositional() => {
                    Some(SpecPattern::EventuallyAlways((**p).clone()))
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn prop(&self) -> &Formula {
        match self {
            SpecPattern::Always(p)
            | SpecPattern::Eventually(p)
            | SpecPattern::EventuallyAlways(p)
            | SpecPattern::AlwaysEventually(p) => p,
        }
    }

    /// Equivalent formula.
    pub fn to_formula(&self) -> Formula {
        match self.clone() {
            SpecPattern::Always(p) => p.globally(),
            SpecPattern::Eventually(p) => p.finally(),
            SpecPattern::EventuallyAlways(p) => p.globally().finally(),
            SpecPattern::AlwaysEventually(p) => p.finally().globally(),
        }
    }
}

/// Evaluates a propositional formula in one global state. Variables of a
/// shut-down process keep their last values.
///
/// # Panics
///
/// On a temporal operator.
pub fn eval_prop(f: &Formula, s: &GlobalState) -> bool {
    eval(f, s).as_bool().expect("boolean formula")
}

fn eval(f: &Formula, s: &GlobalState) -> Value {
    match f {
        Formula::Const(v) => *v,
        Formula::Var { process, var } => s.local(*process, *var),
        Formula::Not(p) => Value::Bool(!eval_prop(p, s)),
        Formula::Bin(BinOp::And, l, r) => Value::Bool(eval_prop(l, s) && eval_prop(r, s)),
        Formula::Bin(BinOp::Or, l, r) => Value::Bool(eval_prop(l, s) || eval_prop(r, s)),
        Formula::Bin(BinOp::Implies, l, r) => Value::Bool(!eval_prop(l, s) || eval_prop(r, s)),
        Formula::Bin(op, l, r) => op.apply(eval(l, s), eval(r, s)),
        Formula::Globally(_) | Formula::Finally(_) | Formula::Next(_) | Formula::Until(..) => {
            panic!("temporal operator in a state formula")
        }
    }
}
