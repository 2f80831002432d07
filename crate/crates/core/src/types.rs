//! Value types, runtime values and the enum table shared by all passes.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    /// Index into [`TypeTable::enums`].
    Enum(u16),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Enum { ty: u16, ctor: u16 },
}

impl Value {
    pub fn ty(self) -> Type {
        match self {
            Value::Bool(_) => Type::Bool,
            Value::Enum { ty, .. } => Type::Enum(ty),
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Enum { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumDecl {
    pub name: String,
    pub ctors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeTable {
    pub enums: Vec<EnumDecl>,
}

impl TypeTable {
    /// Zero value of a type: `false`, or the first declared constructor.
    pub fn zero(&self, ty: Type) -> Value {
        match ty {
            Type::Bool => Value::Bool(false),
            Type::Enum(ty) => Value::Enum { ty, ctor: 0 },
        }
    }

    /// Every value of a type, in declaration order.
    pub fn values(&self, ty: Type) -> Vec<Value> {
        match ty {
            Type::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Type::Enum(ty) => (0..self.enums[ty as usize].ctors.len() as u16)
                .map(|ctor| Value::Enum { ty, ctor })
                .collect(),
        }
    }

    pub fn type_name(&self, ty: Type) -> &str {
        match ty {
            Type::Bool => "bool",
            Type::Enum(i) => &self.enums[i as usize].name,
        }
    }

    pub fn value_name(&self, v: Value) -> String {
        match v {
            Value::Bool(b) => b.to_string(),
            Value::Enum { ty, ctor } => self.enums[ty as usize].ctors[ctor as usize].clone(),
        }
    }

    /// Looks up an enum constructor by name.
    pub fn ctor(&self, name: &str) -> Option<Value> {
        self.enums.iter().enumerate().find_map(|(ty, e)| {
            e.ctors.iter().position(|c| c == name).map(|ctor| Value::Enum {
                ty: ty as u16,
                ctor: ctor as u16,
            })
        })
    }

    pub fn display_values<'a>(&'a self, values: &'a [Value]) -> impl fmt::Display + 'a {
        DisplayValues(self, values)
    }
}

struct DisplayValues<'a>(&'a TypeTable, &'a [Value]);

impl fmt::Display for DisplayValues<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.1.iter().map(|v| self.0.value_name(*v)).collect();
        if parts.len() == 1 {
            f.write_str(&parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

/// Binary operators of process expressions and propositional formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Eq,
    Ne,
}

impl BinOp {
    pub fn apply(self, l: Value, r: Value) -> Value {
        let b = |v: Value| v.as_bool().expect("boolean operand");
        Value::Bool(match self {
            BinOp::And => b(l) && b(r),
            BinOp::Or => b(l) || b(r),
            BinOp::Implies => !b(l) || b(r),
            BinOp::Eq => l == r,
            BinOp::Ne => l != r,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Implies => "->",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
        }
    }
}

/// Index of a process-local variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a channel instance in the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChanId(pub u32);

impl ChanId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}
