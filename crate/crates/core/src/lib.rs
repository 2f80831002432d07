//! Compiler and explicit-state verifier for Sandal, a small modeling
//! language for message-passing systems with injectable faults.
//!
//! A model goes through [`frontend`] (tokens and syntax tree), [`sema`]
//! (names, types, the instantiated system), [`ir`] (one guarded automaton
//! per process), [`faultweave`] (shutdown and message-drop edges) and then
//! either [`checker`] or [`smv`].
//!
//! ```
//! use sandal::checker::{CheckConfig, Checker};
//! use sandal::System;
//!
//! let sys = System::from_source(sandal::corpus::PINGPONG).unwrap();
//! let graph = Checker::new(&sys, CheckConfig::default()).explore().unwrap();
//! assert!(graph.len() > 1);
//! ```

pub mod checker;
pub mod corpus;
pub mod diag;
pub mod faultweave;
pub mod frontend;
pub mod ir;
pub mod ltl;
pub mod sema;
pub mod smv;
pub mod types;

use thiserror::Error;

pub use diag::{Diagnostic, Pos};

use faultweave::WeaveReport;
use ir::ProcessAutomaton;
use sema::SystemInstance;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lex(#[from] frontend::LexError),
    #[error(transparent)]
    Parse(#[from] frontend::ParseError),
    #[error(transparent)]
    Sema(#[from] sema::SemaError),
    #[error(transparent)]
    Emit(#[from] smv::EmitError),
    #[error(transparent)]
    Check(#[from] checker::CheckError),
}

impl Error {
    /// Source position for front-end errors.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            Error::Lex(e) => Some(e.pos()),
            Error::Parse(e) => Some(e.pos()),
            Error::Sema(e) => Some(e.pos()),
            Error::Emit(_) | Error::Check(_) => None,
        }
    }

    /// `file:line:col: message` for positioned errors, `file: message`
    /// otherwise.
    pub fn render(&self, file: &str) -> String {
        match self {
            Error::Lex(e) => e.render(file),
            Error::Parse(e) => e.render(file),
            Error::Sema(e) => e.render(file),
            Error::Emit(_) | Error::Check(_) => format!("{file}: {self}"),
        }
    }
}

/// Parses, checks and instantiates a model.
pub fn instantiate_source(source: &str) -> Result<SystemInstance, Error> {
    let ast = frontend::parse_source(source)?;
    let checked = sema::resolve_and_check(ast)?;
    Ok(sema::instantiate(&checked)?)
}

/// An instantiated system together with its process automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub instance: SystemInstance,
    pub automata: Vec<ProcessAutomaton>,
    /// Fault transitions added by weaving; empty for an unwoven system.
    pub report: WeaveReport,
}

impl System {
    /// Compiles `source` and weaves in every fault marker.
    pub fn from_source(source: &str) -> Result<System, Error> {
        Ok(System::woven(instantiate_source(source)?))
    }

    pub fn woven(instance: SystemInstance) -> System {
        let lowered = ir::lower_system(&instance);
        let (automata, report) = faultweave::weave(&instance, &lowered);
        System {
            instance,
            automata,
            report,
        }
    }

    /// Lowered automata without fault edges, whatever the markers say.
    pub fn unwoven(instance: SystemInstance) -> System {
        let automata = ir::lower_system(&instance);
        System {
            instance,
            automata,
            report: WeaveReport::default(),
        }
    }

    pub fn dump_ir(&self) -> String {
        ir::dump_system(&self.instance, &self.automata)
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/language.md")]
    struct Language;
    #[doc = include_str!("../../../book/src/channels.md")]
    struct Channels;
    #[doc = include_str!("../../../book/src/faults.md")]
    struct Faults;
    #[doc = include_str!("../../../book/src/checking.md")]
    struct Checking;
    #[doc = include_str!("../../../book/src/smv.md")]
    struct Smv;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
