//! NuSMV text emission for a woven system.
//!
//! Every process instance and every channel becomes its own module; `main`
//! instantiates them and owns a scheduler variable `sched`. A state where
//! some process is enabled must schedule an enabled one, and the scheduled
//! process fires one of its enabled transitions. When nothing is enabled
//! the whole system stutters. This is the interleaving relation of
//! [`crate::checker`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write};

use thiserror::Error;

use crate::ir::{Action, Expr, ProcessAutomaton};
use crate::ltl::Formula;
use crate::sema::{ChannelKind, SystemInstance};
use crate::types::{BinOp, ChanId, Type, Value, VarId};
use crate::System;

const RESERVED: &[&str] = &[
    "A", "ABF", "ABG", "AF", "AG", "ASSIGN", "AX", "BU", "COMPASSION", "COMPUTE", "COMPWFF",
    "CONSTANTS", "CONSTRAINT", "CTLSPEC", "CTLWFF", "DEFINE", "E", "EBF", "EBG", "EF", "EG", "EX",
    "F", "FAIRNESS", "FALSE", "FROZENVAR", "G", "H", "IN", "INIT", "INVAR", "INVARSPEC", "ISA",
    "IVAR", "JUSTICE", "LTLSPEC", "LTLWFF", "MAX", "MDEFINE", "MIN", "MIRROR", "MODULE", "NAME",
    "O", "PRED", "PREDICATES", "PSLSPEC", "PSLWFF", "S", "SIMPWFF", "SPEC", "T", "TRANS", "TRUE",
    "U", "V", "VAR", "X", "Y", "Z", "abs", "array", "bool", "boolean", "case", "count", "esac",
    "extend", "in", "init", "integer", "max", "min", "mod", "next", "of", "process", "real",
    "resize", "self", "signed", "sizeof", "swconst", "toint", "union", "unsigned", "uwconst",
    "word", "word1", "xnor", "xor",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("enum constructor `{name}` is a reserved word of the SMV language")]
    ReservedConstructor { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Process,
    Channel,
    Main,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmvModule {
    pub name: String,
    pub kind: ModuleKind,
    pub text: String,
}

/// The emitted modules, `main` last, followed by one `LTLSPEC` line per
/// formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmvDocument {
    pub modules: Vec<SmvModule>,
    pub specs: Vec<String>,
}

impl SmvDocument {
    pub fn modules_of(&self, kind: ModuleKind) -> impl Iterator<Item = &SmvModule> {
        self.modules.iter().filter(move |m| m.kind == kind)
    }
}

impl fmt::Display for SmvDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.modules.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(&m.text)?;
        }
        for s in &self.specs {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Replaces characters outside `[A-Za-z0-9_]` with `_` and makes sure the
/// result starts with a letter or underscore.
pub fn sanitize(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, '_');
    }
    out
}

#[derive(Clone)]
struct Namer {
    taken: HashSet<String>,
}

impl Namer {
    fn new<'a>(reserved: impl IntoIterator<Item = &'a String>) -> Self {
        let mut taken: HashSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        taken.extend(reserved.into_iter().cloned());
        Namer { taken }
    }

    fn fresh(&mut self, raw: &str) -> String {
        let base = sanitize(raw);
        let mut name = base.clone();
        let mut i = 1;
        while self.taken.contains(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.taken.insert(name.clone());
        name
    }
}

/// Symbolic constants shared by every module.
struct Constants {
    ctors: Vec<Vec<String>>,
    loc_prefix: String,
    all: Vec<String>,
}

impl Constants {
    fn new(sys: &System) -> Result<Self, EmitError> {
        let reserved: HashSet<&str> = RESERVED.iter().copied().collect();
        let mut ctors = Vec::new();
        let mut all = Vec::new();
        for e in &sys.instance.types.enums {
            let mut names = Vec::new();
            for c in &e.ctors {
                if reserved.contains(c.as_str()) {
                    return Err(EmitError::ReservedConstructor { name: c.clone() });
                }
                names.push(sanitize(c));
            }
            all.extend(names.iter().cloned());
            ctors.push(names);
        }
        let max_locs = sys.automata.iter().map(|a| a.locations).max().unwrap_or(0);
        let mut loc_prefix = "l".to_string();
        let mut i = 1;
        while all.iter().any(|c| {
            c.strip_prefix(loc_prefix.as_str())
                .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|d| d.is_ascii_digit()))
        }) {
            loc_prefix = format!("loc{i}_");
            i += 1;
        }
        all.extend((0..max_locs).map(|n| format!("{loc_prefix}{n}")));
        Ok(Constants {
            ctors,
            loc_prefix,
            all,
        })
    }

    fn value(&self, v: Value) -> String {
        match v {
            Value::Bool(true) => "TRUE".into(),
            Value::Bool(false) => "FALSE".into(),
            Value::Enum { ty, ctor } => self.ctors[ty as usize][ctor as usize].clone(),
        }
    }

    fn ty(&self, t: Type) -> String {
        match t {
            Type::Bool => "boolean".into(),
            Type::Enum(i) => format!("{{{}}}", self.ctors[i as usize].join(", ")),
        }
    }

    fn loc(&self, n: u32) -> String {
        format!("{}{n}", self.loc_prefix)
    }
}

/// Field names of one channel module.
struct ChanFields {
    module: String,
    kind: ChannelKind,
    payload: Vec<Type>,
    ready: String,
    received: String,
    has_value: String,
    value: Vec<String>,
    len: String,
    queue: Vec<Vec<String>>,
}

impl ChanFields {
    fn new(consts: &Constants, module: String, kind: ChannelKind, payload: Vec<Type>) -> Self {
        let mut namer = Namer::new(&consts.all);
        let k = payload.len();
        let (ready, received, has_value, value) = (
            namer.fresh("ready"),
            namer.fresh("received"),
            namer.fresh("has_value"),
            (0..k).map(|i| namer.fresh(&format!("value_{i}"))).collect(),
        );
        let len = namer.fresh("len");
        let cap = match kind {
            ChannelKind::Rendezvous => 0,
            ChannelKind::Buffered { capacity } => capacity,
        };
        let queue = (0..cap)
            .map(|slot| (0..k).map(|i| namer.fresh(&format!("q{slot}_{i}"))).collect())
            .collect();
        ChanFields {
            module,
            kind,
            payload,
            ready,
            received,
            has_value,
            value,
            len,
            queue,
        }
    }

    fn capacity(&self) -> usize {
        self.queue.len()
    }

    /// Every field in declaration order with its type text.
    fn vars(&self, consts: &Constants) -> Vec<(String, String)> {
        match self.kind {
            ChannelKind::Rendezvous => {
                let mut v = vec![
                    (self.ready.clone(), "boolean".to_string()),
                    (self.received.clone(), "boolean".to_string()),
                    (self.has_value.clone(), "boolean".to_string()),
                ];
                for (name, ty) in self.value.iter().zip(&self.payload) {
                    v.push((name.clone(), consts.ty(*ty)));
                }
                v
            }
            ChannelKind::Buffered { capacity } => {
                let mut v = vec![(self.len.clone(), format!("0..{capacity}"))];
                for slot in &self.queue {
                    for (name, ty) in slot.iter().zip(&self.payload) {
                        v.push((name.clone(), consts.ty(*ty)));
                    }
                }
                v
            }
        }
    }

    fn init(&self, consts: &Constants, types: &crate::types::TypeTable) -> Vec<String> {
        let zeros: Vec<String> = self.payload.iter().map(|t| consts.value(types.zero(*t))).collect();
        match self.kind {
            ChannelKind::Rendezvous => {
                let mut v = vec![
                    format!("{} = FALSE", self.ready),
                    format!("{} = FALSE", self.received),
                    format!("{} = FALSE", self.has_value),
                ];
                for (name, z) in self.value.iter().zip(&zeros) {
                    v.push(format!("{name} = {z}"));
                }
                v
            }
            ChannelKind::Buffered { .. } => {
                let mut v = vec![format!("{} = 0", self.len)];
                for slot in &self.queue {
                    for (name, z) in slot.iter().zip(&zeros) {
                        v.push(format!("{name} = {z}"));
                    }
                }
                v
            }
        }
    }
}

/// A storage cell a transition can change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    Local(u32),
    Ready(u32),
    Received(u32),
    HasValue(u32),
    Value(u32, usize),
    Len(u32),
    Queue(u32, usize, usize),
}

struct ProcEmitter<'a> {
    consts: &'a Constants,
    sys: &'a System,
    chans: &'a [ChanFields],
    a: &'a ProcessAutomaton,
    index: usize,
    locals: Vec<String>,
    params: Vec<(ChanId, String)>,
    loc: String,
    running: String,
    enabled: String,
}

impl ProcEmitter<'_> {
    fn param(&self, c: ChanId) -> &str {
        &self.params.iter().find(|(id, _)| *id == c).expect("bound channel").1
    }

    fn slot_name(&self, s: Slot) -> String {
        let field = |c: u32, f: &str| format!("{}.{f}", self.param(ChanId(c)));
        let ch = |c: u32| &self.chans[c as usize];
        match s {
            Slot::Local(v) => self.locals[v as usize].clone(),
            Slot::Ready(c) => field(c, &ch(c).ready),
            Slot::Received(c) => field(c, &ch(c).received),
            Slot::HasValue(c) => field(c, &ch(c).has_value),
            Slot::Value(c, k) => field(c, &ch(c).value[k]),
            Slot::Len(c) => field(c, &ch(c).len),
            Slot::Queue(c, i, k) => field(c, &ch(c).queue[i][k]),
        }
    }

    /// Every slot of this process, own locals first, then channel fields.
    fn frame(&self) -> Vec<Slot> {
        let mut out: Vec<Slot> = (0..self.locals.len() as u32).map(Slot::Local).collect();
        for (c, _) in &self.params {
            let f = &self.chans[c.index()];
            let c = c.0;
            match f.kind {
                ChannelKind::Rendezvous => {
                    out.extend([Slot::Ready(c), Slot::Received(c), Slot::HasValue(c)]);
                    out.extend((0..f.payload.len()).map(|k| Slot::Value(c, k)));
                }
                ChannelKind::Buffered { .. } => {
                    out.push(Slot::Len(c));
                    for i in 0..f.capacity() {
                        out.extend((0..f.payload.len()).map(|k| Slot::Queue(c, i, k)));
                    }
                }
            }
        }
        out
    }

    fn current(&self, env: &HashMap<Slot, String>, s: Slot) -> String {
        env.get(&s).cloned().unwrap_or_else(|| self.slot_name(s))
    }

    fn expr(&self, env: &HashMap<Slot, String>, e: &Expr) -> String {
        match e {
            Expr::Const(v) => self.consts.value(*v),
            Expr::Local(v) => self.current(env, Slot::Local(v.0)),
            Expr::Ready(c) => self.current(env, Slot::Ready(c.0)),
            Expr::Received(c) => self.current(env, Slot::Received(c.0)),
            Expr::CanPush(c) => format!(
                "({} < {})",
                self.current(env, Slot::Len(c.0)),
                self.chans[c.index()].capacity()
            ),
            Expr::CanPop(c) => format!("({} > 0)", self.current(env, Slot::Len(c.0))),
            Expr::Not(inner) => format!("!{}", self.expr(env, inner)),
            Expr::Bin(op, l, r) => format!(
                "({} {} {})",
                self.expr(env, l),
                smv_op(*op),
                self.expr(env, r)
            ),
        }
    }

    /// Symbolic effect of `actions`, applied in order.
    fn effect(&self, actions: &[Action]) -> HashMap<Slot, String> {
        let mut env = HashMap::new();
        let store = |env: &mut HashMap<Slot, String>, vars: &[VarId], vals: Vec<String>| {
            for (v, x) in vars.iter().zip(vals) {
                env.insert(Slot::Local(v.0), x);
            }
        };
        for act in actions {
            match act {
                Action::Assign(v, e) => {
                    let x = self.expr(&env, e);
                    env.insert(Slot::Local(v.0), x);
                }
                Action::SetReady(c, b) => {
                    env.insert(Slot::Ready(c.0), self.consts.value(Value::Bool(*b)));
                }
                Action::SetReceived(c, b) => {
                    env.insert(Slot::Received(c.0), self.consts.value(Value::Bool(*b)));
                }
                Action::SetBuffer(c, es) => {
                    let vals: Vec<String> = es.iter().map(|e| self.expr(&env, e)).collect();
                    env.insert(Slot::HasValue(c.0), "TRUE".into());
                    for (k, x) in vals.into_iter().enumerate() {
                        env.insert(Slot::Value(c.0, k), x);
                    }
                }
                Action::CopyBuffer(c, vs) => {
                    let vals = (0..vs.len())
                        .map(|k| self.current(&env, Slot::Value(c.0, k)))
                        .collect();
                    store(&mut env, vs, vals);
                }
                Action::Push(c, es) => {
                    let vals: Vec<String> = es.iter().map(|e| self.expr(&env, e)).collect();
                    let len = self.current(&env, Slot::Len(c.0));
                    for i in 0..self.chans[c.index()].capacity() {
                        for (k, x) in vals.iter().enumerate() {
                            let old = self.current(&env, Slot::Queue(c.0, i, k));
                            env.insert(
                                Slot::Queue(c.0, i, k),
                                format!("case {len} = {i} : {x}; TRUE : {old}; esac"),
                            );
                        }
                    }
                    env.insert(Slot::Len(c.0), format!("({len} + 1)"));
                }
                Action::Pop(c, vs) | Action::CopyHead(c, vs) => {
                    let vals = (0..vs.len())
                        .map(|k| self.current(&env, Slot::Queue(c.0, 0, k)))
                        .collect();
                    if let Action::Pop(..) = act {
                        let f = &self.chans[c.index()];
                        let cap = f.capacity();
                        for k in 0..f.payload.len() {
                            for i in 0..cap {
                                let x = if i + 1 < cap {
                                    self.current(&env, Slot::Queue(c.0, i + 1, k))
                                } else {
                                    self.consts.value(self.sys.instance.types.zero(f.payload[k]))
                                };
                                env.insert(Slot::Queue(c.0, i, k), x);
                            }
                        }
                        let len = self.current(&env, Slot::Len(c.0));
                        env.insert(Slot::Len(c.0), format!("({len} - 1)"));
                    }
                    store(&mut env, vs, vals);
                }
            }
        }
        env
    }

    fn emit(&self, name: &str) -> String {
        let a = self.a;
        let consts = self.consts;
        let mut out = String::new();
        let mut params = vec![self.running.clone()];
        params.extend(self.params.iter().map(|(_, p)| p.clone()));
        writeln!(out, "MODULE {name}({})", params.join(", ")).unwrap();
        let template = &self.sys.instance.template_of(self.index).name;
        write!(out, "  -- {} : {template}", a.process).unwrap();
        if let Some(s) = a.shutdown {
            write!(out, ", shutdown location {}", consts.loc(s.0)).unwrap();
        }
        out.push('\n');

        out.push_str("VAR\n");
        let locs: Vec<String> = a.location_ids().map(|l| consts.loc(l.0)).collect();
        writeln!(out, "  {} : {{{}}};", self.loc, locs.join(", ")).unwrap();
        for (name, l) in self.locals.iter().zip(&a.locals) {
            writeln!(out, "  {name} : {};", consts.ty(l.ty)).unwrap();
        }

        let empty = HashMap::new();
        let guards: Vec<String> = a
            .transitions
            .iter()
            .map(|t| {
                let at = format!("{} = {}", self.loc, consts.loc(t.from.0));
                if t.guard.is_true() {
                    format!("({at})")
                } else {
                    format!("({at} & {})", self.expr(&empty, &t.guard))
                }
            })
            .collect();
        out.push_str("DEFINE\n");
        if guards.is_empty() {
            writeln!(out, "  {} := FALSE;", self.enabled).unwrap();
        } else {
            writeln!(out, "  {} :=", self.enabled).unwrap();
            for (i, g) in guards.iter().enumerate() {
                let sep = if i == 0 { "   " } else { "  |" };
                let end = if i + 1 == guards.len() { ";" } else { "" };
                writeln!(out, "  {sep} {g}{end}").unwrap();
            }
        }

        out.push_str("INIT\n");
        let mut init = vec![format!("{} = {}", self.loc, consts.loc(a.entry.0))];
        for (name, l) in self.locals.iter().zip(&a.locals) {
            init.push(format!(
                "{name} = {}",
                consts.value(self.sys.instance.types.zero(l.ty))
            ));
        }
        writeln!(out, "  {};", init.join(" & ")).unwrap();

        let frame = self.frame();
        writeln!(out, "TRANS\n  ({} & {}) -> (", self.running, self.enabled).unwrap();
        for (i, t) in a.transitions.iter().enumerate() {
            let env = self.effect(&t.actions);
            let mut conj = vec![guards[i].clone(), format!("next({}) = {}", self.loc, consts.loc(t.to.0))];
            for s in &frame {
                conj.push(format!("next({}) = {}", self.slot_name(*s), self.current(&env, *s)));
            }
            writeln!(out, "    -- {} -> {}: {}", t.from, t.to, t.label).unwrap();
            let sep = if i == 0 { "   " } else { "  |" };
            writeln!(out, "  {sep} ({})", conj.join("\n       & ")).unwrap();
        }
        out.push_str("  );\n");

        let mut keep = vec![format!("next({0}) = {0}", self.loc)];
        keep.extend(self.locals.iter().map(|l| format!("next({l}) = {l}")));
        writeln!(
            out,
            "TRANS\n  !({} & {}) -> ({});",
            self.running,
            self.enabled,
            keep.join(" & ")
        )
        .unwrap();
        out
    }
}

fn smv_op(op: BinOp) -> &'static str {
    match op {
        BinOp::And => "&",
        BinOp::Or => "|",
        BinOp::Implies => "->",
        BinOp::Eq => "=",
        BinOp::Ne => "!=",
    }
}

fn chans_of_expr(e: &Expr, out: &mut BTreeSet<ChanId>) {
    match e {
        Expr::Const(_) | Expr::Local(_) => {}
        Expr::Ready(c) | Expr::Received(c) | Expr::CanPush(c) | Expr::CanPop(c) => {
            out.insert(*c);
        }
        Expr::Not(inner) => chans_of_expr(inner, out),
        Expr::Bin(_, l, r) => {
            chans_of_expr(l, out);
            chans_of_expr(r, out);
        }
    }
}

/// Channels a process automaton reads or writes.
fn chans_of(a: &ProcessAutomaton) -> BTreeSet<ChanId> {
    let mut out = BTreeSet::new();
    for t in &a.transitions {
        chans_of_expr(&t.guard, &mut out);
        for act in &t.actions {
            match act {
                Action::Assign(_, e) => chans_of_expr(e, &mut out),
                Action::SetBuffer(c, es) | Action::Push(c, es) => {
                    out.insert(*c);
                    for e in es {
                        chans_of_expr(e, &mut out);
                    }
                }
                Action::SetReady(c, _)
                | Action::SetReceived(c, _)
                | Action::CopyBuffer(c, _)
                | Action::Pop(c, _)
                | Action::CopyHead(c, _) => {
                    out.insert(*c);
                }
            }
        }
    }
    for s in &a.sends {
        out.insert(s.chan);
    }
    out
}

fn formula(
    f: &Formula,
    consts: &Constants,
    inst: &[String],
    locals: &[Vec<String>],
) -> String {
    let rec = |g: &Formula| formula(g, consts, inst, locals);
    match f {
        Formula::Const(v) => consts.value(*v),
        Formula::Var { process, var } => {
            format!("{}.{}", inst[*process], locals[*process][var.index()])
        }
        Formula::Not(p) => format!("!({})", rec(p)),
        Formula::Bin(op, l, r) => format!("({} {} {})", rec(l), smv_op(*op), rec(r)),
        Formula::Globally(p) => format!("G ({})", rec(p)),
        Formula::Finally(p) => format!("F ({})", rec(p)),
        Formula::Next(p) => format!("X ({})", rec(p)),
        Formula::Until(l, r) => format!("(({}) U ({}))", rec(l), rec(r)),
    }
}

/// Emits `sys` as NuSMV modules. With `fairness` on, `main` carries one
/// compassion constraint per process: a process enabled infinitely often
/// fires infinitely often.
pub fn emit_smv(sys: &System, fairness: bool) -> Result<SmvDocument, EmitError> {
    let inst: &SystemInstance = &sys.instance;
    let consts = Constants::new(sys)?;
    let mut global = Namer::new(&consts.all);

    let chan_inst: Vec<String> = inst.channels.iter().map(|c| global.fresh(&c.name)).collect();
    let proc_inst: Vec<String> = inst.processes.iter().map(|p| global.fresh(&p.name)).collect();
    let sched = global.fresh("sched");
    let sched_vals: Vec<String> = inst
        .processes
        .iter()
        .map(|p| global.fresh(&format!("s_{}", p.name)))
        .collect();
    let mut modules_ns = Namer::new(&consts.all);
    modules_ns.taken.insert("main".into());
    let chan_mod: Vec<String> = inst
        .channels
        .iter()
        .map(|c| modules_ns.fresh(&format!("chan_{}", c.name)))
        .collect();
    let proc_mod: Vec<String> = inst
        .processes
        .iter()
        .map(|p| modules_ns.fresh(&format!("proc_{}", p.name)))
        .collect();

    let chans: Vec<ChanFields> = inst
        .channels
        .iter()
        .zip(&chan_mod)
        .map(|(c, m)| ChanFields::new(&consts, m.clone(), c.kind, c.payload.clone()))
        .collect();

    let mut modules = Vec::new();
    let mut proc_locals = Vec::new();
    let mut proc_chans = Vec::new();
    for (p, a) in sys.automata.iter().enumerate() {
        let mut namer = Namer::new(&consts.all);
        let running = namer.fresh("running");
        let loc = namer.fresh("loc");
        let enabled = namer.fresh("enabled");
        let bound = chans_of(a);
        let params: Vec<(ChanId, String)> = bound
            .iter()
            .map(|c| (*c, namer.fresh(&inst.channel(*c).name)))
            .collect();
        let locals: Vec<String> = a.locals.iter().map(|l| namer.fresh(&l.name)).collect();
        let em = ProcEmitter {
            consts: &consts,
            sys,
            chans: &chans,
            a,
            index: p,
            locals,
            params,
            loc,
            running,
            enabled: enabled.clone(),
        };
        modules.push(SmvModule {
            name: proc_mod[p].clone(),
            kind: ModuleKind::Process,
            text: em.emit(&proc_mod[p]),
        });
        proc_locals.push(em.locals);
        proc_chans.push((bound, enabled));
    }

    for (c, f) in chans.iter().enumerate() {
        let mut text = String::new();
        writeln!(text, "MODULE {}", f.module).unwrap();
        let kind = match f.kind {
            ChannelKind::Rendezvous => "rendezvous".to_string(),
            ChannelKind::Buffered { capacity } => format!("buffered, capacity {capacity}"),
        };
        writeln!(text, "  -- {} : {kind}", inst.channels[c].name).unwrap();
        text.push_str("VAR\n");
        for (name, ty) in f.vars(&consts) {
            writeln!(text, "  {name} : {ty};").unwrap();
        }
        writeln!(text, "INIT\n  {};", f.init(&consts, &inst.types).join(" & ")).unwrap();
        modules.push(SmvModule {
            name: f.module.clone(),
            kind: ModuleKind::Channel,
            text,
        });
    }

    let mut main = String::from("MODULE main\n");
    if !inst.channels.is_empty() || !inst.processes.is_empty() {
        main.push_str("VAR\n");
    }
    for (c, f) in chans.iter().enumerate() {
        writeln!(main, "  {} : {};", chan_inst[c], f.module).unwrap();
    }
    let fires = |p: usize| format!("({sched} = {} & {}.{})", sched_vals[p], proc_inst[p], proc_chans[p].1);
    if !inst.processes.is_empty() {
        writeln!(main, "  {sched} : {{{}}};", sched_vals.join(", ")).unwrap();
        for p in 0..inst.processes.len() {
            let mut args = vec![format!("{sched} = {}", sched_vals[p])];
            args.extend(proc_chans[p].0.iter().map(|c| chan_inst[c.index()].clone()));
            writeln!(main, "  {} : {}({});", proc_inst[p], proc_mod[p], args.join(", ")).unwrap();
        }
        let any: Vec<String> = (0..inst.processes.len())
            .map(|p| format!("{}.{}", proc_inst[p], proc_chans[p].1))
            .collect();
        let pick: Vec<String> = (0..inst.processes.len()).map(fires).collect();
        writeln!(
            main,
            "INVAR\n  ({}) -> ({});",
            any.join(" | "),
            pick.join(" | ")
        )
        .unwrap();
    }
    for (c, f) in chans.iter().enumerate() {
        let users: Vec<String> = (0..inst.processes.len())
            .filter(|&p| proc_chans[p].0.contains(&ChanId(c as u32)))
            .map(fires)
            .collect();
        let keep: Vec<String> = f
            .vars(&consts)
            .into_iter()
            .map(|(v, _)| format!("next({0}.{v}) = {0}.{v}", chan_inst[c]))
            .collect();
        if users.is_empty() {
            writeln!(main, "TRANS\n  {};", keep.join(" & ")).unwrap();
        } else {
            writeln!(
                main,
                "TRANS\n  !({}) -> ({});",
                users.join(" | "),
                keep.join(" & ")
            )
            .unwrap();
        }
    }
    if fairness {
        for p in 0..inst.processes.len() {
            writeln!(
                main,
                "COMPASSION ({}.{}, {})",
                proc_inst[p],
                proc_chans[p].1,
                fires(p)
            )
            .unwrap();
        }
    }
    modules.push(SmvModule {
        name: "main".into(),
        kind: ModuleKind::Main,
        text: main,
    });

    let specs = inst
        .specs
        .iter()
        .map(|s| format!("LTLSPEC {}", formula(&s.formula, &consts, &proc_inst, &proc_locals)))
        .collect();
    Ok(SmvDocument { modules, specs })
}
