use std::collections::HashMap;

use super::{
    Binding, CExpr, CStmt, CStmtKind, ChanRef, ChannelDecl, ChannelKind, CheckedModel,
    CheckedProc, CheckedProcess, LocalVar, ParamType, SemaError, Spec,
};
use crate::diag::Pos;
use crate::frontend::ast::{
    self, BinaryOp, Expr, ExprKind, InitPayload, Stmt, StmtKind, TypeExpr, UnaryOp,
};
use crate::frontend::{print_expr, print_stmt_header};
use crate::ltl::Formula;
use crate::types::{BinOp, ChanId, EnumDecl, Type, TypeTable, Value, VarId};

type SResult<T> = Result<T, SemaError>;

/// Resolves every name in `ast`, type-checks template bodies, init-block
/// arguments and `ltl` formulas.
pub fn resolve_and_check(ast: ast::Model) -> Result<CheckedModel, SemaError> {
    let types = enum_table(&ast)?;

    let mut template_index = HashMap::new();
    let mut signatures = Vec::new();
    for (i, p) in ast.procs.iter().enumerate() {
        if template_index.insert(p.name.name.clone(), i).is_some() {
            return Err(SemaError::name(
                p.name.pos,
                format!("template `{}` is defined twice", p.name.name),
            ));
        }
        signatures.push(params_of(p, &types)?);
    }
    let templates = ast
        .procs
        .iter()
        .zip(&signatures)
        .map(|(p, params)| BodyChecker::new(&types, params).check_template(p))
        .collect::<SResult<Vec<_>>>()?;

    let (channels, processes) = check_init(&ast.init, &types, &templates, &template_index)?;

    let instance_names: Vec<(String, usize)> = processes
        .iter()
        .map(|p| (p.name.clone(), p.template))
        .collect();
    let mut specs = Vec::new();
    for spec in &ast.ltl {
        let ctx = LtlContext {
            types: &types,
            templates: &templates,
            instances: &instance_names,
            channels: &channels,
        };
        let (formula, ty) = ctx.formula(&spec.formula)?;
        expect_type(ty, Type::Bool, spec.formula.pos, &types, "an `ltl` formula")?;
        specs.push(Spec {
            text: print_expr(&spec.formula),
            formula,
            pos: spec.pos,
        });
    }

    Ok(CheckedModel {
        ast,
        types,
        templates,
        channels,
        processes,
        specs,
    })
}

fn enum_table(ast: &ast::Model) -> SResult<TypeTable> {
    let mut types = TypeTable::default();
    let mut seen_ctors: HashMap<&str, &str> = HashMap::new();
    for d in &ast.data {
        if d.name.name == "bool" || types.enums.iter().any(|e| e.name == d.name.name) {
            return Err(SemaError::name(
                d.name.pos,
                format!("type `{}` is defined twice", d.name.name),
            ));
        }
        for c in &d.ctors {
            if let Some(owner) = seen_ctors.insert(&c.name, &d.name.name) {
                return Err(SemaError::name(
                    c.pos,
                    format!("constructor `{}` is already declared by `{owner}`", c.name),
                ));
            }
        }
        types.enums.push(EnumDecl {
            name: d.name.name.clone(),
            ctors: d.ctors.iter().map(|c| c.name.clone()).collect(),
        });
    }
    Ok(types)
}

fn value_type(ty: &TypeExpr, types: &TypeTable) -> SResult<Type> {
    match ty {
        TypeExpr::Bool(_) => Ok(Type::Bool),
        TypeExpr::Named(id) => types
            .enums
            .iter()
            .position(|e| e.name == id.name)
            .map(|i| Type::Enum(i as u16))
            .ok_or_else(|| SemaError::name(id.pos, format!("unknown type `{}`", id.name))),
        TypeExpr::Channel(c) | TypeExpr::ChannelArray(c) => Err(SemaError::ty(
            c.pos,
            "channel types are not values here",
        )),
    }
}

fn payload_types(c: &ast::ChannelType, types: &TypeTable) -> SResult<Vec<Type>> {
    c.payload.iter().map(|t| value_type(t, types)).collect()
}

fn params_of(p: &ast::ProcDecl, types: &TypeTable) -> SResult<Vec<(String, ParamType)>> {
    let mut params: Vec<(String, ParamType)> = Vec::new();
    for param in &p.params {
        if params.iter().any(|(n, _)| *n == param.name.name) {
            return Err(SemaError::name(
                param.name.pos,
                format!("parameter `{}` is declared twice", param.name.name),
            ));
        }
        let ty = match &param.ty {
            TypeExpr::Channel(c) | TypeExpr::ChannelArray(c) => {
                if c.capacity.is_some() {
                    return Err(SemaError::ty(
                        c.pos,
                        "channel capacity belongs on the init-block entry, not on a parameter",
                    ));
                }
                let payload = payload_types(c, types)?;
                if matches!(param.ty, TypeExpr::Channel(_)) {
                    ParamType::Channel(payload)
                } else {
                    ParamType::ChannelArray(payload)
                }
            }
            other => ParamType::Value(value_type(other, types)?),
        };
        params.push((param.name.name.clone(), ty));
    }
    Ok(params)
}

fn expect_type(got: Type, want: Type, pos: Pos, types: &TypeTable, what: &str) -> SResult<()> {
    if got == want {
        Ok(())
    } else {
        Err(SemaError::ty(
            pos,
            format!(
                "{what} must have type `{}`, found `{}`",
                types.type_name(want),
                types.type_name(got)
            ),
        ))
    }
}

fn binop(op: BinaryOp) -> Option<BinOp> {
    Some(match op {
        BinaryOp::And => BinOp::And,
        BinaryOp::Or => BinOp::Or,
        BinaryOp::Implies => BinOp::Implies,
        BinaryOp::Eq => BinOp::Eq,
        BinaryOp::Ne => BinOp::Ne,
        BinaryOp::Until => return None,
    })
}

/// Checks the operand types of a binary operator and returns its result type.
fn binop_type(op: BinOp, l: Type, r: Type, pos: Pos, types: &TypeTable) -> SResult<Type> {
    match op {
        BinOp::Eq | BinOp::Ne => {
            if l != r {
                return Err(SemaError::ty(
                    pos,
                    format!(
                        "cannot compare `{}` with `{}`",
                        types.type_name(l),
                        types.type_name(r)
                    ),
                ));
            }
        }
        _ => {
            expect_type(l, Type::Bool, pos, types, "operand of a logical operator")?;
            expect_type(r, Type::Bool, pos, types, "operand of a logical operator")?;
        }
    }
    Ok(Type::Bool)
}

struct BodyChecker<'a> {
    types: &'a TypeTable,
    params: &'a [(String, ParamType)],
    locals: Vec<LocalVar>,
    declared: HashMap<String, VarId>,
    /// Enclosing loops, innermost last: (name, loop id, array parameter).
    loops: Vec<(String, u32, usize)>,
    next_loop: u32,
    temps: u32,
}

/// Where a receive-family expression may be evaluated.
#[derive(Clone, Copy, PartialEq, Eq)]
enum RecvPolicy {
    Forbidden,
    /// Hoisted into a preceding receive statement with a temporary result.
    Hoist,
}

impl<'a> BodyChecker<'a> {
    fn new(types: &'a TypeTable, params: &'a [(String, ParamType)]) -> Self {
        BodyChecker {
            types,
            params,
            locals: Vec::new(),
            declared: HashMap::new(),
            loops: Vec::new(),
            next_loop: 0,
            temps: 0,
        }
    }

    fn check_template(mut self, p: &ast::ProcDecl) -> SResult<CheckedProc> {
        let body = self.block(&p.body)?;
        Ok(CheckedProc {
            name: p.name.name.clone(),
            params: self.params.to_vec(),
            locals: self.locals,
            body,
        })
    }

    fn param(&self, name: &str) -> Option<(usize, &'a ParamType)> {
        self.params
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (i, &self.params[i].1))
    }

    fn declare(&mut self, name: &ast::Ident, ty: Type) -> SResult<VarId> {
        if self.param(&name.name).is_some() {
            return Err(SemaError::name(
                name.pos,
                format!("variable `{}` shadows a parameter", name.name),
            ));
        }
        if self.types.ctor(&name.name).is_some() {
            return Err(SemaError::name(
                name.pos,
                format!("variable `{}` shadows a constructor", name.name),
            ));
        }
        if self.loops.iter().any(|(n, ..)| *n == name.name) {
            return Err(SemaError::name(
                name.pos,
                format!("variable `{}` shadows a loop variable", name.name),
            ));
        }
        if let Some(&id) = self.declared.get(&name.name) {
            let prev = self.locals[id.index()].ty;
            if prev != ty {
                return Err(SemaError::ty(
                    name.pos,
                    format!(
                        "variable `{}` was declared as `{}` and cannot be redeclared as `{}`",
                        name.name,
                        self.types.type_name(prev),
                        self.types.type_name(ty)
                    ),
                ));
            }
            return Ok(id);
        }
        let id = VarId(self.locals.len() as u32);
        self.locals.push(LocalVar {
            name: name.name.clone(),
            ty,
            hidden: false,
        });
        self.declared.insert(name.name.clone(), id);
        Ok(id)
    }

    fn temp(&mut self) -> VarId {
        self.temps += 1;
        let id = VarId(self.locals.len() as u32);
        // `#` cannot occur in source identifiers.
        self.locals.push(LocalVar {
            name: format!("recv#{}", self.temps),
            ty: Type::Bool,
            hidden: true,
        });
        id
    }

    fn local(&self, name: &ast::Ident) -> SResult<VarId> {
        if let Some(&id) = self.declared.get(&name.name) {
            return Ok(id);
        }
        if self.param(&name.name).is_some() || self.loops.iter().any(|(n, ..)| *n == name.name) {
            return Err(SemaError::ty(
                name.pos,
                format!("`{}` is not a variable", name.name),
            ));
        }
        Err(SemaError::name(
            name.pos,
            format!("unknown variable `{}`", name.name),
        ))
    }

    fn chan(&self, e: &Expr) -> SResult<(ChanRef, Vec<Type>)> {
        let ExprKind::Ident(name) = &e.kind else {
            return Err(SemaError::ty(e.pos, "expected a channel name"));
        };
        if let Some((_, id, array)) = self.loops.iter().rev().find(|(n, ..)| n == name) {
            let ParamType::ChannelArray(payload) = &self.params[*array].1 else {
                unreachable!("loops iterate channel arrays")
            };
            return Ok((ChanRef::Loop(*id), payload.clone()));
        }
        match self.param(name) {
            Some((i, ParamType::Channel(payload))) => Ok((ChanRef::Param(i), payload.clone())),
            Some((_, ParamType::ChannelArray(_))) => Err(SemaError::ty(
                e.pos,
                format!("`{name}` is an array of channels; iterate over it with `for`"),
            )),
            Some((_, ParamType::Value(_))) => Err(SemaError::ty(
                e.pos,
                format!("`{name}` is not a channel"),
            )),
            None if self.declared.contains_key(name) => Err(SemaError::ty(
                e.pos,
                format!("`{name}` is not a channel"),
            )),
            None => Err(SemaError::name(e.pos, format!("unknown channel `{name}`"))),
        }
    }

    fn block(&mut self, block: &[Stmt]) -> SResult<Vec<CStmt>> {
        let mut out = Vec::new();
        for stmt in block {
            self.stmt(stmt, &mut out)?;
        }
        Ok(out)
    }

    fn stmt(&mut self, stmt: &Stmt, out: &mut Vec<CStmt>) -> SResult<()> {
        let text = print_stmt_header(stmt);
        let pos = stmt.pos;
        let kind = match &stmt.kind {
            StmtKind::VarDecl { name, ty, init } => {
                let ty = value_type(ty, self.types)?;
                match init {
                    Some(Expr {
                        kind:
                            ExprKind::Recv {
                                form,
                                chan,
                                targets,
                            },
                        pos: rpos,
                    }) => {
                        expect_type(Type::Bool, ty, *rpos, self.types, "initializer")?;
                        let (chan, targets) = self.recv_operands(chan, targets)?;
                        let var = self.declare(name, ty)?;
                        CStmtKind::Recv {
                            chan,
                            form: *form,
                            targets,
                            result: Some(var),
                        }
                    }
                    Some(e) => {
                        let (value, vty) = self.expr(e, RecvPolicy::Hoist, out)?;
                        expect_type(vty, ty, e.pos, self.types, "initializer")?;
                        let var = self.declare(name, ty)?;
                        CStmtKind::Assign { var, value }
                    }
                    None => {
                        let var = self.declare(name, ty)?;
                        CStmtKind::Assign {
                            var,
                            value: CExpr::Const(self.types.zero(ty)),
                        }
                    }
                }
            }
            StmtKind::Assign { target, value } => {
                let var = self.local(target)?;
                let ty = self.locals[var.index()].ty;
                if let ExprKind::Recv {
                    form,
                    chan,
                    targets,
                } = &value.kind
                {
                    expect_type(Type::Bool, ty, value.pos, self.types, "assigned value")?;
                    let (chan, targets) = self.recv_operands(chan, targets)?;
                    CStmtKind::Recv {
                        chan,
                        form: *form,
                        targets,
                        result: Some(var),
                    }
                } else {
                    let (value, vty) = self.expr(value, RecvPolicy::Hoist, out)?;
                    expect_type(vty, ty, pos, self.types, "assigned value")?;
                    CStmtKind::Assign { var, value }
                }
            }
            StmtKind::Send { chan, values } => {
                let (chan, payload) = self.chan(chan)?;
                if values.len() != payload.len() {
                    return Err(SemaError::Arity {
                        pos,
                        message: format!(
                            "channel carries {} value(s) but {} were sent",
                            payload.len(),
                            values.len()
                        ),
                    });
                }
                let mut vs = Vec::new();
                for (v, want) in values.iter().zip(&payload) {
                    let (value, ty) = self.expr(v, RecvPolicy::Forbidden, out)?;
                    expect_type(ty, *want, v.pos, self.types, "sent value")?;
                    vs.push(value);
                }
                CStmtKind::Send { chan, values: vs }
            }
            StmtKind::Recv {
                form,
                chan,
                targets,
            } => {
                let (chan, targets) = self.recv_operands(chan, targets)?;
                CStmtKind::Recv {
                    chan,
                    form: *form,
                    targets,
                    result: None,
                }
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                let (cond, ty) = self.expr(cond, RecvPolicy::Hoist, out)?;
                expect_type(ty, Type::Bool, pos, self.types, "`if` condition")?;
                let then_block = self.block(then_block)?;
                let else_block = else_block.as_ref().map(|b| self.block(b)).transpose()?;
                CStmtKind::If {
                    cond,
                    then_block,
                    else_block,
                }
            }
            StmtKind::For { var, array, body } => {
                let ExprKind::Ident(array_name) = &array.kind else {
                    return Err(SemaError::ty(array.pos, "`for` iterates over a channel-array parameter"));
                };
                let array_idx = match self.param(array_name) {
                    Some((i, ParamType::ChannelArray(_))) => i,
                    Some(_) => {
                        return Err(SemaError::ty(
                            array.pos,
                            format!("`{array_name}` is not an array of channels"),
                        ))
                    }
                    None => {
                        return Err(SemaError::name(
                            array.pos,
                            format!("unknown array `{array_name}`"),
                        ))
                    }
                };
                if self.declared.contains_key(&var.name) || self.param(&var.name).is_some() {
                    return Err(SemaError::name(
                        var.pos,
                        format!("loop variable `{}` shadows another name", var.name),
                    ));
                }
                let id = self.next_loop;
                self.next_loop += 1;
                self.loops.push((var.name.clone(), id, array_idx));
                let body = self.block(body);
                self.loops.pop();
                CStmtKind::For {
                    var: id,
                    array: array_idx,
                    body: body?,
                }
            }
            StmtKind::Choice(blocks) => CStmtKind::Choice(
                blocks
                    .iter()
                    .map(|b| self.block(b))
                    .collect::<SResult<_>>()?,
            ),
            StmtKind::Expr(e) => match &e.kind {
                ExprKind::Recv {
                    form,
                    chan,
                    targets,
                } => {
                    let (chan, targets) = self.recv_operands(chan, targets)?;
                    CStmtKind::Recv {
                        chan,
                        form: *form,
                        targets,
                        result: None,
                    }
                }
                _ => return Err(SemaError::ty(e.pos, "expression statement has no effect")),
            },
        };
        out.push(CStmt { kind, text, pos });
        Ok(())
    }

    fn recv_operands(&self, chan: &Expr, targets: &[ast::Ident]) -> SResult<(ChanRef, Vec<VarId>)> {
        let (chan_ref, payload) = self.chan(chan)?;
        if targets.len() != payload.len() {
            return Err(SemaError::Arity {
                pos: chan.pos,
                message: format!(
                    "channel carries {} value(s) but {} target variable(s) were given",
                    payload.len(),
                    targets.len()
                ),
            });
        }
        let mut vars = Vec::new();
        for (t, want) in targets.iter().zip(&payload) {
            let v = self.local(t)?;
            expect_type(self.locals[v.index()].ty, *want, t.pos, self.types, "receive target")?;
            vars.push(v);
        }
        Ok((chan_ref, vars))
    }

    fn expr(&mut self, e: &Expr, policy: RecvPolicy, pre: &mut Vec<CStmt>) -> SResult<(CExpr, Type)> {
        match &e.kind {
            ExprKind::Bool(b) => Ok((CExpr::Const(Value::Bool(*b)), Type::Bool)),
            ExprKind::Ident(name) => {
                if let Some(&id) = self.declared.get(name) {
                    return Ok((CExpr::Local(id), self.locals[id.index()].ty));
                }
                match self.param(name) {
                    Some((i, ParamType::Value(ty))) => return Ok((CExpr::Param(i), *ty)),
                    Some(_) => {
                        return Err(SemaError::ty(
                            e.pos,
                            format!("channel `{name}` used as a value"),
                        ))
                    }
                    None => {}
                }
                if self.loops.iter().any(|(n, ..)| n == name) {
                    return Err(SemaError::ty(
                        e.pos,
                        format!("channel `{name}` used as a value"),
                    ));
                }
                if let Some(v) = self.types.ctor(name) {
                    return Ok((CExpr::Const(v), v.ty()));
                }
                Err(SemaError::name(e.pos, format!("unknown name `{name}`")))
            }
            ExprKind::Field(..) => Err(SemaError::ty(
                e.pos,
                "`instance.variable` is only valid in `ltl` formulas",
            )),
            ExprKind::Array(_) => Err(SemaError::ty(
                e.pos,
                "array literals are only valid as process arguments",
            )),
            ExprKind::Unary(UnaryOp::Not, inner) => {
                let (inner, ty) = self.expr(inner, policy, pre)?;
                expect_type(ty, Type::Bool, e.pos, self.types, "operand of `!`")?;
                Ok((CExpr::Not(Box::new(inner)), Type::Bool))
            }
            ExprKind::Unary(_, _) => Err(SemaError::ty(
                e.pos,
                "temporal operators are only valid in `ltl` formulas",
            )),
            ExprKind::Binary(op, l, r) => {
                let Some(op) = binop(*op) else {
                    return Err(SemaError::ty(
                        e.pos,
                        "temporal operators are only valid in `ltl` formulas",
                    ));
                };
                let (l, lt) = self.expr(l, policy, pre)?;
                let (r, rt) = self.expr(r, policy, pre)?;
                let ty = binop_type(op, lt, rt, e.pos, self.types)?;
                Ok((CExpr::Bin(op, Box::new(l), Box::new(r)), ty))
            }
            ExprKind::Recv {
                form,
                chan,
                targets,
            } => {
                if policy == RecvPolicy::Forbidden {
                    return Err(SemaError::ty(
                        e.pos,
                        format!(
                            "`{}` may only appear in an assignment, a declaration, an `if` condition or as a statement",
                            form.keyword()
                        ),
                    ));
                }
                let (chan, targets) = self.recv_operands(chan, targets)?;
                let result = self.temp();
                pre.push(CStmt {
                    kind: CStmtKind::Recv {
                        chan,
                        form: *form,
                        targets,
                        result: Some(result),
                    },
                    text: print_expr(e),
                    pos: e.pos,
                });
                Ok((CExpr::Local(result), Type::Bool))
            }
        }
    }
}

type InitResult = (Vec<ChannelDecl>, Vec<CheckedProcess>);

fn check_init(
    init: &ast::InitBlock,
    types: &TypeTable,
    templates: &[CheckedProc],
    template_index: &HashMap<String, usize>,
) -> SResult<InitResult> {
    let mut names: HashMap<&str, Pos> = HashMap::new();
    let mut channels = Vec::new();
    for e in &init.entries {
        if names.insert(&e.name.name, e.name.pos).is_some() {
            return Err(SemaError::name(
                e.name.pos,
                format!("instance `{}` is declared twice", e.name.name),
            ));
        }
        if let InitPayload::Channel(c) = &e.payload {
            channels.push(ChannelDecl {
                name: e.name.name.clone(),
                payload: payload_types(c, types)?,
                kind: match c.capacity {
                    Some(capacity) => ChannelKind::Buffered { capacity },
                    None => ChannelKind::Rendezvous,
                },
                drop_fault: e.faults.contains(&ast::FaultMarker::Drop),
            });
        }
    }
    let chan_by_name = |id: &Expr| -> SResult<(ChanId, &ChannelDecl)> {
        let ExprKind::Ident(name) = &id.kind else {
            return Err(SemaError::ty(id.pos, "expected a channel instance name"));
        };
        channels
            .iter()
            .position(|c| c.name == *name)
            .map(|i| (ChanId(i as u32), &channels[i]))
            .ok_or_else(|| {
                SemaError::name(id.pos, format!("no channel instance named `{name}`"))
            })
    };
    let payload_matches = |want: &[Type], decl: &ChannelDecl, pos: Pos| -> SResult<()> {
        if decl.payload == want {
            return Ok(());
        }
        let show = |ts: &[Type]| {
            ts.iter()
                .map(|t| types.type_name(*t))
                .collect::<Vec<_>>()
                .join(", ")
        };
        Err(SemaError::ty(
            pos,
            format!(
                "channel `{}` carries {{ {} }} but the parameter expects {{ {} }}",
                decl.name,
                show(&decl.payload),
                show(want)
            ),
        ))
    };

    let mut processes = Vec::new();
    for e in &init.entries {
        let InitPayload::Process { template, args } = &e.payload else {
            continue;
        };
        let &t = template_index.get(&template.name).ok_or_else(|| {
            SemaError::name(template.pos, format!("unknown template `{}`", template.name))
        })?;
        let params = &templates[t].params;
        if args.len() != params.len() {
            return Err(SemaError::Arity {
                pos: template.pos,
                message: format!(
                    "`{}` takes {} argument(s) but {} were given",
                    template.name,
                    params.len(),
                    args.len()
                ),
            });
        }
        let mut bindings = Vec::new();
        for (arg, (pname, pty)) in args.iter().zip(params) {
            let b = match pty {
                ParamType::Channel(payload) => {
                    let (id, decl) = chan_by_name(arg)?;
                    payload_matches(payload, decl, arg.pos)?;
                    Binding::Channel(id)
                }
                ParamType::ChannelArray(payload) => {
                    let ExprKind::Array(items) = &arg.kind else {
                        return Err(SemaError::ty(
                            arg.pos,
                            format!("parameter `{pname}` expects an array literal `[..]` of channels"),
                        ));
                    };
                    let mut ids = Vec::new();
                    for item in items {
                        let (id, decl) = chan_by_name(item)?;
                        payload_matches(payload, decl, item.pos)?;
                        ids.push(id);
                    }
                    Binding::Channels(ids)
                }
                ParamType::Value(ty) => {
                    let v = match &arg.kind {
                        ExprKind::Bool(b) => Value::Bool(*b),
                        ExprKind::Ident(n) => types.ctor(n).ok_or_else(|| {
                            SemaError::name(arg.pos, format!("unknown constant `{n}`"))
                        })?,
                        _ => {
                            return Err(SemaError::ty(
                                arg.pos,
                                format!("parameter `{pname}` expects a constant"),
                            ))
                        }
                    };
                    expect_type(v.ty(), *ty, arg.pos, types, "argument")?;
                    Binding::Value(v)
                }
            };
            bindings.push(b);
        }
        processes.push(CheckedProcess {
            name: e.name.name.clone(),
            template: t,
            bindings,
            shutdown_fault: e.faults.contains(&ast::FaultMarker::Shutdown),
            pos: e.name.pos,
        });
    }
    Ok((channels, processes))
}

struct LtlContext<'a> {
    types: &'a TypeTable,
    templates: &'a [CheckedProc],
    instances: &'a [(String, usize)],
    channels: &'a [ChannelDecl],
}

impl LtlContext<'_> {
    fn formula(&self, e: &Expr) -> SResult<(Formula, Type)> {
        let bool_operand = |f: SResult<(Formula, Type)>, what: &str| -> SResult<Formula> {
            let (f, ty) = f?;
            expect_type(ty, Type::Bool, e.pos, self.types, what)?;
            Ok(f)
        };
        match &e.kind {
            ExprKind::Bool(b) => Ok((Formula::Const(Value::Bool(*b)), Type::Bool)),
            ExprKind::Ident(n) => match self.types.ctor(n) {
                Some(v) => Ok((Formula::Const(v), v.ty())),
                None => Err(SemaError::name(
                    e.pos,
                    format!("unknown name `{n}` (atoms are written `instance.variable`)"),
                )),
            },
            ExprKind::Field(inst, var) => {
                let Some(p) = self.instances.iter().position(|(n, _)| n == inst) else {
                    let what = if self.channels.iter().any(|c| c.name == *inst) {
                        "is a channel, not a process"
                    } else {
                        "is not a process instance"
                    };
                    return Err(SemaError::name(e.pos, format!("`{inst}` {what}")));
                };
                let template = &self.templates[self.instances[p].1];
                let Some(v) = template.local(var) else {
                    return Err(SemaError::name(
                        e.pos,
                        format!("process `{inst}` has no variable `{var}`"),
                    ));
                };
                Ok((
                    Formula::Var { process: p, var: v },
                    template.locals[v.index()].ty,
                ))
            }
            ExprKind::Unary(op, inner) => {
                let f = bool_operand(self.formula(inner), "operand")?;
                let f = match op {
                    UnaryOp::Not => Formula::Not(Box::new(f)),
                    UnaryOp::Globally => Formula::Globally(Box::new(f)),
                    UnaryOp::Finally => Formula::Finally(Box::new(f)),
                    UnaryOp::Next => Formula::Next(Box::new(f)),
                };
                Ok((f, Type::Bool))
            }
            ExprKind::Binary(op, l, r) => {
                let (lf, lt) = self.formula(l)?;
                let (rf, rt) = self.formula(r)?;
                match binop(*op) {
                    Some(op) => {
                        let ty = binop_type(op, lt, rt, e.pos, self.types)?;
                        Ok((Formula::Bin(op, Box::new(lf), Box::new(rf)), ty))
                    }
                    None => {
                        expect_type(lt, Type::Bool, e.pos, self.types, "operand of `U`")?;
                        expect_type(rt, Type::Bool, e.pos, self.types, "operand of `U`")?;
                        Ok((Formula::Until(Box::new(lf), Box::new(rf)), Type::Bool))
                    }
                }
            }
            ExprKind::Recv { form, .. } => Err(SemaError::ty(
                e.pos,
                format!("`{}` cannot appear in an `ltl` formula", form.keyword()),
            )),
            ExprKind::Array(_) => Err(SemaError::ty(
                e.pos,
                "array literals are only valid as process arguments",
            )),
        }
    }
}
