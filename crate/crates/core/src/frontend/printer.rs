//! Canonical source printer. Output re-parses to the same tree.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "  ";

pub fn print_model(model: &Model) -> String {
    let mut out = String::new();
    for d in &model.data {
        let ctors: Vec<&str> = d.ctors.iter().map(|c| c.name.as_str()).collect();
        writeln!(out, "data {} {{ {} }}", d.name.name, ctors.join(", ")).unwrap();
    }
    for p in &model.procs {
        let params: Vec<String> = p
            .params
            .iter()
            .map(|param| format!("{} {}", param.name.name, print_type(&param.ty)))
            .collect();
        writeln!(out, "proc {}({}) {{", p.name.name, params.join(", ")).unwrap();
        print_block_body(&mut out, &p.body, 1);
        out.push_str("}\n");
    }
    out.push_str("init {\n");
    for e in &model.init.entries {
        let payload = match &e.payload {
            InitPayload::Process { template, args } => {
                let args: Vec<String> = args.iter().map(print_expr).collect();
                format!("{}({})", template.name, args.join(", "))
            }
            InitPayload::Channel(c) => print_channel_type(c),
        };
        let mut line = format!("{INDENT}{} : {}", e.name.name, payload);
        for f in &e.faults {
            line.push(' ');
            line.push_str(f.text());
        }
        writeln!(out, "{line},").unwrap();
    }
    out.push_str("}\n");
    if !model.ltl.is_empty() {
        out.push_str("ltl {\n");
        for spec in &model.ltl {
            writeln!(out, "{INDENT}{}", print_expr(&spec.formula)).unwrap();
        }
        out.push_str("}\n");
    }
    out
}

pub fn print_type(ty: &TypeExpr) -> String {
    match ty {
        TypeExpr::Bool(_) => "bool".into(),
        TypeExpr::Named(id) => id.name.clone(),
        TypeExpr::Channel(c) => print_channel_type(c),
        TypeExpr::ChannelArray(c) => format!("[]{}", print_channel_type(c)),
    }
}

fn print_channel_type(c: &ChannelType) -> String {
    let payload: Vec<String> = c.payload.iter().map(print_type).collect();
    match c.capacity {
        Some(n) => format!("channel [{n}] {{ {} }}", payload.join(", ")),
        None => format!("channel {{ {} }}", payload.join(", ")),
    }
}

fn print_block_body(out: &mut String, block: &Block, depth: usize) {
    for stmt in block {
        print_stmt(out, stmt, depth);
    }
}

fn print_block(out: &mut String, block: &Block, depth: usize) {
    out.push_str("{\n");
    print_block_body(out, block, depth + 1);
    out.push_str(&INDENT.repeat(depth));
    out.push('}');
}

fn print_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    out.push_str(&INDENT.repeat(depth));
    match &stmt.kind {
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            write!(out, "if {} ", print_expr(cond)).unwrap();
            print_block(out, then_block, depth);
            if let Some(e) = else_block {
                out.push_str(" else ");
                print_block(out, e, depth);
            }
        }
        StmtKind::For { var, array, body } => {
            write!(out, "for {} in {} ", var.name, print_expr(array)).unwrap();
            print_block(out, body, depth);
        }
        StmtKind::Choice(blocks) => {
            out.push_str("choice ");
            for (i, b) in blocks.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_block(out, b, depth);
            }
        }
        _ => out.push_str(&print_stmt_header(stmt)),
    }
    out.push('\n');
}

/// One-line rendering of a statement: compound statements print only their
/// head (`if cond`, `for x in xs`, `choice`). Used for transition labels.
pub fn print_stmt_header(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::VarDecl { name, ty, init } => match init {
            Some(e) => format!("var {} {} = {}", name.name, print_type(ty), print_expr(e)),
            None => format!("var {} {}", name.name, print_type(ty)),
        },
        StmtKind::Assign { target, value } => format!("{} = {}", target.name, print_expr(value)),
        StmtKind::Send { chan, values } => {
            let mut args = vec![print_expr(chan)];
            args.extend(values.iter().map(print_expr));
            format!("send({})", args.join(", "))
        }
        StmtKind::Recv {
            form,
            chan,
            targets,
        } => print_recv(*form, chan, targets),
        StmtKind::If { cond, .. } => format!("if {}", print_expr(cond)),
        StmtKind::For { var, array, .. } => format!("for {} in {}", var.name, print_expr(array)),
        StmtKind::Choice(_) => "choice".into(),
        StmtKind::Expr(e) => print_expr(e),
    }
}

fn print_recv(form: RecvForm, chan: &Expr, targets: &[Ident]) -> String {
    let mut args = vec![print_expr(chan)];
    args.extend(targets.iter().map(|t| t.name.clone()));
    format!("{}({})", form.keyword(), args.join(", "))
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNTIL: u8 = 4;
const PREC_EQ: u8 = 5;
const PREC_UNARY: u8 = 6;
const PREC_ATOM: u8 = 7;

pub fn print_expr(e: &Expr) -> String {
    print_prec(e, 0)
}

fn print_prec(e: &Expr, min: u8) -> String {
    let (text, prec) = match &e.kind {
        ExprKind::Bool(b) => (b.to_string(), PREC_ATOM),
        ExprKind::Ident(n) => (n.clone(), PREC_ATOM),
        ExprKind::Field(a, b) => (format!("{a}.{b}"), PREC_ATOM),
        ExprKind::Recv {
            form,
            chan,
            targets,
        } => (print_recv(*form, chan, targets), PREC_ATOM),
        ExprKind::Array(items) => {
            let items: Vec<String> = items.iter().map(print_expr).collect();
            (format!("[{}]", items.join(", ")), PREC_ATOM)
        }
        ExprKind::Unary(op, inner) => {
            let operand = print_prec(inner, PREC_UNARY);
            let text = match op {
                UnaryOp::Not => format!("!{operand}"),
                UnaryOp::Globally => format!("G {operand}"),
                UnaryOp::Finally => format!("F {operand}"),
                UnaryOp::Next => format!("X {operand}"),
            };
            (text, PREC_UNARY)
        }
        ExprKind::Binary(op, l, r) => {
            let (p, lmin, rmin) = match op {
                BinaryOp::Implies => (PREC_IMPLIES, PREC_IMPLIES + 1, PREC_IMPLIES),
                BinaryOp::Or => (PREC_OR, PREC_OR, PREC_OR + 1),
                BinaryOp::And => (PREC_AND, PREC_AND, PREC_AND + 1),
                BinaryOp::Until => (PREC_UNTIL, PREC_UNTIL + 1, PREC_UNTIL),
                BinaryOp::Eq | BinaryOp::Ne => (PREC_EQ, PREC_EQ + 1, PREC_EQ + 1),
            };
            let text = format!(
                "{} {} {}",
                print_prec(l, lmin),
                op.symbol(),
                print_prec(r, rmin)
            );
            (text, p)
        }
    };
    if prec < min {
        format!("({text})")
    } else {
        text
    }
}
