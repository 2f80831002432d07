//! Recursive-descent parser over the token stream.

use thiserror::Error;

use super::ast::*;
use super::lexer::{Token, TokenKind};
use crate::diag::{Diagnostic, Pos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic for ParseError {
    fn pos(&self) -> Pos {
        self.pos
    }

    fn message(&self) -> String {
        self.message.clone()
    }
}

type PResult<T> = Result<T, ParseError>;

/// Parses a token list (ending in EOF) into a [`Model`].
pub fn parse_model(tokens: &[Token]) -> Result<Model, ParseError> {
    match tokens.last() {
        Some(t) if t.kind == TokenKind::Eof => {}
        _ => {
            return Err(ParseError {
                pos: tokens.last().map(Token::pos).unwrap_or_default(),
                message: "token stream does not end in EOF".into(),
            })
        }
    }
    Parser {
        tokens,
        at: 0,
        ltl: false,
    }
    .model()
}

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
    /// Inside an `ltl` block: temporal operators and `inst.var` atoms are legal.
    ltl: bool,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        &self.tokens[self.at]
    }

    fn peek_at(&self, n: usize) -> &'t Token {
        &self.tokens[(self.at + n).min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.at];
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        t
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek().is(TokenKind::Punct, p)
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().is(TokenKind::Keyword, kw)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            pos: t.pos(),
            message: format!("expected {expected}, found {t}"),
        })
    }

    fn expect_punct(&mut self, p: &str) -> PResult<&'t Token> {
        if self.at_punct(p) {
            Ok(self.bump())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<&'t Token> {
        if self.at_kw(kw) {
            Ok(self.bump())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        let t = self.peek();
        if t.kind == TokenKind::Ident {
            self.bump();
            Ok(Ident::new(t.text.clone(), t.pos()))
        } else {
            self.unexpected("identifier")
        }
    }

    /// Consumes a separator after a statement-like item: one or more `;`,
    /// a line break, or nothing before a closing `}`.
    fn end_of_item(&mut self) -> PResult<()> {
        if self.at_punct(";") {
            while self.eat_punct(";") {}
            return Ok(());
        }
        if self.at_punct("}") {
            return Ok(());
        }
        let prev_line = self.tokens[self.at.saturating_sub(1)].line;
        if self.peek().line > prev_line {
            return Ok(());
        }
        self.unexpected("`;` or a line break")
    }

    fn model(mut self) -> PResult<Model> {
        let mut data = Vec::new();
        let mut procs = Vec::new();
        let mut init: Option<InitBlock> = None;
        let mut ltl = Vec::new();
        loop {
            let t = self.peek();
            match (t.kind, t.text.as_str()) {
                (TokenKind::Eof, _) => break,
                (TokenKind::Keyword, "data") => data.push(self.data_decl()?),
                (TokenKind::Keyword, "proc") => procs.push(self.proc_decl()?),
                (TokenKind::Keyword, "init") => {
                    if init.is_some() {
                        return Err(ParseError {
                            pos: t.pos(),
                            message: "duplicate init-block (a model has exactly one)".into(),
                        });
                    }
                    init = Some(self.init_block()?);
                }
                (TokenKind::Keyword, "ltl") => ltl.extend(self.ltl_block()?),
                _ => return self.unexpected("`data`, `proc`, `init` or `ltl`"),
            }
        }
        let Some(init) = init else {
            return self.unexpected("an init-block");
        };
        Ok(Model {
            data,
            procs,
            init,
            ltl,
        })
    }

    fn data_decl(&mut self) -> PResult<DataDecl> {
        self.expect_kw("data")?;
        let name = self.ident()?;
        self.expect_punct("{")?;
        let mut ctors = vec![self.ident()?];
        while self.eat_punct(",") {
            if self.at_punct("}") {
                break;
            }
            ctors.push(self.ident()?);
        }
        self.expect_punct("}")?;
        Ok(DataDecl { name, ctors })
    }

    fn proc_decl(&mut self) -> PResult<ProcDecl> {
        self.expect_kw("proc")?;
        let name = self.ident()?;
        self.expect_punct("(")?;
        let mut params = Vec::new();
        while !self.at_punct(")") {
            let pname = self.ident()?;
            let ty = self.type_expr()?;
            params.push(Param { name: pname, ty });
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        let body = self.block()?;
        Ok(ProcDecl { name, params, body })
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let t = self.peek();
        if self.at_kw("bool") {
            self.bump();
            Ok(TypeExpr::Bool(t.pos()))
        } else if t.kind == TokenKind::Ident {
            Ok(TypeExpr::Named(self.ident()?))
        } else if self.at_kw("channel") {
            Ok(TypeExpr::Channel(self.channel_type()?))
        } else if self.at_punct("[") {
            self.bump();
            self.expect_punct("]")?;
            Ok(TypeExpr::ChannelArray(self.channel_type()?))
        } else {
            self.unexpected("a type")
        }
    }

    fn channel_type(&mut self) -> PResult<ChannelType> {
        let pos = self.expect_kw("channel")?.pos();
        let mut capacity = None;
        if self.eat_punct("[") {
            let t = self.peek();
            if t.kind != TokenKind::Number {
                return self.unexpected("a buffer capacity");
            }
            let n: u32 = t.text.parse().map_err(|_| ParseError {
                pos: t.pos(),
                message: format!("buffer capacity `{}` is out of range", t.text),
            })?;
            if n == 0 {
                return Err(ParseError {
                    pos: t.pos(),
                    message: "buffer capacity must be at least 1".into(),
                });
            }
            self.bump();
            self.expect_punct("]")?;
            capacity = Some(n);
        }
        self.expect_punct("{")?;
        let mut payload = vec![self.type_expr()?];
        while self.eat_punct(",") {
            payload.push(self.type_expr()?);
        }
        self.expect_punct("}")?;
        Ok(ChannelType {
            capacity,
            payload,
            pos,
        })
    }

    fn block(&mut self) -> PResult<Block> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while self.eat_punct(";") {}
        while !self.at_punct("}") {
            if self.peek().kind == TokenKind::Eof {
                return self.unexpected("`}`");
            }
            stmts.push(self.stmt()?);
            self.end_of_item()?;
        }
        self.expect_punct("}")?;
        Ok(stmts)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let t = self.peek();
        let pos = t.pos();
        let kind = match (t.kind, t.text.as_str()) {
            (TokenKind::Keyword, "var") => {
                self.bump();
                let name = self.ident()?;
                let ty = self.type_expr()?;
                let init = if self.eat_punct("=") {
                    Some(self.expr()?)
                } else {
                    None
                };
                StmtKind::VarDecl { name, ty, init }
            }
            (TokenKind::Keyword, "send") => {
                self.bump();
                self.expect_punct("(")?;
                let chan = self.expr()?;
                let mut values = Vec::new();
                while self.eat_punct(",") {
                    values.push(self.expr()?);
                }
                self.expect_punct(")")?;
                StmtKind::Send { chan, values }
            }
            (TokenKind::Keyword, "recv" | "peek") => {
                let form = RecvForm::from_keyword(&t.text).expect("receive keyword");
                self.bump();
                let (chan, targets) = self.recv_args()?;
                StmtKind::Recv {
                    form,
                    chan,
                    targets,
                }
            }
            (TokenKind::Keyword, "if") => self.if_stmt()?,
            (TokenKind::Keyword, "for") => {
                self.bump();
                let var = self.ident()?;
                self.expect_kw("in")?;
                let array = self.expr()?;
                let body = self.block()?;
                StmtKind::For { var, array, body }
            }
            (TokenKind::Keyword, "choice") => {
                self.bump();
                let mut blocks = vec![self.block()?];
                while self.eat_punct(",") {
                    blocks.push(self.block()?);
                }
                if blocks.len() < 2 {
                    return Err(ParseError {
                        pos,
                        message: "`choice` needs at least two blocks".into(),
                    });
                }
                StmtKind::Choice(blocks)
            }
            (TokenKind::Ident, _) if self.peek_at(1).is(TokenKind::Punct, "=") => {
                let target = self.ident()?;
                self.bump();
                let value = self.expr()?;
                StmtKind::Assign { target, value }
            }
            _ => StmtKind::Expr(self.expr()?),
        };
        Ok(Stmt { kind, pos })
    }

    fn if_stmt(&mut self) -> PResult<StmtKind> {
        self.expect_kw("if")?;
        let cond = self.expr()?;
        let then_block = self.block()?;
        let else_block = if self.at_kw("else") {
            self.bump();
            if self.at_kw("if") {
                let pos = self.peek().pos();
                let kind = self.if_stmt()?;
                Some(vec![Stmt { kind, pos }])
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(StmtKind::If {
            cond,
            then_block,
            else_block,
        })
    }

    fn recv_args(&mut self) -> PResult<(Expr, Vec<Ident>)> {
        self.expect_punct("(")?;
        let chan = self.expr()?;
        let mut targets = Vec::new();
        while self.eat_punct(",") {
            targets.push(self.ident()?);
        }
        self.expect_punct(")")?;
        Ok((chan, targets))
    }

    fn init_block(&mut self) -> PResult<InitBlock> {
        let pos = self.expect_kw("init")?.pos();
        self.expect_punct("{")?;
        let mut entries = Vec::new();
        while !self.at_punct("}") {
            entries.push(self.init_entry()?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct("}")?;
        Ok(InitBlock { entries, pos })
    }

    fn init_entry(&mut self) -> PResult<InitEntry> {
        let name = self.ident()?;
        self.expect_punct(":")?;
        let payload = if self.at_kw("channel") {
            InitPayload::Channel(self.channel_type()?)
        } else {
            let template = self.ident()?;
            self.expect_punct("(")?;
            let mut args = Vec::new();
            while !self.at_punct(")") {
                args.push(self.init_arg()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct(")")?;
            InitPayload::Process { template, args }
        };
        let mut faults = Vec::new();
        while self.peek().kind == TokenKind::FaultMarker {
            let t = self.bump();
            let marker = if t.text == "@shutdown" {
                FaultMarker::Shutdown
            } else {
                FaultMarker::Drop
            };
            let fits = matches!(
                (&payload, marker),
                (InitPayload::Process { .. }, FaultMarker::Shutdown)
                    | (InitPayload::Channel(_), FaultMarker::Drop)
            );
            if !fits {
                let what = match marker {
                    FaultMarker::Shutdown => "`@shutdown` applies only to process entries",
                    FaultMarker::Drop => "`@drop` applies only to channel entries",
                };
                return Err(ParseError {
                    pos: t.pos(),
                    message: what.into(),
                });
            }
            if faults.contains(&marker) {
                return Err(ParseError {
                    pos: t.pos(),
                    message: format!("duplicate fault marker `{}`", t.text),
                });
            }
            faults.push(marker);
        }
        Ok(InitEntry {
            name,
            payload,
            faults,
        })
    }

    fn init_arg(&mut self) -> PResult<Expr> {
        if self.at_punct("[") {
            let pos = self.bump().pos();
            let mut items = Vec::new();
            while !self.at_punct("]") {
                items.push(self.expr()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct("]")?;
            return Ok(Expr::new(ExprKind::Array(items), pos));
        }
        self.expr()
    }

    fn ltl_block(&mut self) -> PResult<Vec<LtlSpec>> {
        self.expect_kw("ltl")?;
        self.expect_punct("{")?;
        self.ltl = true;
        let mut specs = Vec::new();
        while self.eat_punct(";") {}
        while !self.at_punct("}") {
            let pos = self.peek().pos();
            let formula = self.expr()?;
            specs.push(LtlSpec { formula, pos });
            self.end_of_item()?;
        }
        self.ltl = false;
        self.expect_punct("}")?;
        Ok(specs)
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.implies()
    }

    fn implies(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if self.at_punct("->") {
            let pos = self.bump().pos();
            let rhs = self.implies()?;
            return Ok(binary(BinaryOp::Implies, lhs, rhs, pos));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        let mut lhs = self.and()?;
        while self.at_punct("||") {
            let pos = self.bump().pos();
            let rhs = self.and()?;
            lhs = binary(BinaryOp::Or, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut lhs = self.until()?;
        while self.at_punct("&&") {
            let pos = self.bump().pos();
            let rhs = self.until()?;
            lhs = binary(BinaryOp::And, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> PResult<Expr> {
        let lhs = self.equality()?;
        if self.ltl && self.peek().is(TokenKind::Ident, "U") {
            let pos = self.bump().pos();
            let rhs = self.until()?;
            return Ok(binary(BinaryOp::Until, lhs, rhs, pos));
        }
        Ok(lhs)
    }

    fn equality(&mut self) -> PResult<Expr> {
        let lhs = self.unary()?;
        let op = if self.at_punct("==") {
            BinaryOp::Eq
        } else if self.at_punct("!=") {
            BinaryOp::Ne
        } else {
            return Ok(lhs);
        };
        let pos = self.bump().pos();
        let rhs = self.unary()?;
        if self.at_punct("==") || self.at_punct("!=") {
            return self.unexpected("a parenthesized comparison (`==`/`!=` do not chain)");
        }
        Ok(binary(op, lhs, rhs, pos))
    }

    fn unary(&mut self) -> PResult<Expr> {
        let t = self.peek();
        if self.at_punct("!") {
            self.bump();
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Unary(UnaryOp::Not, Box::new(e)), t.pos()));
        }
        if self.ltl && t.kind == TokenKind::Ident && !self.peek_at(1).is(TokenKind::Punct, ".") {
            let op = match t.text.as_str() {
                "G" => Some(UnaryOp::Globally),
                "F" => Some(UnaryOp::Finally),
                "X" => Some(UnaryOp::Next),
                _ => None,
            };
            if let Some(op) = op {
                self.bump();
                let e = self.unary()?;
                return Ok(Expr::new(ExprKind::Unary(op, Box::new(e)), t.pos()));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek();
        let pos = t.pos();
        match (t.kind, t.text.as_str()) {
            (TokenKind::Keyword, "true" | "false") => {
                self.bump();
                Ok(Expr::new(ExprKind::Bool(t.text == "true"), pos))
            }
            (TokenKind::Keyword, kw) if RecvForm::from_keyword(kw).is_some() => {
                let form = RecvForm::from_keyword(kw).expect("receive keyword");
                self.bump();
                let (chan, targets) = self.recv_args()?;
                Ok(Expr::new(
                    ExprKind::Recv {
                        form,
                        chan: Box::new(chan),
                        targets,
                    },
                    pos,
                ))
            }
            (TokenKind::Punct, "(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            (TokenKind::Ident, _) => {
                self.bump();
                if self.at_punct(".") {
                    if !self.ltl {
                        return self.unexpected("an operator (`inst.var` is only valid in `ltl`)");
                    }
                    self.bump();
                    let field = self.ident()?;
                    return Ok(Expr::new(
                        ExprKind::Field(t.text.clone(), field.name),
                        pos,
                    ));
                }
                Ok(Expr::new(ExprKind::Ident(t.text.clone()), pos))
            }
            _ => self.unexpected("an expression"),
        }
    }
}

fn binary(op: BinaryOp, lhs: Expr, rhs: Expr, pos: Pos) -> Expr {
    Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::tokenize;

    fn parse(src: &str) -> PResult<Model> {
        parse_model(&tokenize(src).unwrap())
    }

    #[test]
    fn duplicate_init_block_is_rejected() {
        let err = parse("init {} init {}").unwrap_err();
        assert_eq!(err.pos, Pos::new(1, 9));
        assert!(err.message.contains("duplicate init-block"));
    }

    #[test]
    fn missing_init_block_is_rejected() {
        let err = parse("proc P() { }").unwrap_err();
        assert!(err.message.contains("init-block"), "{}", err.message);
    }

    #[test]
    fn statements_need_separators() {
        assert!(parse("proc P(c channel { bool }) { send(c, true); send(c, true) } init {}").is_ok());
        assert!(parse("proc P(c channel { bool }) {\n send(c, true)\n send(c, true)\n} init {}").is_ok());
        let err =
            parse("proc P(c channel { bool }) { send(c, true) send(c, true) } init {}").unwrap_err();
        assert!(err.message.contains("`;` or a line break"), "{}", err.message);
    }

    #[test]
    fn fault_marker_outside_init_entry() {
        let err = parse("proc P() { var x bool @shutdown } init {}").unwrap_err();
        assert!(err.message.contains("fault marker"), "{}", err.message);
        let err = parse("init { c: channel { bool } @shutdown }").unwrap_err();
        assert!(err.message.contains("only to process"), "{}", err.message);
        let err = parse("proc P() {} init { p: P() @drop }").unwrap_err();
        assert!(err.message.contains("only to channel"), "{}", err.message);
        let err = parse("init { c: channel { bool } @drop @drop }").unwrap_err();
        assert!(err.message.contains("duplicate"), "{}", err.message);
    }

    #[test]
    fn choice_needs_two_blocks() {
        let err = parse("proc P() { choice { } } init {}").unwrap_err();
        assert!(err.message.contains("at least two"));
    }

    #[test]
    fn buffered_channel_capacity() {
        let m = parse("init { c: channel [3] { bool, bool } }").unwrap();
        let InitPayload::Channel(ct) = &m.init.entries[0].payload else {
            panic!()
        };
        assert_eq!(ct.capacity, Some(3));
        assert_eq!(ct.payload.len(), 2);
        assert!(parse("init { c: channel [0] { bool } }").is_err());
        assert!(parse("init { c: channel [] { bool } }").is_err());
    }

    #[test]
    fn field_access_only_in_ltl() {
        assert!(parse("proc P() { var x bool = a.b } init {}").is_err());
        let m = parse("init {} ltl { G (p.x -> F q.y) }").unwrap();
        assert_eq!(m.ltl.len(), 1);
    }

    #[test]
    fn ltl_operator_precedence() {
        let m = parse("init {} ltl { G a.x && F a.y -> a.z U a.w }").unwrap();
        let ExprKind::Binary(BinaryOp::Implies, lhs, rhs) = &m.ltl[0].formula.kind else {
            panic!("{:?}", m.ltl[0].formula)
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinaryOp::And, ..)));
        assert!(matches!(rhs.kind, ExprKind::Binary(BinaryOp::Until, ..)));
    }

    #[test]
    fn else_if_chains() {
        let m = parse("proc P() { var x bool\n if x { x = false } else if !x { x = true } else { } } init {}")
            .unwrap();
        let StmtKind::If { else_block, .. } = &m.procs[0].body[1].kind else {
            panic!()
        };
        let else_block = else_block.as_ref().unwrap();
        assert!(matches!(else_block[0].kind, StmtKind::If { .. }));
    }
}
