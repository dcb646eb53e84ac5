use super::ast::{AxisExpr, BinOp, Expr, Stmt, TargetExpr};
use super::lexer::{lex, Tok, Token};
use super::LangError;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn punct(c: char) -> Tok {
    Tok::Punct(c)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, LangError> {
        let t = &self.toks[self.pos];
        Err(LangError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LangError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("'{}'", c)])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), LangError> {
        if self.is_kw(kw) {
            self.next();
            Ok(())
        } else {
            self.fail(&[&format!("'{}'", kw)])
        }
    }

    fn ident(&mut self) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn stmt(&mut self) -> Result<Stmt, LangError> {
        if self.is_kw("let") {
            self.next();
            let name = self.ident()?;
            self.expect('=')?;
            let e = self.expr()?;
            return Ok(Stmt::Let(name, e));
        }
        Ok(Stmt::Expr(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('+') => BinOp::Add,
                Tok::Punct('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('*') => BinOp::Mul,
                Tok::Punct('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let k = match self.peek().clone() {
                Tok::Int(n) => i64::try_from(n).or_else(|_| self.fail(&["small exponent"]))?,
                _ => return self.fail(&["integer exponent"]),
            };
            self.next();
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn args(&mut self, close: char) -> Result<Vec<Expr>, LangError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(',') {
                return self.fail(&["','", &format!("'{}'", close)]);
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(n))
            }
            Tok::Punct('(') => {
                self.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Punct('<') => {
                self.next();
                let e = self.expr()?;
                self.expect('>')?;
                Ok(Expr::Form(Box::new(e)))
            }
            Tok::Punct('[') => {
                self.next();
                let es = self.args(']')?;
                if es.is_empty() {
                    return self.fail(&["expression"]);
                }
                Ok(Expr::Symbol(es))
            }
            Tok::Ident(s) if s == "Q" => {
                self.next();
                let mut gens = Vec::new();
                while self.eat('(') {
                    let g = self.ident()?;
                    self.expect('|')?;
                    let p = self.expr()?;
                    self.expect(')')?;
                    gens.push((g, p));
                }
                Ok(Expr::Field(gens))
            }
            Tok::Ident(s) if s == "corr" => {
                self.next();
                self.corr()
            }
            Tok::Ident(mut name) => {
                self.next();
                while self.eat('.') {
                    name.push('.');
                    name.push_str(&self.ident()?);
                }
                if self.eat('(') {
                    let args = self.args(')')?;
                    return Ok(Expr::Call(name, args));
                }
                Ok(Expr::Var(name))
            }
            _ => self.fail(&["expression"]),
        }
    }

    fn corr(&mut self) -> Result<Expr, LangError> {
        self.expect('(')?;
        let field = Box::new(self.expr()?);
        let mut over = None;
        let mut axes = Vec::new();
        if self.eat(';') {
            if self.is_kw("over") {
                self.next();
                self.expect('=')?;
                over = Some(Box::new(self.expr()?));
                if !self.eat(';') {
                    self.expect(')')?;
                    return Ok(Expr::Corr { field, over, axes });
                }
            }
            loop {
                axes.push(self.axis()?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(')')?;
        Ok(Expr::Corr { field, over, axes })
    }

    fn axis(&mut self) -> Result<AxisExpr, LangError> {
        self.keyword("axis")?;
        self.expect('(')?;
        let framing = self.expr()?;
        let mut excl = None;
        let mut target = None;
        while self.eat(';') {
            if self.is_kw("excl") && excl.is_none() && target.is_none() {
                self.next();
                self.expect('=')?;
                excl = Some(self.expr()?);
            } else if self.is_kw("target") && target.is_none() {
                self.next();
                self.expect('=')?;
                let kinds = ["'point'", "'coord'", "'const'"];
                let kind = match self.peek() {
                    Tok::Ident(k) if ["point", "coord", "const"].contains(&k.as_str()) => k.clone(),
                    _ => return self.fail(&kinds),
                };
                self.next();
                target = Some(match kind.as_str() {
                    "point" => TargetExpr::Point,
                    "coord" => TargetExpr::Coord,
                    _ => TargetExpr::Const(self.expr()?),
                });
            } else {
                return self.fail(&["'excl'", "'target'"]);
            }
        }
        self.expect(')')?;
        Ok(AxisExpr {
            framing,
            excl,
            target,
        })
    }
}

/// Parses one statement; `None` for a blank or comment-only line.
pub fn parse_stmt(src: &str) -> Result<Option<Stmt>, LangError> {
    let toks = lex(src)?;
    if toks.len() == 1 {
        return Ok(None);
    }
    let mut p = Parser { toks, pos: 0 };
    let s = p.stmt()?;
    if *p.peek() != Tok::End {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(Some(s))
}

pub fn parse_expr(src: &str) -> Result<Expr, LangError> {
    match parse_stmt(src)? {
        Some(Stmt::Expr(e)) => Ok(e),
        Some(Stmt::Let(..)) => Err(LangError::Type("expected an expression, found a binding".into())),
        None => Err(LangError::Syntax {
            line: 1,
            col: 1,
            expected: vec!["expression".into()],
            found: "end of input".into(),
        }),
    }
}
