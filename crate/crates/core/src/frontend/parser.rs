use std::sync::Arc;

use num_traits::ToPrimitive;

use super::ast::{Assignment, Atom, Condition, LoopProgram, Relop, Stmt};
use super::lexer::{tokenize, Tok, Token};
use super::FrontendError;
use crate::polyring::{Polynomial, Rational, Ring};

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, FrontendError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, FrontendError> {
        let (line, col) = self.here();
        Err(FrontendError::Syntax { line, col, msg: msg.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FrontendError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}, found {}", self.describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), FrontendError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{kw}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), FrontendError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok((s, line, col))
            }
            _ => self.syntax(format!("expected identifier, found {}", self.describe())),
        }
    }

    fn idlist(&mut self) -> Result<Vec<(String, usize, usize)>, FrontendError> {
        let mut out = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    // expr := term {("+"|"-") term}
    pub(crate) fn expr(&mut self, ring: &Arc<Ring>, scope: Scope) -> Result<Polynomial, FrontendError> {
        let mut acc = self.term(ring, scope)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term(ring, scope)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term(ring, scope)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary {("*"|"/") unary}
    fn term(&mut self, ring: &Arc<Ring>, scope: Scope) -> Result<Polynomial, FrontendError> {
        let mut acc = self.unary(ring, scope)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary(ring, scope)?;
                }
                Tok::Slash => {
                    let (line, col) = self.here();
                    self.bump();
                    let d = self.unary(ring, scope)?;
                    if !d.is_constant() {
                        return Err(FrontendError::NonPolynomial {
                            line,
                            col,
                            msg: "division by a non-constant expression".into(),
                        });
                    }
                    if d.is_zero() {
                        return Err(FrontendError::NonPolynomial { line, col, msg: "division by zero".into() });
                    }
                    let c = d.terms().next().map(|(_, c)| c.clone()).unwrap();
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := "-" unary | power
    fn unary(&mut self, ring: &Arc<Ring>, scope: Scope) -> Result<Polynomial, FrontendError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary(ring, scope)?.negate());
        }
        self.power(ring, scope)
    }

    // power := primary ["^" integer]
    fn power(&mut self, ring: &Arc<Ring>, scope: Scope) -> Result<Polynomial, FrontendError> {
        let base = self.primary(ring, scope)?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (line, col) = self.here();
        self.bump();
        let bad = |msg: &str| FrontendError::NonPolynomial { line, col, msg: msg.into() };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let e = n.to_u32().ok_or_else(|| bad("exponent too large"))?;
                Ok(base.pow(e))
            }
            Tok::Minus => Err(bad("negative exponent")),
            _ => Err(bad("exponents must be non-negative integer literals")),
        }
    }

    fn primary(&mut self, ring: &Arc<Ring>, scope: Scope) -> Result<Polynomial, FrontendError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Polynomial::constant(ring, Rational::from_integer(n)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(ring, scope)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                match ring.index_of(&name) {
                    Some(i) => Ok(Polynomial::var(ring, i)),
                    None => Err(FrontendError::UnknownIdentifier { line, col, name, scope: scope.label() }),
                }
            }
            _ => self.syntax(format!("expected expression, found {}", self.describe())),
        }
    }

    // cond := "true" | atom {"&&" atom}
    fn condition(&mut self, ring: &Arc<Ring>) -> Result<Condition, FrontendError> {
        if self.is_kw("true") {
            self.bump();
            return Ok(Condition::default());
        }
        let mut atoms = vec![self.atom(ring)?];
        while *self.peek() == Tok::AndAnd {
            self.bump();
            atoms.push(self.atom(ring)?);
        }
        Ok(Condition { atoms })
    }

    fn atom(&mut self, ring: &Arc<Ring>) -> Result<Atom, FrontendError> {
        let lhs = self.expr(ring, Scope::Body)?;
        let rel = match self.peek() {
            Tok::Lt => Relop::Lt,
            Tok::Le => Relop::Le,
            Tok::Gt => Relop::Gt,
            Tok::Ge => Relop::Ge,
            Tok::Eq => Relop::Eq,
            Tok::Ne => Relop::Ne,
            _ => return self.syntax(format!("expected a comparison operator, found {}", self.describe())),
        };
        self.bump();
        let rhs = self.expr(ring, Scope::Body)?;
        Ok(Atom { poly: &lhs - &rhs, rel })
    }

    fn stmts(&mut self, ring: &Arc<Ring>) -> Result<Vec<Stmt>, FrontendError> {
        let mut out: Vec<Stmt> = Vec::new();
        loop {
            if self.is_kw("end") || self.is_kw("else") || self.at_eof() {
                return Ok(out);
            }
            let stmt = self.stmt(ring)?;
            match (out.last_mut(), stmt) {
                (Some(Stmt::Assign(prev)), Stmt::Assign(next)) => *prev = compose(ring, prev, &next),
                (_, s) => out.push(s),
            }
        }
    }

    fn stmt(&mut self, ring: &Arc<Ring>) -> Result<Stmt, FrontendError> {
        if self.is_kw("if") {
            self.bump();
            let cond = self.condition(ring)?;
            self.expect_kw("then")?;
            let then_branch = self.stmts(ring)?;
            let else_branch = if self.is_kw("else") {
                self.bump();
                self.stmts(ring)?
            } else {
                Vec::new()
            };
            self.expect_kw("end")?;
            if *self.peek() == Tok::Semi {
                self.bump();
            }
            return Ok(Stmt::If { cond, then_branch, else_branch });
        }
        let targets = if *self.peek() == Tok::LParen {
            self.bump();
            let ids = self.idlist()?;
            self.expect(Tok::RParen, "`)`")?;
            ids
        } else {
            vec![self.ident()?]
        };
        self.expect(Tok::Assign, "`:=`")?;
        let values = if targets.len() > 1 {
            self.expect(Tok::LParen, "`(`")?;
            let mut vals = vec![self.expr(ring, Scope::Body)?];
            while *self.peek() == Tok::Comma {
                self.bump();
                vals.push(self.expr(ring, Scope::Body)?);
            }
            self.expect(Tok::RParen, "`)`")?;
            vals
        } else {
            vec![self.expr(ring, Scope::Body)?]
        };
        if values.len() != targets.len() {
            return self.syntax(format!("{} targets but {} values", targets.len(), values.len()));
        }
        self.expect(Tok::Semi, "`;`")?;
        let mut idx = Vec::with_capacity(targets.len());
        for (name, line, col) in targets {
            let i = ring
                .index_of(&name)
                .ok_or_else(|| FrontendError::UndeclaredVariable { line, col, name: name.clone() })?;
            if idx.contains(&i) {
                return Err(FrontendError::Syntax { line, col, msg: format!("`{name}` assigned twice") });
            }
            idx.push(i);
        }
        Ok(Stmt::Assign(Assignment { targets: idx, values }))
    }

    pub(crate) fn program(&mut self) -> Result<LoopProgram, FrontendError> {
        self.expect_kw("vars")?;
        let var_ids = self.idlist()?;
        self.expect(Tok::Semi, "`;`")?;
        let param_ids = if self.is_kw("params") {
            self.bump();
            let p = self.idlist()?;
            self.expect(Tok::Semi, "`;`")?;
            p
        } else {
            Vec::new()
        };
        let mut seen: Vec<&str> = Vec::new();
        for (name, line, col) in var_ids.iter().chain(&param_ids) {
            if seen.contains(&name.as_str()) {
                return Err(FrontendError::Syntax { line: *line, col: *col, msg: format!("`{name}` declared twice") });
            }
            seen.push(name);
        }
        let vars = Ring::new(var_ids.iter().map(|t| t.0.clone()));
        let params = Ring::new(param_ids.iter().map(|t| t.0.clone()));

        self.expect_kw("init")?;
        let mut init: Vec<Option<Polynomial>> = vec![None; vars.nvars()];
        loop {
            let (name, line, col) = self.ident()?;
            let i = vars.index_of(&name).ok_or(FrontendError::UndeclaredVariable { line, col, name: name.clone() })?;
            self.expect(Tok::Assign, "`:=`")?;
            let value = self.expr(&params, Scope::Init)?;
            if init[i].replace(value).is_some() {
                return Err(FrontendError::Syntax { line, col, msg: format!("`{name}` initialised twice") });
            }
            if *self.peek() != Tok::Comma {
                break;
            }
            self.bump();
        }
        self.expect(Tok::Semi, "`;`")?;
        let init = init
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| FrontendError::MissingInit(vars.names()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let guard = if self.is_kw("guard") {
            self.bump();
            let g = self.condition(&vars)?;
            self.expect(Tok::Semi, "`;`")?;
            g
        } else {
            Condition::default()
        };
        self.expect_kw("loop")?;
        let body = self.stmts(&vars)?;
        self.expect_kw("end")?;
        if *self.peek() == Tok::Semi {
            self.bump();
        }
        if !self.at_eof() {
            return self.syntax(format!("unexpected {} after the loop", self.describe()));
        }
        Ok(LoopProgram { vars, params, init, guard, body })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Scope {
    Init,
    Body,
    Free,
}

impl Scope {
    fn label(self) -> &'static str {
        match self {
            Scope::Init => "parameter",
            Scope::Body => "program variable",
            Scope::Free => "ring variable",
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "vars" | "params" | "init" | "guard" | "loop" | "end" | "if" | "then" | "else" | "true")
}

/// `next` after `prev`, as one simultaneous assignment.
fn compose(ring: &Arc<Ring>, prev: &Assignment, next: &Assignment) -> Assignment {
    let mut images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
    for (&t, v) in prev.targets.iter().zip(&prev.values) {
        images[t] = v.clone();
    }
    let mut out = prev.clone();
    for (&t, v) in next.targets.iter().zip(&next.values) {
        let composed = v.substitute(ring, &images).expect("values live in the program ring");
        match out.targets.iter().position(|&x| x == t) {
            Some(k) => out.values[k] = composed,
            None => {
                out.targets.push(t);
                out.values.push(composed);
            }
        }
    }
    out
}
