//! Text syntax for problems and formulae.
//!
//! ```text
//! pred p 1 +          % predicate, arity, polarity
//! fun f 2             % function symbol
//! const c             % same as `fun c 0`
//! goal forall x. exists y. ~p(f(x+3,g(x))) \/- p(f(1+(2+y),g(y)))
//! ```
//!
//! Connectives are `/\+ /\- \/+ \/-`; an unsigned `/\` or `\/` is an `auto`
//! connective whose polarity is recomputed from its operands against the current
//! signature. Quantifiers bind weakest, then disjunctions, then conjunctions;
//! binary connectives associate to the right.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::formula::{Formula, Literal};
use super::signature::{Polarity, Signature};
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Plus,
    Minus,
    Auto,
}

/// Formula as written, before `auto` connectives are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface {
    Lit(Literal),
    And(Connective, Box<Surface>, Box<Surface>),
    Or(Connective, Box<Surface>, Box<Surface>),
    Exists(String, Box<Surface>),
    Forall(String, Box<Surface>),
}

impl Surface {
    /// Resolve against `sig`. An `auto` connective is positive iff both of its
    /// resolved operands are positive.
    pub fn resolve(&self, sig: &Signature) -> Result<Formula, super::SignatureError> {
        Ok(match self {
            Surface::Lit(l) => {
                sig.literal_polarity(l)?;
                Formula::Lit(l.clone())
            }
            Surface::And(c, a, b) | Surface::Or(c, a, b) => {
                let (a, b) = (a.resolve(sig)?, b.resolve(sig)?);
                let positive = match c {
                    Connective::Plus => true,
                    Connective::Minus => false,
                    Connective::Auto => a.is_positive(sig)? && b.is_positive(sig)?,
                };
                match (matches!(self, Surface::And(..)), positive) {
                    (true, true) => Formula::and_p(a, b),
                    (true, false) => Formula::and_n(a, b),
                    (false, true) => Formula::or_p(a, b),
                    (false, false) => Formula::or_n(a, b),
                }
            }
            Surface::Exists(x, a) => Formula::exists(x.clone(), a.resolve(sig)?),
            Surface::Forall(x, a) => Formula::forall(x.clone(), a.resolve(sig)?),
        })
    }

    pub fn from_formula(f: &Formula) -> Surface {
        let bin = |a: &Formula, b: &Formula| (Box::new(Surface::from_formula(a)), Box::new(Surface::from_formula(b)));
        match f {
            Formula::Lit(l) => Surface::Lit(l.clone()),
            Formula::AndP(a, b) => {
                let (a, b) = bin(a, b);
                Surface::And(Connective::Plus, a, b)
            }
            Formula::AndN(a, b) => {
                let (a, b) = bin(a, b);
                Surface::And(Connective::Minus, a, b)
            }
            Formula::OrP(a, b) => {
                let (a, b) = bin(a, b);
                Surface::Or(Connective::Plus, a, b)
            }
            Formula::OrN(a, b) => {
                let (a, b) = bin(a, b);
                Surface::Or(Connective::Minus, a, b)
            }
            Formula::Exists(x, a) => Surface::Exists(x.clone(), Box::new(Surface::from_formula(a))),
            Formula::Forall(x, a) => Surface::Forall(x.clone(), Box::new(Surface::from_formula(a))),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Surface::Exists(..) | Surface::Forall(..) => 0,
            Surface::Or(..) => 1,
            Surface::And(..) => 2,
            Surface::Lit(_) => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        let sign = |c: &Connective| match c {
            Connective::Plus => "+",
            Connective::Minus => "-",
            Connective::Auto => "",
        };
        let (a, op, c, b) = match self {
            Surface::Lit(l) => return write!(f, "{l}"),
            Surface::Exists(x, a) => {
                write!(f, "exists {x}. ")?;
                return a.fmt_at(f, 0);
            }
            Surface::Forall(x, a) => {
                write!(f, "forall {x}. ")?;
                return a.fmt_at(f, 0);
            }
            Surface::And(c, a, b) => (a, "/\\", c, b),
            Surface::Or(c, a, b) => (a, "\\/", c, b),
        };
        let lvl = self.level();
        a.fmt_at(f, lvl + 1)?;
        write!(f, " {op}{} ", sign(c))?;
        b.fmt_at(f, lvl.max(1))
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// A parsed problem: declarations plus a closed goal formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub signature: Signature,
    pub goal: Surface,
}

impl ProblemFile {
    pub fn goal_formula(&self) -> Result<Formula, super::SignatureError> {
        self.goal.resolve(&self.signature)
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, decl) in self.signature.predicates() {
            writeln!(f, "pred {name} {} {}", decl.arity, decl.polarity)?;
        }
        for (name, arity) in self.signature.functions() {
            writeln!(f, "fun {name} {arity}")?;
        }
        writeln!(f, "goal {}", self.goal)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Plus,
    Minus,
    Star,
    And(Connective),
    Or(Connective),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::And(_) => write!(f, "conjunction"),
            Tok::Or(_) => write!(f, "disjunction"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '%' | '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '(' => {
                advance(1, &mut i, &mut col);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut i, &mut col);
                Tok::RParen
            }
            ',' => {
                advance(1, &mut i, &mut col);
                Tok::Comma
            }
            '.' => {
                advance(1, &mut i, &mut col);
                Tok::Dot
            }
            '~' => {
                advance(1, &mut i, &mut col);
                Tok::Tilde
            }
            '+' => {
                advance(1, &mut i, &mut col);
                Tok::Plus
            }
            '*' => {
                advance(1, &mut i, &mut col);
                Tok::Star
            }
            '/' | '\\' => {
                let other = if c == '/' { '\\' } else { '/' };
                if chars.get(i + 1) != Some(&other) {
                    return Err(err(tl, tc, format!("unexpected character `{c}`")));
                }
                let conn = match chars.get(i + 2) {
                    Some('+') => Connective::Plus,
                    Some('-') => Connective::Minus,
                    _ => Connective::Auto,
                };
                let len = if conn == Connective::Auto { 2 } else { 3 };
                advance(len, &mut i, &mut col);
                if c == '/' {
                    Tok::And(conn)
                } else {
                    Tok::Or(conn)
                }
            }
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    if !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                        advance(1, &mut i, &mut col);
                        out.push(Spanned {
                            tok: Tok::Minus,
                            line: tl,
                            col: tc,
                        });
                        continue;
                    }
                    advance(1, &mut i, &mut col);
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(1, &mut i, &mut col);
                }
                let text: String = chars[start..i].iter().collect();
                Tok::Int(text.parse().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    advance(1, &mut i, &mut col);
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["pred", "fun", "const", "goal", "forall", "exists"];

struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'s mut Signature,
    bound: Vec<String>,
    allow_free: bool,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error_here(format!("expected identifier, found {other}"))),
        }
    }

    fn count(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v: usize = n
                    .try_into()
                    .map_err(|_| self.error_here("expected a non-negative count"))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.error_here(format!("expected a number, found {other}"))),
        }
    }

    fn problem(&mut self) -> Result<Surface, ParseError> {
        loop {
            let kw = match self.peek() {
                Tok::Ident(s) => s.clone(),
                Tok::Eof => return Err(self.error_here("missing `goal`")),
                other => return Err(self.error_here(format!("expected a declaration, found {other}"))),
            };
            let at = self.pos;
            self.bump();
            let declared = match kw.as_str() {
                "pred" => {
                    let name = self.ident()?;
                    let arity = self.count()?;
                    let pol = match self.bump() {
                        Tok::Plus => Polarity::Positive,
                        Tok::Minus => Polarity::Negative,
                        other => {
                            self.pos -= 1;
                            return Err(self.error_here(format!("expected `+` or `-`, found {other}")));
                        }
                    };
                    self.sig.declare_predicate(name, arity, pol)
                }
                "fun" => {
                    let name = self.ident()?;
                    let arity = self.count()?;
                    self.sig.declare_function(name, arity)
                }
                "const" => {
                    let name = self.ident()?;
                    self.sig.declare_function(name, 0)
                }
                "goal" => {
                    let goal = self.formula()?;
                    if *self.peek() != Tok::Eof {
                        return Err(self.error_here(format!("unexpected {} after goal", self.peek())));
                    }
                    return Ok(goal);
                }
                other => {
                    self.pos = at;
                    return Err(self.error_here(format!("unknown declaration `{other}`")));
                }
            };
            declared.map_err(|e| {
                let t = &self.toks[at + 1];
                ParseError {
                    line: t.line,
                    col: t.col,
                    message: e.to_string(),
                }
            })?;
        }
    }

    fn formula(&mut self) -> Result<Surface, ParseError> {
        match self.peek() {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quantifier(),
            _ => self.disjunction(),
        }
    }

    fn quantifier(&mut self) -> Result<Surface, ParseError> {
        let is_forall = matches!(self.bump(), Tok::Ident(k) if k == "forall");
        let x = self.ident()?;
        self.expect(Tok::Dot)?;
        self.bound.push(x.clone());
        let body = self.formula();
        self.bound.pop();
        let body = Box::new(body?);
        Ok(if is_forall {
            Surface::Forall(x, body)
        } else {
            Surface::Exists(x, body)
        })
    }

    fn disjunction(&mut self) -> Result<Surface, ParseError> {
        let left = self.conjunction()?;
        if let Tok::Or(c) = *self.peek() {
            self.bump();
            let right = self.disjunction_or_quant()?;
            return Ok(Surface::Or(c, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disjunction_or_quant(&mut self) -> Result<Surface, ParseError> {
        match self.peek() {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quantifier(),
            _ => self.disjunction(),
        }
    }

    fn conjunction(&mut self) -> Result<Surface, ParseError> {
        let left = self.unary()?;
        if let Tok::And(c) = *self.peek() {
            self.bump();
            let right = match self.peek() {
                Tok::Ident(k) if k == "forall" || k == "exists" => self.quantifier()?,
                _ => self.conjunction()?,
            };
            return Ok(Surface::And(c, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Surface, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quantifier(),
            Tok::Tilde => {
                self.bump();
                match self.peek() {
                    Tok::Ident(k) if !KEYWORDS.contains(&k.as_str()) => {
                        let mut lit = self.atom()?;
                        lit.negated = true;
                        Ok(Surface::Lit(lit))
                    }
                    _ => Err(self.error_here("negation applies only to atoms")),
                }
            }
            Tok::Ident(_) => Ok(Surface::Lit(self.atom()?)),
            other => Err(self.error_here(format!("expected a formula, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Literal, ParseError> {
        let at = self.pos;
        let name = self.ident()?;
        let args = if *self.peek() == Tok::LParen {
            self.args()?
        } else {
            Vec::new()
        };
        let here = |p: &Self, message: String| {
            let t = &p.toks[at];
            ParseError {
                line: t.line,
                col: t.col,
                message,
            }
        };
        match self.sig.predicate(&name) {
            None => Err(here(self, format!("undeclared predicate `{name}`"))),
            Some(d) if d.arity != args.len() => Err(here(
                self,
                format!("`{name}` expects {} argument(s), got {}", d.arity, args.len()),
            )),
            Some(_) => Ok(Literal::atom(name, args)),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                other => {
                    self.pos -= 1;
                    return Err(self.error_here(format!("expected `,` or `)`, found {other}")));
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.summand()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.summand()?;
            t = Term::plus(t, rhs);
        }
        Ok(t)
    }

    fn summand(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    let body = self.summand()?;
                    return Ok(Term::scalar(n, body));
                }
                Ok(Term::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(_) => {
                let at = self.pos;
                let name = self.ident()?;
                let here = |p: &Self, message: String| {
                    let t = &p.toks[at];
                    ParseError {
                        line: t.line,
                        col: t.col,
                        message,
                    }
                };
                if *self.peek() == Tok::LParen {
                    let args = self.args()?;
                    return match self.sig.function_arity(&name) {
                        Some(a) if a == args.len() => Ok(Term::app(name, args)),
                        Some(a) => Err(here(
                            self,
                            format!("`{name}` expects {a} argument(s), got {}", args.len()),
                        )),
                        None => Err(here(self, format!("undeclared function `{name}`"))),
                    };
                }
                if self.bound.contains(&name) {
                    return Ok(Term::Var(name));
                }
                match self.sig.function_arity(&name) {
                    Some(0) => Ok(Term::constant(name)),
                    Some(a) => Err(here(self, format!("`{name}` expects {a} argument(s), got 0"))),
                    None if self.allow_free => Ok(Term::Var(name)),
                    None => Err(here(self, format!("free variable `{name}` in goal"))),
                }
            }
            other => Err(self.error_here(format!("expected a term, found {other}"))),
        }
    }
}

/// Parse a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut sig = Signature::new();
    let goal = {
        let mut p = Parser {
            toks: lex(text)?,
            pos: 0,
            sig: &mut sig,
            bound: Vec::new(),
            allow_free: false,
        };
        p.problem()?
    };
    Ok(ProblemFile {
        signature: sig,
        goal,
    })
}

fn parse_surface_with(text: &str, sig: &Signature, allow_free: bool) -> Result<Surface, ParseError> {
    let mut sig = sig.clone();
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig: &mut sig,
        bound: Vec::new(),
        allow_free,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", p.peek())));
    }
    Ok(f)
}

/// Parse a formula over `sig`; unbound identifiers that are not constants are
/// read as free variables.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let s = parse_surface_with(text, sig, true)?;
    s.resolve(sig).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })
}

/// Parse a closed formula, rejecting free variables.
pub fn parse_closed_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let s = parse_surface_with(text, sig, false)?;
    s.resolve(sig).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut sig = sig.clone();
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig: &mut sig,
        bound: Vec::new(),
        allow_free: true,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", p.peek())));
    }
    Ok(t)
}

/// Names of the predicates used by a surface formula.
pub fn surface_predicates(s: &Surface, out: &mut BTreeSet<String>) {
    match s {
        Surface::Lit(l) => {
            out.insert(l.pred.clone());
        }
        Surface::And(_, a, b) | Surface::Or(_, a, b) => {
            surface_predicates(a, out);
            surface_predicates(b, out);
        }
        Surface::Exists(_, a) | Surface::Forall(_, a) => surface_predicates(a, out),
    }
}
