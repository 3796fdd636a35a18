use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fresh;
use super::signature::{Polarity, Signature, SignatureError};
use super::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub negated: bool,
    pub pred: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal {
            negated: false,
            pred: pred.into(),
            args,
        }
    }

    pub fn negated_atom(pred: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal {
            negated: true,
            pred: pred.into(),
            args,
        }
    }

    pub fn negate(&self) -> Literal {
        Literal {
            negated: !self.negated,
            pred: self.pred.clone(),
            args: self.args.clone(),
        }
    }

    pub fn substitute(&self, x: &str, t: &Term) -> Literal {
        Literal {
            negated: self.negated,
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.substitute(x, t)).collect(),
        }
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|a| a.collect_free_vars(out));
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn occurs(&self, x: &str) -> bool {
        self.args.iter().any(|a| a.occurs(x))
    }

    fn rename_vars(&self, f: &impl Fn(&str) -> Option<String>) -> Literal {
        Literal {
            negated: self.negated,
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.rename_vars(f)).collect(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~")?;
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Polarized formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    #[serde(rename = "lit")]
    Lit(Literal),
    #[serde(rename = "and+")]
    AndP(Box<Formula>, Box<Formula>),
    #[serde(rename = "and-")]
    AndN(Box<Formula>, Box<Formula>),
    #[serde(rename = "or+")]
    OrP(Box<Formula>, Box<Formula>),
    #[serde(rename = "or-")]
    OrN(Box<Formula>, Box<Formula>),
    #[serde(rename = "exists")]
    Exists(String, Box<Formula>),
    #[serde(rename = "forall")]
    Forall(String, Box<Formula>),
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

impl Formula {
    pub fn and_p(a: Formula, b: Formula) -> Formula {
        Formula::AndP(Box::new(a), Box::new(b))
    }
    pub fn and_n(a: Formula, b: Formula) -> Formula {
        Formula::AndN(Box::new(a), Box::new(b))
    }
    pub fn or_p(a: Formula, b: Formula) -> Formula {
        Formula::OrP(Box::new(a), Box::new(b))
    }
    pub fn or_n(a: Formula, b: Formula) -> Formula {
        Formula::OrN(Box::new(a), Box::new(b))
    }
    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }
    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Lit(Literal::atom(pred, args))
    }
    pub fn neg_atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Lit(Literal::negated_atom(pred, args))
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Formula::Lit(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Lit(_))
    }

    pub fn polarity(&self, sig: &Signature) -> Result<Polarity, SignatureError> {
        Ok(match self {
            Formula::Lit(l) => sig.literal_polarity(l)?,
            Formula::AndP(..) | Formula::OrP(..) | Formula::Exists(..) => Polarity::Positive,
            Formula::AndN(..) | Formula::OrN(..) | Formula::Forall(..) => Polarity::Negative,
        })
    }

    pub fn is_positive(&self, sig: &Signature) -> Result<bool, SignatureError> {
        Ok(self.polarity(sig)? == Polarity::Positive)
    }

    pub fn is_negative(&self, sig: &Signature) -> Result<bool, SignatureError> {
        Ok(self.polarity(sig)? == Polarity::Negative)
    }

    /// De Morgan dual; flips every connective's polarity and every literal's sign.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(l.negate()),
            Formula::AndP(a, b) => Formula::or_n(a.negate(), b.negate()),
            Formula::AndN(a, b) => Formula::or_p(a.negate(), b.negate()),
            Formula::OrP(a, b) => Formula::and_n(a.negate(), b.negate()),
            Formula::OrN(a, b) => Formula::and_p(a.negate(), b.negate()),
            Formula::Exists(x, a) => Formula::forall(x.clone(), a.negate()),
            Formula::Forall(x, a) => Formula::exists(x.clone(), a.negate()),
        }
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Lit(l) => l.collect_free_vars(out),
            Formula::AndP(a, b) | Formula::AndN(a, b) | Formula::OrP(a, b) | Formula::OrN(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free_vars(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Lit(l) => l.occurs(x),
            Formula::AndP(a, b) | Formula::AndN(a, b) | Formula::OrP(a, b) | Formula::OrN(a, b) => {
                a.has_free(x) || b.has_free(x)
            }
            Formula::Exists(y, a) | Formula::Forall(y, a) => y != x && a.has_free(x),
        }
    }

    /// Capture-avoiding `self[t/x]`. Binders that would capture a variable of
    /// `t` are renamed to the first unused `stem'N`.
    pub fn substitute(&self, x: &str, t: &Term) -> Formula {
        if !self.has_free(x) {
            return self.clone();
        }
        match self {
            Formula::Lit(l) => Formula::Lit(l.substitute(x, t)),
            Formula::AndP(a, b) => Formula::and_p(a.substitute(x, t), b.substitute(x, t)),
            Formula::AndN(a, b) => Formula::and_n(a.substitute(x, t), b.substitute(x, t)),
            Formula::OrP(a, b) => Formula::or_p(a.substitute(x, t), b.substitute(x, t)),
            Formula::OrN(a, b) => Formula::or_n(a.substitute(x, t), b.substitute(x, t)),
            Formula::Exists(y, a) => {
                let (y, a) = Self::subst_binder(y, a, x, t);
                Formula::exists(y, a)
            }
            Formula::Forall(y, a) => {
                let (y, a) = Self::subst_binder(y, a, x, t);
                Formula::forall(y, a)
            }
        }
    }

    fn subst_binder(y: &str, body: &Formula, x: &str, t: &Term) -> (String, Formula) {
        if !t.occurs(y) {
            return (y.to_string(), body.substitute(x, t));
        }
        let t_fv = t.free_vars();
        let body_fv = body.free_vars();
        let y2 = fresh::fresh_avoiding(y, |n| n == x || t_fv.contains(n) || body_fv.contains(n));
        let renamed = body.substitute(y, &Term::Var(y2.clone()));
        (y2, renamed.substitute(x, t))
    }

    /// Bound variables renamed to `#k` by binder depth. Two formulae are
    /// alpha-equivalent iff their canonical forms are structurally equal; the
    /// derived `Ord` on canonical forms is the multiset order.
    pub fn canonical(&self) -> Formula {
        fn go(f: &Formula, depth: usize, env: &mut HashMap<String, Vec<String>>) -> Formula {
            let lookup = |env: &HashMap<String, Vec<String>>, y: &str| {
                env.get(y).and_then(|stack| stack.last().cloned())
            };
            match f {
                Formula::Lit(l) => Formula::Lit(l.rename_vars(&|y| lookup(env, y))),
                Formula::AndP(a, b) => Formula::and_p(go(a, depth, env), go(b, depth, env)),
                Formula::AndN(a, b) => Formula::and_n(go(a, depth, env), go(b, depth, env)),
                Formula::OrP(a, b) => Formula::or_p(go(a, depth, env), go(b, depth, env)),
                Formula::OrN(a, b) => Formula::or_n(go(a, depth, env), go(b, depth, env)),
                Formula::Exists(y, a) | Formula::Forall(y, a) => {
                    let name = format!("#{depth}");
                    env.entry(y.clone()).or_default().push(name.clone());
                    let body = go(a, depth + 1, env);
                    env.get_mut(y).expect("pushed above").pop();
                    if matches!(f, Formula::Exists(..)) {
                        Formula::exists(name, body)
                    } else {
                        Formula::forall(name, body)
                    }
                }
            }
        }
        go(self, 0, &mut HashMap::new())
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Number of connectives, quantifiers and literals.
    pub fn size(&self) -> usize {
        match self {
            Formula::Lit(_) => 1,
            Formula::AndP(a, b) | Formula::AndN(a, b) | Formula::OrP(a, b) | Formula::OrN(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.size(),
        }
    }

    pub fn predicates(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Lit(l) => {
                out.insert(l.pred.clone());
            }
            Formula::AndP(a, b) | Formula::AndN(a, b) | Formula::OrP(a, b) | Formula::OrN(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.predicates(out),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Lit(l) => l.args.iter().for_each(|a| a.visit_names(f)),
            Formula::AndP(a, b) | Formula::AndN(a, b) | Formula::OrP(a, b) | Formula::OrN(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Formula::Exists(y, a) | Formula::Forall(y, a) => {
                f(y);
                a.visit_names(f);
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::OrP(..) | Formula::OrN(..) => 1,
            Formula::AndP(..) | Formula::AndN(..) => 2,
            Formula::Lit(_) => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        let (a, op, b) = match self {
            Formula::Lit(l) => return write!(f, "{l}"),
            Formula::Exists(x, a) => {
                write!(f, "exists {x}. ")?;
                return a.fmt_at(f, 0);
            }
            Formula::Forall(x, a) => {
                write!(f, "forall {x}. ")?;
                return a.fmt_at(f, 0);
            }
            Formula::AndP(a, b) => (a, "/\\+", b),
            Formula::AndN(a, b) => (a, "/\\-", b),
            Formula::OrP(a, b) => (a, "\\/+", b),
            Formula::OrN(a, b) => (a, "\\/-", b),
        };
        // right-associative: the left operand binds strictly tighter
        let lvl = self.level();
        a.fmt_at(f, lvl + 1)?;
        write!(f, " {op} ")?;
        b.fmt_at(f, lvl.max(1))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Right-nested chain `f1 op (f2 op (... fn))`; `None` for an empty list.
pub fn chain(items: Vec<Formula>, op: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    items.into_iter().rev().reduce(|acc, f| op(f, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str) -> Formula {
        Formula::atom("p", vec![Term::var(x)])
    }

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("p", 1, Polarity::Positive)
            .with_predicate("q", 1, Polarity::Negative)
            .with_predicate("r", 2, Polarity::Positive)
    }

    #[test]
    fn polarity_follows_grammar() {
        let s = sig();
        assert_eq!(p("x").polarity(&s).unwrap(), Polarity::Positive);
        assert_eq!(
            Formula::neg_atom("p", vec![Term::var("x")]).polarity(&s).unwrap(),
            Polarity::Negative
        );
        assert_eq!(Formula::forall("x", p("x")).polarity(&s).unwrap(), Polarity::Negative);
        // negated atom of a negative predicate lies in 𝒫
        assert_eq!(
            Formula::neg_atom("q", vec![Term::var("x")]).polarity(&s).unwrap(),
            Polarity::Positive
        );
        assert!(matches!(
            Formula::atom("zz", vec![]).polarity(&s),
            Err(SignatureError::UndeclaredPredicate(_))
        ));
    }

    #[test]
    fn negation_table() {
        let pa = Formula::atom("p", vec![]);
        let qa = Formula::atom("q", vec![]);
        assert_eq!(
            Formula::and_p(pa.clone(), qa.clone()).negate(),
            Formula::or_n(pa.negate(), qa.negate())
        );
        // ¬∃x (p(x) ∨⁺ ¬q(x)) = ∀x (¬p(x) ∧⁻ q(x))
        let f = Formula::exists(
            "x",
            Formula::or_p(p("x"), Formula::neg_atom("q", vec![Term::var("x")])),
        );
        let expected = Formula::forall(
            "x",
            Formula::and_n(
                Formula::neg_atom("p", vec![Term::var("x")]),
                Formula::atom("q", vec![Term::var("x")]),
            ),
        );
        assert_eq!(f.negate(), expected);
    }

    #[test]
    fn substitution_examples() {
        // (p(x) ∨⁺ q(y))[y:=f(x)]
        let f = Formula::or_p(p("x"), Formula::atom("q", vec![Term::var("y")]));
        let fx = Term::app("f", vec![Term::var("x")]);
        assert_eq!(
            f.substitute("y", &fx),
            Formula::or_p(p("x"), Formula::atom("q", vec![fx.clone()]))
        );
        // bound occurrence untouched
        let g = Formula::forall("x", p("x"));
        assert_eq!(g.substitute("x", &Term::constant("c")), g);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (∀y r(x,y))[x:=g(y)] → ∀y' r(g(y), y')
        let f = Formula::forall("y", Formula::atom("r", vec![Term::var("x"), Term::var("y")]));
        let gy = Term::app("g", vec![Term::var("y")]);
        let out = f.substitute("x", &gy);
        // independent check: y is still free exactly once, and the binder is new
        assert_eq!(out.free_vars(), BTreeSet::from(["y".to_string()]));
        match &out {
            Formula::Forall(b, body) => {
                assert_ne!(b, "y");
                assert_eq!(
                    **body,
                    Formula::atom("r", vec![gy.clone(), Term::var(b.clone())])
                );
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::forall("x", Formula::atom("r", vec![Term::var("x"), Term::var("y")]));
        assert_eq!(f.free_vars(), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::forall("x", p("x"));
        let b = Formula::forall("z", p("z"));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&Formula::forall("z", p("x"))));
        // shadowing
        let c = Formula::forall("x", Formula::exists("x", p("x")));
        let d = Formula::forall("y", Formula::exists("z", p("z")));
        assert!(c.alpha_eq(&d));
    }

    #[test]
    fn display_round_shapes() {
        let f = Formula::forall(
            "x",
            Formula::or_n(p("x"), Formula::neg_atom("p", vec![Term::var("x")])),
        );
        assert_eq!(f.to_string(), "forall x. p(x) \\/- ~p(x)");
        let g = Formula::and_p(Formula::or_p(p("a"), p("b")), p("c"));
        assert_eq!(g.to_string(), "(p(a) \\/+ p(b)) /\\+ p(c)");
    }

    #[test]
    fn chain_is_right_nested() {
        let c = chain(vec![p("a"), p("b"), p("c")], Formula::and_p).unwrap();
        assert_eq!(c, Formula::and_p(p("a"), Formula::and_p(p("b"), p("c"))));
        assert!(chain(vec![], Formula::and_p).is_none());
    }
}
