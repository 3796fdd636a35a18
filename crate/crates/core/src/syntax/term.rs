use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// First-order term. The arithmetic constructors are interpreted only by
/// theory oracles; the kernel treats them as ordinary syntax.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(String),
    App {
        fun: String,
        args: Vec<Term>,
    },
    Int(#[serde(with = "bigint_string")] BigInt),
    Plus(Box<Term>, Box<Term>),
    ScalarMul {
        #[serde(with = "bigint_string")]
        coeff: BigInt,
        body: Box<Term>,
    },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(fun: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App {
            fun: fun.into(),
            args,
        }
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn int(value: impl Into<BigInt>) -> Term {
        Term::Int(value.into())
    }

    pub fn plus(left: Term, right: Term) -> Term {
        Term::Plus(Box::new(left), Box::new(right))
    }

    pub fn scalar(coeff: impl Into<BigInt>, body: Term) -> Term {
        Term::ScalarMul {
            coeff: coeff.into(),
            body: Box::new(body),
        }
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_free_vars(out)),
            Term::Int(_) => {}
            Term::Plus(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Term::ScalarMul { body, .. } => body.collect_free_vars(out),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::App { args, .. } => args.iter().any(|a| a.occurs(x)),
            Term::Int(_) => false,
            Term::Plus(a, b) => a.occurs(x) || b.occurs(x),
            Term::ScalarMul { body, .. } => body.occurs(x),
        }
    }

    /// `self[t/x]`. Terms carry no binders, so this is plain replacement.
    pub fn substitute(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::App { fun, args } => Term::App {
                fun: fun.clone(),
                args: args.iter().map(|a| a.substitute(x, t)).collect(),
            },
            Term::Plus(a, b) => Term::plus(a.substitute(x, t), b.substitute(x, t)),
            Term::ScalarMul { coeff, body } => Term::ScalarMul {
                coeff: coeff.clone(),
                body: Box::new(body.substitute(x, t)),
            },
        }
    }

    /// Nesting depth of applications; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) => 0,
            Term::App { args, .. } if args.is_empty() => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            Term::Plus(a, b) => 1 + a.depth().max(b.depth()),
            Term::ScalarMul { body, .. } => 1 + body.depth(),
        }
    }

    pub(crate) fn rename_vars(&self, f: &impl Fn(&str) -> Option<String>) -> Term {
        match self {
            Term::Var(y) => match f(y) {
                Some(z) => Term::Var(z),
                None => self.clone(),
            },
            Term::Int(_) => self.clone(),
            Term::App { fun, args } => Term::App {
                fun: fun.clone(),
                args: args.iter().map(|a| a.rename_vars(f)).collect(),
            },
            Term::Plus(a, b) => Term::plus(a.rename_vars(f), b.rename_vars(f)),
            Term::ScalarMul { coeff, body } => Term::ScalarMul {
                coeff: coeff.clone(),
                body: Box::new(body.rename_vars(f)),
            },
        }
    }

    pub(crate) fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Term::Var(y) => f(y),
            Term::Int(_) => {}
            Term::App { args, .. } => args.iter().for_each(|a| a.visit_names(f)),
            Term::Plus(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Term::ScalarMul { body, .. } => body.visit_names(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Plus(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App { fun, args } if args.is_empty() => write!(f, "{fun}"),
            Term::App { fun, args } => {
                write!(f, "{fun}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Term::Int(n) => write!(f, "{n}"),
            // `+` parses left-associatively
            Term::Plus(a, b) => {
                write!(f, "{a}+")?;
                b.fmt_factor(f)
            }
            Term::ScalarMul { coeff, body } => {
                write!(f, "{coeff}*")?;
                body.fmt_factor(f)
            }
        }
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
