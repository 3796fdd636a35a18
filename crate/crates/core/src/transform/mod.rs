//! Admissible rules and cut elimination as proof-to-proof functions.
//!
//! Each transformer follows the inductive construction behind the
//! corresponding admissibility result, rule by rule. Theory leaves are rebuilt
//! from their new contexts and the oracle is asked again; the oracle axioms
//! are what make those calls succeed.

mod cut;
mod derived;
mod invert;
mod structural;

use thiserror::Error;

use crate::kernel::{check_with, BuildError, CheckOptions, Multiset, NodePath, Proof, Rule, Sequent};
use crate::oracle::{LiteralSet, TheoryOracle};
use crate::syntax::{Formula, Literal, Signature, Term};

pub use invert::Inverted;

/// Nesting of transformer calls beyond which a reduction is assumed to loop.
const RECURSION_LIMIT: usize = 100_000;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("{op}: {reason}")]
    Precondition { op: &'static str, reason: String },
    #[error("{op}: oracle `{oracle}` does not report UNSAT on {{{set}}}")]
    Oracle {
        op: &'static str,
        oracle: String,
        set: String,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("transformer recursion exceeded {RECURSION_LIMIT} nested calls")]
    RecursionLimit,
    #[error("at {path}: {source}")]
    At {
        path: NodePath,
        #[source]
        source: Box<TransformError>,
    },
}

pub type Result<T> = std::result::Result<T, TransformError>;

fn pre(op: &'static str, reason: impl Into<String>) -> TransformError {
    TransformError::Precondition {
        op,
        reason: reason.into(),
    }
}

/// Result of [`eliminate`].
#[derive(Debug)]
pub struct Elimination {
    pub proof: Proof,
    pub trace: Vec<String>,
    /// Deepest nesting of transformer calls reached.
    pub max_depth: usize,
}

/// Carries the signature, the oracle and the reduction trace.
pub struct Transformer<'a> {
    sig: &'a Signature,
    oracle: &'a dyn TheoryOracle,
    trace: Vec<String>,
    at: NodePath,
    depth: usize,
    max_depth: usize,
}

impl<'a> Transformer<'a> {
    pub fn new(sig: &'a Signature, oracle: &'a dyn TheoryOracle) -> Self {
        Transformer {
            sig,
            oracle,
            trace: Vec::new(),
            at: NodePath::root(),
            depth: 0,
            max_depth: 0,
        }
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    fn log(&mut self, before: &str, after: &str) {
        self.trace.push(format!("{} {before} → {after}", self.at));
    }

    /// Run `f` one level deeper, guarding against runaway recursion.
    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        let out = if self.depth > RECURSION_LIMIT {
            Err(TransformError::RecursionLimit)
        } else {
            f(self)
        };
        self.depth -= 1;
        out
    }

    fn positive(&self, f: &Formula) -> Result<bool> {
        f.is_positive(self.sig).map_err(|e| pre("polarity", e.to_string()))
    }

    fn ask(&self, op: &'static str, set: LiteralSet) -> Result<()> {
        if self.oracle.entails_unsat(&set) {
            Ok(())
        } else {
            let shown: Vec<String> = set.iter().map(ToString::to_string).collect();
            Err(TransformError::Oracle {
                op,
                oracle: self.oracle.name().to_string(),
                set: shown.join(", "),
            })
        }
    }

    /// `TheoryClose` on `gamma`, after asking the oracle.
    fn close(&self, op: &'static str, gamma: Multiset) -> Result<Proof> {
        self.ask(op, gamma.atom_set())?;
        Ok(Proof::theory_close(gamma))
    }

    /// `TheoryInitPos` on `p`, after asking the oracle.
    fn theory_init(&self, op: &'static str, gamma: Multiset, p: Literal) -> Result<Proof> {
        let mut s = gamma.atom_set();
        s.insert(p.negate());
        self.ask(op, s)?;
        Ok(Proof::theory_init(gamma, p))
    }

    /// Rebuild a node over rewritten premisses. Leaves take the conclusion
    /// given by `rw`; inner nodes derive theirs from the premisses.
    fn rebuild(
        &self,
        op: &'static str,
        rule: &Rule,
        conclusion: &Sequent,
        prems: Vec<Proof>,
        rw: &dyn Rewrite,
    ) -> Result<Proof> {
        let mut prems = prems.into_iter();
        let mut next = || prems.next().ok_or_else(|| pre(op, "missing premiss"));
        let principal = |i: &usize| -> Result<Formula> {
            let d = conclusion.delta().ok_or_else(|| pre(op, "expected an unfocused conclusion"))?;
            d.get(*i).map(|f| rw.formula(f)).ok_or_else(|| pre(op, "principal out of range"))
        };
        let focus = || -> Result<Formula> {
            conclusion
                .focus()
                .map(|f| rw.formula(f))
                .ok_or_else(|| pre(op, "expected a focused conclusion"))
        };
        let lit = |l: &Literal| -> Literal {
            rw.formula(&Formula::Lit(l.clone()))
                .as_literal()
                .cloned()
                .expect("rewrites keep literals literal")
        };
        Ok(match rule {
            Rule::AndPlus {} => Proof::and_plus(next()?, next()?)?,
            Rule::OrPlusLeft {} => Proof::or_plus(focus()?, 0, next()?)?,
            Rule::OrPlusRight {} => Proof::or_plus(focus()?, 1, next()?)?,
            Rule::ExistsIntro { witness } => Proof::exists_intro(focus()?, rw.term(witness), next()?)?,
            Rule::InitPos {} | Rule::TheoryInitPos { .. } => {
                let s = rw.leaf(conclusion);
                let p = s.focus().and_then(Formula::as_literal).cloned().ok_or_else(|| pre(op, "bad leaf"))?;
                let gamma = s.gamma().clone();
                if matches!(rule, Rule::InitPos {}) {
                    Proof::init(gamma, p)
                } else {
                    self.theory_init(op, gamma, p)?
                }
            }
            Rule::TheoryClose { .. } => self.close(op, rw.leaf(conclusion).gamma().clone())?,
            Rule::Release {} => Proof::release(next()?)?,
            Rule::AndMinus { principal: i } => Proof::and_minus(principal(i)?, next()?, next()?)?,
            Rule::OrMinus { principal: i } => Proof::or_minus(principal(i)?, next()?)?,
            Rule::ForallIntro { principal: i, eigen } => Proof::forall_intro(principal(i)?, eigen.clone(), next()?)?,
            Rule::Store { principal: i } => Proof::store(principal(i)?, next()?)?,
            Rule::Focus { selected } => Proof::focus(rw.formula(selected), next()?)?,
            Rule::Cut1 { lit: l, .. } | Rule::Cut2 { lit: l, .. } => Proof::cut1(lit(l), next()?)?,
            Rule::Cut3 {} => Proof::cut3(next()?, next()?)?,
            Rule::Cut4 {} | Rule::Cut5 {} => Proof::cut4(next()?, next()?)?,
            Rule::Cut6 { formula } => Proof::cut6(rw.formula(formula), next()?, next()?)?,
            Rule::Cut7 { formula } => Proof::cut7(rw.formula(formula), next()?, next()?)?,
            Rule::Cut8 { lit: l } => Proof::cut8(lit(l), next()?, next()?)?,
            Rule::Cut9 { lits } => Proof::cut9(lits.iter().map(lit).collect(), next()?, next()?)?,
        })
    }

    /// Replace every cut node, innermost first. The input must check as an
    /// extended proof; the output has the same conclusion and no cuts.
    pub fn eliminate(&mut self, e: &Proof) -> Result<Proof> {
        let report = check_with(e, self.sig, self.oracle, CheckOptions { allow_cuts: true });
        if let Some(f) = report.failures.first() {
            return Err(TransformError::At {
                path: f.path.clone(),
                source: Box::new(pre("eliminate", format!("{}: {}", f.rule, f.reason))),
            });
        }
        e.reserve_names();
        self.eliminate_at(e, NodePath::root())
    }

    fn eliminate_at(&mut self, e: &Proof, path: NodePath) -> Result<Proof> {
        let prems = e
            .premisses
            .iter()
            .enumerate()
            .map(|(i, q)| self.eliminate_at(q, path.child(i)))
            .collect::<Result<Vec<_>>>()?;
        if !e.rule.is_cut() {
            return Ok(Proof::new(e.rule.clone(), e.conclusion.clone(), prems));
        }
        self.at = path.clone();
        // arities were validated by the checker
        let (l, r) = (&prems[0], prems.last().expect("cut nodes have premisses"));
        let out = match &e.rule {
            Rule::Cut1 { lit, .. } | Rule::Cut2 { lit, .. } => self.cut1(lit, l),
            Rule::Cut3 {} => self.cut3(l, r),
            Rule::Cut4 {} | Rule::Cut5 {} => self.cut4(l, r),
            Rule::Cut6 { formula } => self.cut6(formula, l, r),
            Rule::Cut7 { formula } => self.cut7(formula, l, r),
            Rule::Cut8 { lit } => self.cut8(lit, l, r),
            Rule::Cut9 { lits } => self.cut9(lits, l, r),
            _ => unreachable!("only cut rules reach here"),
        };
        let out = out.map_err(|err| TransformError::At {
            path: path.clone(),
            source: Box::new(err),
        })?;
        if out.conclusion != e.conclusion {
            return Err(TransformError::At {
                path,
                source: Box::new(pre(
                    e.rule.name(),
                    format!("reduction concluded `{}` instead of `{}`", out.conclusion, e.conclusion),
                )),
            });
        }
        self.log(e.rule.name(), out.rule.name());
        Ok(out)
    }
}

/// Uniform action of a structural transformation on the data in a node.
trait Rewrite {
    fn formula(&self, f: &Formula) -> Formula;
    fn term(&self, t: &Term) -> Term;
    /// The new conclusion of a leaf.
    fn leaf(&self, s: &Sequent) -> Sequent;
}

/// Leaves formulas alone and changes only Γ at the leaves.
struct Contexts<F: Fn(&Multiset) -> Multiset>(F);

impl<F: Fn(&Multiset) -> Multiset> Rewrite for Contexts<F> {
    fn formula(&self, f: &Formula) -> Formula {
        f.clone()
    }
    fn term(&self, t: &Term) -> Term {
        t.clone()
    }
    fn leaf(&self, s: &Sequent) -> Sequent {
        s.with_gamma((self.0)(s.gamma()))
    }
}

fn identity() -> Contexts<impl Fn(&Multiset) -> Multiset> {
    Contexts(Multiset::clone)
}

/// Eliminate every cut of `e`.
pub fn eliminate(e: &Proof, sig: &Signature, oracle: &dyn TheoryOracle) -> Result<Elimination> {
    let mut t = Transformer::new(sig, oracle);
    let proof = t.eliminate(e)?;
    Ok(Elimination {
        proof,
        trace: t.trace,
        max_depth: t.max_depth,
    })
}
