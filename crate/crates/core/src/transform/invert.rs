//! Invertibility of the asynchronous rules.

use super::{pre, Result, Transformer};
use crate::kernel::{Proof, Rule};
use crate::syntax::{fresh, Formula, Term};

#[derive(Clone, Debug)]
pub enum Inverted {
    One(Proof),
    Two(Proof, Proof),
}

impl Inverted {
    pub fn one(self) -> Result<Proof> {
        match self {
            Inverted::One(p) => Ok(p),
            Inverted::Two(..) => Err(pre("invert", "expected a single premiss")),
        }
    }

    pub fn two(self) -> Result<(Proof, Proof)> {
        match self {
            Inverted::Two(a, b) => Ok((a, b)),
            Inverted::One(_) => Err(pre("invert", "expected two premisses")),
        }
    }

    pub fn into_vec(self) -> Vec<Proof> {
        match self {
            Inverted::One(p) => vec![p],
            Inverted::Two(a, b) => vec![a, b],
        }
    }
}

/// What inverting a given formula produces.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    AndN,
    OrN,
    Forall,
    Store,
}

fn shape_of(a: &Formula, positive: bool) -> Shape {
    match a {
        Formula::AndN(..) => Shape::AndN,
        Formula::OrN(..) => Shape::OrN,
        Formula::Forall(..) => Shape::Forall,
        _ => {
            debug_assert!(positive || a.is_literal());
            Shape::Store
        }
    }
}

fn introduces(rule: &Rule, shape: Shape) -> bool {
    matches!(
        (rule, shape),
        (Rule::AndMinus { .. }, Shape::AndN)
            | (Rule::OrMinus { .. }, Shape::OrN)
            | (Rule::ForallIntro { .. }, Shape::Forall)
            | (Rule::Store { .. }, Shape::Store)
    )
}

impl Transformer<'_> {
    /// Invert the asynchronous rule for the formula at position `at` of the
    /// root's Δ. A universal gets a fresh eigenvariable.
    pub fn invert(&mut self, pf: &Proof, at: usize) -> Result<Inverted> {
        self.invert_with(pf, at, None)
    }

    /// As [`Transformer::invert`], naming the eigenvariable of a universal.
    pub fn invert_with(&mut self, pf: &Proof, at: usize, eigen: Option<&str>) -> Result<Inverted> {
        let delta = pf
            .conclusion
            .delta()
            .ok_or_else(|| pre("invert", "the proof concludes a focused sequent"))?;
        let a = delta
            .get(at)
            .ok_or_else(|| pre("invert", format!("position {at} out of range (|Δ| = {})", delta.len())))?
            .clone();
        let shape = shape_of(&a, self.positive(&a)?);
        let y = match (&a, eigen) {
            (Formula::Forall(x, _), None) => fresh::fresh(x),
            (_, Some(y)) => y.to_string(),
            _ => String::new(),
        };
        let mut out = self.nested(|t| t.invert_rec(pf, &a, shape, &y))?;
        Ok(if out.len() == 2 {
            let b = out.pop().expect("two");
            Inverted::Two(out.pop().expect("two"), b)
        } else {
            Inverted::One(out.pop().expect("one"))
        })
    }

    /// Invert the first occurrence of `a` in the root's Δ.
    pub fn invert_formula(&mut self, pf: &Proof, a: &Formula, eigen: Option<&str>) -> Result<Inverted> {
        let at = pf
            .conclusion
            .delta()
            .and_then(|d| d.position(a))
            .ok_or_else(|| pre("invert", format!("`{a}` is not on the right of `{}`", pf.conclusion)))?;
        self.invert_with(pf, at, eigen)
    }

    fn invert_rec(&mut self, pf: &Proof, a: &Formula, shape: Shape, y: &str) -> Result<Vec<Proof>> {
        let principal = match &pf.rule {
            Rule::AndMinus { principal }
            | Rule::OrMinus { principal }
            | Rule::ForallIntro { principal, .. }
            | Rule::Store { principal } => *principal,
            other => {
                return Err(pre(
                    "invert",
                    format!("cannot pass a {} node with `{a}` still on the right", other.name()),
                ))
            }
        };
        let delta = pf.conclusion.delta().expect("asynchronous nodes are unfocused");
        let d = delta.get(principal).expect("checked proof").clone();

        if d.alpha_eq(a) && introduces(&pf.rule, shape) {
            return match &pf.rule {
                Rule::ForallIntro { eigen, .. } if eigen != y => {
                    Ok(vec![self.instantiate(&pf.premisses[0], eigen, &Term::var(y))?])
                }
                _ => Ok(pf.premisses.clone()),
            };
        }

        // Commute: invert every premiss, then reapply the rule.
        let mut per_premiss = Vec::new();
        for q in &pf.premisses {
            per_premiss.push(self.invert_rec(q, a, shape, y)?);
        }
        let width = per_premiss[0].len();
        let mut out = Vec::with_capacity(width);
        for k in 0..width {
            let mut prems = per_premiss.iter().map(|v| v[k].clone());
            let mut next = || prems.next().expect("same width");
            out.push(match &pf.rule {
                Rule::AndMinus { .. } => Proof::and_minus(d.clone(), next(), next())?,
                Rule::OrMinus { .. } => Proof::or_minus(d.clone(), next())?,
                Rule::ForallIntro { eigen, .. } => Proof::forall_intro(d.clone(), eigen.clone(), next())?,
                Rule::Store { .. } => Proof::store(d.clone(), next())?,
                _ => unreachable!(),
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Multiset, Sequent};
    use crate::oracle::SyntacticOracle;
    use crate::syntax::{Polarity, Signature};
    use crate::transform::testing::{prove_seq, prove_src};

    fn p() -> Formula {
        Formula::atom("p", vec![])
    }

    #[test]
    fn invert_excluded_middle_strips_or() {
        let (pf, sig) = prove_src("pred p 0 +\ngoal p \\/- ~p");
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let inv = t.invert(&pf, 0).unwrap().one().unwrap();
        let expected = Sequent::unfocused(Multiset::new(), [p(), p().negate()].into_iter().collect());
        assert_eq!(inv.conclusion, expected);
        assert!(check(&inv, &sig, &SyntacticOracle).ok());
    }

    #[test]
    fn invert_and_round_trip() {
        let sig = Signature::new()
            .with_predicate("p", 0, Polarity::Positive)
            .with_predicate("q", 0, Polarity::Positive);
        let q = Formula::atom("q", vec![]);
        // ⊢ (p ∨⁻ ¬p) ∧⁻ (q ∨⁻ ¬q), plus an extra formula stored first
        let goal = Formula::and_n(Formula::or_n(p(), p().negate()), Formula::or_n(q.clone(), q.negate()));
        let pf = prove_seq(vec![], vec![goal.clone(), p()], &sig);
        let at = pf.conclusion.delta().unwrap().position(&goal).unwrap();
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let (l, r) = t.invert(&pf, at).unwrap().two().unwrap();
        for half in [&l, &r] {
            assert!(check(half, &sig, &SyntacticOracle).ok());
        }
        let again = Proof::and_minus(goal, l, r).unwrap();
        assert_eq!(again.conclusion, pf.conclusion);
    }

    #[test]
    fn invert_store_through_deep_proof() {
        let sig = Signature::new()
            .with_predicate("p", 0, Polarity::Positive)
            .with_predicate("q", 0, Polarity::Positive);
        let q = Formula::atom("q", vec![]);
        let pf = prove_seq(vec![], vec![Formula::or_n(q.clone(), q.negate()), p()], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let inv = t.invert_formula(&pf, &p(), None).unwrap().one().unwrap();
        let expected = Sequent::unfocused(
            Multiset::new().with(p().negate()),
            Multiset::new().with(Formula::or_n(q.clone(), q.negate())),
        );
        assert_eq!(inv.conclusion, expected);
        assert!(check(&inv, &sig, &SyntacticOracle).ok());
    }

    #[test]
    fn invert_forall_uses_requested_eigenvariable() {
        let (pf, sig) = prove_src("pred r 1 +\ngoal forall x. r(x) \\/- ~r(x)");
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let inv = t.invert_with(&pf, 0, Some("z")).unwrap().one().unwrap();
        let rz = Formula::atom("r", vec![Term::var("z")]);
        let expected = Sequent::unfocused(Multiset::new(), Multiset::new().with(Formula::or_n(rz.clone(), rz.negate())));
        assert_eq!(inv.conclusion, expected);
        assert!(check(&inv, &sig, &SyntacticOracle).ok());
    }

    #[test]
    fn invert_rejects_focused_and_out_of_range() {
        let (pf, sig) = prove_src("pred p 0 +\ngoal p \\/- ~p");
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        assert!(t.invert(&pf, 3).is_err());
        let leaf = Proof::init(Multiset::new().with(p()), crate::syntax::Literal::atom("p", vec![]));
        assert!(t.invert(&leaf, 0).is_err());
    }
}
