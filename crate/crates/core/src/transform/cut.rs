//! cut1 to cut5.

use super::{identity, pre, Result, Transformer};
use crate::kernel::{Multiset, Proof, Rule};
#[cfg(test)]
use crate::kernel::Sequent;
use crate::syntax::{fresh, Formula, Literal};

fn focus_literal(pf: &Proof) -> Result<Literal> {
    pf.conclusion
        .focus()
        .and_then(Formula::as_literal)
        .cloned()
        .ok_or_else(|| pre("cut", "initial rule without a literal focus"))
}

fn single_right(pf: &Proof, op: &'static str) -> Result<Formula> {
    match pf.conclusion.delta() {
        Some(d) if d.len() == 1 => Ok(d.get(0).expect("one").clone()),
        _ => Err(pre(op, format!("left premiss `{}` must have one formula on the right", pf.conclusion))),
    }
}

impl Transformer<'_> {
    /// cut1 (unfocused `right`) or cut2 (focused `right`): from
    /// `⊨ atm(Γ), ¬p` and a proof of `Γ, p ⊢ Δ`, a proof of `Γ ⊢ Δ`.
    pub fn cut1(&mut self, p: &Literal, right: &Proof) -> Result<Proof> {
        let op = if right.conclusion.is_focused() { "cut2" } else { "cut1" };
        let lp = Formula::Lit(p.clone());
        if !self.positive(&lp)? {
            return Err(pre(op, format!("`{p}` is not a positive literal")));
        }
        let gamma = right
            .gamma()
            .without(&lp)
            .ok_or_else(|| pre(op, format!("`{p}` is not in the right premiss's context")))?;
        let mut fact = gamma.atom_set();
        fact.insert(p.negate());
        self.ask(op, fact)?;
        self.nested(|t| t.cut1_rec(&lp, right))
    }

    fn cut1_rec(&mut self, lp: &Formula, right: &Proof) -> Result<Proof> {
        let op = if right.conclusion.is_focused() { "cut2" } else { "cut1" };
        let gamma = right.gamma().without(lp).expect("contexts only grow upwards");
        match &right.rule {
            Rule::TheoryClose { .. } => {
                // consistency merges ⊨ atm(Γ), p with ⊨ atm(Γ), ¬p
                self.log(op, "TheoryClose");
                self.close(op, gamma)
            }
            Rule::InitPos {} => {
                let q = focus_literal(right)?;
                if gamma.contains(&Formula::Lit(q.clone())) {
                    Ok(Proof::init(gamma, q))
                } else {
                    self.log(op, "TheoryInitPos");
                    self.theory_init(op, gamma, q)
                }
            }
            Rule::TheoryInitPos { .. } => {
                let q = focus_literal(right)?;
                self.theory_init(op, gamma, q)
            }
            r if r.is_cut() => Err(pre(op, format!("right premiss contains {}", r.name()))),
            rule => {
                if let Rule::Focus { .. } = rule {
                    self.log("cut1", "cut2");
                }
                let prems = right
                    .premisses
                    .iter()
                    .map(|q| self.nested(|t| t.cut1_rec(lp, q)))
                    .collect::<Result<Vec<_>>>()?;
                self.rebuild(op, rule, &right.conclusion, prems, &identity())
            }
        }
    }

    /// cut3: from `Γ ⊢ [A]` and `Γ ⊢ ¬A, Δ`, a proof of `Γ ⊢ Δ`.
    pub fn cut3(&mut self, left: &Proof, right: &Proof) -> Result<Proof> {
        self.nested(|t| t.cut3_inner(left, right))
    }

    fn cut3_inner(&mut self, left: &Proof, right: &Proof) -> Result<Proof> {
        let a = left
            .conclusion
            .focus()
            .ok_or_else(|| pre("cut3", "left premiss must be focused"))?
            .clone();
        let na = a.negate();
        match (&left.rule, &a) {
            (Rule::AndPlus {}, Formula::AndP(..)) => {
                let r = self.invert_formula(right, &na, None)?.one()?;
                self.log("cut3", "cut3");
                let inner = self.cut3(&left.premisses[0], &r)?;
                self.cut3(&left.premisses[1], &inner)
            }
            (Rule::OrPlusLeft {} | Rule::OrPlusRight {}, Formula::OrP(..)) => {
                let (r1, r2) = self.invert_formula(right, &na, None)?.two()?;
                let r = if matches!(left.rule, Rule::OrPlusLeft {}) { r1 } else { r2 };
                self.log("cut3", "cut3");
                self.cut3(&left.premisses[0], &r)
            }
            (Rule::ExistsIntro { witness }, Formula::Exists(x, _)) => {
                let y = fresh::fresh(x);
                let r = self.invert_formula(right, &na, Some(&y))?.one()?;
                self.log("cut3", "instantiate");
                let r = self.instantiate(&r, &y, witness)?;
                self.cut3(&left.premisses[0], &r)
            }
            (Rule::Release {}, _) => {
                let r = self.invert_formula(right, &na, None)?.one()?;
                self.log("cut3", "cut4");
                self.cut4(&left.premisses[0], &r)
            }
            (Rule::InitPos {}, Formula::Lit(_)) => {
                let r = self.invert_formula(right, &na, None)?.one()?;
                self.log("cut3", "contract");
                self.contract(&r, &a)
            }
            (Rule::TheoryInitPos { .. }, Formula::Lit(p)) => {
                let r = self.invert_formula(right, &na, None)?.one()?;
                self.log("cut3", "cut1");
                self.cut1(p, &r)
            }
            (rule, _) => Err(pre("cut3", format!("left premiss ends in {}", rule.name()))),
        }
    }

    /// cut4 (unfocused `right`) or cut5 (focused `right`): from `Γ ⊢ N` and
    /// `Γ, N ⊢ Δ` (or `Γ, N ⊢ [B]`), the same without `N`.
    pub fn cut4(&mut self, left: &Proof, right: &Proof) -> Result<Proof> {
        let op = if right.conclusion.is_focused() { "cut5" } else { "cut4" };
        let n = single_right(left, op)?;
        if self.positive(&n)? {
            return Err(pre(op, format!("cut formula `{n}` is not negative")));
        }
        let rest = right
            .gamma()
            .without(&n)
            .ok_or_else(|| pre(op, format!("`{n}` is not in the right premiss's context")))?;
        if &rest != left.gamma() {
            return Err(pre(op, "premiss contexts differ"));
        }
        self.nested(|t| {
            if right.conclusion.is_focused() {
                t.cut5_inner(left, right)
            } else {
                t.cut4_inner(left, &n, right)
            }
        })
    }

    fn cut4_inner(&mut self, left: &Proof, n: &Formula, right: &Proof) -> Result<Proof> {
        let gamma = left.gamma().clone();
        match &right.rule {
            Rule::TheoryClose { .. } if !n.is_literal() => {
                self.log("cut4", "TheoryClose");
                self.close("cut4", gamma)
            }
            Rule::TheoryClose { .. } | Rule::Focus { .. } if n.is_literal() && self.literal_refuted(&gamma, n) => {
                // N = ¬p with ⊨ atm(Γ), ¬p: the Store-inverted left premiss
                // proves Γ, p ⊢ and cut1 removes p.
                let stored = self.invert_formula(left, n, None)?.one()?;
                let p = n.negate().as_literal().cloned().expect("literal");
                self.log("cut4", "cut1");
                self.cut1(&p, &stored)
            }
            Rule::TheoryClose { .. } => Err(pre("cut4", format!("the oracle does not refute `{n}` in context"))),
            Rule::Focus { selected } => {
                let focused = &right.premisses[0];
                if gamma.contains(&selected.negate()) {
                    self.log("cut4", "cut5");
                    let prem = self.cut4(left, focused)?;
                    Ok(Proof::focus(selected.clone(), prem)?)
                } else {
                    // key case: the focus is ¬N itself
                    self.log("cut4", "cut3");
                    let c5 = self.cut4(left, focused)?;
                    self.cut3(&c5, left)
                }
            }
            Rule::Store { principal } => {
                let b = right.conclusion.delta().and_then(|d| d.get(*principal)).expect("checked").clone();
                self.log("cut4", "weaken");
                let l = self.weaken(left, &b.negate())?;
                let prem = self.cut4(&l, &right.premisses[0])?;
                Ok(Proof::store(b, prem)?)
            }
            Rule::AndMinus { .. } | Rule::OrMinus { .. } | Rule::ForallIntro { .. } => {
                let prems = right
                    .premisses
                    .iter()
                    .map(|q| self.cut4(left, q))
                    .collect::<Result<Vec<_>>>()?;
                let conclusion = right.conclusion.with_gamma(gamma);
                self.rebuild("cut4", &right.rule, &conclusion, prems, &identity())
            }
            rule => Err(pre("cut4", format!("right premiss ends in {}", rule.name()))),
        }
    }

    /// `⊨ atm(Γ), n` for a literal `n`.
    fn literal_refuted(&self, gamma: &Multiset, n: &Formula) -> bool {
        let mut s = gamma.atom_set();
        s.insert(n.as_literal().expect("literal").clone());
        self.oracle.entails_unsat(&s)
    }

    fn cut5_inner(&mut self, left: &Proof, right: &Proof) -> Result<Proof> {
        let gamma = left.gamma().clone();
        match &right.rule {
            Rule::Release {} => {
                self.log("cut5", "cut4");
                let prem = self.cut4(left, &right.premisses[0])?;
                Ok(Proof::release(prem)?)
            }
            Rule::InitPos {} => {
                let p = focus_literal(right)?;
                if !gamma.contains(&Formula::Lit(p.clone())) {
                    return Err(pre("cut5", format!("`{p}` is not in Γ")));
                }
                Ok(Proof::init(gamma, p))
            }
            Rule::TheoryInitPos { .. } => {
                // atm(Γ, N) = atm(Γ) unless N is a literal. Then the oracle is
                // asked again; `cut4_inner` already routed the cases where
                // N itself is refuted, so a pair-based oracle still agrees.
                let p = focus_literal(right)?;
                self.theory_init("cut5", gamma, p)
            }
            Rule::AndPlus {} | Rule::OrPlusLeft {} | Rule::OrPlusRight {} | Rule::ExistsIntro { .. } => {
                let prems = right
                    .premisses
                    .iter()
                    .map(|q| self.cut4(left, q))
                    .collect::<Result<Vec<_>>>()?;
                let conclusion = right.conclusion.with_gamma(gamma);
                self.rebuild("cut5", &right.rule, &conclusion, prems, &identity())
            }
            rule => Err(pre("cut5", format!("right premiss ends in {}", rule.name()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check;
    use crate::oracle::SyntacticOracle;
    use crate::syntax::{Polarity, Signature};
    use crate::transform::testing::{eliminates, prove_seq};

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("p", 0, Polarity::Positive)
            .with_predicate("q", 0, Polarity::Positive)
    }

    fn a(name: &str) -> Formula {
        Formula::atom(name, vec![])
    }

    fn ctx(fs: &[Formula]) -> Multiset {
        fs.iter().cloned().collect()
    }

    fn assert_checks(pf: &Proof, sig: &Signature) {
        let r = check(pf, sig, &SyntacticOracle);
        assert!(r.ok(), "{:?}\n{pf}", r.failures);
    }

    #[test]
    fn cut1_drops_a_redundant_literal() {
        let sig = sig();
        let em_q = Formula::or_n(a("q"), a("q").negate());
        let right = prove_seq(vec![a("p"), a("p")], vec![em_q], &sig);
        let e = Proof::cut1(Literal::atom("p", vec![]), right).unwrap();
        let out = eliminates(&e, &sig);
        assert_eq!(out.proof.gamma(), &ctx(&[a("p")]));
    }

    #[test]
    fn cut1_rejects_missing_theory_fact() {
        let sig = sig();
        let right = prove_seq(vec![a("p"), a("q")], vec![a("q")], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        assert!(t.cut1(&Literal::atom("p", vec![]), &right).is_err());
    }

    #[test]
    fn cut3_on_and_plus_contracts_literals() {
        let sig = sig();
        let g = ctx(&[a("p"), a("q")]);
        let pq = Formula::and_p(a("p"), a("q"));
        let left = Proof::and_plus(
            Proof::init(g.clone(), Literal::atom("p", vec![])),
            Proof::init(g.clone(), Literal::atom("q", vec![])),
        )
        .unwrap();
        let right = prove_seq(vec![a("p"), a("q")], vec![pq.negate(), a("p")], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let out = t.cut3(&left, &right).unwrap();
        assert_eq!(out.conclusion, Sequent::unfocused(g, ctx(&[a("p")])));
        assert_checks(&out, &sig);
        assert!(t.trace().iter().any(|l| l.ends_with("contract")));
    }

    #[test]
    fn cut3_on_release_goes_through_cut4() {
        let sig = sig();
        let n = Formula::or_n(a("q").negate(), a("q"));
        let left = Proof::release(prove_seq(vec![a("p")], vec![n.clone()], &sig)).unwrap();
        let right = prove_seq(vec![a("p")], vec![n.negate(), a("p")], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let out = t.cut3(&left, &right).unwrap();
        assert_eq!(out.conclusion, Sequent::unfocused(ctx(&[a("p")]), ctx(&[a("p")])));
        assert_checks(&out, &sig);
    }

    #[test]
    fn cut4_on_a_refuted_negative_literal() {
        let sig = sig();
        let g = vec![a("q"), a("q").negate()];
        let n = a("p").negate();
        let left = prove_seq(g.clone(), vec![n.clone()], &sig);
        let mut gn = g.clone();
        gn.push(n);
        let right = Proof::theory_close(gn.into_iter().collect());
        let e = Proof::cut4(left, right).unwrap();
        let out = eliminates(&e, &sig);
        assert!(out.trace.iter().any(|l| l.ends_with("cut4 → cut1")));
    }

    #[test]
    fn cut4_rejects_positive_cut_formula() {
        let sig = sig();
        let left = prove_seq(vec![a("p")], vec![a("p")], &sig);
        let right = Proof::theory_close(ctx(&[a("p"), a("p")]));
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        assert!(t.cut4(&left, &right).is_err());
    }
}
