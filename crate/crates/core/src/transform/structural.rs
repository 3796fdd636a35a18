//! Weakening, contraction and instantiation.

use super::{pre, Contexts, Result, Rewrite, Transformer};
use crate::kernel::{Multiset, Proof, Rule, Sequent};
use crate::syntax::{fresh, Formula, Term};

struct Subst<'t> {
    x: &'t str,
    t: &'t Term,
}

impl Rewrite for Subst<'_> {
    fn formula(&self, f: &Formula) -> Formula {
        f.substitute(self.x, self.t)
    }
    fn term(&self, u: &Term) -> Term {
        u.substitute(self.x, self.t)
    }
    fn leaf(&self, s: &Sequent) -> Sequent {
        s.substitute(self.x, self.t)
    }
}

impl Transformer<'_> {
    /// From a proof of `Γ ⊢ Δ`, a proof of `Γ, extra ⊢ Δ` (same skeleton).
    pub fn weaken(&mut self, pf: &Proof, extra: &Formula) -> Result<Proof> {
        if !extra.is_literal() && self.positive(extra)? {
            return Err(pre("weaken", format!("`{extra}` is neither negative nor a literal")));
        }
        self.nested(|t| t.weaken_rec(pf, extra))
    }

    fn weaken_rec(&mut self, pf: &Proof, extra: &Formula) -> Result<Proof> {
        let (rule, prems) = self.rename_clashing_eigen(pf, |y| extra.has_free(y))?;
        let prems = prems
            .iter()
            .map(|q| self.weaken_rec(q, extra))
            .collect::<Result<Vec<_>>>()?;
        let rw = Contexts(|g: &Multiset| g.clone().with(extra.clone()));
        self.rebuild("weaken", &rule, &pf.conclusion, prems, &rw)
    }

    /// From a proof of `Γ, dup, dup ⊢ Δ`, a proof of `Γ, dup ⊢ Δ`.
    pub fn contract(&mut self, pf: &Proof, dup: &Formula) -> Result<Proof> {
        if pf.gamma().count(dup) < 2 {
            return Err(pre("contract", format!("`{dup}` does not occur twice in Γ")));
        }
        self.nested(|t| t.contract_rec(pf, dup))
    }

    fn contract_rec(&mut self, pf: &Proof, dup: &Formula) -> Result<Proof> {
        let prems = pf
            .premisses
            .iter()
            .map(|q| self.contract_rec(q, dup))
            .collect::<Result<Vec<_>>>()?;
        let rw = Contexts(|g: &Multiset| g.without(dup).expect("contexts only grow upwards"));
        self.rebuild("contract", &pf.rule, &pf.conclusion, prems, &rw)
    }

    /// From a proof of `Γ ⊢ Δ`, a proof of `(Γ ⊢ Δ)[t/x]`.
    pub fn instantiate(&mut self, pf: &Proof, x: &str, t: &Term) -> Result<Proof> {
        self.nested(|tr| tr.instantiate_rec(pf, x, t))
    }

    fn instantiate_rec(&mut self, pf: &Proof, x: &str, t: &Term) -> Result<Proof> {
        // An eigenvariable named x lies below a node not mentioning x, so this
        // also keeps such eigenvariables untouched.
        if !pf.conclusion.has_free(x) {
            return Ok(pf.clone());
        }
        let (rule, prems) = self.rename_clashing_eigen(pf, |y| t.occurs(y))?;
        let prems = prems
            .iter()
            .map(|q| self.instantiate_rec(q, x, t))
            .collect::<Result<Vec<_>>>()?;
        self.rebuild("instantiate", &rule, &pf.conclusion, prems, &Subst { x, t })
    }

    /// If `pf` is a ∀ node whose eigenvariable is `clash`-ing, rename it to a
    /// fresh one in the premiss.
    fn rename_clashing_eigen(&mut self, pf: &Proof, clash: impl Fn(&str) -> bool) -> Result<(Rule, Vec<Proof>)> {
        match &pf.rule {
            Rule::ForallIntro { principal, eigen } if clash(eigen) => {
                let z = fresh::fresh(eigen);
                let prem = self.instantiate_rec(&pf.premisses[0], eigen, &Term::var(z.clone()))?;
                let rule = Rule::ForallIntro {
                    principal: *principal,
                    eigen: z,
                };
                Ok((rule, vec![prem]))
            }
            _ => Ok((pf.rule.clone(), pf.premisses.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check;
    use crate::oracle::SyntacticOracle;
    use crate::syntax::{Polarity, Signature};
    use crate::transform::testing::prove_seq;

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("p", 0, Polarity::Positive)
            .with_predicate("q", 0, Polarity::Positive)
            .with_predicate("r", 1, Polarity::Positive)
            .with_function("c", 0)
            .with_function("f", 1)
    }

    fn a(name: &str) -> Formula {
        Formula::atom(name, vec![])
    }

    fn r(t: Term) -> Formula {
        Formula::atom("r", vec![t])
    }

    #[test]
    fn weaken_extends_theory_records() {
        let sig = sig();
        let pf = prove_seq(vec![a("p"), a("p").negate()], vec![], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let w = t.weaken(&pf, &a("q")).unwrap();
        assert_eq!(w.rule.name(), "TheoryClose");
        let expected: Multiset = [a("p"), a("q"), a("p").negate()].into_iter().collect();
        assert_eq!(w.gamma(), &expected);
        match &w.rule {
            Rule::TheoryClose { record } => assert_eq!(record.literals.len(), 3),
            r => panic!("{r:?}"),
        }
        assert!(check(&w, &sig, &SyntacticOracle).ok());
    }

    #[test]
    fn weaken_rejects_positive_compounds() {
        let sig = sig();
        let pf = prove_seq(vec![a("p"), a("p").negate()], vec![], &sig);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        assert!(t.weaken(&pf, &Formula::or_p(a("p"), a("q"))).is_err());
    }

    #[test]
    fn weaken_renames_eigenvariables() {
        let sig = sig();
        // ⊢ ∀x r(x) ∨⁻ ¬r(x): the eigenvariable is x^0; weaken with r(x^0)
        let goal = Formula::forall("x", Formula::or_n(r(Term::var("x")), r(Term::var("x")).negate()));
        let pf = prove_seq(vec![], vec![goal], &sig);
        let eigen = match &pf.rule {
            Rule::ForallIntro { eigen, .. } => eigen.clone(),
            other => panic!("{other:?}"),
        };
        let extra = r(Term::var(eigen.clone()));
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let w = t.weaken(&pf, &extra).unwrap();
        assert!(check(&w, &sig, &SyntacticOracle).ok(), "{:?}", check(&w, &sig, &SyntacticOracle).failures);
        assert!(matches!(&w.rule, Rule::ForallIntro { eigen: e, .. } if *e != eigen));
    }

    #[test]
    fn contract_keeps_init() {
        let sig = sig();
        let pf = Proof::init([a("p"), a("p")].into_iter().collect(), crate::syntax::Literal::atom("p", vec![]));
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let c = t.contract(&pf, &a("p")).unwrap();
        assert_eq!(c.rule.name(), "InitPos");
        assert_eq!(c.gamma(), &Multiset::new().with(a("p")));
        assert!(t.contract(&c, &a("p")).is_err());
    }

    #[test]
    fn instantiate_leaf_and_absent_variable() {
        let sig = sig();
        let rx = r(Term::var("x"));
        let pf = Proof::init(Multiset::new().with(rx.clone()), rx.as_literal().unwrap().clone());
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let i = t.instantiate(&pf, "x", &Term::constant("c")).unwrap();
        let rc = r(Term::constant("c"));
        assert_eq!(i.conclusion, Sequent::focused(Multiset::new().with(rc.clone()), rc));
        assert_eq!(t.instantiate(&pf, "z", &Term::constant("c")).unwrap(), pf);
    }

    #[test]
    fn instantiate_renames_capturing_eigenvariable() {
        let sig = sig();
        // r(x) ⊢ ∀y (¬r(y) ∨⁻ r(y)) ∨⁻ ¬r(x), eigenvariable y^0; substitute f(y^0) for x
        let rx = r(Term::var("x"));
        let inner = Formula::forall("y", Formula::or_n(r(Term::var("y")).negate(), r(Term::var("y"))));
        let pf = prove_seq(vec![], vec![Formula::or_n(inner, rx.negate())], &sig);
        let mut eigens = Vec::new();
        for p in pf.paths() {
            if let Rule::ForallIntro { eigen, .. } = &pf.node(&p).unwrap().rule {
                eigens.push(eigen.clone());
            }
        }
        assert_eq!(eigens.len(), 1);
        let t_ = Term::app("f", vec![Term::var(eigens[0].clone())]);
        let mut t = Transformer::new(&sig, &SyntacticOracle);
        let i = t.instantiate(&pf, "x", &t_).unwrap();
        assert_eq!(i.conclusion, pf.conclusion.substitute("x", &t_));
        let r = check(&i, &sig, &SyntacticOracle);
        assert!(r.ok(), "{:?}", r.failures);
    }
}
