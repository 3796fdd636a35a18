//! Independent proof checker.
//!
//! Every node is matched against its rule schema, side conditions are
//! re-established (theory calls included), and every failure is collected
//! with its tree path. Nothing produced by search or the transformers is
//! trusted.

use std::fmt;

use super::proof::{negated_clause, NodePath, Proof, Rule, TheoryRecord};
use super::sequent::{Multiset, Sequent};
use crate::oracle::{LiteralSet, TheoryOracle};
use crate::syntax::{Formula, Literal, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: NodePath,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.path, self.rule, self.reason)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    /// Sorted by tree path.
    pub failures: Vec<CheckFailure>,
    pub nodes: usize,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Accept the nine cut rules (extended proofs).
    pub allow_cuts: bool,
}

/// Check a cut-free proof.
pub fn check(pf: &Proof, sig: &Signature, oracle: &dyn TheoryOracle) -> CheckReport {
    check_with(pf, sig, oracle, CheckOptions::default())
}

pub fn check_with(pf: &Proof, sig: &Signature, oracle: &dyn TheoryOracle, opts: CheckOptions) -> CheckReport {
    let mut c = Checker {
        sig,
        oracle,
        opts,
        report: CheckReport::default(),
    };
    c.visit(pf, NodePath::root());
    c.report.failures.sort_by(|a, b| a.path.cmp(&b.path));
    c.report
}

struct Checker<'a> {
    sig: &'a Signature,
    oracle: &'a dyn TheoryOracle,
    opts: CheckOptions,
    report: CheckReport,
}

type Verdict = Result<(), String>;

fn focused(s: &Sequent) -> Result<(&Multiset, &Formula), String> {
    match s {
        Sequent::Focused { gamma, focus } => Ok((gamma, focus)),
        Sequent::Unfocused { .. } => Err(format!("expected a focused sequent, found `{s}`")),
    }
}

fn unfocused(s: &Sequent) -> Result<(&Multiset, &Multiset), String> {
    match s {
        Sequent::Unfocused { gamma, delta } => Ok((gamma, delta)),
        Sequent::Focused { .. } => Err(format!("expected an unfocused sequent, found `{s}`")),
    }
}

fn expect(which: &str, found: &Sequent, expected: Sequent) -> Verdict {
    if *found == expected {
        Ok(())
    } else {
        Err(format!("{which} premiss is `{found}`, schema requires `{expected}`"))
    }
}

/// `Δ` split at the recorded principal position.
fn principal_of(delta: &Multiset, at: usize) -> Result<(Formula, Multiset), String> {
    let mut rest = delta.clone();
    if at >= rest.len() {
        return Err(format!("principal position {at} out of range (|Δ| = {})", rest.len()));
    }
    let a = rest.remove_at(at);
    Ok((a, rest))
}

fn plus(m: &Multiset, fs: impl IntoIterator<Item = Formula>) -> Multiset {
    fs.into_iter().fold(m.clone(), Multiset::with)
}

impl Checker<'_> {
    fn visit(&mut self, pf: &Proof, path: NodePath) {
        self.report.nodes += 1;
        let rule = pf.rule.name();
        let fail = |reason: String, report: &mut CheckReport| {
            report.failures.push(CheckFailure {
                path: path.clone(),
                rule,
                reason,
            })
        };
        if let Err(e) = self.well_formed(&pf.conclusion) {
            fail(e, &mut self.report);
        }
        if pf.premisses.len() != pf.rule.arity() {
            fail(
                format!("expects {} premisses, found {}", pf.rule.arity(), pf.premisses.len()),
                &mut self.report,
            );
        } else if pf.rule.is_cut() && !self.opts.allow_cuts {
            fail("cut rules are not allowed here".into(), &mut self.report);
        } else if let Err(e) = self.schema(pf) {
            fail(e, &mut self.report);
        }
        for (i, q) in pf.premisses.iter().enumerate() {
            self.visit(q, path.child(i));
        }
    }

    fn well_formed(&self, s: &Sequent) -> Verdict {
        for f in s.formulas() {
            f.polarity(self.sig).map_err(|e| e.to_string())?;
        }
        match s.gamma().first_ill_formed(self.sig) {
            Ok(None) => Ok(()),
            Ok(Some(f)) => Err(format!(
                "Γ-wellformedness: `{f}` is neither negative nor a positive literal"
            )),
            Err(e) => Err(e.to_string()),
        }
    }

    fn positive(&self, f: &Formula) -> Result<bool, String> {
        f.is_positive(self.sig).map_err(|e| e.to_string())
    }

    fn positive_literal(&self, f: &Formula, what: &str) -> Result<Literal, String> {
        match f.as_literal() {
            Some(l) if self.positive(f)? => Ok(l.clone()),
            _ => Err(format!("{what} `{f}` must be a positive literal")),
        }
    }

    fn theory(&self, record: &TheoryRecord, expected: LiteralSet, shown: &str) -> Verdict {
        if record.literals != expected {
            return Err(format!("theory record does not match {shown}"));
        }
        if !self.oracle.entails_unsat(&expected) {
            return Err(format!("oracle `{}` does not report UNSAT on {shown}", self.oracle.name()));
        }
        Ok(())
    }

    fn schema(&self, pf: &Proof) -> Verdict {
        let c = &pf.conclusion;
        let ps = &pf.premisses;
        let prem = |i: usize| &ps[i].conclusion;
        match &pf.rule {
            Rule::AndPlus {} => {
                let (g, a) = focused(c)?;
                let Formula::AndP(b, d) = a else {
                    return Err(format!("focus `{a}` is not a positive conjunction"));
                };
                expect("left", prem(0), Sequent::focused(g.clone(), (**b).clone()))?;
                expect("right", prem(1), Sequent::focused(g.clone(), (**d).clone()))
            }
            Rule::OrPlusLeft {} | Rule::OrPlusRight {} => {
                let (g, a) = focused(c)?;
                let Formula::OrP(b, d) = a else {
                    return Err(format!("focus `{a}` is not a positive disjunction"));
                };
                let pick = if matches!(pf.rule, Rule::OrPlusLeft {}) { b } else { d };
                expect("the", prem(0), Sequent::focused(g.clone(), (**pick).clone()))
            }
            Rule::ExistsIntro { witness } => {
                let (g, a) = focused(c)?;
                let Formula::Exists(x, body) = a else {
                    return Err(format!("focus `{a}` is not existential"));
                };
                expect("the", prem(0), Sequent::focused(g.clone(), body.substitute(x, witness)))
            }
            Rule::InitPos {} => {
                let (g, a) = focused(c)?;
                self.positive_literal(a, "focus")?;
                if g.contains(a) {
                    Ok(())
                } else {
                    Err(format!("`{a}` ∉ Γ"))
                }
            }
            Rule::TheoryInitPos { record } => {
                let (g, a) = focused(c)?;
                let p = self.positive_literal(a, "focus")?;
                self.theory(record, TheoryRecord::with_negation(g, &p).literals, "atm(Γ), ¬p")
            }
            Rule::Release {} => {
                let (g, n) = focused(c)?;
                if self.positive(n)? {
                    return Err(format!("released focus `{n}` is not negative"));
                }
                expect("the", prem(0), Sequent::unfocused(g.clone(), Multiset::new().with(n.clone())))
            }
            Rule::AndMinus { principal } => {
                let (g, d) = unfocused(c)?;
                let (a, rest) = principal_of(d, *principal)?;
                let Formula::AndN(b, e) = a else {
                    return Err(format!("principal `{a}` is not a negative conjunction"));
                };
                expect("left", prem(0), Sequent::unfocused(g.clone(), plus(&rest, [*b])))?;
                expect("right", prem(1), Sequent::unfocused(g.clone(), plus(&rest, [*e])))
            }
            Rule::OrMinus { principal } => {
                let (g, d) = unfocused(c)?;
                let (a, rest) = principal_of(d, *principal)?;
                let Formula::OrN(b, e) = a else {
                    return Err(format!("principal `{a}` is not a negative disjunction"));
                };
                expect("the", prem(0), Sequent::unfocused(g.clone(), plus(&rest, [*b, *e])))
            }
            Rule::ForallIntro { principal, eigen } => {
                let (g, d) = unfocused(c)?;
                let (a, rest) = principal_of(d, *principal)?;
                let Formula::Forall(x, body) = &a else {
                    return Err(format!("principal `{a}` is not universal"));
                };
                if c.has_free(eigen) {
                    return Err(format!("eigenvariable `{eigen}` violates x∉FV(Γ,Δ)"));
                }
                let inst = body.substitute(x, &crate::syntax::Term::var(eigen.clone()));
                expect("the", prem(0), Sequent::unfocused(g.clone(), plus(&rest, [inst])))
            }
            Rule::Store { principal } => {
                let (g, d) = unfocused(c)?;
                let (a, rest) = principal_of(d, *principal)?;
                if !a.is_literal() && !self.positive(&a)? {
                    return Err(format!("stored `{a}` is neither positive nor a literal"));
                }
                expect("the", prem(0), Sequent::unfocused(plus(g, [a.negate()]), rest))
            }
            Rule::Focus { selected } => {
                let (g, d) = unfocused(c)?;
                if !d.is_empty() {
                    return Err("structural rule needs an empty Δ".into());
                }
                if !self.positive(selected)? {
                    return Err(format!("selected `{selected}` is not positive"));
                }
                if !g.contains(&selected.negate()) {
                    return Err(format!("`{}` ∉ Γ", selected.negate()));
                }
                expect("the", prem(0), Sequent::focused(g.clone(), selected.clone()))
            }
            Rule::TheoryClose { record } => {
                let (g, d) = unfocused(c)?;
                if !d.is_empty() {
                    return Err("structural rule needs an empty Δ".into());
                }
                self.theory(record, g.atom_set(), "atm(Γ)")
            }
            Rule::Cut1 { lit, record } | Rule::Cut2 { lit, record } => {
                if c.is_focused() != matches!(pf.rule, Rule::Cut2 { .. }) {
                    return Err("cut1 concludes unfocused sequents, cut2 focused ones".into());
                }
                let p = Formula::Lit(lit.clone());
                self.positive_literal(&p, "cut literal")?;
                self.theory(record, TheoryRecord::with_negation(c.gamma(), lit).literals, "atm(Γ), ¬p")?;
                expect("the", prem(0), c.with_gamma(plus(c.gamma(), [p])))
            }
            Rule::Cut3 {} => {
                let (g, d) = unfocused(c)?;
                let (_, a) = focused(prem(0))?;
                expect("right", prem(1), Sequent::unfocused(g.clone(), plus(d, [a.negate()])))?;
                expect("left", prem(0), Sequent::focused(g.clone(), a.clone()))
            }
            Rule::Cut4 {} | Rule::Cut5 {} => {
                if c.is_focused() != matches!(pf.rule, Rule::Cut5 {}) {
                    return Err("cut4 concludes unfocused sequents, cut5 focused ones".into());
                }
                let (_, nd) = unfocused(prem(0))?;
                let n = match nd.len() {
                    1 => nd.get(0).expect("one element").clone(),
                    k => return Err(format!("left premiss must have exactly one formula on the right, found {k}")),
                };
                if self.positive(&n)? {
                    return Err(format!("cut formula `{n}` is not negative"));
                }
                expect("left", prem(0), Sequent::unfocused(c.gamma().clone(), Multiset::new().with(n.clone())))?;
                expect("right", prem(1), c.with_gamma(plus(c.gamma(), [n])))
            }
            Rule::Cut6 { formula } => {
                let (g, d) = unfocused(c)?;
                if self.positive(formula)? {
                    return Err(format!("cut formula `{formula}` is not negative"));
                }
                expect("left", prem(0), Sequent::unfocused(g.clone(), plus(d, [formula.clone()])))?;
                expect("right", prem(1), Sequent::unfocused(plus(g, [formula.clone()]), d.clone()))
            }
            Rule::Cut7 { formula } => {
                let (g, d) = unfocused(c)?;
                self.positive(formula)?;
                expect("left", prem(0), Sequent::unfocused(g.clone(), plus(d, [formula.clone()])))?;
                expect("right", prem(1), Sequent::unfocused(g.clone(), plus(d, [formula.negate()])))
            }
            Rule::Cut8 { lit } => {
                let (g, d) = unfocused(c)?;
                let l = Formula::Lit(lit.clone());
                expect("left", prem(0), Sequent::unfocused(plus(g, [l.clone()]), d.clone()))?;
                expect("right", prem(1), Sequent::unfocused(plus(g, [l.negate()]), d.clone()))
            }
            Rule::Cut9 { lits } => {
                let (g, d) = unfocused(c)?;
                let clause = negated_clause(lits).ok_or("cut9 needs at least one literal")?;
                let left = plus(g, lits.iter().cloned().map(Formula::Lit));
                expect("left", prem(0), Sequent::unfocused(left, d.clone()))?;
                expect("right", prem(1), Sequent::unfocused(plus(g, [clause]), d.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SyntacticOracle;
    use crate::syntax::{Polarity, Term};

    struct NeverUnsat;

    impl TheoryOracle for NeverUnsat {
        fn name(&self) -> &str {
            "never"
        }
        fn entails_unsat(&self, _: &LiteralSet) -> bool {
            false
        }
    }

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("p", 0, Polarity::Positive)
            .with_predicate("q", 1, Polarity::Positive)
            .with_function("c", 0)
    }

    fn p() -> Formula {
        Formula::atom("p", vec![])
    }

    fn excluded_middle() -> Proof {
        let gamma: Multiset = [p(), p().negate()].into_iter().collect();
        let close = Proof::theory_close(gamma);
        let s1 = Proof::store(p(), close).unwrap();
        let s2 = Proof::store(p().negate(), s1).unwrap();
        Proof::or_minus(Formula::or_n(p(), p().negate()), s2).unwrap()
    }

    #[test]
    fn excluded_middle_checks() {
        let r = check(&excluded_middle(), &sig(), &SyntacticOracle);
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.nodes, 4);
    }

    #[test]
    fn always_sat_oracle_fails_at_theory_close() {
        let r = check(&excluded_middle(), &sig(), &NeverUnsat);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].path.to_string(), "/0/0/0");
        assert_eq!(r.failures[0].rule, "TheoryClose");
    }

    #[test]
    fn eigenvariable_clash_is_reported() {
        // q(y) ⊢ ∀x ¬q(x) ∨⁻ q(x), eigenvariable y already free in Γ
        let qx = |v: &str| Formula::atom("q", vec![Term::var(v)]);
        let goal = Formula::forall("x", Formula::or_n(qx("x").negate(), qx("x")));
        let gamma = Multiset::new().with(qx("y"));
        let inner: Multiset = [qx("y"), qx("y").negate(), qx("y")].into_iter().collect();
        let close = Proof::theory_close(inner);
        let s1 = Proof::store(qx("y"), close).unwrap();
        let s2 = Proof::store(qx("y").negate(), s1).unwrap();
        let or = Proof::or_minus(Formula::or_n(qx("y").negate(), qx("y")), s2).unwrap();
        let all = Proof::forall_intro(goal, "y".into(), or).unwrap();
        assert_eq!(all.gamma(), &gamma);
        let r = check(&all, &sig(), &SyntacticOracle);
        assert_eq!(r.failures.len(), 1, "{:?}", r.failures);
        assert!(r.failures[0].reason.contains("x∉FV(Γ,Δ)"));
        assert_eq!(r.failures[0].path, NodePath::root());
    }

    #[test]
    fn failures_are_collected_everywhere() {
        let mut pf = excluded_middle();
        pf.rule = Rule::AndMinus { principal: 0 };
        pf.premisses[0].premisses[0].rule = Rule::Store { principal: 7 };
        let r = check(&pf, &sig(), &SyntacticOracle);
        let paths: Vec<String> = r.failures.iter().map(|f| f.path.to_string()).collect();
        assert_eq!(paths, ["/", "/0/0"]);
    }

    #[test]
    fn tampered_record_is_rejected() {
        let mut pf = excluded_middle();
        let leaf = pf.node_mut(&NodePath(vec![0, 0, 0])).unwrap();
        leaf.rule = Rule::TheoryClose {
            record: TheoryRecord::new(LiteralSet::new()),
        };
        let r = check(&pf, &sig(), &SyntacticOracle);
        assert!(r.failures[0].reason.contains("record"));
    }

    #[test]
    fn init_requires_membership_and_positivity() {
        let q = Formula::atom("q", vec![Term::constant("c")]);
        let ok = Proof::init(Multiset::new().with(q.clone()), q.as_literal().unwrap().clone());
        assert!(check(&ok, &sig(), &SyntacticOracle).ok());
        let missing = Proof::init(Multiset::new(), q.as_literal().unwrap().clone());
        assert!(!check(&missing, &sig(), &SyntacticOracle).ok());
        let neg = q.negate();
        let wrong = Proof::init(Multiset::new().with(neg.clone()), neg.as_literal().unwrap().clone());
        assert!(!check(&wrong, &sig(), &SyntacticOracle).ok());
    }

    #[test]
    fn cuts_need_permission() {
        let l = Literal::atom("p", vec![]);
        // Γ = {¬p}: the left premiss adds p, the right one adds a second ¬p
        let left = Proof::theory_close([p(), p().negate()].into_iter().collect());
        let right = Proof::theory_close([p().negate(), p().negate()].into_iter().collect());
        let cut = Proof::cut8(l, left, right).unwrap();
        assert!(!check(&cut, &sig(), &SyntacticOracle).ok());
        let r = check_with(&cut, &sig(), &SyntacticOracle, CheckOptions { allow_cuts: true });
        // the right premiss {¬p, ¬p} is not UNSAT; only that leaf fails
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].path.to_string(), "/1");
    }
}
