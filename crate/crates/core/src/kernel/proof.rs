use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sequent::{Multiset, Sequent};
use crate::oracle::LiteralSet;
use crate::syntax::{chain, fresh, Formula, Literal, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unsat,
}

/// The literal set a theory call was made on. Kept for provenance; the checker
/// recomputes the set from the sequent and re-runs the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryRecord {
    pub literals: LiteralSet,
    pub verdict: Verdict,
}

impl TheoryRecord {
    pub fn new(literals: LiteralSet) -> Self {
        TheoryRecord {
            literals,
            verdict: Verdict::Unsat,
        }
    }

    /// `atm(Γ), ¬p`
    pub fn with_negation(gamma: &Multiset, p: &Literal) -> Self {
        let mut s = gamma.atom_set();
        s.insert(p.negate());
        Self::new(s)
    }

    /// `atm(Γ)`
    pub fn of_context(gamma: &Multiset) -> Self {
        Self::new(gamma.atom_set())
    }
}

/// One tag per inference rule, plus the nine admissible cut rules. A proof
/// containing cut nodes is an extended proof; [`crate::transform::eliminate`]
/// removes them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "params", rename_all = "snake_case")]
pub enum Rule {
    AndPlus {},
    OrPlusLeft {},
    OrPlusRight {},
    ExistsIntro { witness: Term },
    InitPos {},
    TheoryInitPos { record: TheoryRecord },
    Release {},
    AndMinus { principal: usize },
    OrMinus { principal: usize },
    ForallIntro { principal: usize, eigen: String },
    Store { principal: usize },
    Focus { selected: Formula },
    TheoryClose { record: TheoryRecord },
    Cut1 { lit: Literal, record: TheoryRecord },
    Cut2 { lit: Literal, record: TheoryRecord },
    Cut3 {},
    Cut4 {},
    Cut5 {},
    Cut6 { formula: Formula },
    Cut7 { formula: Formula },
    Cut8 { lit: Literal },
    Cut9 { lits: Vec<Literal> },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::AndPlus {} => "AndPlus",
            Rule::OrPlusLeft {} => "OrPlusLeft",
            Rule::OrPlusRight {} => "OrPlusRight",
            Rule::ExistsIntro { .. } => "ExistsIntro",
            Rule::InitPos {} => "InitPos",
            Rule::TheoryInitPos { .. } => "TheoryInitPos",
            Rule::Release {} => "Release",
            Rule::AndMinus { .. } => "AndMinus",
            Rule::OrMinus { .. } => "OrMinus",
            Rule::ForallIntro { .. } => "ForallIntro",
            Rule::Store { .. } => "Store",
            Rule::Focus { .. } => "Focus",
            Rule::TheoryClose { .. } => "TheoryClose",
            Rule::Cut1 { .. } => "cut1",
            Rule::Cut2 { .. } => "cut2",
            Rule::Cut3 {} => "cut3",
            Rule::Cut4 {} => "cut4",
            Rule::Cut5 {} => "cut5",
            Rule::Cut6 { .. } => "cut6",
            Rule::Cut7 { .. } => "cut7",
            Rule::Cut8 { .. } => "cut8",
            Rule::Cut9 { .. } => "cut9",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::InitPos {} | Rule::TheoryInitPos { .. } | Rule::TheoryClose { .. } => 0,
            Rule::AndPlus {} | Rule::AndMinus { .. } => 2,
            Rule::Cut1 { .. } | Rule::Cut2 { .. } => 1,
            Rule::Cut3 {}
            | Rule::Cut4 {}
            | Rule::Cut5 {}
            | Rule::Cut6 { .. }
            | Rule::Cut7 { .. }
            | Rule::Cut8 { .. }
            | Rule::Cut9 { .. } => 2,
            _ => 1,
        }
    }

    /// The ∨⁺ introduction keeping disjunct `i` (0 = left).
    pub fn or_plus(i: usize) -> Rule {
        if i == 0 {
            Rule::OrPlusLeft {}
        } else {
            Rule::OrPlusRight {}
        }
    }

    pub fn is_cut(&self) -> bool {
        self.name().starts_with("cut")
    }
}

/// Location of a node: child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot build {rule}: {reason}")]
pub struct BuildError {
    pub rule: &'static str,
    pub reason: String,
}

fn build_err(rule: &'static str, reason: impl Into<String>) -> BuildError {
    BuildError {
        rule,
        reason: reason.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    #[serde(flatten)]
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premisses: Vec<Proof>,
}

impl Proof {
    pub fn new(rule: Rule, conclusion: Sequent, premisses: Vec<Proof>) -> Proof {
        Proof {
            rule,
            conclusion,
            premisses,
        }
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.conclusion
    }

    pub fn gamma(&self) -> &Multiset {
        self.conclusion.gamma()
    }

    pub fn is_cut_free(&self) -> bool {
        !self.rule.is_cut() && self.premisses.iter().all(Proof::is_cut_free)
    }

    pub fn height(&self) -> usize {
        1 + self.premisses.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(Proof::size).sum::<usize>()
    }

    pub fn node(&self, path: &NodePath) -> Option<&Proof> {
        path.0.iter().try_fold(self, |p, &i| p.premisses.get(i))
    }

    pub fn node_mut(&mut self, path: &NodePath) -> Option<&mut Proof> {
        path.0.iter().try_fold(self, |p, &i| p.premisses.get_mut(i))
    }

    /// Every node path in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        fn go(p: &Proof, at: NodePath, out: &mut Vec<NodePath>) {
            out.push(at.clone());
            for (i, q) in p.premisses.iter().enumerate() {
                go(q, at.child(i), out);
            }
        }
        let mut out = Vec::new();
        go(self, NodePath::root(), &mut out);
        out
    }

    /// Bump the global fresh-name counter past every generated name in this
    /// proof, so later renamings cannot collide with it.
    pub fn reserve_names(&self) {
        let mut visit = |n: &str| fresh::reserve(n);
        for f in self.conclusion.formulas() {
            f.visit_names(&mut visit);
        }
        match &self.rule {
            Rule::ForallIntro { eigen, .. } => visit(eigen),
            Rule::ExistsIntro { witness } => witness.visit_names(&mut visit),
            _ => {}
        }
        self.premisses.iter().for_each(Proof::reserve_names);
    }

    /// Recompute the theory record of this node from its conclusion.
    pub fn refresh_record(&mut self) {
        let gamma = self.conclusion.gamma();
        let focus = self.conclusion.focus().and_then(Formula::as_literal);
        match &mut self.rule {
            Rule::TheoryInitPos { record } => {
                if let Some(p) = focus {
                    *record = TheoryRecord::with_negation(gamma, p);
                }
            }
            Rule::TheoryClose { record } => *record = TheoryRecord::of_context(gamma),
            Rule::Cut1 { lit, record } | Rule::Cut2 { lit, record } => {
                *record = TheoryRecord::with_negation(gamma, lit)
            }
            _ => {}
        }
    }

    // Builders. Each derives the conclusion from its premisses; shape errors
    // are reported, side conditions are left to the checker.

    pub fn and_plus(left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let (Sequent::Focused { gamma, focus: a }, Some(b)) = (&left.conclusion, right.conclusion.focus()) else {
            return Err(build_err("AndPlus", "premisses must be focused"));
        };
        let conclusion = Sequent::focused(gamma.clone(), Formula::and_p(a.clone(), b.clone()));
        Ok(Proof::new(Rule::AndPlus {}, conclusion, vec![left, right]))
    }

    pub fn or_plus(principal: Formula, disjunct: usize, premiss: Proof) -> Result<Proof, BuildError> {
        if !premiss.conclusion.is_focused() {
            return Err(build_err("OrPlus", "premiss must be focused"));
        }
        let conclusion = Sequent::focused(premiss.gamma().clone(), principal);
        Ok(Proof::new(Rule::or_plus(disjunct), conclusion, vec![premiss]))
    }

    pub fn exists_intro(principal: Formula, witness: Term, premiss: Proof) -> Result<Proof, BuildError> {
        if !premiss.conclusion.is_focused() {
            return Err(build_err("ExistsIntro", "premiss must be focused"));
        }
        let conclusion = Sequent::focused(premiss.gamma().clone(), principal);
        Ok(Proof::new(Rule::ExistsIntro { witness }, conclusion, vec![premiss]))
    }

    pub fn init(gamma: Multiset, p: Literal) -> Proof {
        Proof::new(Rule::InitPos {}, Sequent::focused(gamma, Formula::Lit(p)), vec![])
    }

    pub fn theory_init(gamma: Multiset, p: Literal) -> Proof {
        let record = TheoryRecord::with_negation(&gamma, &p);
        Proof::new(
            Rule::TheoryInitPos { record },
            Sequent::focused(gamma, Formula::Lit(p)),
            vec![],
        )
    }

    pub fn release(premiss: Proof) -> Result<Proof, BuildError> {
        let Sequent::Unfocused { gamma, delta } = &premiss.conclusion else {
            return Err(build_err("Release", "premiss must be unfocused"));
        };
        if delta.len() != 1 {
            return Err(build_err("Release", "premiss must have exactly one formula on the right"));
        }
        let conclusion = Sequent::focused(gamma.clone(), delta.get(0).expect("len 1").clone());
        Ok(Proof::new(Rule::Release {}, conclusion, vec![premiss]))
    }

    fn unfocused_parts<'a>(p: &'a Proof, rule: &'static str) -> Result<(&'a Multiset, &'a Multiset), BuildError> {
        match &p.conclusion {
            Sequent::Unfocused { gamma, delta } => Ok((gamma, delta)),
            Sequent::Focused { .. } => Err(build_err(rule, "premiss must be unfocused")),
        }
    }

    fn take(delta: &mut Multiset, f: &Formula, rule: &'static str) -> Result<(), BuildError> {
        if delta.remove_one(f) {
            Ok(())
        } else {
            Err(build_err(rule, format!("premiss lacks `{f}`")))
        }
    }

    fn finish_async(
        rule: &'static str,
        gamma: Multiset,
        mut delta: Multiset,
        principal: Formula,
        make: impl FnOnce(usize) -> Rule,
        premisses: Vec<Proof>,
    ) -> Result<Proof, BuildError> {
        delta.insert(principal.clone());
        let at = delta
            .position(&principal)
            .ok_or_else(|| build_err(rule, "principal vanished"))?;
        Ok(Proof::new(make(at), Sequent::unfocused(gamma, delta), premisses))
    }

    pub fn and_minus(principal: Formula, left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let Formula::AndN(a, _) = &principal else {
            return Err(build_err("AndMinus", "principal is not a negative conjunction"));
        };
        let (gamma, delta) = Self::unfocused_parts(&left, "AndMinus")?;
        Self::unfocused_parts(&right, "AndMinus")?;
        let mut delta = delta.clone();
        Self::take(&mut delta, a, "AndMinus")?;
        let gamma = gamma.clone();
        Self::finish_async("AndMinus", gamma, delta, principal, |principal| Rule::AndMinus { principal }, vec![left, right])
    }

    pub fn or_minus(principal: Formula, premiss: Proof) -> Result<Proof, BuildError> {
        let Formula::OrN(a, b) = &principal else {
            return Err(build_err("OrMinus", "principal is not a negative disjunction"));
        };
        let (gamma, delta) = Self::unfocused_parts(&premiss, "OrMinus")?;
        let mut delta = delta.clone();
        Self::take(&mut delta, a, "OrMinus")?;
        Self::take(&mut delta, b, "OrMinus")?;
        let gamma = gamma.clone();
        Self::finish_async("OrMinus", gamma, delta, principal, |principal| Rule::OrMinus { principal }, vec![premiss])
    }

    pub fn forall_intro(principal: Formula, eigen: String, premiss: Proof) -> Result<Proof, BuildError> {
        let Formula::Forall(x, body) = &principal else {
            return Err(build_err("ForallIntro", "principal is not a universal"));
        };
        let instance = body.substitute(x, &Term::Var(eigen.clone()));
        let (gamma, delta) = Self::unfocused_parts(&premiss, "ForallIntro")?;
        let mut delta = delta.clone();
        Self::take(&mut delta, &instance, "ForallIntro")?;
        let gamma = gamma.clone();
        Self::finish_async(
            "ForallIntro",
            gamma,
            delta,
            principal,
            |principal| Rule::ForallIntro { principal, eigen },
            vec![premiss],
        )
    }

    pub fn store(principal: Formula, premiss: Proof) -> Result<Proof, BuildError> {
        let (gamma, delta) = Self::unfocused_parts(&premiss, "Store")?;
        let mut gamma = gamma.clone();
        if !gamma.remove_one(&principal.negate()) {
            return Err(build_err("Store", format!("premiss context lacks `{}`", principal.negate())));
        }
        let delta = delta.clone();
        Self::finish_async("Store", gamma, delta, principal, |principal| Rule::Store { principal }, vec![premiss])
    }

    pub fn focus(selected: Formula, premiss: Proof) -> Result<Proof, BuildError> {
        if !premiss.conclusion.is_focused() {
            return Err(build_err("Focus", "premiss must be focused"));
        }
        let conclusion = Sequent::unfocused(premiss.gamma().clone(), Multiset::new());
        Ok(Proof::new(Rule::Focus { selected }, conclusion, vec![premiss]))
    }

    pub fn theory_close(gamma: Multiset) -> Proof {
        let record = TheoryRecord::of_context(&gamma);
        Proof::new(
            Rule::TheoryClose { record },
            Sequent::unfocused(gamma, Multiset::new()),
            vec![],
        )
    }

    // Extended-proof constructors, mainly for building cut trees in tests and
    // fuzzers. Conclusions follow the cut schemas.

    pub fn cut1(p: Literal, right: Proof) -> Result<Proof, BuildError> {
        let mut gamma = right.gamma().clone();
        if !gamma.remove_one(&Formula::Lit(p.clone())) {
            return Err(build_err("cut1", "right premiss lacks the cut literal"));
        }
        let conclusion = right.conclusion.with_gamma(gamma.clone());
        let record = TheoryRecord::with_negation(&gamma, &p);
        let rule = if right.conclusion.is_focused() {
            Rule::Cut2 { lit: p, record }
        } else {
            Rule::Cut1 { lit: p, record }
        };
        Ok(Proof::new(rule, conclusion, vec![right]))
    }

    pub fn cut3(left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let Some(a) = left.conclusion.focus() else {
            return Err(build_err("cut3", "left premiss must be focused"));
        };
        let (_, delta) = Self::unfocused_parts(&right, "cut3")?;
        let mut delta = delta.clone();
        Self::take(&mut delta, &a.negate(), "cut3")?;
        let conclusion = Sequent::unfocused(left.gamma().clone(), delta);
        Ok(Proof::new(Rule::Cut3 {}, conclusion, vec![left, right]))
    }

    /// cut4, or cut5 when the right premiss is focused.
    pub fn cut4(left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let (gamma, _) = Self::unfocused_parts(&left, "cut4")?;
        let conclusion = right.conclusion.with_gamma(gamma.clone());
        let rule = if right.conclusion.is_focused() {
            Rule::Cut5 {}
        } else {
            Rule::Cut4 {}
        };
        Ok(Proof::new(rule, conclusion, vec![left, right]))
    }

    pub fn cut6(n: Formula, left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let (gamma, _) = Self::unfocused_parts(&left, "cut6")?;
        let (_, delta) = Self::unfocused_parts(&right, "cut6")?;
        let conclusion = Sequent::unfocused(gamma.clone(), delta.clone());
        Ok(Proof::new(Rule::Cut6 { formula: n }, conclusion, vec![left, right]))
    }

    pub fn cut7(a: Formula, left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let (gamma, delta) = Self::unfocused_parts(&left, "cut7")?;
        let mut delta = delta.clone();
        Self::take(&mut delta, &a, "cut7")?;
        let conclusion = Sequent::unfocused(gamma.clone(), delta);
        Ok(Proof::new(Rule::Cut7 { formula: a }, conclusion, vec![left, right]))
    }

    pub fn cut8(l: Literal, left: Proof, right: Proof) -> Result<Proof, BuildError> {
        let mut gamma = left.gamma().clone();
        if !gamma.remove_one(&Formula::Lit(l.clone())) {
            return Err(build_err("cut8", "left premiss lacks the cut literal"));
        }
        let conclusion = left.conclusion.with_gamma(gamma);
        Ok(Proof::new(Rule::Cut8 { lit: l }, conclusion, vec![left, right]))
    }

    pub fn cut9(lits: Vec<Literal>, left: Proof, right: Proof) -> Result<Proof, BuildError> {
        if lits.is_empty() {
            return Err(build_err("cut9", "needs at least one literal"));
        }
        let mut gamma = left.gamma().clone();
        for l in &lits {
            if !gamma.remove_one(&Formula::Lit(l.clone())) {
                return Err(build_err("cut9", format!("left premiss lacks `{l}`")));
            }
        }
        let conclusion = left.conclusion.with_gamma(gamma);
        Ok(Proof::new(Rule::Cut9 { lits }, conclusion, vec![left, right]))
    }
}

/// `¬l₁ ∨⁻ … ∨⁻ ¬lₙ`, right-nested.
pub fn negated_clause(lits: &[Literal]) -> Option<Formula> {
    chain(lits.iter().map(|l| Formula::Lit(l.negate())).collect(), Formula::or_n)
}

/// `l₁ ∧⁺ … ∧⁺ lₙ`, right-nested; the negation of [`negated_clause`].
pub fn literal_conjunction(lits: &[Literal]) -> Option<Formula> {
    chain(lits.iter().cloned().map(Formula::Lit).collect(), Formula::and_p)
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(p: &Proof, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:indent$}{}  {}", "", p.rule.name(), p.conclusion, indent = 2 * depth)?;
            p.premisses.iter().try_for_each(|q| go(q, depth + 1, f))
        }
        go(self, 0, f)
    }
}
