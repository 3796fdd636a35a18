//! Bounded focused proof search.
//!
//! The asynchronous phase is deterministic: the first formula of Δ (in the
//! canonical multiset order) is decomposed or stored. With Δ empty the search
//! tries `TheoryClose`, then focuses on each distinct positive `P` with
//! `¬P ∈ Γ`; every focus spends one decision. The synchronous phase
//! backtracks over disjuncts, existential witnesses and the two initial
//! rules. Decisions are deepened iteratively from 0 to the bound, so the
//! shallowest proof (in decisions) is returned.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{Multiset, Proof, Sequent};
use crate::oracle::TheoryOracle;
use crate::syntax::{fresh, Formula, Signature, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchOrder {
    #[default]
    LeftFirst,
    RightFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Focus applications allowed along one branch.
    pub max_decisions: usize,
    /// Depth bound on existential witnesses.
    pub max_witness_depth: usize,
    pub branch_order: BranchOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_decisions: 8,
            max_witness_depth: 2,
            branch_order: BranchOrder::LeftFirst,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub decisions: usize,
    pub witnesses: usize,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nodes={} decisions={} witnesses={}", self.nodes, self.decisions, self.witnesses)
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Proved { proof: Proof, stats: SearchStats },
    /// `truncated` is false when no bound was ever hit, i.e. the sequent has
    /// no proof at all (not merely none within the bounds).
    Exhausted { stats: SearchStats, truncated: bool },
}

impl SearchOutcome {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            SearchOutcome::Proved { proof, .. } => Some(proof),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            SearchOutcome::Proved { stats, .. } | SearchOutcome::Exhausted { stats, .. } => *stats,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.proof().is_some()
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("ill-formed goal: {0}")]
    IllFormed(String),
}

/// Prefix of the constant used when the signature declares none.
pub const DEFAULT_WITNESS: &str = "w0";

/// All terms of depth at most `depth` over the given variables, the
/// signature's constants and its function symbols. Order: by depth, then
/// variables before constants, then by printed form. When the signature has
/// no constants a fresh one stands for the (nonempty) universe.
pub fn enumerate_witnesses(free: &BTreeSet<String>, sig: &Signature, depth: usize) -> Vec<Term> {
    let mut levels: Vec<Vec<Term>> = Vec::new();
    let mut base: Vec<Term> = free.iter().map(Term::var).collect();
    let mut constants: Vec<Term> = sig.constants().map(Term::constant).collect();
    if constants.is_empty() {
        constants.push(Term::constant(default_constant(sig)));
    }
    constants.sort_by_key(ToString::to_string);
    base.extend(constants);
    levels.push(base);

    let functions: Vec<(&str, usize)> = sig.functions().filter(|(_, n)| *n > 0).collect();
    for k in 1..=depth {
        let below: Vec<Term> = levels.iter().flatten().cloned().collect();
        let mut next: Vec<Term> = Vec::new();
        for (fun, arity) in &functions {
            for args in tuples(&below, *arity) {
                if args.iter().any(|a| a.depth() == k - 1) {
                    next.push(Term::app(*fun, args));
                }
            }
        }
        next.sort_by_cached_key(ToString::to_string);
        next.dedup();
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

fn default_constant(sig: &Signature) -> String {
    let taken = |n: &str| sig.function_arity(n).is_some() || sig.predicate(n).is_some();
    if !taken(DEFAULT_WITNESS) {
        return DEFAULT_WITNESS.to_string();
    }
    (1..)
        .map(|i| format!("w{i}"))
        .find(|n| !taken(n))
        .expect("unbounded supply")
}

fn tuples(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Search for a proof of `goal`.
pub fn prove(
    goal: &Sequent,
    sig: &Signature,
    oracle: &dyn TheoryOracle,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    for f in goal.formulas() {
        f.polarity(sig).map_err(|e| SearchError::IllFormed(e.to_string()))?;
    }
    match goal.gamma().first_ill_formed(sig) {
        Ok(None) => {}
        Ok(Some(f)) => {
            return Err(SearchError::IllFormed(format!(
                "`{f}` in the context is neither negative nor a positive literal"
            )))
        }
        Err(e) => return Err(SearchError::IllFormed(e.to_string())),
    }

    let mut s = Searcher {
        sig,
        oracle,
        cfg,
        stats: SearchStats::default(),
        truncated: false,
        failed: BTreeMap::new(),
    };
    let mut truncated = false;
    for budget in 0..=cfg.max_decisions {
        s.truncated = false;
        let found = match goal {
            Sequent::Unfocused { gamma, delta } => s.unfocused(gamma.clone(), delta.clone(), budget),
            Sequent::Focused { gamma, focus } => s.focused(gamma, focus, budget),
        };
        if let Some(proof) = found {
            return Ok(SearchOutcome::Proved { proof, stats: s.stats });
        }
        truncated = s.truncated;
        if !truncated {
            break;
        }
    }
    Ok(SearchOutcome::Exhausted {
        stats: s.stats,
        truncated,
    })
}

type CacheKey = (bool, Vec<Formula>, Vec<Formula>);

struct Searcher<'a> {
    sig: &'a Signature,
    oracle: &'a dyn TheoryOracle,
    cfg: &'a SearchConfig,
    stats: SearchStats,
    truncated: bool,
    /// Sequents known unprovable, with the largest budget that failed and
    /// whether that failure hit a bound.
    failed: BTreeMap<CacheKey, (usize, bool)>,
}

fn key(gamma: &Multiset, right: &[&Formula], focused: bool) -> CacheKey {
    (
        focused,
        gamma.iter().map(Formula::canonical).collect(),
        right.iter().map(|f| f.canonical()).collect(),
    )
}

/// `stem^k` for the least `k` keeping the name out of `taken`. Deterministic,
/// and disjoint from the names made by [`fresh::fresh`].
fn eigen_name(x: &str, taken: &BTreeSet<String>) -> String {
    let stem = fresh::stem(x);
    (0..)
        .map(|k| format!("{stem}^{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded supply")
}

impl Searcher<'_> {
    fn positive(&self, f: &Formula) -> bool {
        f.is_positive(self.sig).expect("goal symbols were validated")
    }

    fn cached_failure(&mut self, k: &CacheKey, budget: usize) -> bool {
        match self.failed.get(k) {
            Some(&(b, hit_bound)) if b >= budget || !hit_bound => {
                self.truncated |= hit_bound;
                true
            }
            _ => false,
        }
    }

    fn remember<T>(&mut self, k: CacheKey, budget: usize, before: bool, result: Option<T>) -> Option<T> {
        if result.is_none() {
            let hit = self.truncated;
            let e = self.failed.entry(k).or_insert((budget, hit));
            if budget >= e.0 {
                *e = (budget, hit);
            }
        }
        self.truncated |= before;
        result
    }

    fn unfocused(&mut self, gamma: Multiset, mut delta: Multiset, budget: usize) -> Option<Proof> {
        self.stats.nodes += 1;
        if delta.is_empty() {
            return self.structural(gamma, budget);
        }
        let a = delta.remove_at(0);
        match &a {
            Formula::AndN(b, c) => {
                let left = self.unfocused(gamma.clone(), delta.clone().with((**b).clone()), budget)?;
                let right = self.unfocused(gamma, delta.with((**c).clone()), budget)?;
                Some(Proof::and_minus(a, left, right).expect("shape built here"))
            }
            Formula::OrN(b, c) => {
                let prem = self.unfocused(gamma, delta.with((**b).clone()).with((**c).clone()), budget)?;
                Some(Proof::or_minus(a, prem).expect("shape built here"))
            }
            Formula::Forall(x, body) => {
                let mut taken = gamma.free_vars();
                taken.extend(delta.free_vars());
                taken.extend(a.free_vars());
                let eigen = eigen_name(x, &taken);
                let inst = body.substitute(x, &Term::var(eigen.clone()));
                let prem = self.unfocused(gamma, delta.with(inst), budget)?;
                Some(Proof::forall_intro(a, eigen, prem).expect("shape built here"))
            }
            _ => {
                let prem = self.unfocused(gamma.with(a.negate()), delta, budget)?;
                Some(Proof::store(a, prem).expect("shape built here"))
            }
        }
    }

    fn structural(&mut self, gamma: Multiset, budget: usize) -> Option<Proof> {
        if self.oracle.entails_unsat(&gamma.atom_set()) {
            return Some(Proof::theory_close(gamma));
        }
        let k = key(&gamma, &[], false);
        if self.cached_failure(&k, budget) {
            return None;
        }
        let before = std::mem::take(&mut self.truncated);

        let mut candidates: Vec<Formula> = Vec::new();
        for n in gamma.iter() {
            let p = n.negate();
            if self.positive(&p) && !candidates.iter().any(|c| c.alpha_eq(&p)) {
                candidates.push(p);
            }
        }
        let mut result = None;
        if budget == 0 {
            // A literal focus either closes at once or fails; only the others
            // could profit from a larger budget.
            if candidates.iter().any(|p| !p.is_literal() || self.literal_closes(&gamma, p)) {
                self.truncated = true;
            }
        } else {
            for p in candidates {
                self.stats.decisions += 1;
                if let Some(prem) = self.focused(&gamma, &p, budget - 1) {
                    result = Some(Proof::focus(p, prem).expect("shape built here"));
                    break;
                }
            }
        }
        self.remember(k, budget, before, result)
    }

    fn literal_closes(&self, gamma: &Multiset, p: &Formula) -> bool {
        let lit = p.as_literal().expect("literal");
        gamma.contains(p) || {
            let mut s = gamma.atom_set();
            s.insert(lit.negate());
            self.oracle.entails_unsat(&s)
        }
    }

    fn focused(&mut self, gamma: &Multiset, a: &Formula, budget: usize) -> Option<Proof> {
        self.stats.nodes += 1;
        if !self.positive(a) {
            let prem = self.unfocused(gamma.clone(), Multiset::new().with(a.clone()), budget)?;
            return Some(Proof::release(prem).expect("shape built here"));
        }
        match a {
            Formula::Lit(l) => {
                if gamma.contains(a) {
                    Some(Proof::init(gamma.clone(), l.clone()))
                } else if self.literal_closes(gamma, a) {
                    Some(Proof::theory_init(gamma.clone(), l.clone()))
                } else {
                    None
                }
            }
            Formula::AndP(b, c) => {
                let left = self.focused(gamma, b, budget)?;
                let right = self.focused(gamma, c, budget)?;
                Some(Proof::and_plus(left, right).expect("shape built here"))
            }
            Formula::OrP(b, c) => {
                let order = match self.cfg.branch_order {
                    BranchOrder::LeftFirst => [(0, b), (1, c)],
                    BranchOrder::RightFirst => [(1, c), (0, b)],
                };
                order.into_iter().find_map(|(i, d)| {
                    let prem = self.focused(gamma, d, budget)?;
                    Some(Proof::or_plus(a.clone(), i, prem).expect("shape built here"))
                })
            }
            Formula::Exists(x, body) => {
                let k = key(gamma, &[a], true);
                if self.cached_failure(&k, budget) {
                    return None;
                }
                let before = std::mem::take(&mut self.truncated);
                let mut free = gamma.free_vars();
                a.collect_free_vars(&mut free);
                let witnesses = enumerate_witnesses(&free, self.sig, self.cfg.max_witness_depth);
                if self.sig.functions().any(|(_, n)| n > 0) {
                    // deeper witnesses exist beyond the bound
                    self.truncated = true;
                }
                let mut result = None;
                for t in witnesses {
                    self.stats.witnesses += 1;
                    if let Some(prem) = self.focused(gamma, &body.substitute(x, &t), budget) {
                        result = Some(Proof::exists_intro(a.clone(), t, prem).expect("shape built here"));
                        break;
                    }
                }
                self.remember(k, budget, before, result)
            }
            _ => unreachable!("positive formulas are literals, ∧⁺, ∨⁺ or ∃"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check;
    use crate::oracle::{LiaOracle, SyntacticOracle};
    use crate::syntax::{parse_problem, Polarity};

    fn names(ts: &[Term]) -> Vec<String> {
        ts.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn witness_enumeration_examples() {
        let x: BTreeSet<String> = ["x".to_string()].into();
        let sig = Signature::new().with_function("c", 0);
        assert_eq!(names(&enumerate_witnesses(&x, &sig, 0)), ["x", "c"]);
        let sig = Signature::new().with_function("c", 0).with_function("f", 1);
        assert_eq!(names(&enumerate_witnesses(&BTreeSet::new(), &sig, 1)), ["c", "f(c)"]);
        assert_eq!(names(&enumerate_witnesses(&x, &Signature::new(), 0)), ["x", "w0"]);
    }

    #[test]
    fn witness_enumeration_has_no_duplicates_and_respects_depth() {
        let sig = Signature::new()
            .with_function("a", 0)
            .with_function("f", 1)
            .with_function("g", 2);
        let ts = enumerate_witnesses(&BTreeSet::new(), &sig, 2);
        let shown: BTreeSet<String> = names(&ts).into_iter().collect();
        assert_eq!(shown.len(), ts.len());
        assert!(ts.iter().all(|t| t.depth() <= 2));
        assert!(ts.windows(2).all(|w| w[0].depth() <= w[1].depth()));
        // depth 0: a; depth 1: f(a), g(a,a); depth 2 takes arguments from
        // {a, f(a), g(a,a)} with one of depth 1: f gives 2, g gives 9 - 1
        assert_eq!(ts.len(), 1 + 2 + 2 + 8);
    }

    fn run(src: &str, oracle: &dyn TheoryOracle, cfg: SearchConfig) -> (SearchOutcome, Signature) {
        let pf = parse_problem(src).unwrap();
        let sig = pf.signature.clone();
        let goal = Sequent::goal(pf.goal_formula().unwrap());
        (prove(&goal, &sig, oracle, &cfg).unwrap(), sig)
    }

    #[test]
    fn excluded_middle_is_proved_by_two_stores() {
        let (out, sig) = run("pred p 0 +\ngoal p \\/- ~p", &SyntacticOracle, SearchConfig::default());
        let pf = out.proof().expect("proved");
        assert!(check(pf, &sig, &SyntacticOracle).ok());
        let rules: Vec<&str> = pf.paths().iter().map(|p| pf.node(p).unwrap().rule.name()).collect();
        assert_eq!(rules, ["OrMinus", "Store", "Store", "TheoryClose"]);
        assert_eq!(out.stats().decisions, 0);
    }

    #[test]
    fn lone_positive_atom_is_exhausted() {
        let (out, _) = run("pred p 0 +\ngoal p", &SyntacticOracle, SearchConfig::default());
        assert!(matches!(out, SearchOutcome::Exhausted { truncated: false, .. }));
    }

    #[test]
    fn arithmetic_example_needs_lia() {
        let src = "pred p 1 +\nfun f 2\nfun g 1\n\
                   goal forall x. exists y. ~p(f(x+3,g(x))) \\/- p(f(1+(2+y),g(y)))";
        let cfg = SearchConfig {
            max_decisions: 2,
            max_witness_depth: 1,
            ..SearchConfig::default()
        };
        let (out, sig) = run(src, &LiaOracle, cfg);
        let pf = out.proof().expect("proved with lia");
        assert!(check(pf, &sig, &LiaOracle).ok());
        let witness = pf
            .paths()
            .iter()
            .find_map(|p| match &pf.node(p).unwrap().rule {
                crate::kernel::Rule::ExistsIntro { witness } => Some(witness.clone()),
                _ => None,
            })
            .unwrap();
        let eigen = match &pf.rule {
            crate::kernel::Rule::ForallIntro { eigen, .. } => eigen.clone(),
            r => panic!("root is {r:?}"),
        };
        assert_eq!(witness, Term::var(eigen));
        let (out, _) = run(src, &SyntacticOracle, cfg);
        assert!(!out.is_proved());
    }

    #[test]
    fn search_is_deterministic_and_focuses() {
        let src = "pred p 1 +\nconst a\ngoal exists x. p(x) \\/- ~p(a)";
        let (o1, sig) = run(src, &SyntacticOracle, SearchConfig::default());
        let (o2, _) = run(src, &SyntacticOracle, SearchConfig::default());
        assert_eq!(o1.proof(), o2.proof());
        assert!(check(o1.proof().unwrap(), &sig, &SyntacticOracle).ok());
        assert_eq!(o1.stats().decisions, 1);
    }

    #[test]
    fn ill_formed_context_is_an_error() {
        let sig = Signature::new().with_predicate("p", 0, Polarity::Positive);
        let p = Formula::atom("p", vec![]);
        let goal = Sequent::unfocused(Multiset::new().with(Formula::and_p(p.clone(), p)), Multiset::new());
        assert!(prove(&goal, &sig, &SyntacticOracle, &SearchConfig::default()).is_err());
    }
}
