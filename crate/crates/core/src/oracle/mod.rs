//! Decision procedures called on sets of literals.
//!
//! An oracle answers one question: is the conjunction of a literal set
//! unsatisfiable? Every oracle is expected to satisfy four closure properties
//! (weakening, contraction, instantiation, consistency); [`axioms::run_suite`]
//! samples them.

pub mod axioms;
pub mod lia;

use std::collections::BTreeSet;

use crate::syntax::Literal;

pub use axioms::{run_suite, Axiom, AxiomReport, Violation};
pub use lia::{normalize_literal, normalize_term, LiaOracle};

pub type LiteralSet = BTreeSet<Literal>;

/// `⊨_T S`: the decision procedure on a literal set. Implementations must be
/// pure; the same set always gets the same verdict.
pub trait TheoryOracle: Send + Sync {
    fn name(&self) -> &str;

    /// `true` iff the procedure reports UNSAT on the conjunction of `lits`.
    fn entails_unsat(&self, lits: &LiteralSet) -> bool;
}

/// UNSAT iff the set contains some literal together with its negation.
#[derive(Clone, Copy, Debug, Default)]
pub struct SyntacticOracle;

impl TheoryOracle for SyntacticOracle {
    fn name(&self) -> &str {
        "syntactic"
    }

    fn entails_unsat(&self, lits: &LiteralSet) -> bool {
        has_complementary_pair(lits)
    }
}

pub(crate) fn has_complementary_pair(lits: &LiteralSet) -> bool {
    lits.iter()
        .any(|l| !l.negated && lits.contains(&l.negate()))
}

/// Look up a built-in oracle by its CLI name.
pub fn by_name(name: &str) -> Option<Box<dyn TheoryOracle>> {
    match name {
        "syntactic" => Some(Box::new(SyntacticOracle)),
        "lia" => Some(Box::new(LiaOracle)),
        _ => None,
    }
}
