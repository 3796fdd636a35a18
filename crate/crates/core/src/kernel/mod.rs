//! Sequents, proof objects and the proof checker.

pub mod check;
pub mod document;
pub mod proof;
pub mod sequent;

pub use check::{check, check_with, CheckFailure, CheckOptions, CheckReport};
pub use document::ProofDocument;
pub use proof::{literal_conjunction, negated_clause, BuildError, NodePath, Proof, Rule, TheoryRecord, Verdict};
pub use sequent::{Multiset, Sequent};
