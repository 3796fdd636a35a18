//! Terms, literals, polarized formulae and their text syntax.

pub mod formula;
pub mod fresh;
pub mod parse;
pub mod signature;
pub mod term;

pub use formula::{chain, Formula, Literal};
pub use parse::{
    parse_closed_formula, parse_formula, parse_problem, parse_term, Connective, ParseError,
    ProblemFile, Surface,
};
pub use signature::{Polarity, PredicateDecl, Signature, SignatureError};
pub use term::Term;
