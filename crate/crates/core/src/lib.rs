//! Polarized first-order sequent calculus with calls to a decision procedure.

pub mod flip;
pub mod kernel;
pub mod oracle;
pub mod search;
pub mod syntax;
pub mod transform;
