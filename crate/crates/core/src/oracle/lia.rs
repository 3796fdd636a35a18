//! Complementary pairs modulo linear-arithmetic normalization.
//!
//! Each term is rewritten to `c0 + c1*a1 + ... + cn*an`, where the atoms `ai`
//! are variables or uninterpreted applications (themselves normalized inside),
//! ordered by their printed form, with zero coefficients dropped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{has_complementary_pair, LiteralSet, TheoryOracle};
use crate::syntax::{Literal, Term};

#[derive(Clone, Copy, Debug, Default)]
pub struct LiaOracle;

impl TheoryOracle for LiaOracle {
    fn name(&self) -> &str {
        "lia"
    }

    fn entails_unsat(&self, lits: &LiteralSet) -> bool {
        let normalized: LiteralSet = lits.iter().map(normalize_literal).collect();
        has_complementary_pair(&normalized)
    }
}

#[derive(Default)]
struct LinearForm {
    constant: BigInt,
    // printed atom -> (coefficient, atom)
    atoms: BTreeMap<String, (BigInt, Term)>,
}

impl LinearForm {
    fn add_atom(&mut self, coeff: BigInt, atom: Term) {
        let key = atom.to_string();
        let entry = self
            .atoms
            .entry(key)
            .or_insert_with(|| (BigInt::zero(), atom));
        entry.0 += coeff;
    }

    fn accumulate(&mut self, t: &Term, scale: &BigInt) {
        match t {
            Term::Int(n) => self.constant += n * scale,
            Term::Plus(a, b) => {
                self.accumulate(a, scale);
                self.accumulate(b, scale);
            }
            Term::ScalarMul { coeff, body } => self.accumulate(body, &(coeff * scale)),
            Term::Var(_) => self.add_atom(scale.clone(), t.clone()),
            Term::App { fun, args } => self.add_atom(
                scale.clone(),
                Term::App {
                    fun: fun.clone(),
                    args: args.iter().map(normalize_term).collect(),
                },
            ),
        }
    }

    fn into_term(self) -> Term {
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(Term::Int(self.constant));
        }
        for (coeff, atom) in self.atoms.into_values() {
            if coeff.is_zero() {
                continue;
            }
            parts.push(if coeff.is_one() {
                atom
            } else {
                Term::scalar(coeff, atom)
            });
        }
        parts
            .into_iter()
            .reduce(Term::plus)
            .unwrap_or_else(|| Term::int(0))
    }
}

/// Canonical linear form of a term.
pub fn normalize_term(t: &Term) -> Term {
    let mut form = LinearForm::default();
    form.accumulate(t, &BigInt::one());
    form.into_term()
}

pub fn normalize_literal(l: &Literal) -> Literal {
    Literal {
        negated: l.negated,
        pred: l.pred.clone(),
        args: l.args.iter().map(normalize_term).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Signature};
    use proptest::prelude::*;
    use std::collections::BTreeMap as Map;

    fn t(s: &str) -> Term {
        let sig = Signature::new().with_function("f", 2).with_function("g", 1);
        parse_term(s, &sig).unwrap()
    }

    #[test]
    fn arithmetic_terms_agree() {
        assert_eq!(normalize_term(&t("f(x+3,g(x))")), normalize_term(&t("f(1+(2+x),g(x))")));
        assert_eq!(normalize_term(&t("f(x+3,g(x))")).to_string(), "f(3+x,g(x))");
    }

    #[test]
    fn oracle_examples() {
        let o = LiaOracle;
        let s = |v: Vec<Literal>| v.into_iter().collect::<LiteralSet>();
        assert!(o.entails_unsat(&s(vec![
            Literal::atom("p", vec![t("f(x+3,g(x))")]),
            Literal::negated_atom("p", vec![t("f(1+(2+x),g(x))")]),
        ])));
        assert!(!o.entails_unsat(&s(vec![Literal::atom("p", vec![t("2*x")])])));
        assert!(o.entails_unsat(&s(vec![
            Literal::atom("p", vec![t("x+x")]),
            Literal::negated_atom("p", vec![t("2*x")]),
        ])));
        assert!(!o.entails_unsat(&s(vec![
            Literal::atom("p", vec![t("x+1")]),
            Literal::negated_atom("p", vec![t("x")]),
        ])));
    }

    #[test]
    fn zero_and_cancellation() {
        assert_eq!(normalize_term(&t("x+-1*x")).to_string(), "0");
        assert_eq!(normalize_term(&t("0*g(y)+2")).to_string(), "2");
        assert_eq!(normalize_term(&t("y+x")).to_string(), "x+y");
    }

    /// Independent evaluation: a term as a map from atom (printed, inner args
    /// normalized by the same procedure) to coefficient.
    fn poly(t: &Term, scale: i64, out: &mut Map<String, i64>) {
        match t {
            Term::Int(n) => *out.entry(String::new()).or_default() += scale * i64::try_from(n).unwrap(),
            Term::Plus(a, b) => {
                poly(a, scale, out);
                poly(b, scale, out);
            }
            Term::ScalarMul { coeff, body } => poly(body, scale * i64::try_from(coeff).unwrap(), out),
            other => *out.entry(normalize_term(other).to_string()).or_default() += scale,
        }
    }

    fn poly_of(t: &Term) -> Map<String, i64> {
        let mut m = Map::new();
        poly(t, 1, &mut m);
        m.retain(|_, v| *v != 0);
        m
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (-5i64..6).prop_map(Term::int),
            prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::var),
            Just(Term::constant("c")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
                (-3i64..4, inner.clone()).prop_map(|(c, b)| Term::scalar(c, b)),
                inner.clone().prop_map(|a| Term::app("g", vec![a])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(t in arb_term()) {
            let n = normalize_term(&t);
            prop_assert_eq!(normalize_term(&n), n);
        }

        #[test]
        fn normalization_matches_polynomial_map(t in arb_term()) {
            prop_assert_eq!(poly_of(&normalize_term(&t)), poly_of(&t));
        }

        #[test]
        fn normalization_commutes_with_substitution(t in arb_term(), u in arb_term()) {
            let lhs = normalize_term(&t.substitute("x", &u));
            let rhs = normalize_term(&normalize_term(&t).substitute("x", &normalize_term(&u)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
