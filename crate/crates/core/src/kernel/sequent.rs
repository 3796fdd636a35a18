use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::oracle::LiteralSet;
use crate::syntax::{Formula, Literal, Signature, SignatureError, Term};

/// Multiset of formulae kept sorted by the canonical (alpha-normalized) order,
/// so equality is alpha-equivalence of the elements up to permutation.
#[derive(Clone, Debug, Default)]
pub struct Multiset {
    items: Vec<(Formula, Formula)>,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: Formula) {
        let key = f.canonical();
        let at = self.items.partition_point(|(k, _)| *k <= key);
        self.items.insert(at, (key, f));
    }

    pub fn with(mut self, f: Formula) -> Self {
        self.insert(f);
        self
    }

    /// Position of the first element alpha-equivalent to `f`.
    pub fn position(&self, f: &Formula) -> Option<usize> {
        let key = f.canonical();
        let at = self.items.partition_point(|(k, _)| *k < key);
        (at < self.items.len() && self.items[at].0 == key).then_some(at)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.position(f).is_some()
    }

    pub fn count(&self, f: &Formula) -> usize {
        let key = f.canonical();
        self.items.iter().filter(|(k, _)| *k == key).count()
    }

    /// Remove one copy of `f`; `false` if absent.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.position(f) {
            Some(i) => {
                self.items.remove(i);
                true
            }
            None => false,
        }
    }

    pub fn without(&self, f: &Formula) -> Option<Multiset> {
        let mut m = self.clone();
        m.remove_one(f).then_some(m)
    }

    pub fn remove_at(&mut self, i: usize) -> Formula {
        self.items.remove(i).1
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        self.items.get(i).map(|(_, f)| f)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.items.iter().map(|(_, f)| f)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.iter().for_each(|f| f.collect_free_vars(&mut out));
        out
    }

    pub fn has_free(&self, x: &str) -> bool {
        self.iter().any(|f| f.has_free(x))
    }

    pub fn substitute(&self, x: &str, t: &Term) -> Multiset {
        self.iter().map(|f| f.substitute(x, t)).collect()
    }

    /// `atm(Γ)`: the literal elements, multiplicity kept.
    pub fn atoms(&self) -> Vec<Literal> {
        self.iter().filter_map(|f| f.as_literal().cloned()).collect()
    }

    /// The literal set handed to the decision procedure.
    pub fn atom_set(&self) -> LiteralSet {
        self.iter().filter_map(|f| f.as_literal().cloned()).collect()
    }

    /// Whether every element may live left of the turnstile: negative
    /// formulae and positive literals (i.e. everything but a positive
    /// compound).
    pub fn first_ill_formed(&self, sig: &Signature) -> Result<Option<&Formula>, SignatureError> {
        for f in self.iter() {
            if !f.is_literal() && f.is_positive(sig)? {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }
}

impl PartialEq for Multiset {
    fn eq(&self, other: &Self) -> bool {
        self.items.len() == other.items.len()
            && self.items.iter().zip(&other.items).all(|(a, b)| a.0 == b.0)
    }
}

impl Eq for Multiset {}

impl FromIterator<Formula> for Multiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut items: Vec<(Formula, Formula)> = iter.into_iter().map(|f| (f.canonical(), f)).collect();
        items.sort_by(|a, b| a.0.cmp(&b.0));
        Multiset { items }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Formula>::deserialize(d)?.into_iter().collect())
    }
}

/// `Γ ⊢ Δ` or `Γ ⊢ [A]`. Equality is up to permutation and alpha-renaming.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sequent {
    Unfocused { gamma: Multiset, delta: Multiset },
    Focused { gamma: Multiset, focus: Formula },
}

impl Sequent {
    pub fn unfocused(gamma: Multiset, delta: Multiset) -> Sequent {
        Sequent::Unfocused { gamma, delta }
    }

    pub fn focused(gamma: Multiset, focus: Formula) -> Sequent {
        Sequent::Focused { gamma, focus }
    }

    /// `⊢ goal` with empty context.
    pub fn goal(f: Formula) -> Sequent {
        Sequent::unfocused(Multiset::new(), Multiset::new().with(f))
    }

    pub fn gamma(&self) -> &Multiset {
        match self {
            Sequent::Unfocused { gamma, .. } | Sequent::Focused { gamma, .. } => gamma,
        }
    }

    pub fn gamma_mut(&mut self) -> &mut Multiset {
        match self {
            Sequent::Unfocused { gamma, .. } | Sequent::Focused { gamma, .. } => gamma,
        }
    }

    pub fn delta(&self) -> Option<&Multiset> {
        match self {
            Sequent::Unfocused { delta, .. } => Some(delta),
            Sequent::Focused { .. } => None,
        }
    }

    pub fn focus(&self) -> Option<&Formula> {
        match self {
            Sequent::Focused { focus, .. } => Some(focus),
            Sequent::Unfocused { .. } => None,
        }
    }

    pub fn is_focused(&self) -> bool {
        matches!(self, Sequent::Focused { .. })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = self.gamma().free_vars();
        match self {
            Sequent::Unfocused { delta, .. } => out.extend(delta.free_vars()),
            Sequent::Focused { focus, .. } => focus.collect_free_vars(&mut out),
        }
        out
    }

    pub fn has_free(&self, x: &str) -> bool {
        self.gamma().has_free(x)
            || match self {
                Sequent::Unfocused { delta, .. } => delta.has_free(x),
                Sequent::Focused { focus, .. } => focus.has_free(x),
            }
    }

    pub fn substitute(&self, x: &str, t: &Term) -> Sequent {
        match self {
            Sequent::Unfocused { gamma, delta } => {
                Sequent::unfocused(gamma.substitute(x, t), delta.substitute(x, t))
            }
            Sequent::Focused { gamma, focus } => {
                Sequent::focused(gamma.substitute(x, t), focus.substitute(x, t))
            }
        }
    }

    pub fn with_gamma(&self, gamma: Multiset) -> Sequent {
        match self {
            Sequent::Unfocused { delta, .. } => Sequent::unfocused(gamma, delta.clone()),
            Sequent::Focused { focus, .. } => Sequent::focused(gamma, focus.clone()),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        let right: Box<dyn Iterator<Item = &Formula>> = match self {
            Sequent::Unfocused { delta, .. } => Box::new(delta.iter()),
            Sequent::Focused { focus, .. } => Box::new(std::iter::once(focus)),
        };
        self.gamma().iter().chain(right)
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Sequent::Unfocused { gamma: g1, delta: d1 }, Sequent::Unfocused { gamma: g2, delta: d2 }) => {
                g1 == g2 && d1 == d2
            }
            (Sequent::Focused { gamma: g1, focus: f1 }, Sequent::Focused { gamma: g2, focus: f2 }) => {
                g1 == g2 && f1.alpha_eq(f2)
            }
            _ => false,
        }
    }
}

impl Eq for Sequent {}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequent::Unfocused { gamma, delta } => write!(f, "{gamma} ⊢ {delta}"),
            Sequent::Focused { gamma, focus } => write!(f, "{gamma} ⊢ [{focus}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(p: &str) -> Formula {
        Formula::atom(p, vec![])
    }

    #[test]
    fn atm_keeps_literals_with_multiplicity() {
        let g: Multiset = [lit("p"), Formula::neg_atom("q", vec![]), Formula::and_n(lit("a"), lit("b"))]
            .into_iter()
            .collect();
        assert_eq!(g.atoms().len(), 2);
        assert!(Multiset::new().atoms().is_empty());
        let pp: Multiset = [lit("p"), lit("p")].into_iter().collect();
        assert_eq!(pp.atoms(), vec![Literal::atom("p", vec![]), Literal::atom("p", vec![])]);
        assert_eq!(pp.atom_set().len(), 1);
    }

    #[test]
    fn multiset_equality_is_order_and_alpha_insensitive() {
        let a: Multiset = [lit("p"), Formula::forall("x", Formula::atom("r", vec![Term::var("x")]))]
            .into_iter()
            .collect();
        let b: Multiset = [Formula::forall("y", Formula::atom("r", vec![Term::var("y")])), lit("p")]
            .into_iter()
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, b.clone().with(lit("p")));
        let mut c = b.clone().with(lit("p"));
        assert_eq!(c.count(&lit("p")), 2);
        assert!(c.remove_one(&lit("p")));
        assert_eq!(a, c);
    }

    #[test]
    fn json_round_trip() {
        let s = Sequent::focused(
            [lit("p"), Formula::neg_atom("q", vec![])].into_iter().collect(),
            Formula::or_p(lit("p"), lit("q")),
        );
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Sequent>(&j).unwrap(), s);
    }
}
