//! cut6 to cut9, reduced to the primitive cuts through inversion.

use super::{pre, Inverted, Result, Transformer};
use crate::kernel::{negated_clause, literal_conjunction, Proof};
use crate::syntax::{fresh, Formula, Literal};

impl Transformer<'_> {
    /// cut6: from `Γ ⊢ N, Δ` and `Γ, N ⊢ Δ`, a proof of `Γ ⊢ Δ`.
    pub fn cut6(&mut self, n: &Formula, left: &Proof, right: &Proof) -> Result<Proof> {
        if self.positive(n)? {
            return Err(pre("cut6", format!("cut formula `{n}` is not negative")));
        }
        self.nested(|t| t.cut6_inner(n, left, right))
    }

    fn cut6_inner(&mut self, n: &Formula, left: &Proof, right: &Proof) -> Result<Proof> {
        let delta = right
            .conclusion
            .delta()
            .ok_or_else(|| pre("cut6", "right premiss must be unfocused"))?;
        let Some(d) = delta.get(0).cloned() else {
            self.log("cut6", "cut4");
            return self.cut4(left, right);
        };
        // Strip D from both sides with the same rule, then put it back.
        let y = match &d {
            Formula::Forall(x, _) => Some(fresh::fresh(x)),
            _ => None,
        };
        let ls = self.invert_formula(left, &d, y.as_deref())?;
        let rs = self.invert_formula(right, &d, y.as_deref())?;
        match (ls, rs) {
            (Inverted::Two(l1, l2), Inverted::Two(r1, r2)) => {
                let a = self.cut6(n, &l1, &r1)?;
                let b = self.cut6(n, &l2, &r2)?;
                Ok(Proof::and_minus(d, a, b)?)
            }
            (Inverted::One(l), Inverted::One(r)) => {
                let prem = self.cut6(n, &l, &r)?;
                Ok(match (&d, y) {
                    (Formula::OrN(..), _) => Proof::or_minus(d, prem)?,
                    (Formula::Forall(..), Some(y)) => Proof::forall_intro(d, y, prem)?,
                    _ => Proof::store(d, prem)?,
                })
            }
            _ => unreachable!("both sides invert the same formula"),
        }
    }

    /// cut7: from `Γ ⊢ A, Δ` and `Γ ⊢ ¬A, Δ`, a proof of `Γ ⊢ Δ`.
    pub fn cut7(&mut self, a: &Formula, left: &Proof, right: &Proof) -> Result<Proof> {
        self.nested(|t| {
            if t.positive(a)? {
                return t.cut7(&a.negate(), right, left);
            }
            // ¬A is positive or a literal, so one Store inversion gives Γ, A ⊢ Δ.
            let stored = t.invert_formula(right, &a.negate(), None)?.one()?;
            t.log("cut7", "cut6");
            t.cut6(a, left, &stored)
        })
    }

    /// cut8: from `Γ, l ⊢ Δ` and `Γ, ¬l ⊢ Δ`, a proof of `Γ ⊢ Δ`.
    pub fn cut8(&mut self, l: &Literal, left: &Proof, right: &Proof) -> Result<Proof> {
        let lf = Formula::Lit(l.clone());
        let pos = Proof::store(lf.clone(), right.clone())?;
        let neg = Proof::store(lf.negate(), left.clone())?;
        self.log("cut8", "cut7");
        self.nested(|t| t.cut7(&lf, &pos, &neg))
    }

    /// cut9: from `Γ, l₁ … lₙ ⊢ Δ` and `Γ, ¬l₁ ∨⁻ … ∨⁻ ¬lₙ ⊢ Δ`, a proof of
    /// `Γ ⊢ Δ`.
    pub fn cut9(&mut self, lits: &[Literal], left: &Proof, right: &Proof) -> Result<Proof> {
        let (Some(a), Some(_)) = (literal_conjunction(lits), negated_clause(lits)) else {
            return Err(pre("cut9", "needs at least one literal"));
        };
        let with_a = Proof::store(a.clone(), right.clone())?;
        // Store every ¬lᵢ, then rebuild the clause from its innermost disjunction.
        let mut with_clause = left.clone();
        for l in lits.iter().rev() {
            with_clause = Proof::store(Formula::Lit(l.negate()), with_clause)?;
        }
        for k in (0..lits.len().saturating_sub(1)).rev() {
            let sub = negated_clause(&lits[k..]).expect("non-empty");
            with_clause = Proof::or_minus(sub, with_clause)?;
        }
        self.log("cut9", "cut7");
        self.nested(|t| t.cut7(&a, &with_a, &with_clause))
    }
}
