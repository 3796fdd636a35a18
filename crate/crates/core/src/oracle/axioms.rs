//! Randomized check of the oracle contract.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LiteralSet, TheoryOracle};
use crate::syntax::{Literal, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Weakening,
    Contraction,
    Instantiation,
    Consistency,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [
        Axiom::Weakening,
        Axiom::Contraction,
        Axiom::Instantiation,
        Axiom::Consistency,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: Axiom,
    pub sample: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub samples: usize,
    /// Number of samples whose premiss held, per axiom (the non-vacuous checks).
    pub exercised: [usize; 4],
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn violations_of(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

fn show(s: &LiteralSet) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn term(&mut self, depth: u32) -> Term {
        let choice = if depth == 0 {
            self.rng.gen_range(0..3)
        } else {
            self.rng.gen_range(0..7)
        };
        match choice {
            0 => Term::var(*["x", "y"].choose(&mut self.rng).unwrap()),
            1 => Term::constant(*["a", "b"].choose(&mut self.rng).unwrap()),
            2 => Term::int(self.rng.gen_range(-2i64..4)),
            3 | 4 => Term::app("f", vec![self.term(depth - 1)]),
            5 => Term::plus(self.term(depth - 1), self.term(depth - 1)),
            _ => Term::scalar(self.rng.gen_range(-2i64..4), self.term(depth - 1)),
        }
    }

    fn literal(&mut self) -> Literal {
        let pred = *["p", "q", "r"].choose(&mut self.rng).unwrap();
        let args = if pred == "r" { vec![] } else { vec![self.term(2)] };
        Literal {
            negated: self.rng.gen_bool(0.5),
            pred: pred.to_string(),
            args,
        }
    }

    /// An arithmetically equal variant of `t`: reassociate, commute, or split
    /// scalars, but never change its value.
    fn rewrite(&mut self, t: &Term) -> Term {
        match t {
            Term::Plus(a, b) if self.rng.gen_bool(0.5) => Term::plus(self.rewrite(b), self.rewrite(a)),
            Term::Plus(a, b) => Term::plus(self.rewrite(a), self.rewrite(b)),
            Term::ScalarMul { coeff, body } if *coeff == 2.into() && self.rng.gen_bool(0.5) => {
                Term::plus(self.rewrite(body), self.rewrite(body))
            }
            Term::App { fun, args } => Term::app(fun.clone(), args.iter().map(|a| self.rewrite(a)).collect()),
            other if self.rng.gen_bool(0.2) => Term::plus(other.clone(), Term::int(0)),
            other => other.clone(),
        }
    }

    fn set(&mut self, max: usize) -> LiteralSet {
        let n = self.rng.gen_range(0..=max);
        let mut s: LiteralSet = (0..n).map(|_| self.literal()).collect();
        // bias towards UNSAT sets so the implications are exercised
        if !s.is_empty() && self.rng.gen_bool(0.5) {
            let pick = s.iter().nth(self.rng.gen_range(0..s.len())).unwrap().clone();
            let mut dual = pick.negate();
            dual.args = dual.args.iter().map(|a| self.rewrite(a)).collect();
            s.insert(dual);
        }
        s
    }
}

/// Sample `samples` literal sets from a seeded generator and check every
/// axiom's implication on each. Violations are reported, never raised.
pub fn run_suite(oracle: &dyn TheoryOracle, seed: u64, samples: usize) -> AxiomReport {
    let mut sampler = Sampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut report = AxiomReport {
        samples,
        ..AxiomReport::default()
    };
    let fail = |report: &mut AxiomReport, axiom: Axiom, sample: usize, witness: String| {
        report.violations.push(Violation {
            axiom,
            sample,
            witness,
        })
    };
    for i in 0..samples {
        let s = sampler.set(5);
        let base = oracle.entails_unsat(&s);

        // Weakening: ⊨ S  ⇒  ⊨ S, S'
        let extra = sampler.set(3);
        if base {
            report.exercised[0] += 1;
            let mut bigger = s.clone();
            bigger.extend(extra.iter().cloned());
            if !oracle.entails_unsat(&bigger) {
                fail(&mut report, Axiom::Weakening, i, format!("S={} S'={}", show(&s), show(&extra)));
            }
        }

        // Contraction: ⊨ S, A, A  ⇒  ⊨ S, A
        let a = sampler.literal();
        let twice: LiteralSet = s.iter().cloned().chain([a.clone(), a.clone()]).collect();
        let once: LiteralSet = s.iter().cloned().chain([a.clone()]).collect();
        if oracle.entails_unsat(&twice) {
            report.exercised[1] += 1;
            if !oracle.entails_unsat(&once) {
                fail(&mut report, Axiom::Contraction, i, format!("S={} A={a}", show(&s)));
            }
        }

        // Instantiation: ⊨ S  ⇒  ⊨ S[t/x]
        let x = *["x", "y"].choose(&mut sampler.rng).unwrap();
        let t = sampler.term(2);
        if base {
            report.exercised[2] += 1;
            let inst: LiteralSet = s.iter().map(|l| l.substitute(x, &t)).collect();
            if !oracle.entails_unsat(&inst) {
                fail(&mut report, Axiom::Instantiation, i, format!("S={} [{t}/{x}]", show(&s)));
            }
        }

        // Consistency: ⊨ S, p and ⊨ S, ¬p  ⇒  ⊨ S
        let p = if !s.is_empty() && sampler.rng.gen_bool(0.3) {
            let q = s.iter().nth(sampler.rng.gen_range(0..s.len())).unwrap().clone();
            q.negate()
        } else {
            sampler.literal()
        };
        let with_p: LiteralSet = s.iter().cloned().chain([p.clone()]).collect();
        let with_not_p: LiteralSet = s.iter().cloned().chain([p.negate()]).collect();
        if oracle.entails_unsat(&with_p) && oracle.entails_unsat(&with_not_p) {
            report.exercised[3] += 1;
            if !base {
                fail(&mut report, Axiom::Consistency, i, format!("S={} p={p}", show(&s)));
            }
        }
    }
    report
}
