//! Predicate-polarity flipping: an empirical check that provability does not
//! depend on the polarity chosen for a predicate.
//!
//! Only `auto` connectives follow the flip; explicitly signed connectives
//! keep their polarity.

use std::fmt;

use thiserror::Error;

use crate::kernel::Sequent;
use crate::oracle::TheoryOracle;
use crate::search::{prove, SearchConfig, SearchError, SearchOutcome, SearchStats};
use crate::syntax::{ProblemFile, SignatureError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Both versions proved.
    Agree,
    /// One version proved, the other exhausted without hitting a bound.
    Disagree,
    /// Anything else: some side ran out of bounds, or neither proved.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Agree => "AGREE",
            Verdict::Disagree => "DISAGREE",
            Verdict::Inconclusive => "INCONCLUSIVE(bounds)",
        })
    }
}

/// How one side of the experiment ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Proved(SearchStats),
    Exhausted { stats: SearchStats, truncated: bool },
}

impl Side {
    fn of(out: &SearchOutcome) -> Side {
        match out {
            SearchOutcome::Proved { stats, .. } => Side::Proved(*stats),
            SearchOutcome::Exhausted { stats, truncated } => Side::Exhausted {
                stats: *stats,
                truncated: *truncated,
            },
        }
    }

    /// True for a proof or an exhaustion that never hit a bound.
    pub fn conclusive(&self) -> bool {
        !matches!(self, Side::Exhausted { truncated: true, .. })
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Proved(s) => write!(f, "PROVED ({s})"),
            Side::Exhausted { stats, truncated: true } => write!(f, "EXHAUSTED ({stats}, bounds hit)"),
            Side::Exhausted { stats, truncated: false } => write!(f, "EXHAUSTED ({stats}, complete)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlipReport {
    pub predicate: String,
    pub original: Side,
    pub flipped: Side,
    pub verdict: Verdict,
}

impl fmt::Display for FlipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "original: {}", self.original)?;
        writeln!(f, "flipped {}: {}", self.predicate, self.flipped)?;
        write!(f, "{}", self.verdict)
    }
}

#[derive(Debug, Error)]
pub enum FlipError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

pub fn verdict(original: Side, flipped: Side) -> Verdict {
    match (original, flipped) {
        (Side::Proved(_), Side::Proved(_)) => Verdict::Agree,
        (a, b) if a.conclusive() && b.conclusive() && matches!(a, Side::Proved(_)) != matches!(b, Side::Proved(_)) => {
            Verdict::Disagree
        }
        _ => Verdict::Inconclusive,
    }
}

/// The problem with `pred`'s polarity reversed and `auto` connectives
/// re-resolved.
pub fn flipped_problem(problem: &ProblemFile, pred: &str) -> Result<ProblemFile, SignatureError> {
    let mut out = problem.clone();
    let polarity = out.signature.predicate_polarity(pred)?;
    out.signature.set_polarity(pred, polarity.flip())?;
    Ok(out)
}

/// Prove the goal as given and with `pred` flipped, and compare.
pub fn flip(
    problem: &ProblemFile,
    pred: &str,
    oracle: &dyn TheoryOracle,
    cfg: &SearchConfig,
) -> Result<FlipReport, FlipError> {
    let other = flipped_problem(problem, pred)?;
    let run = |p: &ProblemFile| -> Result<Side, FlipError> {
        let goal = Sequent::goal(p.goal_formula()?);
        Ok(Side::of(&prove(&goal, &p.signature, oracle, cfg)?))
    };
    let original = run(problem)?;
    let flipped = run(&other)?;
    Ok(FlipReport {
        predicate: pred.to_string(),
        original,
        flipped,
        verdict: verdict(original, flipped),
    })
}
