//! Every golden problem proves, and the proof checks.

use std::fs;
use std::path::PathBuf;

use lkt::kernel::{check, Sequent};
use lkt::oracle::SyntacticOracle;
use lkt::search::{prove, SearchConfig};
use lkt::syntax::parse_problem;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "lkt"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 25);
}

#[test]
fn every_corpus_problem_proves_and_checks() {
    let mut failed = Vec::new();
    for (name, src) in corpus() {
        let problem = parse_problem(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
        let goal = Sequent::goal(problem.goal_formula().unwrap());
        let out = prove(&goal, &problem.signature, &SyntacticOracle, &SearchConfig::default()).unwrap();
        match out.proof() {
            Some(pf) => {
                let report = check(pf, &problem.signature, &SyntacticOracle);
                if !report.ok() {
                    failed.push(format!("{name}: invalid proof {:?}", report.failures));
                }
            }
            None => failed.push(format!("{name}: not proved ({})", out.stats())),
        }
    }
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn flipping_any_predicate_never_disagrees() {
    for (name, src) in corpus() {
        let problem = parse_problem(&src).unwrap();
        let preds: Vec<String> = problem.signature.predicates().map(|(p, _)| p.to_string()).collect();
        for p in preds {
            let r = lkt::flip::flip(&problem, &p, &SyntacticOracle, &SearchConfig::default()).unwrap();
            assert_ne!(r.verdict, lkt::flip::Verdict::Disagree, "{name} {p}\n{r}");
        }
    }
}
