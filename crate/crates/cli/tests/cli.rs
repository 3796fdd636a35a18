//! End-to-end runs of the `lkt` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use lkt::kernel::{Multiset, Proof, ProofDocument, Rule, Sequent};
use lkt::oracle::SyntacticOracle;
use lkt::search::{prove, SearchConfig};
use lkt::syntax::{parse_formula, parse_problem, Literal, Term};
use tempfile::TempDir;

const ARITH: &str = "pred p 1 +\nfun f 2\nfun g 1\n\
    goal forall x. exists y. ~p(f(x+3,g(x))) \\/- p(f(1+(2+y),g(y)))\n";

fn lkt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lkt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.lkt"))
        .to_string_lossy()
        .into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn prove_to(dir: &TempDir, problem: &str, name: &str) -> String {
    let out = path(dir, name);
    let o = lkt(&["prove", problem, "--emit-proof", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    out
}

fn load(p: &str) -> ProofDocument {
    ProofDocument::from_json(&fs::read_to_string(p).unwrap()).unwrap()
}

fn save(doc: &ProofDocument, p: &str) {
    fs::write(p, doc.to_json()).unwrap();
}

#[test]
fn prove_then_check_round_trip() {
    let dir = TempDir::new().unwrap();
    let em = corpus("em_prop");
    let proof = prove_to(&dir, &em, "em.proof.json");
    let o = lkt(&["check", &em, "--proof", &proof, "--theory", "syntactic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "VALID");
}

#[test]
fn exhausted_search_exits_one() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "lone.lkt");
    fs::write(&file, "pred p 0 +\ngoal p\n").unwrap();
    let o = lkt(&["prove", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(first_line(&o), "EXHAUSTED");
}

#[test]
fn arithmetic_example_needs_the_lia_oracle() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "arith.lkt");
    fs::write(&file, ARITH).unwrap();
    let bounds = ["--max-decisions", "2", "--max-witness-depth", "1"];
    let with = |theory: &str| {
        let mut args = vec!["prove", file.as_str(), "--theory", theory];
        args.extend(bounds);
        lkt(&args)
    };
    let lia = with("lia");
    assert_eq!((lia.status.code(), first_line(&lia).as_str()), (Some(0), "PROVED"));
    let syn = with("syntactic");
    assert_eq!((syn.status.code(), first_line(&syn).as_str()), (Some(1), "EXHAUSTED"));
}

#[test]
fn corrupted_witness_is_invalid_with_a_path() {
    let dir = TempDir::new().unwrap();
    let drinker = corpus("drinker");
    let proof = prove_to(&dir, &drinker, "d.proof.json");
    let mut doc = load(&proof);
    let target = doc
        .proof
        .paths()
        .into_iter()
        .find(|p| matches!(doc.proof.node(p).unwrap().rule, Rule::ExistsIntro { .. }))
        .unwrap();
    let node = doc.proof.node_mut(&target).unwrap();
    node.rule = Rule::ExistsIntro {
        witness: Term::var("nobody"),
    };
    save(&doc, &proof);
    let o = lkt(&["check", &drinker, "--proof", &proof]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(first_line(&o), "INVALID");
    assert!(text.contains(&format!("{target} ExistsIntro")), "{text}");
}

#[test]
fn check_rejects_a_proof_of_another_goal() {
    let dir = TempDir::new().unwrap();
    let proof = prove_to(&dir, &corpus("em_prop"), "em.proof.json");
    let o = lkt(&["check", &corpus("em_positive_or"), "--proof", &proof]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(first_line(&o), "INVALID");
}

fn cut8_document(dir: &TempDir) -> String {
    // Split ⊢ q ∨⁻ ¬q on p.
    let sig = parse_problem("pred p 0 +\npred q 0 +\ngoal q").unwrap().signature;
    let em = parse_formula("q \\/- ~q", &sig).unwrap();
    let half = |hyp: &str| {
        let goal = Sequent::unfocused(
            Multiset::new().with(parse_formula(hyp, &sig).unwrap()),
            Multiset::new().with(em.clone()),
        );
        let out = prove(&goal, &sig, &SyntacticOracle, &SearchConfig::default()).unwrap();
        out.proof().unwrap().clone()
    };
    let e = Proof::cut8(Literal::atom("p", vec![]), half("p"), half("~p")).unwrap();
    let out = path(dir, "cut.proof.json");
    save(&ProofDocument::new(sig, e), &out);
    out
}

#[test]
fn elim_removes_cuts_and_output_checks() {
    let dir = TempDir::new().unwrap();
    let cut = cut8_document(&dir);
    let doc = load(&cut);
    assert!(!doc.proof.is_cut_free());
    let out = path(&dir, "out.proof.json");
    let trace = path(&dir, "trace.txt");
    let o = lkt(&["elim", "--proof", &cut, "--theory", "syntactic", "-o", &out, "--trace", &trace]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(first_line(&o), "ELIMINATED");
    let cut_free = load(&out);
    assert!(cut_free.proof.is_cut_free());
    assert_eq!(cut_free.proof.conclusion, doc.proof.conclusion);
    assert!(fs::read_to_string(&trace).unwrap().contains("cut8"));
}

#[test]
fn elim_reports_an_invalid_input() {
    let dir = TempDir::new().unwrap();
    let cut = cut8_document(&dir);
    let mut doc = load(&cut);
    doc.proof.rule = Rule::Cut8 {
        lit: Literal::atom("q", vec![]),
    };
    save(&doc, &cut);
    let o = lkt(&["elim", "--proof", &cut, "-o", &path(&dir, "x.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(first_line(&o), "INVALID");
    assert!(stdout(&o).contains("at /"));
}

#[test]
fn axioms_report_zero_violations() {
    for theory in ["syntactic", "lia"] {
        let o = lkt(&["axioms", "--theory", theory, "--seed", "0", "--samples", "10000"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(first_line(&o), "VIOLATIONS=0");
    }
}

#[test]
fn flip_verdicts() {
    let o = lkt(&["flip", &corpus("em_prop"), "p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("AGREE"));

    let bounded = lkt(&["flip", &corpus("em_positive_or"), "p", "--max-decisions", "1"]);
    assert_eq!(bounded.status.code(), Some(0));
    assert_eq!(stdout(&bounded).lines().last(), Some("INCONCLUSIVE(bounds)"));
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(lkt(&["flip", &corpus("em_prop"), "nope"]).status.code(), Some(2));
    assert_eq!(lkt(&["prove", "/nonexistent/file.lkt"]).status.code(), Some(2));
    assert_eq!(lkt(&["prove"]).status.code(), Some(2));
    assert_eq!(lkt(&["axioms", "--theory", "astrology"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.lkt");
    fs::write(&bad, "pred p 0 +\ngoal ~(p /\\+ p)\n").unwrap();
    assert_eq!(lkt(&["prove", &bad]).status.code(), Some(2));
}
