use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use commsync::automata::io::{parse_semi_automaton, serialize_dfa, serialize_semi_automaton};
use commsync::automata::{Alphabet, SemiAutomaton, StateSet};
use commsync::commutative::{decomposition_to_dfa, Decomposition};
use commsync::gadgets::sync_into_subset;
use commsync::random;
use commsync::vectors::VectorSetDoc;

fn commsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// {aa} ⧢ b(bb)*: states 2·(a count) + (b parity), 6 is the trap
const AA_ODD_B: &str = r#"{"alphabet":["a","b"],"states":7,"initial":0,"finals":[5],"transitions":[
  {"from":0,"symbol":"a","to":2},{"from":0,"symbol":"b","to":1},
  {"from":1,"symbol":"a","to":3},{"from":1,"symbol":"b","to":0},
  {"from":2,"symbol":"a","to":4},{"from":2,"symbol":"b","to":3},
  {"from":3,"symbol":"a","to":5},{"from":3,"symbol":"b","to":2},
  {"from":4,"symbol":"a","to":6},{"from":4,"symbol":"b","to":5},
  {"from":5,"symbol":"a","to":6},{"from":5,"symbol":"b","to":4},
  {"from":6,"symbol":"a","to":6},{"from":6,"symbol":"b","to":6}]}"#;

// a b*, partial
const A_B_STAR: &str = r#"{"alphabet":["a","b"],"states":2,"initial":0,"finals":[1],"transitions":[
  {"from":0,"symbol":"a","to":1},{"from":1,"symbol":"b","to":1}]}"#;

#[test]
fn classify_example_language() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "aab.json", AA_ODD_B);
    let out = commsync(&["classify", "--constraint", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim_end().lines().last(), Some("NP-complete"));

    let out = commsync(&["classify", "--constraint", s(&f), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["commutative"], true);
    assert_eq!(v["complexity"], "NP-complete");
    assert_eq!(v["vectors"], serde_json::json!([[2, "inf"]]));
    assert!(v.get("components").is_some() && v.get("maximal_vectors").is_some());
}

#[test]
fn non_commutative_constraint_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ab.json", A_B_STAR);
    assert_eq!(commsync(&["classify", "--constraint", s(&f)]).status.code(), Some(1));
    assert_eq!(commsync(&["check-commutative", "--constraint", s(&f)]).status.code(), Some(1));
    let g = write(dir.path(), "aab.json", AA_ODD_B);
    let ok = commsync(&["check-commutative", "--constraint", s(&g)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "commutative");
}

#[test]
fn solve_epsilon_on_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"alphabet":["a"],"states":1,"transitions":[{"from":0,"symbol":"a","to":0}]}"#,
    );
    let b = write(dir.path(), "b.json", r#"{"alphabet":["a"],"states":1,"initial":0,"finals":[0],"transitions":[]}"#);
    let out = commsync(&["solve", "--input", s(&a), "--constraint", s(&b), "--method", "exact", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["witness"], "");
    assert_eq!(v["method"], "exact");
}

#[test]
fn solve_no_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let perm = SemiAutomaton::from_maps(Alphabet::letters(2).unwrap(), &[vec![1, 0], vec![0, 1]]).unwrap();
    let a = write(dir.path(), "a.json", &serialize_semi_automaton(&perm));
    let v = write(dir.path(), "v.json", r#"{"alphabet":["a","b"],"vectors":[["inf","inf"]]}"#);
    let out = commsync(&["solve", "--input", s(&a), "--from-vectors", s(&v), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["answer"], "no");
    assert!(r.get("witness").is_none());
}

#[test]
fn pspace_gadget_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..8 {
        let sa = random::semi_automaton(&mut rng, 3, 2);
        let input = write(dir.path(), "sa.json", &serialize_semi_automaton(&sa));
        let out_dir = dir.path().join(format!("d{round}"));
        let out = commsync(&[
            "gadget", "pspace", "--input", s(&input), "--subset", "0,2", "--m", "1", "--out", s(&out_dir),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        for f in ["automaton.json", "constraint.json", "names.json"] {
            assert!(out_dir.join(f).exists());
        }
        let gadget = parse_semi_automaton(&fs::read_to_string(out_dir.join("automaton.json")).unwrap()).unwrap();
        assert_eq!(gadget.num_states(), 4);
        let solved = commsync(&[
            "solve",
            "--input",
            s(&out_dir.join("automaton.json")),
            "--constraint",
            s(&out_dir.join("constraint.json")),
            "--method",
            "exact",
        ]);
        let oracle = sync_into_subset(&sa, StateSet::from_states([0, 2])).unwrap().is_some();
        assert_eq!(solved.status.code(), Some(if oracle { 0 } else { 1 }));
    }
}

#[test]
fn np_gadget_with_dot() {
    let dir = tempfile::tempdir().unwrap();
    let even = commsync::gadgets::unary_dfa(vec![1, 0], vec![0]).unwrap();
    let odd = commsync::gadgets::unary_dfa(vec![1, 0], vec![1]).unwrap();
    let a = write(dir.path(), "even.json", &serialize_dfa(&even));
    let b = write(dir.path(), "odd.json", &serialize_dfa(&odd));
    let out_dir = dir.path().join("g");
    let out = commsync(&["gadget", "np-i", "--automata", s(&a), s(&b), "--m", "2", "--out", s(&out_dir), "--dot"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("automaton.dot").exists());
    let names: Vec<String> = serde_json::from_str(&fs::read_to_string(out_dir.join("names.json")).unwrap()).unwrap();
    assert_eq!(names, ["Q1.0", "Q1.1", "Q2.0", "Q2.1", "t1", "t2", "r1"]);
    let solved = commsync(&[
        "solve",
        "--input",
        s(&out_dir.join("automaton.json")),
        "--constraint",
        s(&out_dir.join("constraint.json")),
    ]);
    assert_eq!(solved.status.code(), Some(1));
}

#[test]
fn pinned_gadget() {
    let dir = tempfile::tempdir().unwrap();
    let all = commsync::gadgets::unary_dfa(vec![0], vec![0]).unwrap();
    let a = write(dir.path(), "all.json", &serialize_dfa(&all));
    let n = write(dir.path(), "n.json", r#"{"alphabet":["x","y","z"],"vectors":[["inf",2,0],[0,1,"inf"]]}"#);
    let out_dir = dir.path().join("p");
    let out = commsync(&[
        "gadget", "np-i", "--automata", s(&a), "--m", "2", "--with-pchains", s(&n), "--pin", "0", "--out", s(&out_dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dec = Decomposition::from_json(&fs::read_to_string(out_dir.join("constraint.json")).unwrap()).unwrap();
    assert_eq!(dec.components().len(), 2);
    let missing_pin = commsync(&["gadget", "np-i", "--automata", s(&a), "--m", "2", "--with-pchains", s(&n), "--out", s(&out_dir)]);
    assert_eq!(missing_pin.status.code(), Some(2));
}

#[test]
fn conflicting_flags_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "aab.json", AA_ODD_B);
    let both = commsync(&["classify", "--constraint", s(&f), "--from-vectors", s(&f)]);
    assert_eq!(both.status.code(), Some(2));
    let mixed = commsync(&["gadget", "np-i", "--automata", s(&f), "--input", s(&f), "--subset", "0", "--m", "2", "--out", "x"]);
    assert_eq!(mixed.status.code(), Some(2));
    let none = commsync(&["gadget", "pspace", "--m", "1", "--out", s(dir.path())]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn errors_exit_two() {
    let missing = commsync(&["classify", "--constraint", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("cannot read"));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"alphabet":["a"],"states":1}"#);
    assert_eq!(commsync(&["classify", "--constraint", s(&bad)]).status.code(), Some(2));
    let big = write(
        dir.path(),
        "big.json",
        &serialize_semi_automaton(&SemiAutomaton::from_maps(Alphabet::letters(1).unwrap(), &[vec![0; 21]]).unwrap()),
    );
    let eps = write(dir.path(), "eps.json", r#"{"alphabet":["a"],"vectors":[[0]]}"#);
    let guarded = commsync(&["solve", "--input", s(&big), "--constraint", s(&eps), "--method", "exact"]);
    assert_eq!(guarded.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&guarded.stderr).contains("too large"));
}

#[test]
fn vectors_and_automaton_classify_alike() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..25 {
        let k = 1 + i % 3;
        let alphabet = Alphabet::letters(k).unwrap();
        let set = random::vector_set(&mut rng, k, 1 + i % 3, 3, 0.4);
        let v = write(dir.path(), "v.json", &serde_json::to_string(&VectorSetDoc::new(&alphabet, &set)).unwrap());
        let d = decomposition_to_dfa(&set.to_decomposition(&alphabet).unwrap()).unwrap();
        let a = write(dir.path(), "d.json", &serialize_dfa(&d));
        let from_vectors = commsync(&["classify", "--from-vectors", s(&v), "--json"]);
        let from_dfa = commsync(&["classify", "--constraint", s(&a), "--json"]);
        let cv: Value = serde_json::from_slice(&from_vectors.stdout).unwrap();
        let cd: Value = serde_json::from_slice(&from_dfa.stdout).unwrap();
        assert_eq!(cv["complexity"], cd["complexity"], "vector set {i}");
        assert_eq!(cv["maximal_vectors"], cd["maximal_vectors"], "vector set {i}");
    }
}

#[test]
fn decompose_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "aab.json", AA_ODD_B);
    let out = commsync(&["decompose", "--constraint", s(&f), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let dec = Decomposition::from_json(&stdout(&out)).unwrap();
    assert_eq!(dec.components().len(), 1);
    let again = commsync(&["decompose", "--constraint", s(&f), "--json"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn fuzz_auto_agrees_with_exact() {
    let out = commsync(&["fuzz", "--seed", "42", "--cases", "500"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 disagreements"));
    let again = commsync(&["fuzz", "--seed", "42", "--cases", "500"]);
    assert_eq!(out.stdout, again.stdout);
    assert_eq!(commsync(&["fuzz", "--cases", "5"]).status.code(), Some(2));
}
