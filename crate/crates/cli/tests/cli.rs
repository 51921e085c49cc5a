use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orthonet::formats::{parse_dstree, parse_relation_graph};
use orthonet::relations::relation_graph_of;
use serde_json::Value;
use tempfile::TempDir;

const TWO_COMPONENTS: &str = r#"{
  "genes": {"a1": "A", "b1": "B", "c1": "C", "d1": "D", "a2": "A", "b2": "B", "c2": "C", "d2": "D"},
  "edges": [["a1","b1"],["a1","c1"],["a1","d1"],["b1","c1"],["b1","d1"],["c1","d1"],
            ["a2","b2"],["a2","c2"],["a2","d2"],["b2","c2"]]
}"#;

/// Induced P4 a1 - b1 - c1 - d1.
const P4: &str = r#"{
  "genes": {"a1": "A", "b1": "B", "c1": "C", "d1": "D"},
  "edges": [["a1","b1"],["b1","c1"],["c1","d1"]]
}"#;

/// Two crossing transfers force t(tx) < t(hx) = t(ty) < t(hy) = t(tx).
const CYCLIC: &str = r#"{
  "nodes": ["r","x","y","tx","ty","hx","hy","A","B","C","D"], "root": "r",
  "arcs": [
    {"from":"r","to":"x","kind":"principal"}, {"from":"r","to":"y","kind":"principal"},
    {"from":"x","to":"tx","kind":"principal"}, {"from":"x","to":"A","kind":"principal"},
    {"from":"y","to":"ty","kind":"principal"}, {"from":"y","to":"B","kind":"principal"},
    {"from":"tx","to":"hx","kind":"principal"}, {"from":"hx","to":"C","kind":"principal"},
    {"from":"ty","to":"hy","kind":"principal"}, {"from":"hy","to":"D","kind":"principal"},
    {"from":"tx","to":"hy","kind":"secondary"}, {"from":"ty","to":"hx","kind":"secondary"}
  ],
  "leaves": {"A":"A","B":"B","C":"C","D":"D"}
}"#;

/// Species tree ((A,B),C) with one transfer from the A lineage onto C.
const TRANSFER: &str = r#"{
  "nodes": ["r","ab","t","h","A","B","C"], "root": "r",
  "arcs": [
    {"from":"r","to":"ab","kind":"principal"}, {"from":"r","to":"h","kind":"principal"},
    {"from":"ab","to":"t","kind":"principal"}, {"from":"ab","to":"B","kind":"principal"},
    {"from":"t","to":"A","kind":"principal"}, {"from":"h","to":"C","kind":"principal"},
    {"from":"t","to":"h","kind":"secondary"}
  ],
  "leaves": {"A":"A","B":"B","C":"C"}
}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthonet")).args(args.iter().map(|a| a.as_ref())).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn dstree_of_the_two_component_example() {
    let f = Fixture::new();
    let rel = f.file("two_components.json", TWO_COMPONENTS);
    let out = run(&[&"dstree", &"--relations", &p(&rel)]);
    assert_eq!(code(&out), 0);
    let d = parse_dstree(stdout(&out).trim()).unwrap();
    let want = parse_dstree("((a1@A,b1@B,c1@C,d1@D)S,(a2@A,((b2@B,c2@C)S,d2@D)D)S)D;").unwrap();
    assert_eq!(d.shape_key(), want.shape_key());
    let r = parse_relation_graph(TWO_COMPONENTS).unwrap();
    assert_eq!(relation_graph_of(&d), r);
}

#[test]
fn dstree_rejects_an_induced_p4() {
    let f = Fixture::new();
    let rel = f.file("p4.json", P4);
    let out = run(&[&"dstree", &"--relations", &p(&rel)]);
    assert_eq!(code(&out), 3);
    let out = run(&[&"--json", &"dstree", &"--relations", &p(&rel)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["representable"], false);
}

#[test]
fn cherry_on_two_leaves_costs_nothing() {
    let f = Fixture::new();
    let d = f.file("cherryS.nwk", "(a@A,b@B)S;\n");
    let json = f.file("twoleaf.json", r#"{"nodes":["r","A","B"],"root":"r","arcs":[{"from":"r","to":"A","kind":"principal"},{"from":"r","to":"B","kind":"principal"}],"leaves":{"A":"A","B":"B"}}"#);
    let nwk = f.file("twoleaf.nwk", "(A,B);\n");
    for net in [&json, &nwk] {
        let out = run(&[&"reconcile", &"--dstree", &p(&d), &"--network", &p(net)]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out), "0\n");
    }
}

#[test]
fn infeasible_reconciliation_exits_3() {
    let f = Fixture::new();
    // a speciation cannot separate two genes of one species without transfers
    let d = f.file("d.nwk", "(a@A,b@A)S;\n");
    let net = f.file("n.nwk", "(A,B);\n");
    let out = run(&[&"reconcile", &"--dstree", &p(&d), &"--network", &p(&net)]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "INFEASIBLE\n");
}

#[test]
fn witness_round_trips_through_verify() {
    let f = Fixture::new();
    let d = f.file("d.nwk", "((a@A,c@C)S,b@B)S;\n");
    let net = f.file("n.json", TRANSFER);
    let w = f.path("w.json");
    let out = run(&[&"reconcile", &"--dstree", &p(&d), &"--network", &p(&net), &"--witness", &p(&w)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1\n");
    let out = run(&[&"verify", &"--dstree", &p(&d), &"--network", &p(&net), &"--recon", &p(&w)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("VALID 1 transfers"));
    // the stored tree is used when --dstree is absent
    let out = run(&[&"--json", &"verify", &"--network", &p(&net), &"--recon", &p(&w)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["transfer_count"], 1);
}

#[test]
fn tampered_witness_exits_4() {
    let f = Fixture::new();
    let d = f.file("d.nwk", "((a@A,c@C)S,b@B)S;\n");
    let net = f.file("n.json", TRANSFER);
    let w = f.path("w.json");
    run(&[&"reconcile", &"--dstree", &p(&d), &"--network", &p(&net), &"--witness", &p(&w)]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    doc["alpha"]["b"] = serde_json::json!(["A"]);
    let bad = f.file("bad.json", &doc.to_string());
    let out = run(&[&"verify", &"--network", &p(&net), &"--recon", &p(&bad)]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).starts_with("INVALID"));
}

#[test]
fn time_check_reports_the_cycle() {
    let f = Fixture::new();
    let net = f.file("cyclic.json", CYCLIC);
    let out = run(&[&"time-check", &"--network", &p(&net)]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("tx") && text.contains("ty"), "{text}");
    let ok = f.file("ok.json", TRANSFER);
    let out = run(&[&"--json", &"time-check", &"--network", &p(&ok)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["times"]["t"], v["times"]["h"]);
}

#[test]
fn sconsist_emits_a_certificate() {
    let f = Fixture::new();
    let rel = f.file("two_components.json", TWO_COMPONENTS);
    let s = f.file("s.nwk", "((A,B),(C,D));\n");
    let (n, w) = (f.path("hw.json"), f.path("alpha.json"));
    let out = run(&[
        &"sconsist",
        &"--relations",
        &p(&rel),
        &"--species",
        &p(&s),
        &"--emit-network",
        &p(&n),
        &"--emit-witness",
        &p(&w),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("CONSISTENT"));
    let out = run(&[&"verify", &"--network", &p(&n), &"--recon", &p(&w), &"--relations", &p(&rel)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let p4 = f.file("p4.json", P4);
    let out = run(&[&"sconsist", &"--relations", &p(&p4), &"--species", &p(&s)]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "INCONSISTENT\n");
}

#[test]
fn check_network_lists_violations() {
    let f = Fixture::new();
    let good = f.file("good.json", TRANSFER);
    assert_eq!(code(&run(&[&"check-network", &"--network", &p(&good)])), 0);
    // secondary arc into an ancestor closes a directed cycle
    let bad =
        TRANSFER.replace(r#""from":"t","to":"h","kind":"secondary""#, r#""from":"t","to":"ab","kind":"secondary""#);
    let bad = f.file("bad.json", &bad);
    let out = run(&[&"--json", &"check-network", &"--network", &p(&bad)]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn reduction_pipelines() {
    let f = Fixture::new();
    let mcc = f.file("mcc.json", r#"{"classes": [["u1"], ["v1", "v2"]], "edges": [["u1", "v2"]]}"#);
    let act = f.path("act.json");
    let out = run(&[&"gen", &"act", &"--mcc", &p(&mcc)]);
    assert_eq!(code(&out), 0);
    fs::write(&act, stdout(&out)).unwrap();
    // k = 2 and a clique exists
    let out = run(&[&"oracle", &"act", &"--act", &p(&act), &"--bound", &"64"]);
    assert_eq!((code(&out), stdout(&out)), (0, "8\n".to_string()));

    let fas = f.file("fas.json", r#"{"vertices": ["x", "y"], "arcs": [["x", "y"], ["y", "x"]]}"#);
    let out = run(&[&"oracle", &"fas", &"--fas", &p(&fas)]);
    assert_eq!(stdout(&out), "1\n");
    let (d, n) = (f.path("d.nwk"), f.path("n.json"));
    let out =
        run(&[&"gen", &"tmstc", &"--fas", &p(&fas), &"--witness", &"--dstree-out", &p(&d), &"--network-out", &p(&n)]);
    assert_eq!(code(&out), 0);
    // m = 2, |A'| = 1
    let out = run(&[&"reconcile", &"--dstree", &p(&d), &"--network", &p(&n)]);
    assert_eq!(code(&out), 0);
    let cost: u64 = stdout(&out).trim().parse().unwrap();
    assert!(cost <= 5, "{cost}");
}

#[test]
fn random_output_is_seeded_and_thread_independent() {
    let a = run(&[&"--seed", &"7", &"gen", &"random", &"network", &"--size", &"4", &"--count", &"2"]);
    let b =
        run(&[&"--seed", &"7", &"--threads", &"1", &"gen", &"random", &"network", &"--size", &"4", &"--count", &"2"]);
    let c = run(&[&"--seed", &"8", &"gen", &"random", &"network", &"--size", &"4", &"--count", &"2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let f = Fixture::new();
    let d = f.file("d.nwk", "((a@A,c@C,b@B)S,(e@C,f@B)D,g@A)D;\n");
    let net = f.file("n.json", TRANSFER);
    let w1 = f.path("w1.json");
    let w2 = f.path("w2.json");
    run(&[&"--threads", &"1", &"reconcile", &"--dstree", &p(&d), &"--network", &p(&net), &"--witness", &p(&w1)]);
    run(&[&"--threads", &"4", &"reconcile", &"--dstree", &p(&d), &"--network", &p(&net), &"--witness", &p(&w2)]);
    assert_eq!(fs::read(&w1).unwrap(), fs::read(&w2).unwrap());
}

#[test]
fn exit_codes_for_bad_input() {
    let f = Fixture::new();
    assert_eq!(code(&run(&[&"frobnicate"])), 2);
    assert_eq!(code(&run(&[&"dstree", &"--relations", &f.path("missing.json")])), 5);
    let junk = f.file("junk.nwk", "((a@A,b@B)S;\n");
    let net = f.file("n.nwk", "(A,B);\n");
    assert_eq!(code(&run(&[&"reconcile", &"--dstree", &p(&junk), &"--network", &p(&net)])), 5);
    let wide = f.file("wide.nwk", "(a@A,b@B,c@A,d@B)D;\n");
    let out = run(&[&"--max-degree", &"3", &"reconcile", &"--dstree", &p(&wide), &"--network", &p(&net)]);
    assert_eq!(code(&out), 2);
}
