use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIG1: &str = "\
# two roots sharing v3 and v4
vertex r1
vertex r2
vertex v1
vertex v2
vertex v3
vertex v4
vertex v5
vertex v6
vertex v7
edge r1 v1
edge r1 v2
edge r1 v5
edge r2 v6
edge r2 v7
edge v2 v5
arc r1 v3
arc r1 v4
arc r2 v4
arc v4 v3
arc v1 v3
root r1
root r2
";

const INFEAS3: &str = "vertex r1\nvertex r2\nvertex x\nedge x r1\nedge x r2\nroot r1\nroot r2\n";

fn mixpack(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mixpack"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &[u8]) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn fixture(dir: &TempDir, text: &str) -> PathBuf {
    write(dir, "g.mg", text.as_bytes())
}

#[test]
fn solve_fig1_then_check() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, FIG1);
    let out = mixpack(&[&"solve", &g]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["trees"].as_array().unwrap().len(), 2);
    let arc = &doc["trees"][0]["arcs"][0];
    for field in ["id", "tail", "head", "origin"] {
        assert!(arc.get(field).is_some(), "missing {field}");
    }

    let p = write(&dir, "p.json", &out.stdout);
    let ok = mixpack(&[&"check", &g, &p]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    // hand tree 1's first element to tree 2 as well
    let mut bad = doc.clone();
    let first = bad["trees"][0]["arcs"][0].clone();
    bad["trees"][1]["arcs"].as_array_mut().unwrap().push(first);
    let p = write(&dir, "bad.json", bad.to_string().as_bytes());
    let rejected = mixpack(&[&"check", &g, &p]);
    assert_eq!(rejected.status.code(), Some(4));
    assert!(stdout(&rejected).contains("used twice"));
}

#[test]
fn solve_infeas3_then_certify() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, INFEAS3);
    let out = mixpack(&[&"solve", &g]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!((doc["format"].clone(), doc["deficit"].clone()), (1.into(), 2.into()));
    let c = write(&dir, "c.json", &out.stdout);
    let ok = mixpack(&[&"certify", &g, &c]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "certificate accepted: 2 < 4\n");

    let mut weak = doc;
    weak["bisets"].as_array_mut().unwrap().pop();
    let c = write(&dir, "weak.json", weak.to_string().as_bytes());
    let rejected = mixpack(&[&"certify", &g, &c]);
    assert_eq!(rejected.status.code(), Some(4));
    assert_eq!(stdout(&rejected), "certificate rejected: not violated: 2 >= 2\n");

    let c = write(&dir, "junk.json", b"{");
    assert_eq!(mixpack(&[&"certify", &g, &c]).status.code(), Some(1));
}

#[test]
fn atoms_text_and_json() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, FIG1);
    let out = mixpack(&[&"atoms", &g]);
    assert_eq!(
        stdout(&out),
        "atom 1: {r1, v1, v2, v5} R={1}\natom 2: {v3, v4} R={1, 2}\natom 3: {r2, v6, v7} R={2}\n"
    );
    let doc = json(&mixpack(&[&"atoms", &g, &"--format=json"]));
    assert_eq!(doc["format"], 1);
    let roots: Vec<serde_json::Value> = doc["atoms"].as_array().unwrap().iter().map(|a| a["roots"].clone()).collect();
    assert_eq!(roots, vec![serde_json::json!([1]), serde_json::json!([1, 2]), serde_json::json!([2])]);
}

#[test]
fn orient_single_atom() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, FIG1);
    let out = mixpack(&[&"orient", &g, &"--atom", &"1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "e1 r1 v1\ne2 r1 v2\ne3 r1 v5\ne6 v2 v5\n");
    assert_eq!(mixpack(&[&"orient", &g, &"--atom", &"4"]).status.code(), Some(1));

    let g = fixture(&dir, INFEAS3);
    let out = mixpack(&[&"orient", &g, &"--atom", &"1"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["deficit"], 2);
    assert_eq!(doc["parts"], serde_json::json!([["r1"], ["r2"], ["x"]]));
}

#[test]
fn pack_digraph_blocks() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "vertex r\nvertex s\nvertex a\narc r a\narc s a\narc a s x\nroot r\nroot s\n");
    let out = mixpack(&[&"pack-digraph", &g]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "tree 1 root r\n  a1 r a\n  x a s\n\ntree 2 root s\n  a2 s a\n");

    let g = fixture(&dir, "vertex r\nvertex s\nvertex v\nvertex w\narc r w\narc s w\narc w v\nroot r\nroot s\n");
    let out = mixpack(&[&"pack-digraph", &g]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "violated: {v}\n");

    let g = fixture(&dir, FIG1);
    assert_eq!(mixpack(&[&"pack-digraph", &g]).status.code(), Some(1));
}

#[test]
fn export_dot_with_packing() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, FIG1);
    let plain = stdout(&mixpack(&[&"export-dot", &g]));
    assert!(plain.starts_with("digraph mixed {"));
    assert_eq!(plain.matches("dir=none").count(), 6);
    let p = write(&dir, "p.json", &mixpack(&[&"solve", &g]).stdout);
    let colored = stdout(&mixpack(&[&"export-dot", &g, &"--packing", &p]));
    assert!(colored.contains("color=red") && colored.contains("color=blue"));
}

#[test]
fn input_errors_and_capacity() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "vertex a\nedge a b\n");
    let out = mixpack(&[&"solve", &g]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("unknown vertex"), "{err}");

    assert_eq!(mixpack(&[&"solve", &Path::new("/nonexistent/x.mg")]).status.code(), Some(1));
    assert_eq!(mixpack(&[&"frobnicate"]).status.code(), Some(1));

    let g = fixture(&dir, FIG1);
    let out = mixpack(&[&"solve", &g, &"--max-atom-vertices", &"3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(mixpack(&[&"solve", &g, &"--jobs", &"0"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, FIG1);
    for flags in [vec![], vec!["--seed", "7"], vec!["--seed", "7", "--jobs", "3"]] {
        let run = || {
            let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![&"solve", &g];
            for f in &flags {
                args.push(f);
            }
            mixpack(&args).stdout
        };
        assert_eq!(run(), run());
    }
}

#[test]
fn help_documents_the_grammar() {
    let out = mixpack(&[&"--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in [
        "vertex <id>",
        "edge <id1> <id2> [<edge-id>]",
        "arc <tail-id> <head-id> [<arc-id>]",
        "root <id>",
    ] {
        assert!(text.contains(line), "missing `{line}`");
    }
}
